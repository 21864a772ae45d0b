#!/usr/bin/env python3
"""The document-reduction experiment: remove the most neutral pool
sentence step by step and watch the consistency score. Extract-style
summaries concentrate their support in a few sentences, so the score
survives most removals and then falls off a cliff."""

from pathlib import Path

from attribeval.attribution import builtin_lexical_scorer, candidate_pool, reduction_experiment
from attribeval.corpus import ingest, topic_sentences
from attribeval.summarize import SummaryMethod, extract_summary, make_summary_record

ROOT = Path(__file__).resolve().parent.parent
topic = ingest(ROOT / "fixtures/corpus/synthetic_manifest.yaml")[0]
scorer = builtin_lexical_scorer()

extract = extract_summary(topic_sentences(topic), 300, topic_id=topic.topic_id)
print(f"extract has {len(extract.sentences)} sentences\n")

for label, summary in (
    ("extractive", extract),
    ("human", make_summary_record(topic.topic_id, SummaryMethod.HUMAN,
                                  topic.reference_summaries[0], variant="0")),
):
    pool = candidate_pool(summary, topic)
    trajectory = reduction_experiment(summary, pool, scorer, epsilon=1e-4)
    print(f"{label}: pool={len(pool)} initial={trajectory.initial_score:.3f} "
          f"influential_count={trajectory.influential_count}")
    line = "  "
    for step in trajectory.steps:
        line += f"{step.summac_after:.2f} "
    print(line.rstrip())
    print()
print("influential_count = first removal that moves the score by more than epsilon")
