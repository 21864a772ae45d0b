#!/usr/bin/env python3
"""Score a human summary against the synthetic topic with the built-in
lexical scorer, then rank attribution candidates and build the context
windows annotators would see."""

from pathlib import Path

from attribeval.attribution import (
    AttributionMethod,
    attribution_sets,
    builtin_lexical_scorer,
    candidate_pool,
    context_window,
    score_matrix,
    summac_score,
)
from attribeval.corpus import doc_sentence_index, ingest
from attribeval.summarize import SummaryMethod, make_summary_record

ROOT = Path(__file__).resolve().parent.parent
topic = ingest(ROOT / "fixtures/corpus/synthetic_manifest.yaml")[0]
summary = make_summary_record(
    topic.topic_id, SummaryMethod.HUMAN, topic.reference_summaries[0], variant="0"
)
pool = candidate_pool(summary, topic)
scorer = builtin_lexical_scorer()
print(f"{len(summary.sentences)} summary sentences x {len(pool)} pool sentences\n")

embedding = score_matrix(summary, pool, scorer, AttributionMethod.EMBEDDING)
nli = score_matrix(summary, pool, scorer, AttributionMethod.NLI)
print(f"consistency score (mean of per-sentence max entailment): "
      f"{summac_score(nli):.3f}\n")

index = doc_sentence_index(topic)
for aset in attribution_sets(embedding, k=3):
    statement = summary.sentences[aset.summary_sentence.index].text
    print(f"[SUMMARY] {statement}")
    for cand in aset.candidates:
        text = index[cand.ref.doc_id][cand.ref.index].text
        print(f"  #{cand.rank} ({cand.score:.3f}) {cand.ref}: {text[:70]}")
    top = aset.candidates[0].ref
    window = context_window(top, index)
    pieces = []
    pieces.append("prev" if window.prev else "prev=absent")
    pieces.append("next" if window.next else "next=absent")
    print(f"  task-1 window around #{1}: {', '.join(pieces)}")
    print()
