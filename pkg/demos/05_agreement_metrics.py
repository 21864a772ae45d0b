#!/usr/bin/env python3
"""Content-agreement metrics between a machine summary and the two human
references: word-bigram overlap (precision/recall/f1) and the soft
sentence-bigram score."""

from pathlib import Path

from attribeval.corpus import ingest, topic_sentences
from attribeval.metrics import evaluate
from attribeval.providers import IdentityProvider
from attribeval.summarize import extract_summary, hybrid_from_extract

ROOT = Path(__file__).resolve().parent.parent
topic = ingest(ROOT / "fixtures/corpus/synthetic_manifest.yaml")[0]
references = list(topic.reference_summaries)

extract = extract_summary(topic_sentences(topic), 500, topic_id=topic.topic_id)
hybrid = hybrid_from_extract(extract, IdentityProvider())

for label, candidate in (("extract", extract.text), ("hybrid", hybrid.text)):
    report = evaluate(candidate, references, aggregation="max")
    print(f"{label}:")
    print(f"  rouge2  p={report.rouge2.precision:.3f} r={report.rouge2.recall:.3f} "
          f"f1={report.rouge2.f1:.3f}")
    print(f"  smart2  {report.smart2:.3f}")
    for i, (rs, ss) in enumerate(
        zip(report.rouge2_per_reference, report.smart2_per_reference)
    ):
        print(f"    vs reference {i}: rouge2-f1={rs.f1:.3f} smart2={ss:.3f}")
    print()

print("swapping aggregation to 'mean' averages across references instead of")
print("keeping the best one:")
report = evaluate(extract.text, references, aggregation="mean")
print(f"  extract rouge2-f1 (mean) = {report.rouge2.f1:.3f}")
