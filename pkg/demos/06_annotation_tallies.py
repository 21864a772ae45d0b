#!/usr/bin/env python3
"""Recompute the study aggregates from the bundled annotation fixtures:
refutation percentages per condition, per-annotator totals and uniques,
and the duplicate-collapsed error typology bars."""

from pathlib import Path

from attribeval.annotation import ConditionFilter, import_fixture, tally
from attribeval.attribution import AttributionMethod
from attribeval.summarize import SummaryMethod

ROOT = Path(__file__).resolve().parent.parent
ANNOT = ROOT / "fixtures" / "annotations"

print("== human summaries, task 1 (single attribution with context) ==")
store = import_fixture(ANNOT / "tac2011_human_task1.labels")
for method in (AttributionMethod.NLI, AttributionMethod.EMBEDDING):
    t = tally(store, ConditionFilter(attribution_method=method))
    print(f"  {method.value:9s} refutations: {t.refutation_pct:5.1f}% "
          f"of {t.total_annotations} annotations")
t = tally(store)
print("  per annotator (total/unique):",
      {a: f"{x.total}/{x.unique}" for a, x in t.per_annotator.items()})
print("  typology:", t.typology_counts)

print("\n== machine summaries, task 2 (three ranked attributions) ==")
for name in (
    "tac2011_machine_task2.labels",
    "cyber_machine_task2_analysts.labels",
    "cyber_machine_task2_experts.labels",
    "crisisfacts_machine_task2.labels",
):
    store = import_fixture(ANNOT / name)
    hybrid = tally(store, ConditionFilter(summary_method=SummaryMethod.HYBRID))
    abstractive = tally(store, ConditionFilter(summary_method=SummaryMethod.ABSTRACTIVE))
    full = tally(store)
    bars = {k: v for k, v in full.typology_counts.items()
            if k in ("Semantic", "Content", "Additional")}
    print(f"  {name.removesuffix('.labels'):34s} "
          f"hybrid {hybrid.refutation_pct:4.1f}%  "
          f"abstractive {abstractive.refutation_pct:4.1f}%  bars {bars}")

print("\nbars collapse duplicate chains and skip NE (not-an-error) reviews;")
print("the percentages count every annotation over pairings x annotators")
