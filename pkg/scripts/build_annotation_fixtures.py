#!/usr/bin/env python3
"""Regenerate the bundled annotation fixtures from their row tables.

Each fixture transcribes one published refutation-analysis table: the
record rows carry per-annotation labels, refutation typology, and
duplicate links; the header declares the experiment size (pairings x
annotators) so percentage tallies have their denominators.

Transcription notes (kept out of the data files themselves):
- duplicate_of is set only on rows typeset as duplicates, pointing at the
  first-listed equivalent row.
- Row 14077's printed cross-reference id does not exist in any table; the
  matching comment text identifies 13957 and the link is recorded as such.
- Row 17420's printed annotator id is off by one digit from the only
  annotator id it can be; recorded as 73655, which reconciles the
  per-annotator counts.
- Annotators who labeled zero refutations never appear in the tables;
  their roster entries use the placeholder id "annotator3".
"""

from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "annotations"
STAMP = "2024-01-15T00:00:00Z"

HEADER = "#! attribeval-labels v1"


def condition(dataset, summary, attribution, kind, pairings, annotators):
    return "#! condition\t" + "\t".join(
        [
            f"dataset={dataset}",
            f"summary_method={summary}",
            f"attribution_method={attribution}",
            f"kind={kind}",
            f"pairings={pairings}",
            "annotators=" + ",".join(annotators),
        ]
    )


def row(rid, dataset, summary, attribution, kind, annotator, label, primary,
        secondary, dup, comment):
    comment = comment.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")
    return "\t".join(
        [
            str(rid),
            f"task-{rid}",
            dataset,
            summary,
            attribution,
            kind,
            annotator,
            label,
            "yes",
            primary,
            secondary,
            "" if dup is None else str(dup),
            comment,
            STAMP,
        ]
    )


def write(name, lines):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {name}: {len(lines)} lines")


# -- TAC 2011, human summaries, task 1 (single attribution with context) ----

t1 = [HEADER]
roster = ["8d4ff", "8f14c", "annotator3"]
t1.append(condition("TAC2011", "Human", "NLI", "Single", 30, roster))
t1.append(condition("TAC2011", "Human", "Embedding", "Single", 30, roster))
A1 = [
    (13135, "8d4ff", "Support", "Content", "OutE", None,
     "Primary part of summary not present in attribution (=13245)"),
    (13181, "8d4ff", "NoSupport", "Content", "OutE", None,
     "Summary contains information not present in attribution which is about a related topic"),
    (13182, "8f14c", "Unclear", "Semantic", "EntE", None,
     "Time Shift led to inconsistent info (=13221)"),
    (13189, "8d4ff", "Support", "Semantic Content", "CircE OutE", None,
     "Time Shift led to inconsistent timing info; Summary contains info not in attributing sentence but in context"),
    (13190, "8d4ff", "Support", "Content", "OutE", None,
     "Timing information in summary not present in attribution"),
    (13221, "8d4ff", "Support", "Semantic", "EntE", 13182,
     "Time Shift led to inconsistent info (=13182)"),
    (13229, "8d4ff", "Support", "Content", "OutE", None,
     "Timing info stated differently (August versus Thursday)"),
    (13245, "8f14c", "Unclear", "Content", "OutE", 13135,
     "Primary part of summary not present in attribution (=13135)"),
    (13258, "8f14c", "NoSupport", "Content", "OutE", None,
     "Timing and supplemental location information in summary not present in attribution"),
]
for rid, annot, label, prim, sec, dup, comment in A1:
    t1.append(row(rid, "TAC2011", "Human", "Embedding", "Single", annot, label,
                  prim, sec, dup, comment))
write("tac2011_human_task1.labels", t1)

# -- TAC 2011, human summaries, task 2 (three ranked attributions) ----------

t2 = [HEADER]
roster = ["eed54", "415f6", "annotator3"]
t2.append(condition("TAC2011", "Human", "NLI", "Group", 30, roster))
t2.append(condition("TAC2011", "Human", "Embedding", "Group", 30, roster))
A2 = [
    (12981, "Embedding", "eed54", "PartialSupport", "Semantic", "CircE", None,
     "Time Shift error led to inconsistent timing info (2,3)"),
    (13022, "Embedding", "415f6", "PartialSupport", "Content", "OutE", None,
     "Summary contains statistic not present in attributions"),
    (13025, "Embedding", "415f6", "FullSupport", "Content Additional", "GramE OthE", None,
     "Bad attribution grammar (2); Attribution on related topic (3)"),
    (13039, "NLI", "eed54", "FullSupport", "Semantic", "PredE", None,
     "Time Shift led to inconsistent info (3) (=13144)"),
    (13041, "NLI", "415f6", "FullSupport", "Semantic", "EntE", None,
     "Attributions inconsistent but related (2,3) (=13046)"),
    (13046, "Embedding", "415f6", "FullSupport", "Semantic", "EntE", 13041,
     "Attributions inconsistent but related (2,3) (=13041)"),
    (13056, "NLI", "415f6", "FullSupport", "Additional", "OthE", None,
     "Unrelated attribution (3)"),
    (13065, "Embedding", "415f6", "FullSupport", "Content", "OutE", None,
     "Summary statement contains additional timing information not present in attributions"),
    (13072, "Embedding", "415f6", "FullSupport", "Semantic", "PredE", None,
     "Inconsistent info, from time shift or different disaster (3)"),
    (13095, "Embedding", "415f6", "PartialSupport", "Content Additional", "OutE OthE", None,
     "Summary contains info not present in attributions; Attribution for wrong location (3)"),
    (13097, "NLI", "415f6", "FullSupport", "Additional", "OthE", None,
     "Attribution unrelated (3)"),
    (13098, "Embedding", "415f6", "FullSupport", "Additional", "NE", None,
     "Unclear why selected as refutation"),
    (13104, "NLI", "415f6", "FullSupport", "Additional", "OthE", None,
     "Attributions related (2,3)"),
    (13105, "Embedding", "415f6", "FullSupport", "Additional", "OthE", None,
     "Attributions related (2,3)"),
    (13144, "NLI", "415f6", "PartialSupport", "Semantic", "PredE", 13039,
     "Time Shift led to inconsistent info (3) (=13039)"),
]
for rid, method, annot, label, prim, sec, dup, comment in A2:
    t2.append(row(rid, "TAC2011", "Human", method, "Group", annot, label,
                  prim, sec, dup, comment))
write("tac2011_human_task2.labels", t2)

# -- TAC 2011, machine summaries, task 2 ------------------------------------

t3 = [HEADER]
roster = ["8d4ff", "8f14c", "36f2c"]
t3.append(condition("TAC2011", "Abstractive", "Embedding", "Group", 30, roster))
t3.append(condition("TAC2011", "Hybrid", "Embedding", "Group", 30, roster))
A3 = [
    (13951, "Abstractive", "8d4ff", "PartialSupport", "Content", "OutE", None,
     "Summary contains information not present in attributions but might be inferred"),
    (13954, "Abstractive", "8d4ff", "PartialSupport", "Semantic Content", "CircE OutE", None,
     "Time shift (1,2); Summary contained info not present in attributions"),
    (13957, "Abstractive", "8d4ff", "PartialSupport", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (2,3)"),
    (13961, "Abstractive", "8d4ff", "FullSupport", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (3)"),
    (13971, "Hybrid", "8d4ff", "FullSupport", "Content", "OutE", None,
     "Summary hallucination (1) (=14091)"),
    (14021, "Abstractive", "8f14c", "PartialSupport", "Semantic", "PredE", 13961,
     "Time shift led to inconsistent info (3) (=13961, 14081)"),
    (14026, "Abstractive", "8f14c", "FullSupport", "Additional", "OthE", None,
     "Attribution contains related info (2)"),
    (14045, "Hybrid", "8f14c", "FullSupport", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (2) (=14105)"),
    (14077, "Abstractive", "36f2c", "PartialSupport", "Semantic", "PredE", 13957,
     "Time shift led to inconsistent info (2,3) (=13597)"),
    (14081, "Abstractive", "36f2c", "FullSupport", "Semantic", "PredE", 13961,
     "Time shift led to inconsistent info (3) (=13961,14021)"),
    (14091, "Hybrid", "36f2c", "PartialSupport", "Content", "OutE", 13971,
     "Summary hallucination (1) (=13971)"),
    (14092, "Abstractive", "36f2c", "FullSupport", "Additional", "OthE", None,
     "Attribution same topic but different location (2)"),
    (14049, "Abstractive", "36f2c", "FullSupport", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (3)"),
    (14102, "Abstractive", "36f2c", "FullSupport", "Content", "OutE", None,
     'Summary hallucination (summary used "the" versus 1 of 4)'),
    (14105, "Hybrid", "36f2c", "FullSupport", "Semantic", "PredE", 14045,
     "Time shift led to inconsistent info (2) (=14045)"),
    (14108, "Abstractive", "36f2c", "FullSupport", "Additional", "NE", None,
     "Unclear why selected as refutation"),
    (14115, "Hybrid", "36f2c", "FullSupport", "Additional", "OthE", None,
     "Attributions contain related information (2,3)"),
]
for rid, summary, annot, label, prim, sec, dup, comment in A3:
    t3.append(row(rid, "TAC2011", summary, "Embedding", "Group", annot, label,
                  prim, sec, dup, comment))
write("tac2011_machine_task2.labels", t3)

# -- Cyber, machine summaries, analysts, task 2 ------------------------------

t4a = [HEADER]
roster = ["73655", "8f14c", "annotator3"]
t4a.append(condition("Cyber", "Abstractive", "Embedding", "Group", 30, roster))
t4a.append(condition("Cyber", "Hybrid", "Embedding", "Group", 30, roster))
A4A = [
    (17040, "Abstractive", "PartialSupport", "73655", "Content", "OutE", None,
     "Summary hallucination (=17160)"),
    (17041, "Abstractive", "PartialSupport", "73655", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1 (=17161)"),
    (17043, "Hybrid", "PartialSupport", "73655", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17044, "Hybrid", "FullSupport", "73655", "Additional", "OthE", None,
     "Closely related information (2), related information (3), Summary ≈ Attribution 1"),
    (17047, "Abstractive", "PartialSupport", "73655", "Additional", "OthE", None,
     "Related information (2)"),
    (17048, "Abstractive", "FullSupport", "73655", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17049, "Hybrid", "PartialSupport", "73655", "Semantic Additional", "PredE OthE", None,
     'Summary close to Attribution 1 but uses stronger language ("very likely" versus "likely"); Related information (2,3)'),
    (17053, "Abstractive", "FullSupport", "73655", "Additional", "OthE", None,
     "Related information (3)"),
    (17056, "Hybrid", "PartialSupport", "73655", "Additional", "OthE", None,
     "Related information (3)"),
    (17057, "Abstractive", "PartialSupport", "73655", "Content", "OutE", None,
     "Summary contains info not present in attributions"),
    (17061, "Abstractive", "PartialSupport", "73655", "Additional", "OthE", None,
     "Related information (3) (=17181)"),
    (17063, "Hybrid", "FullSupport", "73655", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17065, "Hybrid", "PartialSupport", "73655", "Additional", "NE", None,
     "Unclear why selected as refutation"),
    (17066, "Abstractive", "PartialSupport", "73655", "Additional", "OthE", None,
     "Closely related information (2,3), Summary ≈ Attribution 1"),
    (17072, "Hybrid", "FullSupport", "73655", "Additional", "OthE", None,
     "Closely related information (2), related information (3), Summary ≈ Attribution 1"),
    (17073, "Abstractive", "PartialSupport", "73655", "Semantic", "EntE", None,
     'Closely related information (2,3), Summary ≈ Attribution 1 but summary entity lacks sufficient information ("incidents" versus "incidents involving landing URLs")'),
    (17083, "Abstractive", "PartialSupport", "73655", "Additional", "OthE", None,
     "Closely related information (2,3), Summary ≈ Attribution 1"),
    (17160, "Abstractive", "NoSupport", "8f14c", "Content", "OutE", 17040,
     "Summary hallucination (=17040)"),
    (17161, "Abstractive", "PartialSupport", "8f14c", "Additional", "OthE", 17041,
     "Related information (2,3) (=17041)"),
    (17181, "Abstractive", "PartialSupport", "8f14c", "Additional", "OthE", 17061,
     "Related information (3) (=17061)"),
]
for rid, summary, label, annot, prim, sec, dup, comment in A4A:
    t4a.append(row(rid, "Cyber", summary, "Embedding", "Group", annot, label,
                   prim, sec, dup, comment))
write("cyber_machine_task2_analysts.labels", t4a)

# -- Cyber, machine summaries, experts, task 2 -------------------------------

t4b = [HEADER]
roster = ["415f6", "5e2f7", "84863"]
t4b.append(condition("Cyber", "Abstractive", "Embedding", "Group", 30, roster))
t4b.append(condition("Cyber", "Hybrid", "Embedding", "Group", 30, roster))
A4B = [
    (16212, "Abstractive", "PartialSupport", "415f6", "Additional", "OthE", None,
     "Related information (3) (=17061, 17181)"),
    (17592, "Hybrid", "FullSupport", "5e2f7", "Semantic Additional", "PredE OthE", None,
     'Summary close to Attribution 1 but uses stronger language ("very likely" versus "likely"); Related information (2,3) (=17049)'),
    (17606, "Hybrid", "FullSupport", "5e2f7", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1 (=17063)"),
    (17633, "Abstractive", "FullSupport", "84863", "Additional", "NE", None,
     "Unclear why selected as refutation"),
    (17639, "Abstractive", "PartialSupport", "84863", "Content", "OutE", None,
     "Summary hallucination"),
    (17642, "Hybrid", "FullSupport", "84863", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17643, "Abstractive", "PartialSupport", "84863", "Content Additional", "OutE OthE", None,
     "Summary contains information not in attributions, Related information (3)"),
    (17645, "Abstractive", "PartialSupport", "84863", "Content", "OutE", None,
     "Summary hallucination (=17040, 17160)"),
    (17652, "Abstractive", "NoSupport", "84863", "Additional", "OthE", None,
     "Related information (2) (=17047)"),
    (17658, "Abstractive", "NoSupport", "84863", "Additional", "OthE", None,
     "Related information (3) (=17053)"),
    (17660, "Abstractive", "PartialSupport", "84863", "Content", "OutE", None,
     "Summary contains named entity while (3) uses pronoun"),
    (17661, "Hybrid", "PartialSupport", "84863", "Additional", "OthE", None,
     "Related information (3) (=17056)"),
    (17667, "Abstractive", "FullSupport", "84863", "Content", "GramE", None,
     "Badly parsed attribution (2)"),
    (17679, "Hybrid", "FullSupport", "84863", "Additional", "OthE", None,
     "Related information (2,3)"),
    (17680, "Hybrid", "FullSupport", "84863", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17684, "Hybrid", "FullSupport", "84863", "Additional", "OthE", None,
     "Related information (2,3), Summary ≈ Attribution 1"),
    (17687, "Hybrid", "FullSupport", "84863", "Additional", "OthE", None,
     "Related information (3)"),
]
for rid, summary, label, annot, prim, sec, dup, comment in A4B:
    t4b.append(row(rid, "Cyber", summary, "Embedding", "Group", annot, label,
                   prim, sec, dup, comment))
write("cyber_machine_task2_experts.labels", t4b)

# -- CrisisFACTS, machine summaries, task 2 ----------------------------------

t5 = [HEADER]
roster = ["73655", "36f2c", "annotator3"]
t5.append(condition("CrisisFACTS", "Abstractive", "Embedding", "Group", 30, roster))
t5.append(condition("CrisisFACTS", "Hybrid", "Embedding", "Group", 30, roster))
A5 = [
    (17341, "Abstractive", "PartialSupport", "73655", "Content Additional", "GramE OthE", None,
     "Badly parsed, related information (2,3); Not enough information in summary to identify which fire"),
    (17344, "Abstractive", "Unclear", "73655", "Additional", "OthE", None,
     "Not enough information in summary to identify which disaster"),
    (17347, "Hybrid", "FullSupport", "73655", "Semantic Additional", "PredE OthE", None,
     "Time shift led to inconsistent info (3); Attribution 2 for a different fire (=17467)"),
    (17420, "Hybrid", "PartialSupport", "73655", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (3)"),
    (17425, "Abstractive", "Unclear", "73655", "Semantic Content", "CircE GramE", None,
     "Additional location information in summary inconsistent with attribution (2); Badly parsed attributions difficult to read (2,3)"),
    (17428, "Hybrid", "FullSupport", "73655", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (3), Summary ≈ Attribution 1 (=17488)"),
    (17429, "Hybrid", "PartialSupport", "73655", "Semantic", "PredE", None,
     "Time shift led to inconsistent info (3), Summary ≈ Attribution 1 (=17489)"),
    (17432, "Abstractive", "PartialSupport", "73655", "Content", "OutE", None,
     "Summary contains info not present in attributions"),
    (17436, "Abstractive", "NoSupport", "73655", "Additional", "OthE", None,
     "Attribution provided option not listed in summary (3)"),
    (17439, "Hybrid", "Unclear", "73655", "Content Additional", "OutE OthE", None,
     "Summary contains world knowledge not included in attribution (1); Attributions on related info (2,3)"),
    (17448, "Abstractive", "FullSupport", "73655", "Semantic", "PredE", None,
     "Time shift error led to inconsistent info (1,3)"),
    (17452, "Abstractive", "FullSupport", "73655", "Additional", "NE", None,
     "Unclear why selected as refutation"),
    (17467, "Hybrid", "FullSupport", "36f2c", "Semantic Additional", "PredE OthE", 17347,
     "Time shift led to inconsistent info (3); Attribution 2 for a different fire (=17347)"),
    (17488, "Hybrid", "FullSupport", "36f2c", "Semantic", "PredE", 17428,
     "Time shift led to inconsistent info (3) (=17428)"),
    (17489, "Hybrid", "PartialSupport", "36f2c", "Semantic", "PredE", 17429,
     "Time shift led to inconsistent info (3), Summary ≈ Attribution 1 (=17429)"),
    (17515, "Abstractive", "FullSupport", "36f2c", "Content", "GramE", None,
     "Badly parsed attribution (3)"),
]
for rid, summary, label, annot, prim, sec, dup, comment in A5:
    t5.append(row(rid, "CrisisFACTS", summary, "Embedding", "Group", annot, label,
                  prim, sec, dup, comment))
write("crisisfacts_machine_task2.labels", t5)
