#!/usr/bin/env python3
"""Regenerate the replay transcript fixture and its golden summaries.

The two completions are hand-written stand-ins for a generative model:
one abstractive summary of the synthetic storm topic and one paraphrase of
the extract that falls out of that summary's length. Everything else
(prompts, budget, extract) is computed, so the fixture stays consistent
with the pipeline by construction.
"""

import json
from pathlib import Path

from attribeval import corpus
from attribeval.corpus import select_for_budgeted_input
from attribeval.providers import GenerationTranscript, prompt_hash
from attribeval.summarize import (
    extract_summary,
    render_abstractive_prompt,
    render_rewrite_prompt,
)

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "transcripts"
STAMP = "2024-02-01T00:00:00Z"

ABSTRACTIVE_COMPLETION = (
    "Storm Veld hit Port Arven on Tuesday with winds near 120 km/h and a 2.4 meter surge, "
    "the highest since 1987, flooding the harbor district, Saltmarsh Lane, and the fish market. "
    "About 600 residents were evacuated to two shelters, around 2,100 households lost power, "
    "and three people were treated for minor injuries. Floodwater partially collapsed the Mill "
    "Creek bridge, diverting traffic through Ferris Pass. Cleanup and repairs backed by pledged "
    "emergency funds began Wednesday as power returned to most neighborhoods."
)

HYBRID_COMPLETION = (
    "Flood sirens sounded across the harbor district at dawn as Storm Veld crossed the coast "
    "at 05:40 local time, with gusts measured at approx. 140 km/h at the harbor mast. "
    "Dr. Elena Maros of the Coastal Weather Bureau said the surge peaked at 2.4 meters, the "
    "highest recorded in the town since 1987. Two shelters are open, the municipal sports hall "
    "and the Northgate school gym, and 2,100 homes are without power per the civil protection "
    "office. Cleanup began in Port Arven on Wednesday as Storm Veld moved out to sea."
)


def main() -> None:
    topic = corpus.ingest(ROOT / "fixtures/corpus/synthetic_manifest.yaml")[0]
    docs = select_for_budgeted_input(topic.documents, 14000)
    source = "\n\n".join(d.text for d in docs)
    abstractive_prompt = render_abstractive_prompt(source)

    budget = len(ABSTRACTIVE_COMPLETION)  # 75th percentile of one summary
    extract = extract_summary(corpus.topic_sentences(topic), budget, topic_id=topic.topic_id)
    rewrite_prompt = render_rewrite_prompt(extract.text)

    OUT.mkdir(parents=True, exist_ok=True)
    records = [
        GenerationTranscript(
            prompt_hash=prompt_hash(abstractive_prompt),
            prompt=abstractive_prompt,
            completion=ABSTRACTIVE_COMPLETION,
            provider_id="recorded",
            recorded_at=STAMP,
        ),
        GenerationTranscript(
            prompt_hash=prompt_hash(rewrite_prompt),
            prompt=rewrite_prompt,
            completion=HYBRID_COMPLETION,
            provider_id="recorded",
            recorded_at=STAMP,
        ),
    ]
    replay = OUT / "synthetic_replay.jsonl"
    replay.write_text("".join(r.to_json() + "\n" for r in records), encoding="utf-8")

    golden = {
        "topic_id": topic.topic_id,
        "budget_chars": budget,
        "abstractive_text": ABSTRACTIVE_COMPLETION,
        "extract_text": extract.text,
        "hybrid_text": HYBRID_COMPLETION,
    }
    (OUT / "golden_summaries.json").write_text(
        json.dumps(golden, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    print(f"wrote {replay} ({len(records)} transcripts) and golden_summaries.json")
    print(f"budget={budget} extract_len={len(extract.text)}")


if __name__ == "__main__":
    main()
