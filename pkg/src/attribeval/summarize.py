"""Summary generation: the two fixed prompt templates, character-budget
policies, a greedy budgeted coverage extractor, and the abstractive and
hybrid (extract-then-paraphrase) pipelines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .corpus import (
    Sentence,
    Topic,
    select_for_budgeted_input,
    topic_sentences,
    whitespace_tokens,
    word_tokens,
)
from .providers import ParaphraseProvider, TranscriptStore, generate_cached


class SummaryMethod(str, Enum):
    HUMAN = "Human"
    ABSTRACTIVE = "Abstractive"
    EXTRACTIVE = "Extractive"
    HYBRID = "Hybrid"


class BudgetMode(str, Enum):
    PERCENTILE75 = "percentile75"
    MEDIAN_REFERENCE = "median-reference"
    FIXED = "fixed"


@dataclass(frozen=True)
class BudgetPolicy:
    mode: BudgetMode
    fixed_chars: int | None = None

    def __post_init__(self) -> None:
        if self.mode is BudgetMode.FIXED and (
            self.fixed_chars is None or self.fixed_chars <= 0
        ):
            raise ValueError("fixed budget policy needs fixed_chars > 0")


@dataclass(frozen=True)
class PromptTemplate:
    """A fixed prompt body with exactly one ``{text}`` slot."""

    template_id: str
    body: str

    def __post_init__(self) -> None:
        if self.body.count("{text}") != 1:
            raise ValueError(f"template {self.template_id} needs exactly one {{text}} slot")


ABSTRACTIVE_TEMPLATE = PromptTemplate(
    template_id="abstractive-v1",
    body=(
        "You are an abstractive summarizer that follows the output pattern:\n"
        "\n"
        "Text:\n"
        "{text}\n"
        "\n"
        "Summary:\n"
    ),
)

REWRITE_TEMPLATE = PromptTemplate(
    template_id="rewrite-v1",
    body=(
        "Please rewrite the following into a coherent and readable paragraph. "
        "Do not deviate from the facts of these sentences or add any new "
        "information. Follow the output pattern:\n"
        "\n"
        "Text:\n"
        "{text}\n"
        "\n"
        "Summary:\n"
    ),
)


def render_prompt(template: PromptTemplate, text: str) -> str:
    if not text:
        raise ValueError("cannot render a prompt over empty text")
    return template.body.replace("{text}", text)


def render_abstractive_prompt(text: str) -> str:
    return render_prompt(ABSTRACTIVE_TEMPLATE, text)


def render_rewrite_prompt(text: str) -> str:
    return render_prompt(REWRITE_TEMPLATE, text)


def extract_slot(prompt: str, template: PromptTemplate) -> str | None:
    """Invert render_prompt: recover the slot text, or None when the prompt
    was not produced by this template."""
    prefix, suffix = template.body.split("{text}")
    if prompt.startswith(prefix) and prompt.endswith(suffix):
        middle = prompt[len(prefix) : len(prompt) - len(suffix)]
        if len(middle) > 0:
            return middle
    return None


# ---------------------------------------------------------------------------
# Budget policies
# ---------------------------------------------------------------------------

def nearest_rank(values: list[int], q: float) -> int:
    """Nearest-rank quantile: element at 1-based index ceil(q*n) of the
    sorted list. No interpolation; budgets are integer characters."""
    if not values:
        raise ValueError("nearest_rank over an empty list")
    ordered = sorted(values)
    idx = max(1, math.ceil(q * len(ordered)))
    return ordered[idx - 1]


def compute_budget(
    abstractive_lengths: list[int],
    policy: BudgetPolicy,
    reference_lengths: list[int] | None = None,
) -> int:
    """Character budget for the extractive step under the given policy:
    75th percentile of abstractive lengths, median reference length, or a
    fixed number of characters."""
    if policy.mode is BudgetMode.PERCENTILE75:
        if not abstractive_lengths:
            raise ValueError("percentile75 policy needs abstractive lengths")
        return nearest_rank(abstractive_lengths, 0.75)
    if policy.mode is BudgetMode.MEDIAN_REFERENCE:
        if not reference_lengths:
            raise ValueError("median-reference policy needs reference lengths")
        return nearest_rank(reference_lengths, 0.5)
    assert policy.fixed_chars is not None
    return policy.fixed_chars


# ---------------------------------------------------------------------------
# Summary records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SummaryRecord:
    """A summary plus its own sentence segmentation; extractive and hybrid
    records carry the source addresses of the extracted sentences."""

    topic_id: str
    method: SummaryMethod
    text: str
    sentences: tuple[Sentence, ...]
    summary_id: str
    extraction_provenance: tuple[tuple[str, int], ...] | None = None
    warning: str | None = None


def make_summary_record(
    topic_id: str,
    method: SummaryMethod,
    text: str,
    *,
    variant: str | None = None,
    extraction_provenance: tuple[tuple[str, int], ...] | None = None,
    warning: str | None = None,
) -> SummaryRecord:
    """Build a record, re-segmenting the summary text so its sentences get
    stable addresses under the summary's own pseudo doc_id."""
    from .corpus import Document, Stream, segment

    summary_id = f"{topic_id}/{method.value.lower()}"
    if variant:
        summary_id += f"-{variant}"
    pseudo = Document(doc_id=summary_id, stream=Stream.OTHER, text=text)
    return SummaryRecord(
        topic_id=topic_id,
        method=method,
        text=text,
        sentences=tuple(segment(pseudo)),
        summary_id=summary_id,
        extraction_provenance=extraction_provenance,
        warning=warning,
    )


# ---------------------------------------------------------------------------
# Extractive step (stand-in for a rigid-budget coverage extractor)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Extraction:
    selected: tuple[int, ...]  # indices into the input sentences, source order
    objective: float
    warning: str | None = None


class GreedyCoverageExtractor:
    """Budgeted maximum coverage over document-frequency-weighted word
    bigrams.

    Each distinct bigram is worth the number of distinct documents it
    occurs in. Selection is greedy by marginal-gain per character among
    sentences that still fit the budget (joins count one character each),
    with a final check that no single sentence beats the whole greedy
    pick. The budget is never exceeded.
    """

    extractor_id = "greedy-bigram-coverage"

    def extract(self, sentences: list[Sentence], budget_chars: int) -> Extraction:
        if budget_chars <= 0:
            raise ValueError(f"budget_chars must be positive, got {budget_chars}")
        if not sentences:
            return Extraction(selected=(), objective=0.0, warning="empty input")

        bigrams = [self._bigrams(s.text) for s in sentences]
        weights = self._doc_frequency_weights(sentences, bigrams)

        selected: list[int] = []
        covered: set[tuple[str, str]] = set()
        used = 0
        while True:
            best_i = -1
            best_ratio = 0.0
            best_gain = 0.0
            for i, sent in enumerate(sentences):
                if i in selected:
                    continue
                cost = len(sent.text) + (1 if selected else 0)
                if used + cost > budget_chars:
                    continue
                gain = sum(weights[b] for b in bigrams[i] - covered)
                if gain <= 0:
                    continue
                ratio = gain / max(len(sent.text), 1)
                if best_i < 0 or ratio > best_ratio:
                    best_i, best_ratio, best_gain = i, ratio, gain
            if best_i < 0:
                break
            used += len(sentences[best_i].text) + (1 if selected else 0)
            selected.append(best_i)
            covered |= bigrams[best_i]

        objective = self._objective(selected, bigrams, weights)

        # Swap check: a single high-coverage sentence can beat the greedy
        # ratio heuristic; it also guarantees a non-empty pick whenever any
        # sentence fits.
        best_single = -1
        best_single_obj = -1.0
        for i, sent in enumerate(sentences):
            if len(sent.text) > budget_chars:
                continue
            obj = sum(weights[b] for b in bigrams[i])
            if obj > best_single_obj:
                best_single, best_single_obj = i, obj
        if best_single >= 0 and (not selected or best_single_obj > objective):
            selected = [best_single]
            objective = best_single_obj

        if not selected:
            return Extraction(selected=(), objective=0.0, warning="no sentence fits budget")
        return Extraction(selected=tuple(sorted(selected)), objective=objective)

    @staticmethod
    def _bigrams(text: str) -> set[tuple[str, str]]:
        toks = word_tokens(text)
        return {(toks[i], toks[i + 1]) for i in range(len(toks) - 1)}

    @staticmethod
    def _doc_frequency_weights(
        sentences: list[Sentence], bigrams: list[set[tuple[str, str]]]
    ) -> dict[tuple[str, str], int]:
        docs_with: dict[tuple[str, str], set[str]] = {}
        for sent, bg in zip(sentences, bigrams):
            for b in bg:
                docs_with.setdefault(b, set()).add(sent.doc_id)
        return {b: len(ds) for b, ds in docs_with.items()}

    @staticmethod
    def _objective(
        selected: list[int],
        bigrams: list[set[tuple[str, str]]],
        weights: dict[tuple[str, str], int],
    ) -> float:
        covered: set[tuple[str, str]] = set()
        for i in selected:
            covered |= bigrams[i]
        return float(sum(weights[b] for b in covered))


def coverage_objective(
    sentences: list[Sentence], picked: list[int] | tuple[int, ...]
) -> float:
    """Objective value of an arbitrary selection under the extractor's
    weighting; exposed for oracle comparisons."""
    bigrams = [GreedyCoverageExtractor._bigrams(s.text) for s in sentences]
    weights = GreedyCoverageExtractor._doc_frequency_weights(sentences, bigrams)
    return GreedyCoverageExtractor._objective(list(picked), bigrams, weights)


def extract_summary(
    sentences: list[Sentence],
    budget_chars: int,
    *,
    topic_id: str = "",
    variant: str | None = None,
    extractor: GreedyCoverageExtractor | None = None,
) -> SummaryRecord:
    """Extractive summary within a hard character budget; sentences emitted
    in source order with their addresses recorded as provenance."""
    extractor = extractor or GreedyCoverageExtractor()
    extraction = extractor.extract(sentences, budget_chars)
    picked = [sentences[i] for i in extraction.selected]
    text = " ".join(s.text for s in picked)
    assert len(text) <= budget_chars or not picked
    return make_summary_record(
        topic_id,
        SummaryMethod.EXTRACTIVE,
        text,
        variant=variant,
        extraction_provenance=tuple((s.doc_id, s.index) for s in picked),
        warning=extraction.warning,
    )


# ---------------------------------------------------------------------------
# Abstractive and hybrid pipelines
# ---------------------------------------------------------------------------

DEFAULT_TOKEN_BUDGET = 14000


def abstractive_summarize(
    topic: Topic,
    provider: ParaphraseProvider,
    *,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
    transcripts: TranscriptStore | None = None,
) -> SummaryRecord:
    """Summarize the whole topic in one generation call, dropping the least
    important documents first when the input would blow the token budget.
    The output length is left entirely to the provider."""
    docs = select_for_budgeted_input(topic.documents, token_budget)
    if not docs:
        raise ValueError(
            f"topic {topic.topic_id!r}: no document fits the {token_budget}-token budget"
        )
    source = "\n\n".join(d.text for d in docs)
    if len(whitespace_tokens(source)) > token_budget:
        raise ValueError(f"topic {topic.topic_id!r}: input over budget after selection")
    completion = generate_cached(provider, render_abstractive_prompt(source), transcripts)
    return make_summary_record(topic.topic_id, SummaryMethod.ABSTRACTIVE, completion)


def hybrid_from_extract(
    extract: SummaryRecord,
    provider: ParaphraseProvider,
    *,
    transcripts: TranscriptStore | None = None,
) -> SummaryRecord:
    """Paraphrase an extract into a hybrid summary, keeping the extract's
    provenance so attribution can stay inside the extracted sentences."""
    if extract.method is not SummaryMethod.EXTRACTIVE:
        raise ValueError("hybrid_from_extract needs an extractive record")
    if not extract.text:
        return make_summary_record(
            extract.topic_id,
            SummaryMethod.HYBRID,
            "",
            extraction_provenance=extract.extraction_provenance,
            warning=extract.warning or "empty extract",
        )
    completion = generate_cached(provider, render_rewrite_prompt(extract.text), transcripts)
    return make_summary_record(
        extract.topic_id,
        SummaryMethod.HYBRID,
        completion,
        extraction_provenance=extract.extraction_provenance,
    )


def hybrid_summarize(
    topic: Topic,
    budget_chars: int,
    provider: ParaphraseProvider,
    *,
    extractor: GreedyCoverageExtractor | None = None,
    transcripts: TranscriptStore | None = None,
) -> SummaryRecord:
    """Two-step hybrid summary: budgeted extraction over all topic
    sentences, then a rewrite pass through the provider."""
    extract = extract_summary(
        topic_sentences(topic), budget_chars, topic_id=topic.topic_id, extractor=extractor
    )
    return hybrid_from_extract(extract, provider, transcripts=transcripts)
