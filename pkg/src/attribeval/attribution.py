"""Attribution scoring: pairwise score matrices (embedding cosine or NLI
entailment), top-k candidate ranking, context windows, consistency scoring
by mean-of-max entailment, and the neutrality-ordered document reduction
experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from .corpus import Sentence, Topic, doc_sentence_index, topic_sentences
from .summarize import SummaryMethod, SummaryRecord


class AttributionMethod(str, Enum):
    NLI = "NLI"
    EMBEDDING = "Embedding"


class ScorerError(RuntimeError):
    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


@runtime_checkable
class Scorer(Protocol):
    scorer_id: str
    supports_concurrency: bool

    def embed(self, texts: list[str]) -> np.ndarray: ...

    def nli(self, pairs: list[tuple[str, str]]) -> np.ndarray: ...


@dataclass(frozen=True)
class SentenceRef:
    doc_id: str
    index: int

    def __str__(self) -> str:
        return f"{self.doc_id}:{self.index}"

    @staticmethod
    def parse(s: str) -> "SentenceRef":
        doc_id, _, idx = s.rpartition(":")
        if not doc_id:
            raise ValueError(f"bad sentence ref: {s!r}")
        return SentenceRef(doc_id, int(idx))

    @staticmethod
    def of(sentence: Sentence) -> "SentenceRef":
        return SentenceRef(sentence.doc_id, sentence.index)


@dataclass
class ScoreMatrix:
    """Pairwise scores; rows are summary sentences, columns pool sentences.

    ``values`` is (rows, cols) of cosines for the embedding method, or
    (rows, cols, 3) of (entail, neutral, contradict) for NLI.
    """

    method: AttributionMethod
    summary_refs: tuple[SentenceRef, ...]
    doc_refs: tuple[SentenceRef, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        rows, cols = len(self.summary_refs), len(self.doc_refs)
        expect = (rows, cols) if self.method is AttributionMethod.EMBEDDING else (rows, cols, 3)
        if tuple(self.values.shape) != expect:
            raise ValueError(
                f"matrix shape {self.values.shape} does not match refs {expect}"
            )

    def ranking_scores(self) -> np.ndarray:
        """(rows, cols) array of the scores used for ranking: cosines for
        embedding, entailment probabilities for NLI."""
        if self.method is AttributionMethod.EMBEDDING:
            return self.values
        return self.values[:, :, 0]


@dataclass(frozen=True)
class Candidate:
    ref: SentenceRef
    score: float
    rank: int  # 1-based


@dataclass(frozen=True)
class AttributionSet:
    summary_sentence: SentenceRef
    method: AttributionMethod
    candidates: tuple[Candidate, ...]
    short_pool: bool = False  # fewer candidates than requested


@dataclass(frozen=True)
class ContextWindow:
    prev: Sentence | None
    eval: Sentence
    next: Sentence | None


@dataclass(frozen=True)
class ReductionStep:
    removed: SentenceRef
    neutrality: float
    summac_after: float


@dataclass(frozen=True)
class ReductionTrajectory:
    initial_score: float
    steps: tuple[ReductionStep, ...]
    epsilon: float
    failure: str | None = None

    @property
    def influential_count(self) -> int:
        """1-based index of the first removal that moves the score by more
        than epsilon; 0 when no removal ever does."""
        for i, step in enumerate(self.steps, start=1):
            if abs(step.summac_after - self.initial_score) > self.epsilon:
                return i
        return 0


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

def score_matrix(
    summary: SummaryRecord,
    pool: list[Sentence],
    scorer: Scorer,
    method: AttributionMethod,
) -> ScoreMatrix:
    """Score every (summary sentence, pool sentence) pair in one batch.

    NLI direction: the document sentence is the premise and the summary
    sentence the hypothesis.
    """
    if not pool:
        raise ValueError("candidate pool is empty")
    if not summary.sentences:
        raise ValueError(f"summary {summary.summary_id} has no sentences")
    summary_refs = tuple(SentenceRef.of(s) for s in summary.sentences)
    doc_refs = tuple(SentenceRef.of(s) for s in pool)

    if method is AttributionMethod.EMBEDDING:
        texts = [s.text for s in summary.sentences] + [s.text for s in pool]
        vectors = scorer.embed(texts)
        if vectors.ndim != 2 or vectors.shape[0] != len(texts):
            raise ScorerError(f"bad embedding batch shape {vectors.shape}")
        rows = vectors[: len(summary_refs)]
        cols = vectors[len(summary_refs) :]
        values = np.clip(rows @ cols.T, -1.0, 1.0)
    else:
        pairs = [
            (doc_sent.text, sum_sent.text)
            for sum_sent in summary.sentences
            for doc_sent in pool
        ]
        probs = scorer.nli(pairs)
        if probs.shape != (len(pairs), 3):
            raise ScorerError(f"bad NLI batch shape {probs.shape}")
        values = probs.reshape(len(summary_refs), len(doc_refs), 3)
    return ScoreMatrix(method=method, summary_refs=summary_refs, doc_refs=doc_refs, values=values)


def rank_topk(row: np.ndarray, k: int) -> list[tuple[int, float]]:
    """Top-k column indices of one score row, by score descending with ties
    broken by pool position (document order). Returns fewer than k when the
    row is short."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    order = sorted(range(len(row)), key=lambda j: (-float(row[j]), j))
    return [(j, float(row[j])) for j in order[:k]]


def attribution_sets(matrix: ScoreMatrix, k: int) -> list[AttributionSet]:
    """Ranked candidate lists for every summary sentence in a matrix."""
    scores = matrix.ranking_scores()
    out: list[AttributionSet] = []
    for r, summary_ref in enumerate(matrix.summary_refs):
        top = rank_topk(scores[r], k)
        candidates = tuple(
            Candidate(ref=matrix.doc_refs[j], score=s, rank=rank)
            for rank, (j, s) in enumerate(top, start=1)
        )
        out.append(
            AttributionSet(
                summary_sentence=summary_ref,
                method=matrix.method,
                candidates=candidates,
                short_pool=len(candidates) < k,
            )
        )
    return out


def candidate_pool(summary: SummaryRecord, topic: Topic) -> list[Sentence]:
    """Sentences an attribution may point at: the extraction provenance for
    hybrid and extractive summaries, every document sentence otherwise."""
    if summary.method in (SummaryMethod.HYBRID, SummaryMethod.EXTRACTIVE):
        if summary.extraction_provenance is None:
            raise ValueError(f"{summary.summary_id}: missing extraction provenance")
        index = doc_sentence_index(topic)
        pool: list[Sentence] = []
        for doc_id, sent_idx in summary.extraction_provenance:
            try:
                pool.append(index[doc_id][sent_idx])
            except (KeyError, IndexError):
                raise ValueError(
                    f"{summary.summary_id}: dangling provenance {doc_id}:{sent_idx}"
                ) from None
        return pool
    return topic_sentences(topic)


def context_window(ref: SentenceRef, index: dict[str, list[Sentence]]) -> ContextWindow:
    """The sentence plus its immediate neighbors in the same document, when
    they exist."""
    try:
        doc_sents = index[ref.doc_id]
        sent = doc_sents[ref.index]
    except (KeyError, IndexError):
        raise ValueError(f"dangling sentence ref {ref}") from None
    prev = doc_sents[ref.index - 1] if ref.index > 0 else None
    nxt = doc_sents[ref.index + 1] if ref.index + 1 < len(doc_sents) else None
    return ContextWindow(prev=prev, eval=sent, next=nxt)


# ---------------------------------------------------------------------------
# Consistency score and reduction experiment
# ---------------------------------------------------------------------------

def summac_score(matrix: ScoreMatrix) -> float:
    """Mean over summary sentences of the maximum entailment any pool
    sentence gives them (zero-shot aggregation)."""
    if matrix.method is not AttributionMethod.NLI:
        raise ValueError("consistency score needs an NLI matrix")
    entail = matrix.values[:, :, 0]
    if entail.size == 0:
        raise ValueError("empty matrix")
    return float(entail.max(axis=1).mean())


def neutrality(column: np.ndarray, aggregation: str = "mean") -> float:
    """Aggregate a pool sentence's neutral probabilities across summary
    sentences. ``column`` is (rows, 3)."""
    neutrals = column[:, 1]
    if neutrals.size == 0:
        raise ValueError("empty column")
    if aggregation == "mean":
        return float(neutrals.mean())
    if aggregation == "min":
        return float(neutrals.min())
    if aggregation == "max":
        return float(neutrals.max())
    raise ValueError(f"unknown neutrality aggregation {aggregation!r}")


def _masked_summac(entail: np.ndarray, keep: list[int]) -> float:
    if not keep:
        return 0.0  # empty-pool convention
    return float(entail[:, keep].max(axis=1).mean())


def reduce_matrix(
    matrix: ScoreMatrix,
    epsilon: float = 1e-4,
    *,
    order: str = "adaptive",
    aggregation: str = "mean",
) -> ReductionTrajectory:
    """Remove the most neutral remaining pool sentence step by step,
    recording the consistency score after every removal.

    ``order='adaptive'`` recomputes neutrality over the remaining columns
    each step; ``order='frozen'`` fixes the removal order from the initial
    neutralities. Ties go to the earlier pool position.
    """
    if matrix.method is not AttributionMethod.NLI:
        raise ValueError("reduction runs on an NLI matrix")
    if order not in ("adaptive", "frozen"):
        raise ValueError(f"unknown reduction order {order!r}")
    entail = matrix.values[:, :, 0]
    n_cols = len(matrix.doc_refs)
    initial = summac_score(matrix)
    remaining = list(range(n_cols))

    frozen_rank: dict[int, float] = {}
    if order == "frozen":
        frozen_rank = {
            j: neutrality(matrix.values[:, j, :], aggregation) for j in remaining
        }

    steps: list[ReductionStep] = []
    while remaining:
        if order == "adaptive":
            scored = [
                (neutrality(matrix.values[:, j, :], aggregation), j) for j in remaining
            ]
        else:
            scored = [(frozen_rank[j], j) for j in remaining]
        # most neutral first; ties by pool position
        _, victim = max(scored, key=lambda nj: (nj[0], -nj[1]))
        victim_neutrality = next(n for n, j in scored if j == victim)
        remaining.remove(victim)
        steps.append(
            ReductionStep(
                removed=matrix.doc_refs[victim],
                neutrality=victim_neutrality,
                summac_after=_masked_summac(entail, remaining),
            )
        )
    return ReductionTrajectory(initial_score=initial, steps=tuple(steps), epsilon=epsilon)


def reduction_experiment(
    summary: SummaryRecord,
    pool: list[Sentence],
    scorer: Scorer,
    epsilon: float = 1e-4,
    *,
    order: str = "adaptive",
    aggregation: str = "mean",
) -> ReductionTrajectory:
    """Score the summary against the pool with NLI and run the reduction.
    A scorer failure yields an empty trajectory carrying the failure."""
    if not pool:
        raise ValueError("reduction needs at least one pool sentence")
    try:
        matrix = score_matrix(summary, pool, scorer, AttributionMethod.NLI)
    except ScorerError as exc:
        return ReductionTrajectory(
            initial_score=0.0, steps=(), epsilon=epsilon, failure=str(exc)
        )
    return reduce_matrix(matrix, epsilon, order=order, aggregation=aggregation)


def builtin_lexical_scorer() -> Scorer:
    from .lexical import LexicalScorer

    return LexicalScorer()


# ---------------------------------------------------------------------------
# Matrix persistence (portable text format)
# ---------------------------------------------------------------------------

_MATRIX_HEADER = "#! attribeval-score-matrix v1"


def save_matrix(matrix: ScoreMatrix, path: str | Path) -> None:
    """Write a matrix as UTF-8 text: a header with method, dims and refs,
    then row-major values (NLI cells as entail,neutral,contradict)."""
    lines = [
        _MATRIX_HEADER,
        f"method\t{matrix.method.value}",
        f"rows\t{len(matrix.summary_refs)}",
        f"cols\t{len(matrix.doc_refs)}",
        "summary_refs\t" + "\t".join(str(r) for r in matrix.summary_refs),
        "doc_refs\t" + "\t".join(str(r) for r in matrix.doc_refs),
    ]
    for r in range(len(matrix.summary_refs)):
        if matrix.method is AttributionMethod.EMBEDDING:
            cells = [repr(float(v)) for v in matrix.values[r]]
        else:
            cells = [
                ",".join(repr(float(x)) for x in matrix.values[r, c])
                for c in range(len(matrix.doc_refs))
            ]
        lines.append("\t".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_matrix(path: str | Path) -> ScoreMatrix:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != _MATRIX_HEADER:
        raise ValueError(f"{path}: not a score matrix file")
    header: dict[str, list[str]] = {}
    for line in lines[1:6]:
        key, *rest = line.split("\t")
        header[key] = rest
    method = AttributionMethod(header["method"][0])
    rows = int(header["rows"][0])
    cols = int(header["cols"][0])
    summary_refs = tuple(SentenceRef.parse(s) for s in header.get("summary_refs", []))
    doc_refs = tuple(SentenceRef.parse(s) for s in header.get("doc_refs", []))
    if len(summary_refs) != rows or len(doc_refs) != cols:
        raise ValueError(f"{path}: header dims do not match ref lists")

    body = lines[6 : 6 + rows]
    if method is AttributionMethod.EMBEDDING:
        values = np.array(
            [[float(v) for v in line.split("\t")] for line in body], dtype=np.float64
        ).reshape(rows, cols)
    else:
        values = np.array(
            [
                [[float(x) for x in cell.split(",")] for cell in line.split("\t")]
                for line in body
            ],
            dtype=np.float64,
        ).reshape(rows, cols, 3)
    return ScoreMatrix(method=method, summary_refs=summary_refs, doc_refs=doc_refs, values=values)
