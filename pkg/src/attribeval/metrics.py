"""Content-agreement metrics between machine summaries and references:
ROUGE-2 over word bigrams and a SMART-2 style score over sentence bigrams
with a pluggable sentence matcher.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .corpus import word_tokens


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricReport:
    rouge2: RougeScore
    smart2: float
    rouge2_per_reference: tuple[RougeScore, ...]
    smart2_per_reference: tuple[float, ...]
    aggregation: str


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _bigram_counts(text: str) -> Counter:
    toks = word_tokens(text)
    return Counter(zip(toks, toks[1:]))


def rouge2_single(candidate: str, reference: str) -> RougeScore:
    """ROUGE-2 against one reference: clipped bigram-multiset overlap.
    A side with fewer than two tokens contributes zero bigrams."""
    cand = _bigram_counts(candidate)
    ref = _bigram_counts(reference)
    overlap = sum((cand & ref).values())
    precision = overlap / sum(cand.values()) if cand else 0.0
    recall = overlap / sum(ref.values()) if ref else 0.0
    return RougeScore(precision=precision, recall=recall, f1=_f1(precision, recall))


def rouge2(
    candidate: str, references: Sequence[str], aggregation: str = "max"
) -> tuple[RougeScore, tuple[RougeScore, ...]]:
    """Multi-reference ROUGE-2. ``max`` keeps the per-reference triple with
    the best f1; ``mean`` averages each component."""
    if not references:
        raise ValueError("rouge2 needs at least one reference")
    per_ref = tuple(rouge2_single(candidate, ref) for ref in references)
    if aggregation == "max":
        best = max(per_ref, key=lambda s: s.f1)
        return best, per_ref
    if aggregation == "mean":
        n = len(per_ref)
        return (
            RougeScore(
                precision=sum(s.precision for s in per_ref) / n,
                recall=sum(s.recall for s in per_ref) / n,
                f1=sum(s.f1 for s in per_ref) / n,
            ),
            per_ref,
        )
    raise ValueError(f"unknown aggregation {aggregation!r}")


# ---------------------------------------------------------------------------
# SMART-2 approximation
# ---------------------------------------------------------------------------

Matcher = Callable[[str, str], float]


def exact_matcher(a: str, b: str) -> float:
    return 1.0 if a == b else 0.0


def lexical_matcher(a: str, b: str) -> float:
    """Cosine of the built-in lexical embeddings, the default matcher."""
    from .lexical import embed_text

    return float(embed_text(a) @ embed_text(b))


def _sentence_bigrams(sents: Sequence[str]) -> list[tuple[str, str]]:
    return list(zip(sents, sents[1:]))


def _greedy_match_mass(sim: list[list[float]]) -> float:
    """Greedy maximum matching on a similarity grid, then a pairwise swap
    refinement. Rows and columns are each used at most once.

    Plain greedy can land on the worse of two near-tied assignments; the
    swap pass repairs exactly that case (and makes 2x2 grids, the common
    short-summary case, exact)."""
    if not sim or not sim[0]:
        return 0.0
    n, m = len(sim), len(sim[0])
    edges = sorted(
        ((sim[i][j], i, j) for i in range(n) for j in range(m)),
        key=lambda e: (-e[0], e[1], e[2]),
    )
    match: dict[int, int] = {}
    used_cols: set[int] = set()
    for s, i, j in edges:
        if i in match or j in used_cols:
            continue
        match[i] = j
        used_cols.add(j)

    improved = True
    passes = 0
    while improved and passes < 50:
        improved = False
        passes += 1
        rows = list(match)
        free_cols = [j for j in range(m) if j not in used_cols]
        for a in range(len(rows)):
            i1 = rows[a]
            # reroute one pair to an unused column
            for j in free_cols:
                if sim[i1][j] > sim[i1][match[i1]] + 1e-12:
                    used_cols.discard(match[i1])
                    used_cols.add(j)
                    match[i1] = j
                    free_cols = [c for c in range(m) if c not in used_cols]
                    improved = True
            # swap columns between two pairs
            for b in range(a + 1, len(rows)):
                i2 = rows[b]
                j1, j2 = match[i1], match[i2]
                if sim[i1][j2] + sim[i2][j1] > sim[i1][j1] + sim[i2][j2] + 1e-12:
                    match[i1], match[i2] = j2, j1
                    improved = True
    return sum(sim[i][j] for i, j in match.items())


def smart2_single(
    candidate_sentences: Sequence[str],
    reference_sentences: Sequence[str],
    matcher: Matcher,
) -> float:
    """Soft sentence-bigram f1 against one reference: candidate bigrams are
    greedily matched to reference bigrams, a pair scoring the mean of its
    two aligned sentence similarities."""
    cand = _sentence_bigrams(candidate_sentences)
    ref = _sentence_bigrams(reference_sentences)
    if not cand or not ref:
        return 0.0
    sim = [
        [(matcher(c1, r1) + matcher(c2, r2)) / 2.0 for (r1, r2) in ref]
        for (c1, c2) in cand
    ]
    mass = _greedy_match_mass(sim)
    precision = mass / len(cand)
    recall = mass / len(ref)
    return _f1(precision, recall)


def smart2(
    candidate_sentences: Sequence[str],
    reference_sentence_lists: Sequence[Sequence[str]],
    matcher: Matcher | None = None,
    aggregation: str = "max",
) -> tuple[float, tuple[float, ...]]:
    matcher = matcher or lexical_matcher
    per_ref = tuple(
        smart2_single(candidate_sentences, ref, matcher)
        for ref in reference_sentence_lists
    )
    if not per_ref:
        return 0.0, ()
    if aggregation == "max":
        return max(per_ref), per_ref
    if aggregation == "mean":
        return sum(per_ref) / len(per_ref), per_ref
    raise ValueError(f"unknown aggregation {aggregation!r}")


def evaluate(
    candidate: str,
    references: Sequence[str],
    *,
    matcher: Matcher | None = None,
    aggregation: str = "max",
) -> MetricReport:
    """Full report for one candidate against a reference set; sentences for
    the soft metric come from the standard segmenter."""
    from .corpus import Document, Stream, segment

    def to_sents(text: str) -> list[str]:
        return [s.text for s in segment(Document("m", Stream.OTHER, text))]

    rouge_agg, rouge_per_ref = rouge2(candidate, references, aggregation)
    smart_agg, smart_per_ref = smart2(
        to_sents(candidate), [to_sents(r) for r in references], matcher, aggregation
    )
    return MetricReport(
        rouge2=rouge_agg,
        smart2=smart_agg,
        rouge2_per_reference=rouge_per_ref,
        smart2_per_reference=smart_per_ref,
        aggregation=aggregation,
    )
