"""Corpus ingestion: dataset manifests, event filtering, duplicate removal,
budget-driven document selection, and rule-based sentence segmentation.

All types here are immutable after construction and all operations are
side-effect free, so they can be shared freely across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import yaml


class Dataset(str, Enum):
    TAC2011 = "TAC2011"
    CYBER = "Cyber"
    CRISISFACTS = "CrisisFACTS"
    CUSTOM = "Custom"


class Stream(str, Enum):
    NEWS = "news"
    TWITTER = "twitter"
    REDDIT = "reddit"
    REPORT = "report"
    OTHER = "other"


class ManifestError(ValueError):
    """Missing, malformed, or internally inconsistent dataset manifest."""


@dataclass(frozen=True)
class Document:
    """One source document (or content snippet) within a topic."""

    doc_id: str
    stream: Stream
    text: str
    importance: float | None = None

    @property
    def char_len(self) -> int:
        return len(self.text)


@dataclass(frozen=True)
class Topic:
    """A group of documents summarized together, plus human references."""

    topic_id: str
    dataset: Dataset
    documents: tuple[Document, ...]
    reference_summaries: tuple[str, ...] = ()


@dataclass(frozen=True)
class Sentence:
    """A sentence with a stable address (doc_id, index) and a char span
    into the original document text.

    ``text`` is the document slice at ``(start, end)`` after whitespace
    normalization (runs collapsed to single spaces, ends stripped).
    """

    doc_id: str
    index: int
    text: str
    start: int
    end: int

    @property
    def ref(self) -> str:
        return f"{self.doc_id}:{self.index}"


@dataclass(frozen=True)
class FilterThresholds:
    """Character-length thresholds for dropping small/large events and
    short documents. Defaults follow the CrisisFACTS filtering setup."""

    min_sum_len: int = 200
    max_sum_len: int = 5000
    min_doc_len: int = 100

    def __post_init__(self) -> None:
        if not (0 < self.min_sum_len < self.max_sum_len):
            raise ValueError(
                f"need 0 < min_sum_len < max_sum_len, got "
                f"({self.min_sum_len}, {self.max_sum_len})"
            )
        if self.min_doc_len <= 0:
            raise ValueError(f"min_doc_len must be positive, got {self.min_doc_len}")


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def whitespace_tokens(text: str) -> list[str]:
    """Whitespace tokens, used for deterministic LLM input budgeting."""
    return text.split()


def word_tokens(text: str) -> list[str]:
    """Lowercased alphanumeric-run tokens, used for bigram statistics."""
    return re.findall(r"[a-z0-9]+", text.lower())


# ---------------------------------------------------------------------------
# Manifest ingestion
# ---------------------------------------------------------------------------

def ingest(manifest_path: str | Path) -> list[Topic]:
    """Load a dataset manifest into topics, in manifest order, unfiltered.

    The manifest is a UTF-8 YAML file with a top-level ``topics`` list.
    Each topic carries ``topic_id``, ``dataset``, ``documents`` (each with
    ``doc_id``, ``stream``, optional ``importance``, and either inline
    ``text`` or a ``path`` relative to the manifest), and optional
    ``reference_summaries`` given as paths relative to the manifest.
    """
    path = Path(manifest_path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ManifestError(f"manifest is not valid YAML: {exc}") from exc
    if raw is None:
        return []
    if not isinstance(raw, dict) or not isinstance(raw.get("topics", []), list):
        raise ManifestError("manifest must be a mapping with a 'topics' list")

    base = path.parent
    topics: list[Topic] = []
    seen_topic_ids: set[str] = set()
    for entry in raw.get("topics", []):
        topic = _parse_topic(entry, base)
        if topic.topic_id in seen_topic_ids:
            raise ManifestError(f"duplicate topic_id: {topic.topic_id!r}")
        seen_topic_ids.add(topic.topic_id)
        topics.append(topic)
    return topics


def _parse_topic(entry: object, base: Path) -> Topic:
    if not isinstance(entry, dict):
        raise ManifestError(f"topic entry must be a mapping, got {type(entry).__name__}")
    topic_id = entry.get("topic_id")
    if not topic_id or not isinstance(topic_id, str):
        raise ManifestError("topic entry missing nonempty 'topic_id'")
    try:
        dataset = Dataset(entry.get("dataset", "Custom"))
    except ValueError:
        raise ManifestError(
            f"topic {topic_id!r}: unknown dataset {entry.get('dataset')!r}"
        ) from None

    docs: list[Document] = []
    seen_doc_ids: set[str] = set()
    for doc_entry in entry.get("documents", []):
        doc = _parse_document(doc_entry, topic_id, base)
        if doc.doc_id in seen_doc_ids:
            raise ManifestError(f"topic {topic_id!r}: duplicate doc_id {doc.doc_id!r}")
        seen_doc_ids.add(doc.doc_id)
        docs.append(doc)

    refs: list[str] = []
    for ref_path in entry.get("reference_summaries", []) or []:
        ref_file = base / ref_path
        if not ref_file.is_file():
            raise ManifestError(
                f"topic {topic_id!r}: reference summary not found: {ref_file}"
            )
        refs.append(ref_file.read_text(encoding="utf-8"))

    return Topic(
        topic_id=topic_id,
        dataset=dataset,
        documents=tuple(docs),
        reference_summaries=tuple(refs),
    )


def _parse_document(entry: object, topic_id: str, base: Path) -> Document:
    if not isinstance(entry, dict):
        raise ManifestError(f"topic {topic_id!r}: document entry must be a mapping")
    doc_id = entry.get("doc_id")
    if not doc_id or not isinstance(doc_id, str):
        raise ManifestError(f"topic {topic_id!r}: document missing nonempty 'doc_id'")
    try:
        stream = Stream(entry.get("stream", "other"))
    except ValueError:
        raise ManifestError(
            f"doc {doc_id!r}: unknown stream {entry.get('stream')!r}"
        ) from None

    if "text" in entry:
        text = entry["text"]
    elif "path" in entry:
        doc_file = base / entry["path"]
        if not doc_file.is_file():
            raise ManifestError(f"doc {doc_id!r}: text file not found: {doc_file}")
        text = doc_file.read_text(encoding="utf-8")
    else:
        raise ManifestError(f"doc {doc_id!r}: needs either inline 'text' or a 'path'")
    if not isinstance(text, str):
        raise ManifestError(f"doc {doc_id!r}: text must be a string")

    importance = entry.get("importance")
    if importance is not None:
        importance = float(importance)
    return Document(doc_id=doc_id, stream=stream, text=text, importance=importance)


# ---------------------------------------------------------------------------
# Event filtering and budget selection
# ---------------------------------------------------------------------------

def filter_events(topics: list[Topic], t: FilterThresholds) -> list[Topic]:
    """Keep topics whose total reference-summary length lies inside
    [min_sum_len, max_sum_len], drop documents shorter than min_doc_len,
    and drop topics left with no documents.

    Reference length is measured before any deduplication.
    """
    survivors: list[Topic] = []
    for topic in topics:
        total_ref_len = sum(len(ref) for ref in topic.reference_summaries)
        if not (t.min_sum_len <= total_ref_len <= t.max_sum_len):
            continue
        docs = tuple(d for d in topic.documents if d.char_len >= t.min_doc_len)
        if not docs:
            continue
        survivors.append(
            Topic(topic.topic_id, topic.dataset, docs, topic.reference_summaries)
        )
    return survivors


def select_for_budgeted_input(
    docs: list[Document] | tuple[Document, ...], token_budget: int
) -> list[Document]:
    """Pick the most important documents that fit a whitespace-token budget.

    Exact duplicate texts (after whitespace normalization) are removed,
    keeping the first occurrence. The rest are ranked by importance
    descending (missing importance ranks last, ties keep original order)
    and a greedy prefix is taken while the cumulative token count stays
    within the budget. The selection is returned in original order.
    """
    if token_budget <= 0:
        raise ValueError(f"token_budget must be positive, got {token_budget}")
    seen: set[str] = set()
    deduped: list[tuple[int, Document]] = []
    for pos, doc in enumerate(docs):
        key = normalize_ws(doc.text)
        if key in seen:
            continue
        seen.add(key)
        deduped.append((pos, doc))

    ranked = sorted(
        deduped,
        key=lambda pd: (
            -(pd[1].importance if pd[1].importance is not None else -math.inf),
            pd[0],
        ),
    )
    chosen: list[tuple[int, Document]] = []
    used = 0
    for pos, doc in ranked:
        cost = len(whitespace_tokens(doc.text))
        if used + cost > token_budget:
            break
        used += cost
        chosen.append((pos, doc))
    chosen.sort(key=lambda pd: pd[0])
    return [doc for _, doc in chosen]


# ---------------------------------------------------------------------------
# Sentence segmentation
# ---------------------------------------------------------------------------

# Multi-character abbreviations that keep a following period from ending a
# sentence. Single letters are deliberately absent so "A. B?" splits.
ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "prof", "rev", "gen", "col", "sgt", "sen", "gov",
    "jr", "sr", "st", "vs", "etc", "inc", "ltd", "co", "corp", "dept", "univ",
    "est", "approx", "no", "fig", "vol", "pp", "ed", "eds", "cf", "al",
    "e.g", "i.e", "u.s", "u.k", "u.n",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec",
})

DEFAULT_MAX_SENTENCE_CHARS = 2000

_TERMINATORS = ".!?"


def _abbreviation_guarded(text: str, dot_pos: int) -> bool:
    """True when the period at dot_pos ends a guarded abbreviation."""
    j = dot_pos - 1
    while j >= 0 and (text[j].isalnum() or text[j] == "."):
        j -= 1
    token = text[j + 1 : dot_pos].lower().strip(".")
    return token in ABBREVIATIONS


def _raw_spans(text: str) -> list[tuple[int, int]]:
    """Split on newline boundaries and terminator runs followed by space."""
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            spans.append((start, i))
            i += 1
            start = i
            continue
        if ch in _TERMINATORS:
            j = i + 1
            while j < n and text[j] in _TERMINATORS:
                j += 1
            boundary = j >= n or text[j].isspace()
            guarded = ch == "." and (j - i) == 1 and _abbreviation_guarded(text, i)
            if boundary and not guarded:
                spans.append((start, j))
                start = j
                i = j
                continue
            i = j
            continue
        i += 1
    if start < n:
        spans.append((start, n))
    return spans


def _trim(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def _force_split(text: str, start: int, end: int, max_chars: int) -> list[tuple[int, int]]:
    """Break an over-long span at the last whitespace before the limit,
    falling back to a hard cut when the span has no whitespace at all."""
    out: list[tuple[int, int]] = []
    while end - start > max_chars:
        window = text[start : start + max_chars]
        cut = -1
        for k in range(len(window) - 1, -1, -1):
            if window[k].isspace():
                cut = k
                break
        if cut <= 0:
            cut = max_chars
        out.append((start, start + cut))
        start = start + cut
        start, end = _trim(text, start, end)
    if end > start:
        out.append((start, end))
    return out


def segment(
    doc: Document, max_sentence_chars: int = DEFAULT_MAX_SENTENCE_CHARS
) -> list[Sentence]:
    """Deterministic rule-based sentence split of a document.

    Sentences end at ``. ! ?`` runs followed by whitespace (subject to the
    abbreviation guard) and at newlines; any remaining run longer than
    ``max_sentence_chars`` is force-split. Concatenating the sentence texts
    reconstructs the document text modulo whitespace.
    """
    text = doc.text
    sentences: list[Sentence] = []
    for raw_start, raw_end in _raw_spans(text):
        start, end = _trim(text, raw_start, raw_end)
        if end <= start:
            continue
        for s, e in _force_split(text, start, end, max_sentence_chars):
            s, e = _trim(text, s, e)
            if e <= s:
                continue
            sentences.append(
                Sentence(
                    doc_id=doc.doc_id,
                    index=len(sentences),
                    text=normalize_ws(text[s:e]),
                    start=s,
                    end=e,
                )
            )
    return sentences


def topic_sentences(
    topic: Topic, max_sentence_chars: int = DEFAULT_MAX_SENTENCE_CHARS
) -> list[Sentence]:
    """All sentences of a topic in document order."""
    out: list[Sentence] = []
    for doc in topic.documents:
        out.extend(segment(doc, max_sentence_chars))
    return out


def doc_sentence_index(
    topic: Topic, max_sentence_chars: int = DEFAULT_MAX_SENTENCE_CHARS
) -> dict[str, list[Sentence]]:
    """Map doc_id to that document's sentences."""
    return {
        doc.doc_id: segment(doc, max_sentence_chars) for doc in topic.documents
    }
