"""Annotation harness: Task 1 (single attribution in context) and Task 2
(three ranked attributions) items, the append-only label store, and the
aggregate tallies: label fractions, refutation percentages, per-annotator
totals, and duplicate-aware typology counts.

Counting rules, fixed here and used everywhere:

- Raw counts (label fractions, refutation percentages) count every record.
  Percentage denominators come from declared condition totals
  (pairings x annotators) when the store carries them, else from the
  record count.
- Deduplicated counts (typology bars, per-method statement splits,
  per-annotator totals/uniques) collapse duplicate chains and skip records
  whose secondary code is NE ("not an error", a review outcome).
- An annotator's refutation is "unique" when its chain contains no record
  from a different annotator.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .attribution import (
    AttributionMethod,
    AttributionSet,
    Candidate,
    ContextWindow,
    SentenceRef,
    context_window,
)
from .corpus import Dataset, Sentence
from .summarize import SummaryMethod, SummaryRecord

GUIDELINE_VERSION = "v1"


class TaskKind(str, Enum):
    SINGLE = "Single"
    GROUP = "Group"


class Label(str, Enum):
    SUPPORT = "Support"
    NO_SUPPORT = "NoSupport"
    UNCLEAR = "Unclear"
    FULL_SUPPORT = "FullSupport"
    PARTIAL_SUPPORT = "PartialSupport"


SINGLE_LABELS = frozenset({Label.SUPPORT, Label.NO_SUPPORT, Label.UNCLEAR})
GROUP_LABELS = frozenset(
    {Label.FULL_SUPPORT, Label.PARTIAL_SUPPORT, Label.NO_SUPPORT, Label.UNCLEAR}
)


def labels_for_kind(kind: TaskKind) -> list[Label]:
    if kind is TaskKind.SINGLE:
        return [Label.SUPPORT, Label.NO_SUPPORT, Label.UNCLEAR]
    return [Label.FULL_SUPPORT, Label.PARTIAL_SUPPORT, Label.NO_SUPPORT, Label.UNCLEAR]


class PrimaryCategory(str, Enum):
    SEMANTIC = "Semantic"
    CONTENT = "Content"
    ADDITIONAL = "Additional"


class SecondaryCode(str, Enum):
    PRED_E = "PredE"
    ENT_E = "EntE"
    CIRC_E = "CircE"
    OUT_E = "OutE"
    GRAM_E = "GramE"
    OTH_E = "OthE"
    NE = "NE"


@dataclass(frozen=True)
class Typology:
    primary: frozenset[PrimaryCategory]
    secondary: frozenset[SecondaryCode]

    def to_fields(self) -> tuple[str, str]:
        # serialize in domain order (Semantic < Content < Additional, and
        # PredE .. NE), the order the error taxonomy defines
        primary_order = list(PrimaryCategory)
        secondary_order = list(SecondaryCode)
        return (
            " ".join(c.value for c in primary_order if c in self.primary),
            " ".join(c.value for c in secondary_order if c in self.secondary),
        )

    @staticmethod
    def from_fields(primary: str, secondary: str) -> "Typology | None":
        if not primary and not secondary:
            return None
        return Typology(
            primary=frozenset(PrimaryCategory(p) for p in primary.split()),
            secondary=frozenset(SecondaryCode(s) for s in secondary.split()),
        )


class LabelValidationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Task items
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SinglePayload:
    window: ContextWindow

    def refs(self) -> list[SentenceRef]:
        out = []
        if self.window.prev is not None:
            out.append(SentenceRef.of(self.window.prev))
        out.append(SentenceRef.of(self.window.eval))
        if self.window.next is not None:
            out.append(SentenceRef.of(self.window.next))
        return out


@dataclass(frozen=True)
class GroupPayload:
    candidates: tuple[Candidate, ...]
    short_pool: bool = False

    def refs(self) -> list[SentenceRef]:
        return [c.ref for c in self.candidates]


@dataclass(frozen=True)
class TaskItem:
    task_id: str
    kind: TaskKind
    dataset: Dataset
    summary_method: SummaryMethod
    attribution_method: AttributionMethod
    summary_statement: str
    payload: SinglePayload | GroupPayload
    guideline_version: str = GUIDELINE_VERSION


def _task_id(
    kind: TaskKind,
    statement: str,
    refs: list[SentenceRef],
    summary_id: str,
    method: AttributionMethod,
) -> str:
    # summary_id and method disambiguate items whose statement and payload
    # coincide across conditions; everything here is content, so rebuilding
    # from identical inputs reproduces identical ids.
    blob = "\x1f".join(
        [kind.value, summary_id, method.value, statement] + [str(r) for r in refs]
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


GROUP_SIZE = 3


def build_tasks(
    attributions: list[AttributionSet],
    kind: TaskKind,
    *,
    summary: SummaryRecord,
    dataset: Dataset,
    sentence_index: dict[str, list[Sentence]],
    guideline_version: str = GUIDELINE_VERSION,
) -> list[TaskItem]:
    """One annotation item per attribution set: the rank-1 candidate in its
    context window for single-attribution tasks, the top three candidates
    for group tasks. Task ids are content hashes, so rebuilding from the
    same inputs yields the same ids."""
    if summary.method is SummaryMethod.EXTRACTIVE:
        raise ValueError("extractive summaries are not annotated directly")
    by_index = {s.index: s for s in summary.sentences}
    items: list[TaskItem] = []
    for aset in attributions:
        statement = by_index[aset.summary_sentence.index].text
        if not aset.candidates:
            raise ValueError(
                f"attribution for {aset.summary_sentence} has no candidates"
            )
        payload: SinglePayload | GroupPayload
        if kind is TaskKind.SINGLE:
            payload = SinglePayload(
                window=context_window(aset.candidates[0].ref, sentence_index)
            )
        else:
            top = aset.candidates[:GROUP_SIZE]
            payload = GroupPayload(
                candidates=tuple(top), short_pool=len(top) < GROUP_SIZE
            )
        items.append(
            TaskItem(
                task_id=_task_id(
                    kind, statement, payload.refs(), summary.summary_id, aset.method
                ),
                kind=kind,
                dataset=dataset,
                summary_method=summary.method,
                attribution_method=aset.method,
                summary_statement=statement,
                payload=payload,
                guideline_version=guideline_version,
            )
        )
    return items


# ---------------------------------------------------------------------------
# Label records and the store
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelRecord:
    record_id: int
    task_id: str
    dataset: Dataset
    summary_method: SummaryMethod
    attribution_method: AttributionMethod
    kind: TaskKind
    annotator_id: str
    label: Label
    refute: bool = False
    typology: Typology | None = None
    duplicate_of: int | None = None
    comment: str = ""
    submitted_at: str = ""

    @property
    def excluded_from_counts(self) -> bool:
        """NE-flagged refutations are review outcomes, not errors; they stay
        in the store but drop out of deduplicated counts."""
        return self.typology is not None and SecondaryCode.NE in self.typology.secondary

    def validate(self) -> None:
        allowed = SINGLE_LABELS if self.kind is TaskKind.SINGLE else GROUP_LABELS
        if self.label not in allowed:
            raise LabelValidationError(
                f"label {self.label.value!r} is not valid for {self.kind.value} tasks"
            )
        if self.typology is not None and not self.refute:
            raise LabelValidationError("typology is only allowed on refutations")
        if not self.annotator_id:
            raise LabelValidationError("annotator_id must be nonempty")


@dataclass(frozen=True)
class ConditionDecl:
    """Declared experiment size for one condition, giving tallies their
    denominator (pairings x annotators) and the full annotator roster."""

    dataset: Dataset
    summary_method: SummaryMethod
    attribution_method: AttributionMethod
    kind: TaskKind
    pairings: int
    annotators: tuple[str, ...]

    @property
    def total_annotations(self) -> int:
        return self.pairings * len(self.annotators)


@dataclass(frozen=True)
class ConditionFilter:
    dataset: Dataset | None = None
    summary_method: SummaryMethod | None = None
    attribution_method: AttributionMethod | None = None
    kind: TaskKind | None = None

    def matches_record(self, rec: LabelRecord) -> bool:
        return (
            (self.dataset is None or rec.dataset is self.dataset)
            and (self.summary_method is None or rec.summary_method is self.summary_method)
            and (
                self.attribution_method is None
                or rec.attribution_method is self.attribution_method
            )
            and (self.kind is None or rec.kind is self.kind)
        )

    def matches_decl(self, decl: ConditionDecl) -> bool:
        return (
            (self.dataset is None or decl.dataset is self.dataset)
            and (self.summary_method is None or decl.summary_method is self.summary_method)
            and (
                self.attribution_method is None
                or decl.attribution_method is self.attribution_method
            )
            and (self.kind is None or decl.kind is self.kind)
        )


STORE_HEADER = "#! attribeval-labels v1"

_FIELDS = (
    "record_id task_id dataset summary_method attribution_method kind "
    "annotator_id label refute primary secondary duplicate_of comment submitted_at"
).split()


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(text: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _record_line(rec: LabelRecord) -> str:
    primary, secondary = rec.typology.to_fields() if rec.typology else ("", "")
    fields = [
        str(rec.record_id),
        rec.task_id,
        rec.dataset.value,
        rec.summary_method.value,
        rec.attribution_method.value,
        rec.kind.value,
        rec.annotator_id,
        rec.label.value,
        "yes" if rec.refute else "no",
        primary,
        secondary,
        "" if rec.duplicate_of is None else str(rec.duplicate_of),
        _escape(rec.comment),
        rec.submitted_at,
    ]
    return "\t".join(fields)


def _parse_record_line(line: str, lineno: int) -> LabelRecord:
    parts = line.split("\t")
    if len(parts) != len(_FIELDS):
        raise LabelValidationError(
            f"line {lineno}: expected {len(_FIELDS)} fields, got {len(parts)}"
        )
    try:
        rec = LabelRecord(
            record_id=int(parts[0]),
            task_id=parts[1],
            dataset=Dataset(parts[2]),
            summary_method=SummaryMethod(parts[3]),
            attribution_method=AttributionMethod(parts[4]),
            kind=TaskKind(parts[5]),
            annotator_id=parts[6],
            label=Label(parts[7]),
            refute=parts[8] == "yes",
            typology=Typology.from_fields(parts[9], parts[10]),
            duplicate_of=int(parts[11]) if parts[11] else None,
            comment=_unescape(parts[12]),
            submitted_at=parts[13],
        )
        rec.validate()
    except (ValueError, KeyError) as exc:
        raise LabelValidationError(f"line {lineno}: {exc}") from exc
    return rec


class LabelStore:
    """Append-only collection of label records plus declared condition
    sizes. File form: a schema header, condition declarations, then one
    tab-separated record per line."""

    def __init__(self) -> None:
        self.records: list[LabelRecord] = []
        self.conditions: list[ConditionDecl] = []
        self._by_id: dict[int, LabelRecord] = {}
        self._by_task_annotator: dict[tuple[str, str], int] = {}

    def __len__(self) -> int:
        return len(self.records)

    def get(self, record_id: int) -> LabelRecord | None:
        return self._by_id.get(record_id)

    def next_record_id(self) -> int:
        return max(self._by_id, default=0) + 1

    def declare_condition(self, decl: ConditionDecl) -> None:
        self.conditions.append(decl)

    def append(self, rec: LabelRecord) -> None:
        rec.validate()
        if rec.record_id in self._by_id:
            raise LabelValidationError(f"duplicate record_id {rec.record_id}")
        if rec.duplicate_of is not None and rec.duplicate_of not in self._by_id:
            raise LabelValidationError(
                f"record {rec.record_id}: duplicate_of {rec.duplicate_of} does not exist"
            )
        self.records.append(rec)
        self._by_id[rec.record_id] = rec
        self._by_task_annotator[(rec.task_id, rec.annotator_id)] = rec.record_id

    def has_label(self, task_id: str, annotator_id: str) -> bool:
        return (task_id, annotator_id) in self._by_task_annotator

    def effective_records(self) -> list[LabelRecord]:
        """The latest record per (task, annotator): amendments supersede
        earlier submissions without rewriting them. Equals ``records`` for
        stores without amendments (all bundled fixtures)."""
        latest = {
            (r.task_id, r.annotator_id): r.record_id for r in self.records
        }
        keep = set(latest.values())
        return [r for r in self.records if r.record_id in keep]

    # -- persistence --------------------------------------------------------

    def dump(self, path: str | Path) -> None:
        lines = [STORE_HEADER]
        for decl in self.conditions:
            lines.append(
                "#! condition\t"
                + "\t".join(
                    [
                        f"dataset={decl.dataset.value}",
                        f"summary_method={decl.summary_method.value}",
                        f"attribution_method={decl.attribution_method.value}",
                        f"kind={decl.kind.value}",
                        f"pairings={decl.pairings}",
                        "annotators=" + ",".join(decl.annotators),
                    ]
                )
            )
        lines.extend(_record_line(r) for r in self.records)
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LabelStore":
        path = Path(path)
        if not path.is_file():
            raise LabelValidationError(f"label store not found: {path}")
        store = cls()
        text = path.read_text(encoding="utf-8")
        lines = text.splitlines()
        if lines and lines[0] != STORE_HEADER:
            raise LabelValidationError(f"{path}: missing schema header")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            if line.startswith("#! condition\t"):
                store.declare_condition(_parse_condition_line(line, lineno))
                continue
            if line.startswith("#"):
                continue
            store.append(_parse_record_line(line, lineno))
        return store


def _parse_condition_line(line: str, lineno: int) -> ConditionDecl:
    kv: dict[str, str] = {}
    for part in line.split("\t")[1:]:
        key, _, value = part.partition("=")
        kv[key] = value
    try:
        return ConditionDecl(
            dataset=Dataset(kv["dataset"]),
            summary_method=SummaryMethod(kv["summary_method"]),
            attribution_method=AttributionMethod(kv["attribution_method"]),
            kind=TaskKind(kv["kind"]),
            pairings=int(kv["pairings"]),
            annotators=tuple(a for a in kv["annotators"].split(",") if a),
        )
    except (KeyError, ValueError) as exc:
        raise LabelValidationError(f"line {lineno}: bad condition declaration: {exc}") from exc


def import_fixture(path: str | Path) -> LabelStore:
    """Load a bundled annotation fixture (same line format as the store)."""
    return LabelStore.load(path)


# ---------------------------------------------------------------------------
# record_label (service-side validation path)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AcceptedLabel:
    record: LabelRecord
    warning: str | None = None


def record_label(
    store: LabelStore,
    rec: LabelRecord,
    *,
    known_tasks: set[str] | None = None,
    amend: bool = False,
) -> AcceptedLabel:
    """Validate and append one label. A missing refute answer has already
    been defaulted to false by construction. Unclear combined with
    refute=true is accepted but flagged, since the guidelines ask for
    refute=no on unclear items."""
    if known_tasks is not None and rec.task_id not in known_tasks:
        raise LabelValidationError(f"unknown task_id {rec.task_id!r}")
    rec.validate()
    if store.has_label(rec.task_id, rec.annotator_id) and not amend:
        raise LabelValidationError(
            f"annotator {rec.annotator_id!r} already labeled task {rec.task_id!r}"
        )
    store.append(rec)
    warning = None
    if rec.label is Label.UNCLEAR and rec.refute:
        warning = "refute=yes recorded on an Unclear label"
    return AcceptedLabel(record=rec, warning=warning)


# ---------------------------------------------------------------------------
# Tallies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnotatorTally:
    total: int
    unique: int


@dataclass(frozen=True)
class ResultSummary:
    condition: ConditionFilter
    n_records: int
    total_annotations: int
    label_counts: dict[Label, int]
    label_fractions: dict[Label, float]
    refutation_pct: float
    refutation_pct_dedup: float
    per_annotator: dict[str, AnnotatorTally]
    typology_counts: dict[str, int]
    method_split: dict[SummaryMethod, int]


def _chain_ids(store: LabelStore) -> dict[int, int]:
    """Union-find over duplicate_of links across the whole store; maps each
    record id to a chain representative."""
    parent: dict[int, int] = {r.record_id: r.record_id for r in store.records}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rec in store.records:
        if rec.duplicate_of is not None and rec.duplicate_of in parent:
            ra, rb = find(rec.record_id), find(rec.duplicate_of)
            if ra != rb:
                parent[ra] = rb
    return {rid: find(rid) for rid in parent}


def tally(store: LabelStore, condition: ConditionFilter | None = None) -> ResultSummary:
    """Aggregate every effective record matching the condition filter
    (amendments supersede the records they replace)."""
    condition = condition or ConditionFilter()
    effective = store.effective_records()
    matching = [r for r in effective if condition.matches_record(r)]
    chains = _chain_ids(store)

    label_counts: dict[Label, int] = {}
    for rec in matching:
        label_counts[rec.label] = label_counts.get(rec.label, 0) + 1
    n = len(matching)
    label_fractions = {lab: cnt / n for lab, cnt in label_counts.items()} if n else {}

    declared = [d for d in store.conditions if condition.matches_decl(d)]
    total = sum(d.total_annotations for d in declared) if declared else n

    refutes = [r for r in matching if r.refute]
    refutation_pct = 100.0 * len(refutes) / total if total else 0.0

    counted = [r for r in refutes if not r.excluded_from_counts]
    counted_chains = {chains[r.record_id] for r in counted}
    refutation_pct_dedup = 100.0 * len(counted_chains) / total if total else 0.0

    # Chain members among the filtered records (drives deduplicated counts)
    # and across the whole store (drives cross-annotator uniqueness: a
    # duplicate link makes a record non-unique even when its twin falls
    # outside the filter).
    members: dict[int, list[LabelRecord]] = {}
    for rec in counted:
        members.setdefault(chains[rec.record_id], []).append(rec)
    members_global: dict[int, list[LabelRecord]] = {}
    for rec in effective:
        if rec.refute and not rec.excluded_from_counts:
            members_global.setdefault(chains[rec.record_id], []).append(rec)

    roster: set[str] = {a for d in declared for a in d.annotators}
    roster.update(r.annotator_id for r in matching)
    per_annotator: dict[str, AnnotatorTally] = {}
    for annotator in sorted(roster):
        own = [r for r in counted if r.annotator_id == annotator]
        unique = 0
        for rec in own:
            chain = members_global[chains[rec.record_id]]
            if all(m.annotator_id == annotator for m in chain):
                unique += 1
        per_annotator[annotator] = AnnotatorTally(total=len(own), unique=unique)

    typology: dict[str, int] = {}
    method_split: dict[SummaryMethod, int] = {}
    for chain in members.values():
        primaries = {p for r in chain if r.typology for p in r.typology.primary}
        secondaries = {
            s
            for r in chain
            if r.typology
            for s in r.typology.secondary
            if s is not SecondaryCode.NE
        }
        for p in primaries:
            typology[p.value] = typology.get(p.value, 0) + 1
        for s in secondaries:
            typology[s.value] = typology.get(s.value, 0) + 1
        for method in {r.summary_method for r in chain}:
            method_split[method] = method_split.get(method, 0) + 1

    return ResultSummary(
        condition=condition,
        n_records=n,
        total_annotations=total,
        label_counts=label_counts,
        label_fractions=label_fractions,
        refutation_pct=refutation_pct,
        refutation_pct_dedup=refutation_pct_dedup,
        per_annotator=per_annotator,
        typology_counts=typology,
        method_split=method_split,
    )


def typology_counts(
    store: LabelStore, condition: ConditionFilter | None = None
) -> dict[str, int]:
    """Deduplicated error-category counts: one count per duplicate chain
    per category, multi-category records incrementing each named category,
    NE records excluded."""
    return tally(store, condition).typology_counts
