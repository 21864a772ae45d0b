"""Pipeline orchestration: run configuration, staged execution with
content-hash idempotence (a stage whose inputs are unchanged is skipped and
its artifacts reused), and result report emission.

Artifacts land in the run directory as stable JSON/text files:
topics.json, summaries.json, matrices/, attributions.json, tasks.json,
reductions/, results/, and run_manifest.json.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import yaml

from . import corpus as corpus_mod
from .annotation import (
    ConditionFilter,
    GROUP_SIZE,
    LabelStore,
    TaskItem,
    TaskKind,
    build_tasks,
    labels_for_kind,
    tally,
)
from .attribution import (
    AttributionMethod,
    AttributionSet,
    Candidate,
    ScoreMatrix,
    Scorer,
    SentenceRef,
    attribution_sets,
    builtin_lexical_scorer,
    candidate_pool,
    reduce_matrix,
    save_matrix,
    score_matrix,
)
from .corpus import Dataset, Document, FilterThresholds, Sentence, Stream, Topic
from .providers import (
    HttpProvider,
    IdentityProvider,
    ParaphraseProvider,
    ReplayProvider,
    TranscriptStore,
)
from .summarize import (
    BudgetMode,
    BudgetPolicy,
    SummaryMethod,
    SummaryRecord,
    compute_budget,
    extract_summary,
    hybrid_from_extract,
    abstractive_summarize,
    make_summary_record,
)


@dataclass
class RunConfig:
    manifest: Path
    out_dir: Path
    budget_policy: BudgetPolicy = field(
        default_factory=lambda: BudgetPolicy(BudgetMode.PERCENTILE75)
    )
    provider: str = "mock-identity"  # mock-identity | replay | http
    provider_endpoint: str | None = None
    transcripts: Path | None = None
    scorer: str = "builtin"  # "builtin" or an http endpoint URL
    attribution_methods: tuple[AttributionMethod, ...] = (
        AttributionMethod.EMBEDDING,
        AttributionMethod.NLI,
    )
    summary_methods: tuple[SummaryMethod, ...] = (
        SummaryMethod.HUMAN,
        SummaryMethod.ABSTRACTIVE,
        SummaryMethod.HYBRID,
    )
    task_kinds: tuple[TaskKind, ...] = (TaskKind.SINGLE, TaskKind.GROUP)
    top_k: int = GROUP_SIZE
    token_budget: int = 14000
    epsilon: float = 1e-4
    reduction_order: str = "adaptive"
    filter_thresholds: FilterThresholds | None = None
    bind: str = "127.0.0.1:8008"
    auth_token: str | None = None

    def __post_init__(self) -> None:
        self.manifest = Path(self.manifest)
        self.out_dir = Path(self.out_dir)
        if self.transcripts is None:
            self.transcripts = self.out_dir / "transcripts.jsonl"

    def validate(self) -> None:
        if not self.manifest.is_file():
            raise FileNotFoundError(f"manifest not found: {self.manifest}")
        if self.provider == "http" and not self.provider_endpoint:
            raise ValueError("http provider needs provider_endpoint")
        if self.provider == "replay" and not Path(self.transcripts).is_file():
            raise FileNotFoundError(f"replay transcripts not found: {self.transcripts}")

    def snapshot(self) -> dict:
        """Canonical JSONable form, used for hashing and the run manifest."""
        return {
            "manifest": str(self.manifest),
            "budget_policy": {
                "mode": self.budget_policy.mode.value,
                "fixed_chars": self.budget_policy.fixed_chars,
            },
            "provider": self.provider,
            "provider_endpoint": self.provider_endpoint,
            "scorer": self.scorer,
            "attribution_methods": [m.value for m in self.attribution_methods],
            "summary_methods": [m.value for m in self.summary_methods],
            "task_kinds": [k.value for k in self.task_kinds],
            "top_k": self.top_k,
            "token_budget": self.token_budget,
            "epsilon": self.epsilon,
            "reduction_order": self.reduction_order,
            "filter_thresholds": (
                None
                if self.filter_thresholds is None
                else asdict(self.filter_thresholds)
            ),
        }

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(raw, base=Path(path).parent)

    @classmethod
    def from_dict(cls, raw: dict, base: Path | None = None) -> "RunConfig":
        base = base or Path(".")

        def respath(key: str, default=None):
            val = raw.get(key, default)
            if val is None:
                return None
            p = Path(val)
            return p if p.is_absolute() else base / p

        policy = BudgetPolicy(
            mode=BudgetMode(raw.get("budget_policy", "percentile75")),
            fixed_chars=raw.get("fixed_budget"),
        )
        thresholds = None
        if raw.get("filter_thresholds"):
            thresholds = FilterThresholds(**raw["filter_thresholds"])
        return cls(
            manifest=respath("manifest"),
            out_dir=respath("out_dir", "out"),
            budget_policy=policy,
            provider=raw.get("provider", "mock-identity"),
            provider_endpoint=raw.get("provider_endpoint"),
            transcripts=respath("transcripts"),
            scorer=raw.get("scorer", "builtin"),
            attribution_methods=tuple(
                AttributionMethod(m)
                for m in raw.get("attribution_methods", ["Embedding", "NLI"])
            ),
            summary_methods=tuple(
                SummaryMethod(m)
                for m in raw.get("summary_methods", ["Human", "Abstractive", "Hybrid"])
            ),
            task_kinds=tuple(
                TaskKind(k) for k in raw.get("task_kinds", ["Single", "Group"])
            ),
            top_k=int(raw.get("top_k", GROUP_SIZE)),
            token_budget=int(raw.get("token_budget", 14000)),
            epsilon=float(raw.get("epsilon", 1e-4)),
            reduction_order=raw.get("reduction_order", "adaptive"),
            filter_thresholds=thresholds,
            bind=raw.get("bind", "127.0.0.1:8008"),
            auth_token=raw.get("auth_token"),
        )

    def make_provider(self) -> ParaphraseProvider:
        if self.provider == "mock-identity":
            return IdentityProvider()
        if self.provider == "replay":
            return ReplayProvider(self.transcripts)
        if self.provider == "http":
            return HttpProvider(self.provider_endpoint)
        raise ValueError(f"unknown provider {self.provider!r}")

    def make_scorer(self) -> Scorer:
        if self.scorer == "builtin":
            return builtin_lexical_scorer()
        from .scorer_client import HttpScorer

        return HttpScorer(self.scorer)


# ---------------------------------------------------------------------------
# Artifact serialization (stable, sorted-key JSON)
# ---------------------------------------------------------------------------

def _dump_json(obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=1) + "\n",
        encoding="utf-8",
    )


def _load_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    return _sha256_bytes(path.read_bytes())


def _sha256_obj(obj) -> str:
    return _sha256_bytes(json.dumps(obj, sort_keys=True, ensure_ascii=False).encode("utf-8"))


def sentence_to_json(s: Sentence) -> dict:
    return {"doc_id": s.doc_id, "index": s.index, "text": s.text, "start": s.start, "end": s.end}


def sentence_from_json(d: dict) -> Sentence:
    return Sentence(d["doc_id"], d["index"], d["text"], d["start"], d["end"])


def topic_to_json(t: Topic) -> dict:
    return {
        "topic_id": t.topic_id,
        "dataset": t.dataset.value,
        "documents": [
            {
                "doc_id": d.doc_id,
                "stream": d.stream.value,
                "text": d.text,
                "importance": d.importance,
            }
            for d in t.documents
        ],
        "reference_summaries": list(t.reference_summaries),
    }


def topic_from_json(d: dict) -> Topic:
    return Topic(
        topic_id=d["topic_id"],
        dataset=Dataset(d["dataset"]),
        documents=tuple(
            Document(x["doc_id"], Stream(x["stream"]), x["text"], x["importance"])
            for x in d["documents"]
        ),
        reference_summaries=tuple(d["reference_summaries"]),
    )


def summary_to_json(r: SummaryRecord) -> dict:
    return {
        "topic_id": r.topic_id,
        "method": r.method.value,
        "text": r.text,
        "summary_id": r.summary_id,
        "sentences": [sentence_to_json(s) for s in r.sentences],
        "extraction_provenance": (
            None
            if r.extraction_provenance is None
            else [[doc, idx] for doc, idx in r.extraction_provenance]
        ),
        "warning": r.warning,
    }


def summary_from_json(d: dict) -> SummaryRecord:
    return SummaryRecord(
        topic_id=d["topic_id"],
        method=SummaryMethod(d["method"]),
        text=d["text"],
        summary_id=d["summary_id"],
        sentences=tuple(sentence_from_json(s) for s in d["sentences"]),
        extraction_provenance=(
            None
            if d["extraction_provenance"] is None
            else tuple((doc, idx) for doc, idx in d["extraction_provenance"])
        ),
        warning=d.get("warning"),
    )


def attribution_group_to_json(
    topic_id: str, summary: SummaryRecord, sets: list[AttributionSet]
) -> dict:
    return {
        "topic_id": topic_id,
        "summary_id": summary.summary_id,
        "summary_method": summary.method.value,
        "attribution_method": sets[0].method.value if sets else None,
        "sets": [
            {
                "summary_sentence": str(a.summary_sentence),
                "short_pool": a.short_pool,
                "candidates": [
                    {"ref": str(c.ref), "score": c.score, "rank": c.rank}
                    for c in a.candidates
                ],
            }
            for a in sets
        ],
    }


def task_to_json(t: TaskItem) -> dict:
    from .annotation import SinglePayload

    blocks: list[dict] = []
    if isinstance(t.payload, SinglePayload):
        w = t.payload.window
        if w.prev is not None:
            blocks.append({"role": "context", "text": w.prev.text, "ref": w.prev.ref, "rank": None})
        blocks.append({"role": "eval", "text": w.eval.text, "ref": w.eval.ref, "rank": None})
        if w.next is not None:
            blocks.append({"role": "context", "text": w.next.text, "ref": w.next.ref, "rank": None})
        payload = {"blocks": blocks, "short_pool": False}
    else:
        for c in t.payload.candidates:
            blocks.append({"role": "eval", "text": None, "ref": str(c.ref), "rank": c.rank})
        payload = {"blocks": blocks, "short_pool": t.payload.short_pool}
    return {
        "task_id": t.task_id,
        "kind": t.kind.value,
        "dataset": t.dataset.value,
        "summary_method": t.summary_method.value,
        "attribution_method": t.attribution_method.value,
        "summary_statement": t.summary_statement,
        "guideline_version": t.guideline_version,
        "label_options": [lab.value for lab in labels_for_kind(t.kind)],
        "refute_default": "no",
        "payload": payload,
    }


# ---------------------------------------------------------------------------
# Stage runner
# ---------------------------------------------------------------------------

_STATE_FILE = ".stage_state.json"


@dataclass
class StageResult:
    name: str
    input_hash: str
    outputs: dict[str, str]
    cached: bool


class _StageState:
    def __init__(self, out_dir: Path):
        self.path = out_dir / _STATE_FILE
        self.state: dict = {}
        if self.path.is_file():
            self.state = _load_json(self.path)

    def fresh(self, name: str, input_hash: str, outputs: list[Path]) -> bool:
        entry = self.state.get(name)
        return (
            entry is not None
            and entry.get("input_hash") == input_hash
            and all(p.is_file() for p in outputs)
        )

    def record(self, name: str, input_hash: str, outputs: dict[str, str]) -> None:
        self.state[name] = {"input_hash": input_hash, "outputs": outputs}
        _dump_json(self.state, self.path)

    def outputs(self, name: str) -> dict[str, str]:
        return dict(self.state.get(name, {}).get("outputs", {}))


@dataclass
class RunManifest:
    run_id: str
    created_at: str
    config: dict
    stages: dict[str, dict]

    def stage_hashes(self) -> dict:
        """The reproducible core: per-stage input and output hashes,
        without the cached/timing fields."""
        return {
            name: {"input_hash": s["input_hash"], "outputs": s["outputs"]}
            for name, s in self.stages.items()
        }

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "config": self.config,
            "stages": self.stages,
        }


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _manifest_inputs_hash(config: RunConfig) -> str:
    """Hash of the manifest file plus every document/reference file it
    names, so an edited source file invalidates the ingest stage."""
    parts = [_sha256_file(config.manifest)]
    raw = yaml.safe_load(config.manifest.read_text(encoding="utf-8")) or {}
    base = config.manifest.parent
    for topic in raw.get("topics", []) or []:
        for doc in topic.get("documents", []) or []:
            if "path" in doc and (base / doc["path"]).is_file():
                parts.append(_sha256_file(base / doc["path"]))
        for ref in topic.get("reference_summaries", []) or []:
            if (base / ref).is_file():
                parts.append(_sha256_file(base / ref))
    return _sha256_obj(parts)


# -- individual stages -------------------------------------------------------

def stage_ingest(config: RunConfig, state: _StageState) -> StageResult:
    out = config.out_dir / "topics.json"
    input_hash = _sha256_obj(
        [_manifest_inputs_hash(config), config.snapshot()["filter_thresholds"]]
    )
    if state.fresh("ingest", input_hash, [out]):
        return StageResult("ingest", input_hash, state.outputs("ingest"), cached=True)
    topics = corpus_mod.ingest(config.manifest)
    if config.filter_thresholds is not None:
        topics = corpus_mod.filter_events(topics, config.filter_thresholds)
    _dump_json([topic_to_json(t) for t in topics], out)
    outputs = {"topics.json": _sha256_file(out)}
    state.record("ingest", input_hash, outputs)
    return StageResult("ingest", input_hash, outputs, cached=False)


def load_topics(out_dir: Path) -> list[Topic]:
    return [topic_from_json(d) for d in _load_json(Path(out_dir) / "topics.json")]


def stage_summarize(
    config: RunConfig, state: _StageState, provider: ParaphraseProvider | None = None
) -> StageResult:
    out = config.out_dir / "summaries.json"
    topics_file = config.out_dir / "topics.json"
    snap = config.snapshot()
    input_hash = _sha256_obj(
        [
            _sha256_file(topics_file),
            snap["budget_policy"],
            snap["provider"],
            snap["token_budget"],
            snap["summary_methods"],
        ]
    )
    if state.fresh("summarize", input_hash, [out]):
        return StageResult("summarize", input_hash, state.outputs("summarize"), cached=True)

    provider = provider or config.make_provider()
    transcripts = TranscriptStore(config.transcripts)
    topics = load_topics(config.out_dir)

    records: list[SummaryRecord] = []
    by_dataset: dict[Dataset, list[Topic]] = {}
    for t in topics:
        by_dataset.setdefault(t.dataset, []).append(t)

    budgets: dict[str, int] = {}
    for dataset, group in by_dataset.items():
        abstractives: dict[str, SummaryRecord] = {}
        if SummaryMethod.ABSTRACTIVE in config.summary_methods or (
            SummaryMethod.HYBRID in config.summary_methods
            and config.budget_policy.mode is BudgetMode.PERCENTILE75
        ):
            for t in group:
                abstractives[t.topic_id] = abstractive_summarize(
                    t,
                    provider,
                    token_budget=config.token_budget,
                    transcripts=transcripts,
                )
        if SummaryMethod.HUMAN in config.summary_methods:
            for t in group:
                for i, ref in enumerate(t.reference_summaries):
                    records.append(
                        make_summary_record(
                            t.topic_id, SummaryMethod.HUMAN, ref, variant=str(i)
                        )
                    )
        if SummaryMethod.ABSTRACTIVE in config.summary_methods:
            records.extend(abstractives[t.topic_id] for t in group)
        if SummaryMethod.HYBRID in config.summary_methods:
            budget = compute_budget(
                [len(a.text) for a in abstractives.values()],
                config.budget_policy,
                reference_lengths=[
                    len(ref) for t in group for ref in t.reference_summaries
                ],
            )
            budgets[dataset.value] = budget
            for t in group:
                extract = extract_summary(
                    corpus_mod.topic_sentences(t), budget, topic_id=t.topic_id
                )
                records.append(extract)
                records.append(
                    hybrid_from_extract(extract, provider, transcripts=transcripts)
                )

    _dump_json(
        {"budgets": budgets, "records": [summary_to_json(r) for r in records]}, out
    )
    outputs = {"summaries.json": _sha256_file(out)}
    state.record("summarize", input_hash, outputs)
    return StageResult("summarize", input_hash, outputs, cached=False)


def load_summaries(out_dir: Path) -> list[SummaryRecord]:
    payload = _load_json(Path(out_dir) / "summaries.json")
    return [summary_from_json(d) for d in payload["records"]]


def stage_attribute(
    config: RunConfig, state: _StageState, scorer: Scorer | None = None
) -> StageResult:
    out = config.out_dir / "attributions.json"
    snap = config.snapshot()
    input_hash = _sha256_obj(
        [
            _sha256_file(config.out_dir / "topics.json"),
            _sha256_file(config.out_dir / "summaries.json"),
            snap["scorer"],
            snap["attribution_methods"],
            snap["top_k"],
        ]
    )
    matrices_dir = config.out_dir / "matrices"
    if state.fresh("attribute", input_hash, [out]):
        return StageResult("attribute", input_hash, state.outputs("attribute"), cached=True)

    scorer = scorer or config.make_scorer()
    topics = {t.topic_id: t for t in load_topics(config.out_dir)}
    summaries = load_summaries(config.out_dir)

    groups: list[dict] = []
    outputs: dict[str, str] = {}
    for summary in summaries:
        if summary.method not in config.summary_methods:
            continue
        if summary.method is SummaryMethod.EXTRACTIVE:
            continue  # extracts feed hybrids; they are not annotated
        if not summary.sentences:
            continue
        topic = topics[summary.topic_id]
        pool = candidate_pool(summary, topic)
        for method in config.attribution_methods:
            matrix = score_matrix(summary, pool, scorer, method)
            matrix_file = matrices_dir / f"{summary.summary_id.replace('/', '__')}.{method.value}.matrix"
            matrix_file.parent.mkdir(parents=True, exist_ok=True)
            save_matrix(matrix, matrix_file)
            outputs[f"matrices/{matrix_file.name}"] = _sha256_file(matrix_file)
            sets = attribution_sets(matrix, config.top_k)
            groups.append(attribution_group_to_json(summary.topic_id, summary, sets))

    _dump_json(groups, out)
    outputs["attributions.json"] = _sha256_file(out)
    state.record("attribute", input_hash, outputs)
    return StageResult("attribute", input_hash, outputs, cached=False)


def load_attributions(out_dir: Path) -> list[dict]:
    return _load_json(Path(out_dir) / "attributions.json")


def stage_build_tasks(config: RunConfig, state: _StageState) -> StageResult:
    out = config.out_dir / "tasks.json"
    snap = config.snapshot()
    input_hash = _sha256_obj(
        [
            _sha256_file(config.out_dir / "topics.json"),
            _sha256_file(config.out_dir / "summaries.json"),
            _sha256_file(config.out_dir / "attributions.json"),
            snap["task_kinds"],
        ]
    )
    if state.fresh("build-tasks", input_hash, [out]):
        return StageResult("build-tasks", input_hash, state.outputs("build-tasks"), cached=True)

    topics = {t.topic_id: t for t in load_topics(config.out_dir)}
    summaries = {s.summary_id: s for s in load_summaries(config.out_dir)}
    groups = load_attributions(config.out_dir)

    tasks: list[dict] = []
    for group in groups:
        summary = summaries[group["summary_id"]]
        topic = topics[group["topic_id"]]
        index = corpus_mod.doc_sentence_index(topic)
        sets = [
            AttributionSet(
                summary_sentence=SentenceRef.parse(s["summary_sentence"]),
                method=AttributionMethod(group["attribution_method"]),
                candidates=tuple(
                    Candidate(SentenceRef.parse(c["ref"]), c["score"], c["rank"])
                    for c in s["candidates"]
                ),
                short_pool=s["short_pool"],
            )
            for s in group["sets"]
        ]
        for kind in config.task_kinds:
            for item in build_tasks(
                sets, kind, summary=summary, dataset=topic.dataset, sentence_index=index
            ):
                tasks.append(task_to_json(item))

    # Resolve group candidate texts so tasks are self-contained.
    _resolve_task_texts(tasks, topics)

    _dump_json(tasks, out)
    outputs = {"tasks.json": _sha256_file(out)}
    state.record("build-tasks", input_hash, outputs)
    return StageResult("build-tasks", input_hash, outputs, cached=False)


def _resolve_task_texts(tasks: list[dict], topics: dict[str, Topic]) -> None:
    index: dict[str, list[Sentence]] = {}
    for topic in topics.values():
        index.update(corpus_mod.doc_sentence_index(topic))
    for task in tasks:
        for block in task["payload"]["blocks"]:
            if block["text"] is None:
                ref = SentenceRef.parse(block["ref"])
                block["text"] = index[ref.doc_id][ref.index].text


def load_tasks(out_dir: Path) -> list[dict]:
    return _load_json(Path(out_dir) / "tasks.json")


# ---------------------------------------------------------------------------
# Top-level commands
# ---------------------------------------------------------------------------

def cmd_pipeline(
    config: RunConfig,
    *,
    provider: ParaphraseProvider | None = None,
    scorer: Scorer | None = None,
) -> RunManifest:
    """Run ingest, summarize, attribute, and build-tasks, skipping any stage
    whose inputs are unchanged since the last run."""
    config.validate()
    config.out_dir.mkdir(parents=True, exist_ok=True)
    state = _StageState(config.out_dir)
    results = [
        stage_ingest(config, state),
        stage_summarize(config, state, provider),
        stage_attribute(config, state, scorer),
        stage_build_tasks(config, state),
    ]
    run_id = _sha256_obj(
        [config.snapshot(), [r.input_hash for r in results]]
    )[:16]
    manifest = RunManifest(
        run_id=run_id,
        created_at=_now(),
        config=config.snapshot(),
        stages={
            r.name: {"input_hash": r.input_hash, "outputs": r.outputs, "cached": r.cached}
            for r in results
        },
    )
    _dump_json(manifest.to_json(), config.out_dir / "run_manifest.json")
    return manifest


def cmd_reduce(config: RunConfig, *, scorer: Scorer | None = None) -> list[Path]:
    """Run the neutrality-ordered reduction for every NLI matrix on disk,
    writing one trajectory CSV per summary."""
    from .attribution import load_matrix

    out_dir = config.out_dir / "reductions"
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    matrices_dir = config.out_dir / "matrices"
    for matrix_file in sorted(matrices_dir.glob("*.NLI.matrix")):
        matrix = load_matrix(matrix_file)
        trajectory = reduce_matrix(
            matrix, config.epsilon, order=config.reduction_order
        )
        out = out_dir / (matrix_file.stem + ".csv")
        lines = ["step,removed,neutrality,summac_after"]
        lines.append(f"0,,,{trajectory.initial_score!r}")
        for i, step in enumerate(trajectory.steps, start=1):
            lines.append(f"{i},{step.removed},{step.neutrality!r},{step.summac_after!r}")
        lines.append(f"# influential_count,{trajectory.influential_count}")
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(out)
    return written


def cmd_results(
    config: RunConfig,
    *,
    store_path: Path | None = None,
    condition: ConditionFilter | None = None,
) -> dict[str, Path]:
    """Tally the label store into per-condition summaries plus chart-ready
    tables (label fractions, typology bars) and copy out reduction data."""
    store_path = store_path or config.out_dir / "labels.store"
    results_dir = config.out_dir / "results"
    results_dir.mkdir(parents=True, exist_ok=True)
    if not Path(store_path).is_file():
        (results_dir / "summary.tsv").write_text(
            "# empty label store, nothing to tally\n", encoding="utf-8"
        )
        return {"summary": results_dir / "summary.tsv"}
    store = LabelStore.load(store_path)

    conditions: list[ConditionFilter] = []
    seen = set()
    keys = [
        (d.dataset, d.summary_method, d.attribution_method, d.kind)
        for d in store.conditions
    ] + [
        (r.dataset, r.summary_method, r.attribution_method, r.kind)
        for r in store.records
    ]
    for key in keys:
        if key not in seen:
            seen.add(key)
            conditions.append(ConditionFilter(*key))
    if condition is not None:
        conditions = [condition]

    summary_lines = [
        "dataset\tsummary_method\tattribution_method\tkind\trecords\ttotal"
        "\trefutation_pct\trefutation_pct_dedup"
    ]
    fraction_lines = ["dataset\tsummary_method\tattribution_method\tkind\tlabel\tfraction"]
    typology_lines = ["dataset\tsummary_method\tattribution_method\tkind\tcategory\tcount"]
    for cond in conditions:
        t = tally(store, cond)
        key = "\t".join(
            [
                cond.dataset.value if cond.dataset else "*",
                cond.summary_method.value if cond.summary_method else "*",
                cond.attribution_method.value if cond.attribution_method else "*",
                cond.kind.value if cond.kind else "*",
            ]
        )
        summary_lines.append(
            f"{key}\t{t.n_records}\t{t.total_annotations}"
            f"\t{t.refutation_pct:.4f}\t{t.refutation_pct_dedup:.4f}"
        )
        for label, frac in sorted(t.label_fractions.items(), key=lambda kv: kv[0].value):
            fraction_lines.append(f"{key}\t{label.value}\t{frac:.6f}")
        for cat, count in sorted(t.typology_counts.items()):
            typology_lines.append(f"{key}\t{cat}\t{count}")

    paths = {
        "summary": results_dir / "summary.tsv",
        "fractions": results_dir / "fractions.tsv",
        "typology": results_dir / "typology.tsv",
    }
    paths["summary"].write_text("\n".join(summary_lines) + "\n", encoding="utf-8")
    paths["fractions"].write_text("\n".join(fraction_lines) + "\n", encoding="utf-8")
    paths["typology"].write_text("\n".join(typology_lines) + "\n", encoding="utf-8")
    return paths
