"""HTTP annotation service: serves tasks in stable order, validates and
appends labels (append-only store, single writer), and exposes live result
summaries. Mutating endpoints require the bearer token when one is
configured.
"""

from __future__ import annotations

import datetime as _dt
import threading
from importlib import resources
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Query, Request
from pydantic import BaseModel, Field

from .annotation import (
    ConditionDecl,
    ConditionFilter,
    Label,
    LabelRecord,
    LabelStore,
    LabelValidationError,
    STORE_HEADER,
    TaskKind,
    Typology,
    _record_line,
    record_label,
    tally,
)
from .attribution import AttributionMethod, SentenceRef
from .corpus import Dataset, doc_sentence_index
from .pipeline import load_tasks, load_topics
from .summarize import SummaryMethod


class LabelSubmission(BaseModel):
    task_id: str
    annotator_id: str
    label: str
    refute: bool = False  # pre-answered "no" unless the annotator flips it
    comment: str = ""
    typology_primary: list[str] = Field(default_factory=list)
    typology_secondary: list[str] = Field(default_factory=list)
    duplicate_of: int | None = None
    amend: bool = False


def _guideline_text(kind: TaskKind) -> str:
    name = "guidelines_single.md" if kind is TaskKind.SINGLE else "guidelines_group.md"
    return resources.files("attribeval.data").joinpath(name).read_text(encoding="utf-8")


def check_referential_integrity(tasks: list[dict], topics) -> None:
    """Every payload block must resolve to an existing document sentence."""
    index = {}
    for topic in topics:
        index.update(doc_sentence_index(topic))
    for task in tasks:
        for block in task["payload"]["blocks"]:
            ref = SentenceRef.parse(block["ref"])
            sents = index.get(ref.doc_id)
            if sents is None or not (0 <= ref.index < len(sents)):
                raise ValueError(
                    f"task {task['task_id']} references missing sentence {ref}"
                )


def create_app(
    tasks: list[dict],
    store: LabelStore,
    *,
    store_path: str | Path | None = None,
    topics=None,
    auth_token: str | None = None,
) -> FastAPI:
    if topics is not None:
        check_referential_integrity(tasks, topics)

    app = FastAPI(title="attribeval annotation service")
    by_id = {t["task_id"]: t for t in tasks}
    if len(by_id) != len(tasks):
        raise ValueError("duplicate task ids in task list")
    write_lock = threading.Lock()
    store_path = Path(store_path) if store_path is not None else None
    if store_path is not None and not store_path.is_file():
        store_path.parent.mkdir(parents=True, exist_ok=True)
        store_path.write_text(STORE_HEADER + "\n", encoding="utf-8")

    def require_auth(request: Request) -> None:
        if auth_token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {auth_token}":
            raise HTTPException(status_code=401, detail="missing or bad bearer token")

    @app.get("/api/tasks/next")
    def next_task(annotator: str = Query(...), kind: str | None = Query(default=None)):
        want = TaskKind(kind) if kind else None
        for task in tasks:
            if want is not None and task["kind"] != want.value:
                continue
            if not store.has_label(task["task_id"], annotator):
                return {"task": task}
        return {"task": None}

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str):
        task = by_id.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id}")
        return task

    @app.post("/api/labels", dependencies=[Depends(require_auth)])
    def post_label(body: LabelSubmission):
        task = by_id.get(body.task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"unknown task {body.task_id}")
        try:
            typology = None
            if body.typology_primary or body.typology_secondary:
                typology = Typology.from_fields(
                    " ".join(body.typology_primary), " ".join(body.typology_secondary)
                )
            with write_lock:
                rec = LabelRecord(
                    record_id=store.next_record_id(),
                    task_id=body.task_id,
                    dataset=Dataset(task["dataset"]),
                    summary_method=SummaryMethod(task["summary_method"]),
                    attribution_method=AttributionMethod(task["attribution_method"]),
                    kind=TaskKind(task["kind"]),
                    annotator_id=body.annotator_id,
                    label=Label(body.label),
                    refute=body.refute,
                    typology=typology,
                    duplicate_of=body.duplicate_of,
                    comment=body.comment,
                    submitted_at=_dt.datetime.now(_dt.timezone.utc).strftime(
                        "%Y-%m-%dT%H:%M:%SZ"
                    ),
                )
                accepted = record_label(
                    store, rec, known_tasks=set(by_id), amend=body.amend
                )
                if store_path is not None:
                    with store_path.open("a", encoding="utf-8") as fh:
                        fh.write(_record_line(rec) + "\n")
        except LabelValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "record_id": accepted.record.record_id,
            "refute": accepted.record.refute,
            "warning": accepted.warning,
        }

    @app.get("/api/progress")
    def progress(annotator: str = Query(...), kind: str | None = Query(default=None)):
        want = TaskKind(kind) if kind else None
        relevant = [
            t for t in tasks if want is None or t["kind"] == want.value
        ]
        labeled = sum(
            1 for t in relevant if store.has_label(t["task_id"], annotator)
        )
        return {"total": len(relevant), "labeled": labeled, "remaining": len(relevant) - labeled}

    @app.get("/api/results/summary")
    def results_summary(
        dataset: str | None = None,
        summary_method: str | None = None,
        attribution_method: str | None = None,
        kind: str | None = None,
        method: str | None = None,
    ):
        # `method` is accepted as shorthand: a summary method (Human,
        # Abstractive, Hybrid) or an attribution method (NLI, Embedding).
        if method and not summary_method and method in set(SummaryMethod):
            summary_method = method
        elif method and not attribution_method and method in set(AttributionMethod):
            attribution_method = method
        try:
            cond = ConditionFilter(
                dataset=Dataset(dataset) if dataset else None,
                summary_method=SummaryMethod(summary_method) if summary_method else None,
                attribution_method=(
                    AttributionMethod(attribution_method) if attribution_method else None
                ),
                kind=TaskKind(kind) if kind else None,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        t = tally(store, cond)
        return {
            "condition": {
                "dataset": dataset,
                "summary_method": summary_method,
                "attribution_method": attribution_method,
                "kind": kind,
            },
            "n_records": t.n_records,
            "total_annotations": t.total_annotations,
            "label_counts": {k.value: v for k, v in t.label_counts.items()},
            "label_fractions": {k.value: v for k, v in t.label_fractions.items()},
            "refutation_pct": t.refutation_pct,
            "refutation_pct_dedup": t.refutation_pct_dedup,
            "per_annotator": {
                a: {"total": x.total, "unique": x.unique}
                for a, x in t.per_annotator.items()
            },
            "typology_counts": t.typology_counts,
            "method_split": {m.value: c for m, c in t.method_split.items()},
        }

    @app.get("/api/guidelines/{kind}")
    def guidelines(kind: str):
        try:
            want = TaskKind(kind)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=f"unknown task kind {kind}") from exc
        return {"kind": want.value, "version": "v1", "text": _guideline_text(want)}

    return app


def create_app_from_run(
    out_dir: str | Path,
    *,
    store_path: str | Path | None = None,
    auth_token: str | None = None,
) -> FastAPI:
    """Service over a finished pipeline run directory."""
    out_dir = Path(out_dir)
    tasks = load_tasks(out_dir)
    topics = load_topics(out_dir)
    store_path = Path(store_path) if store_path else out_dir / "labels.store"
    store = LabelStore.load(store_path) if store_path.is_file() else LabelStore()
    return create_app(
        tasks, store, store_path=store_path, topics=topics, auth_token=auth_token
    )
