"""Command-line entry point.

Subcommands mirror the pipeline stages plus the service and reporting:
ingest, summarize, attribute, build-tasks, pipeline, reduce, metrics,
serve, results, import-fixture.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .annotation import ConditionFilter, LabelStore, TaskKind, import_fixture
from .attribution import AttributionMethod
from .corpus import Dataset
from .pipeline import (
    RunConfig,
    _StageState,
    cmd_pipeline,
    cmd_reduce,
    cmd_results,
    stage_attribute,
    stage_build_tasks,
    stage_ingest,
    stage_summarize,
)
from .summarize import SummaryMethod


def _build_config(args) -> RunConfig:
    overrides = {
        "manifest": args.manifest,
        "out_dir": args.out,
        "budget_policy": getattr(args, "budget_policy", None),
        "fixed_budget": getattr(args, "fixed_budget", None),
        "provider": getattr(args, "provider", None),
        "provider_endpoint": getattr(args, "provider_endpoint", None),
        "transcripts": getattr(args, "transcripts", None),
        "scorer": getattr(args, "scorer", None),
        "reduction_order": getattr(args, "reduction_order", None),
        "bind": getattr(args, "bind", None),
        "auth_token": getattr(args, "auth_token", None),
    }
    if args.config:
        return RunConfig.from_file(args.config, **overrides)
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    if "manifest" not in cleaned:
        raise SystemExit("either --config or --manifest is required")
    cleaned.setdefault("out_dir", "out")
    return RunConfig.from_dict(cleaned)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="attribeval")
    parser.add_argument("--config", type=Path, help="run configuration YAML")
    parser.add_argument("--out", type=Path, help="run output directory")
    parser.add_argument("--manifest", type=Path, help="dataset manifest path")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", help="load and filter the dataset manifest")

    p = sub.add_parser("summarize", help="generate human/abstractive/hybrid summaries")
    p.add_argument("--budget-policy", dest="budget_policy",
                   choices=["percentile75", "median-reference", "fixed"])
    p.add_argument("--fixed-budget", dest="fixed_budget", type=int)
    p.add_argument("--provider", choices=["mock-identity", "replay", "http"])
    p.add_argument("--provider-endpoint", dest="provider_endpoint")
    p.add_argument("--transcripts", type=Path)

    p = sub.add_parser("attribute", help="score summary/source sentence pairs")
    p.add_argument("--scorer", help="'builtin' or a scorer endpoint URL")

    sub.add_parser("build-tasks", help="emit annotation task items")

    p = sub.add_parser("pipeline", help="ingest, summarize, attribute, build-tasks")
    p.add_argument("--budget-policy", dest="budget_policy",
                   choices=["percentile75", "median-reference", "fixed"])
    p.add_argument("--fixed-budget", dest="fixed_budget", type=int)
    p.add_argument("--provider", choices=["mock-identity", "replay", "http"])
    p.add_argument("--provider-endpoint", dest="provider_endpoint")
    p.add_argument("--transcripts", type=Path)
    p.add_argument("--scorer")

    p = sub.add_parser("reduce", help="neutrality-ordered reduction trajectories")
    p.add_argument("--reduction-order", dest="reduction_order",
                   choices=["adaptive", "frozen"])

    p = sub.add_parser("metrics", help="candidate-vs-references agreement report")
    p.add_argument("--candidate", type=Path, required=True)
    p.add_argument("--refs", type=Path, required=True, help="directory of reference files")
    p.add_argument("--aggregation", choices=["max", "mean"], default="max")

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--bind")
    p.add_argument("--auth-token", dest="auth_token")
    p.add_argument("--store", type=Path, help="label store path")

    p = sub.add_parser("results", help="tally the label store into report files")
    p.add_argument("--store", type=Path)
    p.add_argument("--dataset", choices=[d.value for d in Dataset])
    p.add_argument("--summary-method", choices=[m.value for m in SummaryMethod])
    p.add_argument("--attribution-method", choices=[m.value for m in AttributionMethod])
    p.add_argument("--kind", choices=[k.value for k in TaskKind])

    p = sub.add_parser("import-fixture", help="load a label fixture into a store file")
    p.add_argument("fixture", type=Path)
    p.add_argument("--store", type=Path, required=True)

    args = parser.parse_args(argv)

    if args.command == "metrics":
        return _cmd_metrics(args)
    if args.command == "import-fixture":
        store = import_fixture(args.fixture)
        store.dump(args.store)
        print(f"imported {len(store)} records -> {args.store}")
        return 0

    config = _build_config(args)

    if args.command == "ingest":
        config.validate()
        config.out_dir.mkdir(parents=True, exist_ok=True)
        result = stage_ingest(config, _StageState(config.out_dir))
        print(f"ingest: {'cached' if result.cached else 'done'} -> {config.out_dir / 'topics.json'}")
        return 0
    if args.command == "summarize":
        config.validate()
        state = _StageState(config.out_dir)
        stage_ingest(config, state)
        result = stage_summarize(config, state)
        print(f"summarize: {'cached' if result.cached else 'done'} -> {config.out_dir / 'summaries.json'}")
        return 0
    if args.command == "attribute":
        config.validate()
        state = _StageState(config.out_dir)
        result = stage_attribute(config, state)
        print(f"attribute: {'cached' if result.cached else 'done'} -> {config.out_dir / 'attributions.json'}")
        return 0
    if args.command == "build-tasks":
        config.validate()
        result = stage_build_tasks(config, _StageState(config.out_dir))
        print(f"build-tasks: {'cached' if result.cached else 'done'} -> {config.out_dir / 'tasks.json'}")
        return 0
    if args.command == "pipeline":
        manifest = cmd_pipeline(config)
        for name, stage in manifest.stages.items():
            print(f"{name}: {'cached' if stage['cached'] else 'computed'}")
        print(f"run {manifest.run_id} -> {config.out_dir / 'run_manifest.json'}")
        return 0
    if args.command == "reduce":
        written = cmd_reduce(config)
        for path in written:
            print(f"wrote {path}")
        return 0
    if args.command == "serve":
        return _cmd_serve(config, args)
    if args.command == "results":
        cond = ConditionFilter(
            dataset=Dataset(args.dataset) if args.dataset else None,
            summary_method=SummaryMethod(args.summary_method) if args.summary_method else None,
            attribution_method=(
                AttributionMethod(args.attribution_method) if args.attribution_method else None
            ),
            kind=TaskKind(args.kind) if args.kind else None,
        )
        if not any([args.dataset, args.summary_method, args.attribution_method, args.kind]):
            cond = None
        paths = cmd_results(config, store_path=args.store, condition=cond)
        for name, path in paths.items():
            print(f"{name}: {path}")
        return 0
    parser.error(f"unhandled command {args.command}")
    return 2


def _cmd_metrics(args) -> int:
    from .metrics import evaluate

    candidate = args.candidate.read_text(encoding="utf-8")
    refs = [
        p.read_text(encoding="utf-8")
        for p in sorted(args.refs.iterdir())
        if p.is_file()
    ]
    if not refs:
        raise SystemExit(f"no reference files in {args.refs}")
    report = evaluate(candidate, refs, aggregation=args.aggregation)
    print(f"rouge2_precision: {report.rouge2.precision:.6f}")
    print(f"rouge2_recall: {report.rouge2.recall:.6f}")
    print(f"rouge2_f1: {report.rouge2.f1:.6f}")
    print(f"smart2: {report.smart2:.6f}")
    print(f"aggregation: {report.aggregation}")
    print(f"references: {len(refs)}")
    return 0


def _cmd_serve(config: RunConfig, args) -> int:
    import uvicorn

    from .service import create_app_from_run

    app = create_app_from_run(
        config.out_dir,
        store_path=getattr(args, "store", None),
        auth_token=config.auth_token,
    )
    host, _, port = config.bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
