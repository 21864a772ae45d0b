#!/usr/bin/env python3
"""Run the whole pipeline on the synthetic corpus, poke the annotation
service in-process, submit a few labels, and print the live results."""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from attribeval.pipeline import RunConfig, cmd_pipeline, load_tasks
from attribeval.providers import IdentityProvider
from attribeval.service import create_app_from_run

ROOT = Path(__file__).resolve().parent.parent

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "run"
    cfg = RunConfig(manifest=ROOT / "fixtures/corpus/synthetic_manifest.yaml", out_dir=out)
    manifest = cmd_pipeline(cfg, provider=IdentityProvider())
    print(f"run {manifest.run_id}")
    for name, stage in manifest.stages.items():
        print(f"  {name:12s} {'cached' if stage['cached'] else 'computed'}")

    tasks = load_tasks(out)
    print(f"\n{len(tasks)} annotation tasks built")

    app = create_app_from_run(out)
    with TestClient(app) as client:
        for _ in range(3):
            task = client.get(
                "/api/tasks/next", params={"annotator": "demo"}
            ).json()["task"]
            print(f"\n[{task['kind']}] {task['summary_statement'][:70]}")
            for block in task["payload"]["blocks"]:
                tag = "[**EVAL**]" if block["role"] == "eval" else "[CONTEXT] "
                print(f"  {tag} {block['text'][:66]}")
            client.post("/api/labels", json={
                "task_id": task["task_id"],
                "annotator_id": "demo",
                "label": task["label_options"][0],
            })

        progress = client.get("/api/progress", params={"annotator": "demo"}).json()
        print(f"\nprogress: {progress}")
        results = client.get("/api/results/summary").json()
        print(f"labels so far: {results['label_counts']}")

print("\n(the real deployment is `attribeval --manifest ... --out ... pipeline`")
print(" followed by `attribeval ... serve --bind 127.0.0.1:8008`)")
