/**
 * End-to-end: the UI modules against the real annotation service.
 *
 * The suite builds a pipeline run over the bundled synthetic corpus,
 * seeds the label store with the transcribed human-task-1 table, boots
 * the Python service on a local port, and then drives the same code the
 * browser runs: fetch, render, submit, dashboard.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountDashboard } from "../src/dashboard.js";
import { renderLabelForm } from "../src/labelForm.js";
import { renderReviewForm } from "../src/review.js";
import { renderTaskView } from "../src/taskView.js";
import type { Task } from "../src/types.js";

const REPO = resolve(__dirname, "..", "..");
const PORT = 8000 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let storePath: string;
let api: ApiClient;

beforeAll(async () => {
  const workdir = mkdtempSync(join(tmpdir(), "attribeval-ui-e2e-"));
  const outDir = join(workdir, "run");
  const pipeline = spawnSync(
    "python3",
    [
      "-m", "attribeval.cli",
      "--manifest", join(REPO, "fixtures/corpus/synthetic_manifest.yaml"),
      "--out", outDir,
      "pipeline",
    ],
    { cwd: REPO, encoding: "utf-8" },
  );
  if (pipeline.status !== 0) {
    throw new Error(`pipeline failed: ${pipeline.stderr}`);
  }

  storePath = join(outDir, "labels.store");
  copyFileSync(
    join(REPO, "fixtures/annotations/tac2011_human_task1.labels"),
    storePath,
  );

  server = spawn(
    "python3",
    [
      "-m", "attribeval.cli",
      "--manifest", join(REPO, "fixtures/corpus/synthetic_manifest.yaml"),
      "--out", outDir,
      "serve", "--bind", `127.0.0.1:${PORT}`, "--store", storePath,
    ],
    { cwd: REPO, stdio: ["ignore", "pipe", "pipe"] },
  );
  const stderr: string[] = [];
  server.stderr?.on("data", (chunk) => stderr.push(String(chunk)));

  api = new ApiClient(BASE);
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      await api.progress("warmup");
      break;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`service did not come up: ${stderr.join("")}`);
      }
      await new Promise((r) => setTimeout(r, 250));
    }
  }
});

afterAll(() => {
  server?.kill();
});

describe("annotator UI against the live service", () => {
  it("renders a fetched task with refute pre-set to no", async () => {
    const task = (await api.nextTask("ui-render", "Single")) as Task;
    expect(task).not.toBeNull();

    document.body.appendChild(renderTaskView(task));
    const form = renderLabelForm(task, () => {});
    document.body.appendChild(form.root);

    const refute = form.root.querySelector<HTMLInputElement>(
      'input[name="refute"]:checked',
    );
    expect(refute?.value).toBe("no");
    const submit = form.root.querySelector("button")!;
    expect(submit.disabled).toBe(true);
    document.body.replaceChildren();
  });

  it("offers label options matching each task kind served", async () => {
    const single = (await api.nextTask("ui-options", "Single")) as Task;
    const singleForm = renderLabelForm(single, () => {}).root;
    const singleOptions = Array.from(
      singleForm.querySelectorAll<HTMLInputElement>('input[name="label"]'),
    ).map((i) => i.value);
    expect(singleOptions).toEqual(["Support", "NoSupport", "Unclear"]);

    const group = (await api.nextTask("ui-options", "Group")) as Task;
    const groupForm = renderLabelForm(group, () => {}).root;
    const groupOptions = Array.from(
      groupForm.querySelectorAll<HTMLInputElement>('input[name="label"]'),
    ).map((i) => i.value);
    expect(groupOptions).toEqual(["FullSupport", "PartialSupport", "NoSupport", "Unclear"]);
  });

  it("persists a submitted label into the store file", async () => {
    const task = (await api.nextTask("ui-submit", "Single")) as Task;
    const response = await api.submitLabel({
      task_id: task.task_id,
      annotator_id: "ui-submit",
      label: task.label_options[0],
      refute: false,
    });
    expect(response.record_id).toBeGreaterThan(0);

    const store = readFileSync(storePath, "utf-8");
    const line = store
      .split("\n")
      .find((l) => l.includes(task.task_id) && l.includes("ui-submit"));
    expect(line).toBeDefined();
    expect(line).toContain("\tno\t"); // refute persisted as "no"

    const progress = await api.progress("ui-submit", "Single");
    expect(progress.labeled).toBe(1);
  });

  it("dashboard shows the seeded table's 10.0% refutation rate", async () => {
    const container = document.createElement("div");
    document.body.appendChild(container);
    await mountDashboard(api, container, [
      {
        title: "Task 1 / Embedding",
        filter: { dataset: "TAC2011", attribution_method: "Embedding", kind: "Single" },
      },
    ]);
    const refutation = container.querySelector<HTMLElement>(".refutation-pct")!;
    expect(refutation.textContent).toContain("10.0%");
    expect(Number(refutation.dataset.value)).toBeCloseTo(10.0, 5);
    document.body.replaceChildren();
  });

  it("review flow: typology lands in the dashboard bars, duplicates collapse, NE drops out", async () => {
    const allBars = async () => {
      const summary = await api.resultsSummary({ dataset: "Custom" });
      return summary.typology_counts;
    };

    // two annotators flag the same task as a refutation
    const task = (await api.nextTask("rev-1", "Group")) as Task;
    const first = await api.submitLabel({
      task_id: task.task_id,
      annotator_id: "rev-1",
      label: "FullSupport",
      refute: true,
    });
    await api.submitLabel({
      task_id: task.task_id,
      annotator_id: "rev-2",
      label: "PartialSupport",
      refute: true,
    });

    // reviewer assigns a typology to the first record (amendment)
    const review = renderReviewForm(task, () => {});
    review.root.querySelector<HTMLInputElement>(
      'input[name="typology_primary"][value="Semantic"]',
    )!.checked = true;
    review.root.querySelector<HTMLInputElement>(
      'input[name="typology_secondary"][value="PredE"]',
    )!.checked = true;
    const firstAmend = await api.submitLabel(review.read("rev-1", "FullSupport"));

    let bars = await allBars();
    expect(bars["Semantic"]).toBe(1);

    // second record gets the same typology without a duplicate link: two bars
    const review2 = renderReviewForm(task, () => {});
    review2.root.querySelector<HTMLInputElement>(
      'input[name="typology_primary"][value="Semantic"]',
    )!.checked = true;
    review2.root.querySelector<HTMLInputElement>(
      'input[name="typology_secondary"][value="PredE"]',
    )!.checked = true;
    await api.submitLabel(review2.read("rev-2", "PartialSupport"));
    bars = await allBars();
    expect(bars["Semantic"]).toBe(2);

    // linking them as duplicates collapses the bar back to one
    const review3 = renderReviewForm(task, () => {});
    review3.root.querySelector<HTMLInputElement>(
      'input[name="typology_primary"][value="Semantic"]',
    )!.checked = true;
    review3.root.querySelector<HTMLInputElement>(
      'input[name="typology_secondary"][value="PredE"]',
    )!.checked = true;
    review3.root.querySelector<HTMLInputElement>('input[name="duplicate_of"]')!.value =
      String(firstAmend.record_id);
    await api.submitLabel(review3.read("rev-2", "PartialSupport"));
    bars = await allBars();
    expect(bars["Semantic"]).toBe(1);

    // an NE review outcome drops a refutation from the error bars entirely
    const other = (await api.nextTask("rev-3", "Group")) as Task;
    await api.submitLabel({
      task_id: other.task_id,
      annotator_id: "rev-3",
      label: "FullSupport",
      refute: true,
    });
    const reviewNe = renderReviewForm(other, () => {});
    reviewNe.root.querySelector<HTMLInputElement>(
      'input[name="typology_primary"][value="Additional"]',
    )!.checked = true;
    reviewNe.root.querySelector<HTMLInputElement>(
      'input[name="typology_secondary"][value="NE"]',
    )!.checked = true;
    await api.submitLabel(reviewNe.read("rev-3", "FullSupport"));
    bars = await allBars();
    expect(bars["Additional"] ?? 0).toBe(0);
    expect(bars["Semantic"]).toBe(1);
  });

  it("rejects a dangling duplicate link server-side", async () => {
    const task = (await api.nextTask("rev-4", "Group")) as Task;
    await api.submitLabel({
      task_id: task.task_id,
      annotator_id: "rev-4",
      label: "FullSupport",
      refute: true,
    });
    const review = renderReviewForm(task, () => {});
    review.root.querySelector<HTMLInputElement>(
      'input[name="typology_primary"][value="Semantic"]',
    )!.checked = true;
    review.root.querySelector<HTMLInputElement>(
      'input[name="typology_secondary"][value="PredE"]',
    )!.checked = true;
    review.root.querySelector<HTMLInputElement>('input[name="duplicate_of"]')!.value =
      "999999";
    await expect(api.submitLabel(review.read("rev-4", "FullSupport"))).rejects.toThrow(
      /does not exist/,
    );
  });

  it("serves the guideline text the annotator link points at", async () => {
    const body = await api.guidelines("Group");
    expect(body.version).toBe("v1");
    const flat = body.text.toLowerCase().replace(/\s+/g, " ");
    expect(flat).toContain("three ranked candidate sentences");
  });
});
