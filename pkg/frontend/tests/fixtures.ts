import type { ResultsSummary, Task } from "../src/types.js";

export function singleTask(overrides: Partial<Task> = {}): Task {
  return {
    task_id: "t-single-1",
    kind: "Single",
    dataset: "TAC2011",
    summary_method: "Human",
    attribution_method: "Embedding",
    summary_statement: "The storm flooded the harbor district.",
    guideline_version: "v1",
    label_options: ["Support", "NoSupport", "Unclear"],
    refute_default: "no",
    payload: {
      blocks: [
        { role: "context", text: "Sirens sounded before dawn.", ref: "d:0", rank: null },
        { role: "eval", text: "Water poured into the harbor district.", ref: "d:1", rank: null },
        { role: "context", text: "Crews arrived an hour later.", ref: "d:2", rank: null },
      ],
      short_pool: false,
    },
    ...overrides,
  };
}

export function groupTask(overrides: Partial<Task> = {}): Task {
  return {
    ...singleTask(),
    task_id: "t-group-1",
    kind: "Group",
    label_options: ["FullSupport", "PartialSupport", "NoSupport", "Unclear"],
    payload: {
      blocks: [
        { role: "eval", text: "Water poured into the harbor district.", ref: "d:1", rank: 1 },
        { role: "eval", text: "The fish market stood under water.", ref: "d:3", rank: 2 },
        { role: "eval", text: "Sirens sounded before dawn.", ref: "d:0", rank: 3 },
      ],
      short_pool: false,
    },
    ...overrides,
  };
}

export function resultsSummary(overrides: Partial<ResultsSummary> = {}): ResultsSummary {
  return {
    condition: { dataset: "TAC2011", summary_method: null, attribution_method: "Embedding", kind: "Single" },
    n_records: 9,
    total_annotations: 90,
    label_counts: { Support: 5, NoSupport: 2, Unclear: 2 },
    label_fractions: { Support: 5 / 9, NoSupport: 2 / 9, Unclear: 2 / 9 },
    refutation_pct: 10.0,
    refutation_pct_dedup: 7.78,
    per_annotator: { "8d4ff": { total: 6, unique: 4 } },
    typology_counts: { Semantic: 2, Content: 6 },
    method_split: {},
    ...overrides,
  };
}
