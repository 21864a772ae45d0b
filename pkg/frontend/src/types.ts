/** Wire types mirroring the annotation API's JSON. */

export type TaskKind = "Single" | "Group";

export interface PayloadBlock {
  role: "context" | "eval";
  text: string;
  ref: string;
  rank: number | null;
}

export interface Task {
  task_id: string;
  kind: TaskKind;
  dataset: string;
  summary_method: string;
  attribution_method: string;
  summary_statement: string;
  guideline_version: string;
  label_options: string[];
  refute_default: "no";
  payload: {
    blocks: PayloadBlock[];
    short_pool: boolean;
  };
}

export interface LabelSubmission {
  task_id: string;
  annotator_id: string;
  label: string;
  refute: boolean;
  comment?: string;
  typology_primary?: string[];
  typology_secondary?: string[];
  duplicate_of?: number | null;
  amend?: boolean;
}

export interface SubmitResponse {
  record_id: number;
  refute: boolean;
  warning: string | null;
}

export interface Progress {
  total: number;
  labeled: number;
  remaining: number;
}

export interface ResultsSummary {
  condition: Record<string, string | null>;
  n_records: number;
  total_annotations: number;
  label_counts: Record<string, number>;
  label_fractions: Record<string, number>;
  refutation_pct: number;
  refutation_pct_dedup: number;
  per_annotator: Record<string, { total: number; unique: number }>;
  typology_counts: Record<string, number>;
  method_split: Record<string, number>;
}

export const PRIMARY_CATEGORIES = ["Semantic", "Content", "Additional"] as const;
export const SECONDARY_CODES = [
  "PredE",
  "EntE",
  "CircE",
  "OutE",
  "GramE",
  "OthE",
  "NE",
] as const;
