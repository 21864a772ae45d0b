/** Thin typed client over the annotation API. Every aggregate shown in
 * the UI comes from these calls; nothing is recomputed client-side. */

import type {
  LabelSubmission,
  Progress,
  ResultsSummary,
  SubmitResponse,
  Task,
  TaskKind,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly authToken?: string,
  ) {}

  private headers(mutating: boolean): Record<string, string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (mutating && this.authToken) {
      headers["Authorization"] = `Bearer ${this.authToken}`;
    }
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(detail, response.status);
    }
    return (await response.json()) as T;
  }

  async nextTask(annotator: string, kind?: TaskKind): Promise<Task | null> {
    const params = new URLSearchParams({ annotator });
    if (kind) params.set("kind", kind);
    const body = await this.request<{ task: Task | null }>(
      `/api/tasks/next?${params}`,
    );
    return body.task;
  }

  async getTask(taskId: string): Promise<Task> {
    return this.request<Task>(`/api/tasks/${taskId}`);
  }

  async submitLabel(submission: LabelSubmission): Promise<SubmitResponse> {
    return this.request<SubmitResponse>("/api/labels", {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify(submission),
    });
  }

  async progress(annotator: string, kind?: TaskKind): Promise<Progress> {
    const params = new URLSearchParams({ annotator });
    if (kind) params.set("kind", kind);
    return this.request<Progress>(`/api/progress?${params}`);
  }

  async resultsSummary(
    filter: Partial<Record<"dataset" | "summary_method" | "attribution_method" | "kind", string>>,
  ): Promise<ResultsSummary> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filter)) {
      if (value) params.set(key, value);
    }
    return this.request<ResultsSummary>(`/api/results/summary?${params}`);
  }

  async guidelines(kind: TaskKind): Promise<{ kind: string; version: string; text: string }> {
    return this.request(`/api/guidelines/${kind}`);
  }
}
