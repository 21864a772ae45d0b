/** The annotator flow: fetch the next task, render it with its form,
 * submit, advance. Survives a page refresh (state lives server-side) and
 * guards against double submission; network failures show a retry banner
 * instead of dropping work. */

import { ApiClient, ApiError } from "./api.js";
import { renderLabelForm } from "./labelForm.js";
import { renderTaskView } from "./taskView.js";
import type { LabelSubmission, Task, TaskKind } from "./types.js";

export interface FlowOptions {
  annotator: string;
  kind?: TaskKind;
  container: HTMLElement;
}

export class AnnotatorFlow {
  private submitting = false;

  constructor(
    private readonly api: ApiClient,
    private readonly options: FlowOptions,
  ) {}

  async start(): Promise<void> {
    await this.showNext();
  }

  private clear(): void {
    this.options.container.replaceChildren();
  }

  private banner(text: string, retry?: () => void): void {
    const note = document.createElement("div");
    note.className = "banner";
    note.textContent = text;
    if (retry) {
      const button = document.createElement("button");
      button.textContent = "Retry";
      button.addEventListener("click", () => {
        note.remove();
        retry();
      });
      note.appendChild(button);
    }
    this.options.container.prepend(note);
  }

  private async showNext(): Promise<void> {
    this.clear();
    let task: Task | null;
    try {
      task = await this.api.nextTask(this.options.annotator, this.options.kind);
    } catch (error) {
      this.banner(`could not fetch the next task: ${error}`, () => void this.showNext());
      return;
    }
    if (task === null) {
      const done = document.createElement("p");
      done.className = "all-done";
      done.textContent = "All tasks are labeled. Thank you!";
      this.options.container.appendChild(done);
      return;
    }
    const progress = await this.api
      .progress(this.options.annotator, this.options.kind)
      .catch(() => undefined);
    this.options.container.appendChild(renderTaskView(task, progress));
    const form = renderLabelForm(task, (submission) => void this.submit(submission));
    this.options.container.appendChild(form.root);
  }

  private async submit(partial: LabelSubmission): Promise<void> {
    if (this.submitting) return; // double-submit guard (client side)
    this.submitting = true;
    const submission: LabelSubmission = {
      ...partial,
      annotator_id: this.options.annotator,
    };
    try {
      await this.api.submitLabel(submission);
      await this.showNext();
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        // the server-side guard caught a duplicate; just move along
        await this.showNext();
      } else {
        this.banner(`submission failed, nothing was lost: ${error}`, () =>
          void this.submit(partial),
        );
      }
    } finally {
      this.submitting = false;
    }
  }
}

export function mountAnnotatorApp(
  baseUrl: string,
  options: FlowOptions,
  authToken?: string,
): AnnotatorFlow {
  const flow = new AnnotatorFlow(new ApiClient(baseUrl, authToken), options);
  void flow.start();
  return flow;
}
