/** The label form: support options come from the task (never hardcoded
 * per page), nothing is pre-selected for the label question, the refute
 * answer is pre-set to "no", and submit stays disabled until a label is
 * chosen. */

import type { LabelSubmission, Task } from "./types.js";

export interface LabelFormState {
  root: HTMLFormElement;
  /** Reads the current form into a submission; null until a label is chosen. */
  read(annotator: string): LabelSubmission | null;
}

function radio(name: string, value: string, checked: boolean): HTMLLabelElement {
  const wrap = document.createElement("label");
  wrap.className = "choice";
  const input = document.createElement("input");
  input.type = "radio";
  input.name = name;
  input.value = value;
  input.checked = checked;
  wrap.appendChild(input);
  wrap.appendChild(document.createTextNode(" " + value));
  return wrap;
}

export function renderLabelForm(
  task: Task,
  onSubmit: (submission: LabelSubmission) => void,
): LabelFormState {
  const form = document.createElement("form");
  form.className = "label-form";

  const labelGroup = document.createElement("fieldset");
  labelGroup.className = "label-options";
  const legend = document.createElement("legend");
  legend.textContent =
    task.kind === "Single"
      ? "Does the marked sentence support the statement?"
      : "How well do the sentences, as a group, support the statement?";
  labelGroup.appendChild(legend);
  for (const option of task.label_options) {
    labelGroup.appendChild(radio("label", option, false)); // no pre-selection
  }
  form.appendChild(labelGroup);

  const refuteGroup = document.createElement("fieldset");
  refuteGroup.className = "refute-options";
  const refuteLegend = document.createElement("legend");
  refuteLegend.textContent =
    "Does the attribution contain information that refutes the statement?";
  refuteGroup.appendChild(refuteLegend);
  refuteGroup.appendChild(radio("refute", "yes", false));
  refuteGroup.appendChild(radio("refute", "no", task.refute_default === "no"));
  form.appendChild(refuteGroup);

  const comment = document.createElement("textarea");
  comment.name = "comment";
  comment.placeholder = "optional comment";
  form.appendChild(comment);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Submit";
  submit.disabled = true; // until a label is chosen
  form.appendChild(submit);

  form.addEventListener("change", () => {
    submit.disabled = readLabel(form) === null;
  });

  const state: LabelFormState = {
    root: form,
    read(annotator: string) {
      const label = readLabel(form);
      if (label === null) return null;
      return {
        task_id: task.task_id,
        annotator_id: annotator,
        label,
        refute: readRefute(form),
        comment: comment.value || undefined,
      };
    },
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const submission = state.read("");
    if (submission === null) return; // guarded by the disabled button too
    onSubmit(submission);
  });
  return state;
}

function readLabel(form: HTMLFormElement): string | null {
  const chosen = form.querySelector<HTMLInputElement>('input[name="label"]:checked');
  return chosen ? chosen.value : null;
}

function readRefute(form: HTMLFormElement): boolean {
  const chosen = form.querySelector<HTMLInputElement>('input[name="refute"]:checked');
  return chosen !== null && chosen.value === "yes";
}
