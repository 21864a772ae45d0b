/** Refutation review mode: assign the error typology (primary categories
 * and secondary codes) to refute=yes records and link duplicates across
 * annotators. Persists through the same labels endpoint with amend. */

import type { LabelSubmission, Task } from "./types.js";
import { PRIMARY_CATEGORIES, SECONDARY_CODES } from "./types.js";

export interface ReviewFormState {
  root: HTMLFormElement;
  read(annotator: string, label: string): LabelSubmission;
}

function checkboxGroup(title: string, name: string, values: readonly string[]): HTMLFieldSetElement {
  const group = document.createElement("fieldset");
  group.className = `${name}-group`;
  const legend = document.createElement("legend");
  legend.textContent = title;
  group.appendChild(legend);
  for (const value of values) {
    const wrap = document.createElement("label");
    wrap.className = "choice";
    const input = document.createElement("input");
    input.type = "checkbox";
    input.name = name;
    input.value = value;
    wrap.appendChild(input);
    wrap.appendChild(document.createTextNode(" " + value));
    group.appendChild(wrap);
  }
  return group;
}

export function renderReviewForm(
  task: Task,
  onSubmit: (submission: LabelSubmission) => void,
): ReviewFormState {
  const form = document.createElement("form");
  form.className = "review-form";

  form.appendChild(
    checkboxGroup("Primary categories", "typology_primary", PRIMARY_CATEGORIES),
  );
  form.appendChild(
    checkboxGroup(
      "Secondary codes (NE = not an error; drops the record from error bars)",
      "typology_secondary",
      SECONDARY_CODES,
    ),
  );

  const dup = document.createElement("input");
  dup.type = "number";
  dup.name = "duplicate_of";
  dup.placeholder = "duplicate of record id";
  form.appendChild(dup);

  const state: ReviewFormState = {
    root: form,
    read(annotator: string, label: string) {
      const picked = (name: string) =>
        Array.from(
          form.querySelectorAll<HTMLInputElement>(`input[name="${name}"]:checked`),
        ).map((input) => input.value);
      return {
        task_id: task.task_id,
        annotator_id: annotator,
        label,
        refute: true, // review mode only exists for refutations
        typology_primary: picked("typology_primary"),
        typology_secondary: picked("typology_secondary"),
        duplicate_of: dup.value ? Number(dup.value) : null,
        amend: true,
      };
    },
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    onSubmit(state.read("", ""));
  });
  return state;
}
