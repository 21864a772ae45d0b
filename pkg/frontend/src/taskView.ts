/** Render one annotation task: the summary statement followed by payload
 * blocks tagged [CONTEXT] / [**EVAL**], matching the formatting annotators
 * were trained on. Eval blocks carry a distinguishing class and, for
 * group tasks, their rank. */

import type { Progress, Task } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderTaskView(task: Task, progress?: Progress): HTMLElement {
  const root = el("section", "task-view");
  root.dataset.taskId = task.task_id;
  root.dataset.kind = task.kind;

  const header = el("header", "task-header");
  header.appendChild(
    el("span", "task-kind", task.kind === "Single" ? "Task 1" : "Task 2"),
  );
  if (progress) {
    header.appendChild(
      el("span", "progress-counter", `${progress.labeled + 1} / ${progress.total}`),
    );
  }
  const guideline = el("a", "guideline-link", `guidelines ${task.guideline_version}`);
  guideline.setAttribute("href", `/api/guidelines/${task.kind}`);
  header.appendChild(guideline);
  root.appendChild(header);

  const statement = el("div", "summary-block");
  statement.appendChild(el("span", "block-tag", "[SUMMARY]"));
  statement.appendChild(el("span", "block-text", task.summary_statement));
  root.appendChild(statement);

  for (const block of task.payload.blocks) {
    const isEval = block.role === "eval";
    const row = el("div", isEval ? "payload-block eval" : "payload-block context");
    const tag = isEval ? "[**EVAL**]" : "[CONTEXT]";
    row.appendChild(el("span", "block-tag", tag));
    if (block.rank !== null) {
      row.appendChild(el("span", "block-rank", `#${block.rank}`));
    }
    row.appendChild(el("span", "block-text", block.text));
    row.dataset.ref = block.ref;
    root.appendChild(row);
  }

  if (task.payload.short_pool) {
    root.appendChild(
      el("div", "short-pool-note", "fewer than three candidates were available"),
    );
  }
  return root;
}
