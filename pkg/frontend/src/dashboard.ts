/** Admin dashboard: label-fraction pies per condition and typology bars.
 * Every number on screen is taken verbatim from a results-summary
 * response; this module performs no aggregation of its own. */

import type { ApiClient } from "./api.js";
import type { ResultsSummary } from "./types.js";

export interface ConditionSpec {
  title: string;
  filter: Partial<
    Record<"dataset" | "summary_method" | "attribution_method" | "kind", string>
  >;
}

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

const SVG_NS = "http://www.w3.org/2000/svg";

function pieSlices(fractions: Record<string, number>): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "-1 -1 2 2");
  svg.setAttribute("class", "label-pie");
  let angle = -Math.PI / 2;
  for (const [label, fraction] of Object.entries(fractions)) {
    const sweep = fraction * 2 * Math.PI;
    const x1 = Math.cos(angle);
    const y1 = Math.sin(angle);
    angle += sweep;
    const x2 = Math.cos(angle);
    const y2 = Math.sin(angle);
    const large = sweep > Math.PI ? 1 : 0;
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute(
      "d",
      fraction >= 1
        ? "M 1 0 A 1 1 0 1 1 -1 0 A 1 1 0 1 1 1 0 Z"
        : `M 0 0 L ${x1} ${y1} A 1 1 0 ${large} 1 ${x2} ${y2} Z`,
    );
    path.dataset.label = label;
    path.dataset.fraction = String(fraction);
    svg.appendChild(path);
  }
  return svg;
}

export function renderConditionCard(
  title: string,
  summary: ResultsSummary,
): HTMLElement {
  const card = el("article", "condition-card");
  card.appendChild(el("h3", "condition-title", title));

  if (summary.n_records === 0) {
    card.appendChild(el("p", "empty-state", "no labels collected yet"));
    return card;
  }

  card.appendChild(pieSlices(summary.label_fractions));
  const legend = el("ul", "pie-legend");
  for (const [label, fraction] of Object.entries(summary.label_fractions)) {
    const item = el("li", "pie-legend-item", `${label}: ${(fraction * 100).toFixed(1)}%`);
    item.dataset.label = label;
    legend.appendChild(item);
  }
  card.appendChild(legend);

  const refutation = el(
    "p",
    "refutation-pct",
    `refutations: ${summary.refutation_pct.toFixed(1)}% of ${summary.total_annotations}`,
  );
  refutation.dataset.value = String(summary.refutation_pct);
  card.appendChild(refutation);
  return card;
}

export async function mountDashboard(
  api: ApiClient,
  container: HTMLElement,
  conditions: ConditionSpec[],
): Promise<void> {
  container.replaceChildren();
  for (const condition of conditions) {
    const summary = await api.resultsSummary(condition.filter);
    container.appendChild(renderConditionCard(condition.title, summary));
  }
  const overall = await api.resultsSummary({});
  container.appendChild(renderTypologyBars(overall));
}

export function renderTypologyBars(summary: ResultsSummary): HTMLElement {
  const section = el("section", "typology-bars");
  section.appendChild(el("h3", undefined, "Refutation error counts (deduplicated)"));
  const entries = Object.entries(summary.typology_counts);
  if (entries.length === 0) {
    section.appendChild(el("p", "empty-state", "no refutations reviewed yet"));
    return section;
  }
  const max = Math.max(...entries.map(([, count]) => count));
  for (const [category, count] of entries) {
    const row = el("div", "bar-row");
    row.dataset.category = category;
    row.dataset.count = String(count);
    row.appendChild(el("span", "bar-label", category));
    const bar = el("div", "bar");
    bar.style.width = `${(count / max) * 100}%`;
    row.appendChild(bar);
    row.appendChild(el("span", "bar-count", String(count)));
    section.appendChild(row);
  }
  return section;
}
