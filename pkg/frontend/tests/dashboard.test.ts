import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountDashboard, renderConditionCard, renderTypologyBars } from "../src/dashboard.js";
import { resultsSummary } from "./fixtures.js";

afterEach(() => {
  vi.restoreAllMocks();
});

describe("dashboard", () => {
  it("shows exactly the fractions and percentage the server sent", () => {
    const card = renderConditionCard("Task 1 / Embedding", resultsSummary());
    const refutation = card.querySelector<HTMLElement>(".refutation-pct")!;
    expect(refutation.dataset.value).toBe("10");
    expect(refutation.textContent).toContain("10.0% of 90");
    const legend = Array.from(card.querySelectorAll(".pie-legend-item")).map(
      (li) => li.textContent,
    );
    expect(legend).toContain("Support: 55.6%");
  });

  it("never recomputes server numbers, even implausible ones", () => {
    // a value no client-side recomputation would produce from the counts
    const skewed = resultsSummary({ refutation_pct: 77.7 });
    const card = renderConditionCard("skewed", skewed);
    expect(card.querySelector<HTMLElement>(".refutation-pct")!.textContent).toContain(
      "77.7%",
    );
  });

  it("draws one pie slice per label summing the full circle", () => {
    const card = renderConditionCard("t", resultsSummary());
    const slices = Array.from(card.querySelectorAll("path"));
    expect(slices).toHaveLength(3);
    const total = slices.reduce(
      (acc, p) => acc + Number((p as SVGPathElement).dataset.fraction),
      0,
    );
    expect(total).toBeCloseTo(1.0, 9);
  });

  it("renders typology bars with server counts", () => {
    const bars = renderTypologyBars(resultsSummary());
    const rows = Array.from(bars.querySelectorAll<HTMLElement>(".bar-row"));
    const byCategory = Object.fromEntries(
      rows.map((r) => [r.dataset.category, Number(r.dataset.count)]),
    );
    expect(byCategory).toEqual({ Semantic: 2, Content: 6 });
  });

  it("shows explicit empty states", () => {
    const empty = resultsSummary({
      n_records: 0,
      label_fractions: {},
      typology_counts: {},
    });
    expect(renderConditionCard("t", empty).querySelector(".empty-state")).not.toBeNull();
    expect(renderTypologyBars(empty).querySelector(".empty-state")).not.toBeNull();
  });

  it("mounts from fetched aggregates only", async () => {
    const summary = resultsSummary();
    const fetchMock = vi.fn(async () =>
      new Response(JSON.stringify(summary), { status: 200 }),
    );
    vi.stubGlobal("fetch", fetchMock);
    const container = document.createElement("div");
    await mountDashboard(new ApiClient(""), container, [
      { title: "Task 1 / Embedding", filter: { kind: "Single", attribution_method: "Embedding" } },
    ]);
    expect(fetchMock).toHaveBeenCalledTimes(2); // one condition + overall bars
    expect(container.querySelectorAll(".condition-card")).toHaveLength(1);
    expect(container.querySelector(".typology-bars")).not.toBeNull();
  });
});
