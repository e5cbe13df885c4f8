import { describe, expect, it } from "vitest";

import { renderImpact } from "../src/render/increment.js";
import { initialState, noteImpact } from "../src/state.js";
import type { ImpactResponse } from "../src/types.js";
import { recorded } from "./recorded.js";

describe("what-if impact display (contract: recorded service responses)", () => {
  it("shows exactly the service's move_impact delta", () => {
    const impact = recorded<ImpactResponse>("ssp3_impact");
    const html = renderImpact(impact);
    const sign = impact.delta > 0 ? "+" : "";
    expect(html).toContain(`data-delta="${impact.delta}"`);
    expect(html).toContain(`(${sign}${impact.delta})`);
    expect(html).toContain(
      `Boundary ${impact.boundary_before} &rarr; ${impact.boundary_after}`,
    );
    expect(impact.boundary_after - impact.boundary_before).toBe(impact.delta);
  });

  it("lists every affected edge the service reported", () => {
    const impact = recorded<ImpactResponse>("ssp3_impact");
    const html = renderImpact(impact);
    for (const affected of impact.affected_edges) {
      expect(html).toContain(affected.edge.src);
      expect(html).toContain(affected.edge.dst);
    }
    expect((html.match(/<li class=/g) ?? []).length).toBe(impact.affected_edges.length);
  });

  it("marks the preview as non-mutating and stores the delta in state", () => {
    const impact = recorded<ImpactResponse>("ssp3_impact");
    expect(renderImpact(impact)).toContain("the increment is unchanged");
    const state = noteImpact(initialState(), impact);
    expect(state.lastImpactDelta).toBe(impact.delta);
    expect(state.pendingWhatIfNode).toBe(impact.node);
  });
});
