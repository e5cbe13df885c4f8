/**
 * Increment editor panel: seeds, members grouped by kind, aggregate
 * metrics, boundary summary, staleness banner, and the what-if readout.
 *
 * Everything shown is a value from a service response; this module only
 * formats.
 */

import type { ImpactResponse, IncrementModel } from "../types.js";
import { attr, esc } from "./html.js";

export const STALE_BANNER_TEXT = "re-expand required";

export function renderStaleBanner(): string {
  return `<div class="banner stale">Graph changed since this increment was expanded: ${STALE_BANNER_TEXT}.</div>`;
}

function memberCountsTable(counts: Record<string, number>): string {
  const rows = Object.entries(counts)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([kind, n]) => `<tr><td>${esc(kind)}</td><td class="num">${n}</td></tr>`)
    .join("\n");
  return `<table class="member-counts"><tbody>\n${rows}\n</tbody></table>`;
}

export function renderIncrementPanel(
  inc: IncrementModel,
  opts: { viewsStale?: boolean } = {},
): string {
  const stale = inc.stale || Boolean(opts.viewsStale);
  const banner = stale ? renderStaleBanner() : "";
  const seeds = inc.seeds.map((s) => `<code>${esc(s)}</code>`).join(", ");
  const metrics = inc.metrics;
  return `<section class="increment" data-increment-id=${attr(inc.id)} data-graph-version="${inc.graph_version}" data-stale="${stale}">
${banner}
<h2>Increment ${esc(inc.name)}</h2>
<p class="seeds">Seeds: ${seeds}</p>
${memberCountsTable(metrics.member_count_by_kind)}
<dl class="metrics">
<dt>Total LOC</dt><dd>${metrics.total_loc}</dd>
<dt>Total cyclomatic</dt><dd>${metrics.total_cyclomatic}</dd>
<dt>Members missing metrics</dt><dd>${metrics.metrics_missing}</dd>
<dt>Boundary</dt><dd><span class="inside-out">${inc.boundary_inside_out} inside-out</span>, <span class="outside-in">${inc.boundary_outside_in} outside-in</span></dd>
</dl>
<div class="actions">
<button data-action="expand">Expand</button>
<button data-action="add-member">Add member</button>
<button data-action="remove-member">Remove member</button>
<button data-action="what-if">What-if move</button>
</div>
</section>`;
}

/** What-if readout. Purely presentational: the delta shown is exactly the
 * service's move_impact delta, and nothing is mutated. */
export function renderImpact(impact: ImpactResponse): string {
  const sign = impact.delta > 0 ? "+" : "";
  const edges = impact.affected_edges
    .map(
      (a) =>
        `<li class=${attr(a.change)}>${esc(a.edge.kind)} ${esc(a.edge.src)} &rarr; ${esc(a.edge.dst)} (${esc(a.change.replaceAll("_", " "))})</li>`,
    )
    .join("\n");
  return `<aside class="impact" data-node=${attr(impact.node)} data-delta="${impact.delta}">
<h3>What-if: move ${esc(impact.node)}</h3>
<p>Boundary ${impact.boundary_before} &rarr; ${impact.boundary_after} <strong class="delta">(${sign}${impact.delta})</strong></p>
<ul class="affected">
${edges}
</ul>
<p class="hint">Preview only; the increment is unchanged.</p>
</aside>`;
}
