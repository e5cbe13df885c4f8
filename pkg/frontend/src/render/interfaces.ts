/**
 * Context-interfaces table: one row per boundary edge, filterable by
 * interface type, interfacing application, and a text query. Rows are
 * rendered exactly as the service returns them; filters are sent to the
 * service, never applied client-side.
 */

import type { InterfaceFilters, InterfacesResponse } from "../types.js";
import { attr, esc } from "./html.js";

const COLUMNS: ReadonlyArray<[keyof InterfacesResponse["rows"][number], string]> = [
  ["interface_type", "Interface Type"],
  ["interfacing_application", "Interfacing Application"],
  ["calling_node", "Calling Node"],
  ["called_node", "Called Node"],
  ["edge_kind", "Relation"],
  ["access_type", "Access Type"],
  ["role", "Role"],
];

function filterBar(filters: InterfaceFilters): string {
  return `<div class="filters">
<input name="interface_type" placeholder="Interface Type" value=${attr(filters.interfaceType ?? "")}>
<input name="application" placeholder="Interfacing Application" value=${attr(filters.application ?? "")}>
<input name="query" placeholder="search..." value=${attr(filters.query ?? "")}>
</div>`;
}

export function renderInterfaceTable(
  resp: InterfacesResponse,
  filters: InterfaceFilters,
): string {
  const head = COLUMNS.map(([, label]) => `<th>${esc(label)}</th>`).join("");
  const body = resp.rows
    .map((row) => {
      const cells = COLUMNS.map(([key]) => `<td>${esc(row[key])}</td>`).join("");
      return `<tr class=${attr(row.interface_type)} data-edge-id=${attr(row.edge_id)}>${cells}</tr>`;
    })
    .join("\n");
  const empty =
    resp.rows.length === 0
      ? `<p class="empty">No interfaces match the current filters.</p>`
      : "";
  return `<section class="interfaces" data-graph-version="${resp.graph_version}" data-total="${resp.total}">
<h2>Context Interfaces</h2>
${filterBar(filters)}
<table>
<thead><tr>${head}</tr></thead>
<tbody>
${body}
</tbody>
</table>
${empty}
</section>`;
}
