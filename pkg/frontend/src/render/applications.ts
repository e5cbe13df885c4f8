/**
 * Applications browser: the estate's logical groups with member counts,
 * plus the artifact listing of a selected application.
 */

import type { ApplicationsResponse, NodePageResponse } from "../types.js";
import { attr, esc } from "./html.js";

export function renderApplications(resp: ApplicationsResponse): string {
  if (resp.applications.length === 0) {
    return `<p class="empty">No applications yet. Ingest a facts file to populate the estate.</p>`;
  }
  const items = resp.applications
    .map(
      (app) =>
        `<li class="application" data-app-id=${attr(app.id)}>` +
        `<a href=${attr(`#/applications/${app.id}`)}>${esc(app.name)}</a>` +
        `<span class="count">${app.member_count} artifacts</span></li>`,
    )
    .join("\n");
  return `<section class="applications" data-graph-version="${resp.graph_version}">
<h2>Applications</h2>
<ul>
${items}
</ul>
</section>`;
}

export function renderArtifactList(resp: NodePageResponse): string {
  if (resp.items.length === 0) {
    return `<p class="empty">No artifacts match.</p>`;
  }
  const byKind = new Map<string, string[]>();
  for (const node of resp.items) {
    const bucket = byKind.get(node.kind) ?? [];
    bucket.push(
      `<li class="artifact" data-node-id=${attr(node.id)}>${esc(node.name)}</li>`,
    );
    byKind.set(node.kind, bucket);
  }
  const sections = [...byKind.entries()]
    .sort(([a], [b]) => a.localeCompare(b))
    .map(
      ([kind, rows]) =>
        `<h3>${esc(kind)} (${rows.length})</h3>\n<ul>\n${rows.join("\n")}\n</ul>`,
    )
    .join("\n");
  return `<section class="artifacts" data-graph-version="${resp.graph_version}" data-total="${resp.total}">
${sections}
</section>`;
}
