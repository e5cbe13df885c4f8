/**
 * SVG rendering of an increment: members plus their one-hop boundary
 * neighbors only (a whole-estate render is useless at scale). Members sit
 * on an inner ring, boundary neighbors on an outer ring; boundary edges
 * keep the workbench color convention: inside-out red, outside-in yellow.
 */

import type { BoundaryResponse, IncrementModel } from "../types.js";
import { attr, esc } from "./html.js";

export const INSIDE_OUT_COLOR = "red";
export const OUTSIDE_IN_COLOR = "yellow";

interface Point {
  x: number;
  y: number;
}

function ring(ids: string[], radius: number, cx: number, cy: number): Map<string, Point> {
  const points = new Map<string, Point>();
  const n = Math.max(ids.length, 1);
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    points.set(id, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return points;
}

export function renderGraphView(
  inc: IncrementModel,
  boundary: BoundaryResponse,
  size = 640,
): string {
  const members = [...inc.members].sort();
  const outerIds = [
    ...new Set(
      [...boundary.inside_out, ...boundary.outside_in].map((b) => b.outer_node),
    ),
  ].sort();
  const cx = size / 2;
  const cy = size / 2;
  const positions = new Map<string, Point>([
    ...ring(members, size * 0.28, cx, cy),
    ...ring(outerIds, size * 0.44, cx, cy),
  ]);

  const edges: string[] = [];
  for (const b of [...boundary.inside_out, ...boundary.outside_in]) {
    const from = positions.get(b.edge.src);
    const to = positions.get(b.edge.dst);
    if (!from || !to) continue;
    const color = b.direction_class === "inside_out" ? INSIDE_OUT_COLOR : OUTSIDE_IN_COLOR;
    edges.push(
      `<line class=${attr(b.direction_class)} x1="${from.x.toFixed(1)}" y1="${from.y.toFixed(1)}" ` +
        `x2="${to.x.toFixed(1)}" y2="${to.y.toFixed(1)}" stroke="${color}" stroke-width="2"/>`,
    );
  }

  const nodes: string[] = [];
  for (const id of members) {
    const p = positions.get(id)!;
    nodes.push(
      `<g class="member" data-node-id=${attr(id)}>` +
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="9" fill="#2b6cb0"/>` +
        `<text x="${p.x.toFixed(1)}" y="${(p.y - 12).toFixed(1)}">${esc(id)}</text></g>`,
    );
  }
  for (const id of outerIds) {
    const p = positions.get(id)!;
    nodes.push(
      `<g class="outer" data-node-id=${attr(id)}>` +
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="7" fill="#c0c8d0"/>` +
        `<text x="${p.x.toFixed(1)}" y="${(p.y - 10).toFixed(1)}">${esc(id)}</text></g>`,
    );
  }

  return `<svg class="graph-view" viewBox="0 0 ${size} ${size}" data-increment-id=${attr(inc.id)}>
${edges.join("\n")}
${nodes.join("\n")}
</svg>`;
}
