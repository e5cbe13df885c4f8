/**
 * Workbench bootstrap: hash routing, event wiring, and service calls.
 * All data shown comes from the service; renderers are pure (tested in
 * vitest), this module is the untested DOM glue around them.
 */

import { ApiError, WorkbenchApi } from "./api.js";
import {
  acknowledgeRefresh,
  initialState,
  noteImpact,
  noteResponseVersion,
  openIncrement,
  setFilters,
  type WorkbenchState,
} from "./state.js";
import { renderApplications, renderArtifactList } from "./render/applications.js";
import { renderGraphView } from "./render/graphview.js";
import { renderImpact, renderIncrementPanel } from "./render/increment.js";
import { renderInterfaceTable } from "./render/interfaces.js";

const api = new WorkbenchApi("");
let state: WorkbenchState = initialState();

function $(selector: string): HTMLElement {
  const el = document.querySelector(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el as HTMLElement;
}

function flash(message: string, isError = false): void {
  const bar = $("#flash");
  bar.textContent = message;
  bar.className = isError ? "flash error" : "flash";
  if (message) setTimeout(() => (bar.textContent = ""), 6000);
}

function track<T extends { graph_version: number }>(resp: T): T {
  state = noteResponseVersion(state, resp.graph_version);
  if (state.viewsStale) {
    $("#version-banner").innerHTML =
      `<div class="banner stale">Graph version changed to v${state.graphVersion}; ` +
      `open views may be stale — reload them.</div>`;
  }
  return resp;
}

async function showApplications(): Promise<void> {
  const resp = track(await api.applications());
  $("#main").innerHTML = renderApplications(resp);
}

async function showApplication(appId: string): Promise<void> {
  const query =
    (document.querySelector("#app-search") as HTMLInputElement | null)?.value ?? "";
  const resp = track(await api.searchNodes({ application: appId, q: query || null }));
  $("#main").innerHTML =
    `<p><a href="#/applications">&larr; applications</a></p>` +
    `<h2>${appId}</h2>` +
    `<input id="app-search" placeholder="search..." value="${query}">` +
    renderArtifactList(resp);
  const box = $("#app-search") as HTMLInputElement;
  box.addEventListener("change", () => void showApplication(appId));
}

async function showIncrements(): Promise<void> {
  const resp = track(await api.increments());
  const rows = resp.increments
    .map(
      (inc) =>
        `<li><a href="#/increments/${inc.id}">${inc.id}</a> ` +
        `(${inc.members.length} members${inc.stale ? ", stale" : ""})</li>`,
    )
    .join("\n");
  $("#main").innerHTML = `<section><h2>Increments</h2><ul>${rows}</ul>
<form id="create-increment">
<input name="name" placeholder="increment id" required>
<input name="seeds" placeholder="seeds, e.g. txn:SSP3 table:HOUSE" required>
<button type="submit">Create</button>
</form></section>`;
  $("#create-increment").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.currentTarget as HTMLFormElement;
    const name = (form.elements.namedItem("name") as HTMLInputElement).value.trim();
    const seeds = (form.elements.namedItem("seeds") as HTMLInputElement).value
      .split(/\s+/)
      .filter(Boolean);
    void api
      .createIncrement(name, seeds)
      .then(() => {
        location.hash = `#/increments/${name}`;
      })
      .catch((err: unknown) => flash(String((err as Error).message), true));
  });
}

async function showIncrement(id: string): Promise<void> {
  state = openIncrement(state, id);
  await refreshIncrement(id);
}

async function refreshIncrement(id: string): Promise<void> {
  const [incResp, boundaryResp, interfacesResp] = await Promise.all([
    api.increment(id),
    api.boundary(id),
    api.interfaces(id, state.filters),
  ]);
  track(incResp);
  track(boundaryResp);
  track(interfacesResp);
  state = acknowledgeRefresh(state);
  $("#version-banner").innerHTML = "";
  const inc = incResp.increment;
  const impactPanel = state.lastImpactDelta === null ? "" : $("#impact-slot").innerHTML;
  $("#main").innerHTML =
    `<p><a href="#/increments">&larr; increments</a></p>` +
    renderIncrementPanel(inc) +
    `<div id="impact-slot">${impactPanel}</div>` +
    renderGraphView(inc, boundaryResp) +
    renderInterfaceTable(interfacesResp, state.filters);
  wireIncrementActions(id);
}

function wireIncrementActions(id: string): void {
  $("#main").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.getAttribute("data-action");
    if (!action) return;
    event.preventDefault();
    const run = async () => {
      if (action === "expand") {
        track(await api.expand(id, state.graphVersion));
      } else if (action === "add-member" || action === "remove-member") {
        const ref = prompt("node reference (id or kind:name):");
        if (!ref) return;
        const add = action === "add-member" ? [ref] : [];
        const remove = action === "remove-member" ? [ref] : [];
        track(await api.editMembers(id, add, remove, state.graphVersion));
      } else if (action === "what-if") {
        const ref = prompt("what-if node (id or kind:name):");
        if (!ref) return;
        const impact = track(await api.impact(id, ref));
        state = noteImpact(state, impact);
        $("#impact-slot").innerHTML = renderImpact(impact);
        return; // no mutation: do not reload the increment
      }
      await refreshIncrement(id);
    };
    void run().catch((err: unknown) => {
      if (err instanceof ApiError && err.status === 409) {
        flash("Conflict: the graph changed under you — reload and retry.", true);
      } else {
        flash(String((err as Error).message), true);
      }
    });
  });
  const main = $("#main");
  main.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (!["interface_type", "application", "query"].includes(target.name)) return;
    state = setFilters(state, {
      interfaceType:
        (main.querySelector('input[name="interface_type"]') as HTMLInputElement).value ||
        null,
      application:
        (main.querySelector('input[name="application"]') as HTMLInputElement).value ||
        null,
      query:
        (main.querySelector('input[name="query"]') as HTMLInputElement).value || null,
    });
    void refreshIncrement(id);
  });
}

function route(): void {
  const hash = location.hash || "#/applications";
  const run = async () => {
    if (hash.startsWith("#/applications/")) {
      await showApplication(decodeURIComponent(hash.slice("#/applications/".length)));
    } else if (hash.startsWith("#/increments/")) {
      await showIncrement(decodeURIComponent(hash.slice("#/increments/".length)));
    } else if (hash.startsWith("#/increments")) {
      await showIncrements();
    } else {
      await showApplications();
    }
  };
  void run().catch((err: unknown) => flash(String((err as Error).message), true));
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
