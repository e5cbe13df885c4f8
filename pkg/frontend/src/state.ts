/**
 * Workbench session state.
 *
 * Every rendered view is tagged with the graph_version its data came from.
 * When a response arrives with a different version, views are flagged
 * stale rather than silently refreshed: the analyst decides when to
 * re-expand and re-read.
 */

import type { ImpactResponse, InterfaceFilters } from "./types.js";
import { EMPTY_FILTERS } from "./types.js";

export interface WorkbenchState {
  graphVersion: number | null;
  openIncrementId: string | null;
  filters: InterfaceFilters;
  pendingWhatIfNode: string | null;
  lastImpactDelta: number | null;
  viewsStale: boolean;
}

export function initialState(): WorkbenchState {
  return {
    graphVersion: null,
    openIncrementId: null,
    filters: { ...EMPTY_FILTERS },
    pendingWhatIfNode: null,
    lastImpactDelta: null,
    viewsStale: false,
  };
}

/** Track the version a response was computed against; a change flags
 * every open view stale. */
export function noteResponseVersion(
  state: WorkbenchState,
  version: number,
): WorkbenchState {
  if (state.graphVersion === null) {
    return { ...state, graphVersion: version };
  }
  if (version !== state.graphVersion) {
    return { ...state, graphVersion: version, viewsStale: true };
  }
  return state;
}

/** Views were re-read at the current version; clear the stale flag. */
export function acknowledgeRefresh(state: WorkbenchState): WorkbenchState {
  return { ...state, viewsStale: false };
}

export function openIncrement(state: WorkbenchState, id: string): WorkbenchState {
  return {
    ...state,
    openIncrementId: id,
    filters: { ...EMPTY_FILTERS },
    pendingWhatIfNode: null,
    lastImpactDelta: null,
  };
}

export function setFilters(
  state: WorkbenchState,
  filters: Partial<InterfaceFilters>,
): WorkbenchState {
  return { ...state, filters: { ...state.filters, ...filters } };
}

export function noteImpact(
  state: WorkbenchState,
  impact: ImpactResponse,
): WorkbenchState {
  return {
    ...state,
    pendingWhatIfNode: impact.node,
    lastImpactDelta: impact.delta,
  };
}

export function clearWhatIf(state: WorkbenchState): WorkbenchState {
  return { ...state, pendingWhatIfNode: null, lastImpactDelta: null };
}
