/**
 * Service API types, mirroring the backend's response models.
 * Every response carries the graph_version it was computed against.
 */

export interface NodeModel {
  id: string;
  kind: string;
  name: string;
  attrs: Record<string, unknown>;
}

export interface EdgeModel {
  id: string;
  src: string;
  dst: string;
  kind: string;
  attrs: Record<string, unknown>;
}

export interface ApplicationModel {
  id: string;
  kind: string;
  name: string;
  member_count: number;
}

export interface ApplicationsResponse {
  graph_version: number;
  applications: ApplicationModel[];
}

export interface NodePageResponse {
  graph_version: number;
  total: number;
  page: number;
  page_size: number;
  items: NodeModel[];
}

export interface MetricsModel {
  total_loc: number;
  total_cyclomatic: number;
  member_count_by_kind: Record<string, number>;
  metrics_missing: number;
}

export interface BoundaryEdgeModel {
  edge: EdgeModel;
  direction_class: "inside_out" | "outside_in";
  inner_node: string;
  outer_node: string;
  outer_application: string | null;
}

export interface IncrementModel {
  id: string;
  name: string;
  policy: string;
  seeds: string[];
  members: string[];
  manual_adds: string[];
  manual_removes: string[];
  metrics: MetricsModel;
  graph_version: number;
  stale: boolean;
  boundary_inside_out: number;
  boundary_outside_in: number;
}

export interface IncrementResponse {
  graph_version: number;
  increment: IncrementModel;
}

export interface IncrementListResponse {
  graph_version: number;
  increments: IncrementModel[];
}

export interface BoundaryResponse {
  graph_version: number;
  inside_out: BoundaryEdgeModel[];
  outside_in: BoundaryEdgeModel[];
}

export interface ImpactEdgeModel {
  edge: EdgeModel;
  change: "added_to_boundary" | "removed_from_boundary";
}

export interface ImpactResponse {
  graph_version: number;
  node: string;
  boundary_before: number;
  boundary_after: number;
  delta: number;
  affected_edges: ImpactEdgeModel[];
}

export interface InterfaceRowModel {
  interface_type: string;
  interfacing_application: string;
  calling_node: string;
  called_node: string;
  edge_kind: string;
  access_type: string;
  role: string;
  calling_id: string;
  called_id: string;
  edge_id: string;
}

export interface InterfacesResponse {
  graph_version: number;
  total: number;
  page: number;
  page_size: number;
  rows: InterfaceRowModel[];
}

export interface RetireFindingModel {
  reason: string;
  edge: BoundaryEdgeModel;
}

export interface RetireResponse {
  graph_version: number;
  increment: string;
  safe: boolean;
  blockers: RetireFindingModel[];
  notes: RetireFindingModel[];
}

export interface InterfaceFilters {
  interfaceType: string | null;
  application: string | null;
  query: string | null;
}

export const EMPTY_FILTERS: InterfaceFilters = {
  interfaceType: null,
  application: null,
  query: null,
};
