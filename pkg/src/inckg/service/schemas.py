"""Pydantic request/response models for the workbench API.

Every response carries the graph_version it was computed against so
clients can detect staleness and echo the version back on mutations
(optimistic concurrency).
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class NodeModel(BaseModel):
    id: str
    kind: str
    name: str
    attrs: dict = Field(default_factory=dict)


class EdgeModel(BaseModel):
    id: str
    src: str
    dst: str
    kind: str
    attrs: dict = Field(default_factory=dict)


class NeighborModel(BaseModel):
    edge: EdgeModel
    node: NodeModel


class GraphSummaryResponse(BaseModel):
    graph_version: int
    node_count: int
    edge_count: int
    node_counts_by_kind: dict
    edge_counts_by_kind: dict


class ApplicationModel(BaseModel):
    id: str
    kind: str
    name: str
    member_count: int


class ApplicationsResponse(BaseModel):
    graph_version: int
    applications: list[ApplicationModel]


class NodePageResponse(BaseModel):
    graph_version: int
    total: int
    page: int
    page_size: int
    items: list[NodeModel]


class NodeDetailResponse(BaseModel):
    graph_version: int
    node: NodeModel
    application: Optional[str] = None
    neighbors: list[NeighborModel]


class MetricsModel(BaseModel):
    total_loc: int
    total_cyclomatic: int
    member_count_by_kind: dict
    metrics_missing: int


class BoundaryEdgeModel(BaseModel):
    edge: EdgeModel
    direction_class: str
    inner_node: str
    outer_node: str
    outer_application: Optional[str] = None


class IncrementModel(BaseModel):
    id: str
    name: str
    policy: str
    seeds: list[str]
    members: list[str]
    manual_adds: list[str]
    manual_removes: list[str]
    metrics: MetricsModel
    graph_version: int
    stale: bool
    boundary_inside_out: int
    boundary_outside_in: int


class IncrementResponse(BaseModel):
    graph_version: int
    increment: IncrementModel


class IncrementListResponse(BaseModel):
    graph_version: int
    increments: list[IncrementModel]


class CreateIncrementRequest(BaseModel):
    name: str
    seeds: list[str]
    id: Optional[str] = None
    policy: Optional[str] = None


class ExpandRequest(BaseModel):
    expected_graph_version: Optional[int] = None


class EditMembersRequest(BaseModel):
    add: list[str] = Field(default_factory=list)
    remove: list[str] = Field(default_factory=list)
    expected_graph_version: Optional[int] = None


class BoundaryResponse(BaseModel):
    graph_version: int
    inside_out: list[BoundaryEdgeModel]
    outside_in: list[BoundaryEdgeModel]


class ImpactEdgeModel(BaseModel):
    edge: EdgeModel
    change: str


class ImpactResponse(BaseModel):
    graph_version: int
    node: str
    boundary_before: int
    boundary_after: int
    delta: int
    affected_edges: list[ImpactEdgeModel]


class InterfaceRowModel(BaseModel):
    interface_type: str
    interfacing_application: str
    calling_node: str
    called_node: str
    edge_kind: str
    access_type: str
    role: str
    calling_id: str
    called_id: str
    edge_id: str


class InterfacesResponse(BaseModel):
    graph_version: int
    total: int
    page: int
    page_size: int
    rows: list[InterfaceRowModel]


class RetireFindingModel(BaseModel):
    reason: str
    edge: BoundaryEdgeModel


class RetireResponse(BaseModel):
    graph_version: int
    increment: str
    safe: bool
    blockers: list[RetireFindingModel]
    notes: list[RetireFindingModel]


class SharedReportRequest(BaseModel):
    entries: list[str]
    threshold: int = 2
    policy: Optional[str] = None


class SharedArtifactModel(BaseModel):
    node_id: str
    name: str
    entry_count: int


class SharedReportResponse(BaseModel):
    graph_version: int
    threshold: int
    rows: list[SharedArtifactModel]


class DanglingRefModel(BaseModel):
    ordinal: int
    missing_id: str


class ParseErrorModel(BaseModel):
    line: int
    message: str


class IngestResponse(BaseModel):
    graph_version: int
    clean: bool
    nodes_added: int
    edges_added: int
    groups_added: int
    has_edges_added: int
    has_edges_removed: int
    violations: list[str]
    dangling_refs: list[DanglingRefModel]
    parse_errors: list[ParseErrorModel]


class ValidateResponse(BaseModel):
    graph_version: int
    violations: list[str]


class SnapshotRequest(BaseModel):
    path: str
    expected_graph_version: Optional[int] = None


class SnapshotResponse(BaseModel):
    graph_version: int
    path: str
    node_count: int
    edge_count: int


class HealthResponse(BaseModel):
    status: str
    graph_version: int
    version: str


class ErrorResponse(BaseModel):
    error: str
