"""FastAPI application wrapping a workspace.

Sync handlers run in the framework's thread pool; the workspace's own
locks serialize mutations, so many read requests proceed concurrently
while each mutation is atomic. Engine errors map onto HTTP statuses
(404 unknown resource, 400 bad input, 409 stale graph version).
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import APIRouter, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .. import __version__
from ..errors import (
    EngineError,
    InvalidInput,
    NotFound,
    OntologySchemaError,
    PolicyError,
    ReferentialError,
    SnapshotFormatError,
    VersionConflict,
)
from ..increments import split_boundary
from ..workspace import Workspace
from . import schemas as s

MAX_PAGE_SIZE = 1000
DEFAULT_PAGE_SIZE = 200


def _node_model(node) -> s.NodeModel:
    return s.NodeModel(id=node.id, kind=node.kind, name=node.name, attrs=dict(node.attrs))


def _edge_model(edge) -> s.EdgeModel:
    return s.EdgeModel(id=edge.id, src=edge.src, dst=edge.dst, kind=edge.kind,
                       attrs=dict(edge.attrs))


def _boundary_model(b) -> s.BoundaryEdgeModel:
    return s.BoundaryEdgeModel(edge=_edge_model(b.edge), direction_class=b.direction_class,
                               inner_node=b.inner_node, outer_node=b.outer_node,
                               outer_application=b.outer_application)


def _metrics_model(m) -> s.MetricsModel:
    return s.MetricsModel(total_loc=m.total_loc, total_cyclomatic=m.total_cyclomatic,
                          member_count_by_kind=dict(m.member_count_by_kind),
                          metrics_missing=m.metrics_missing)


def _increment_model(ws: Workspace, increment) -> s.IncrementModel:
    inside_out, outside_in = split_boundary(increment.boundary)
    return s.IncrementModel(
        id=increment.id,
        name=increment.name,
        policy=increment.policy_ref,
        seeds=sorted(increment.seeds),
        members=sorted(increment.members),
        manual_adds=sorted(increment.manual_adds),
        manual_removes=sorted(increment.manual_removes),
        metrics=_metrics_model(increment.metrics),
        graph_version=increment.graph_version,
        stale=ws.is_stale(increment),
        boundary_inside_out=len(inside_out),
        boundary_outside_in=len(outside_in),
    )


def _interface_row_model(row) -> s.InterfaceRowModel:
    return s.InterfaceRowModel(
        interface_type=row.interface_type,
        interfacing_application=row.interfacing_application,
        calling_node=row.calling_node,
        called_node=row.called_node,
        edge_kind=row.edge_kind,
        access_type=row.access_type,
        role=row.role,
        calling_id=row.calling_id,
        called_id=row.called_id,
        edge_id=row.edge_id,
    )


def _page(items, page: int, page_size: int):
    start = max(page - 1, 0) * page_size
    return items[start:start + page_size]


def create_app(workspace: Workspace, ui_dir: Optional[str] = None,
               snapshot_path: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="inckg service", version=__version__,
                  description="Incremental knowledge-graph analysis API")
    ws = workspace
    api = APIRouter(prefix="/api")

    @app.exception_handler(EngineError)
    def _engine_error(request: Request, exc: EngineError) -> JSONResponse:
        status = 400
        if isinstance(exc, NotFound):
            status = 404
        elif isinstance(exc, VersionConflict):
            status = 409
        elif isinstance(exc, (InvalidInput, ReferentialError, PolicyError,
                              OntologySchemaError, SnapshotFormatError)):
            status = 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    # -- health / graph ------------------------------------------------

    @api.get("/health", response_model=s.HealthResponse)
    def health():
        return s.HealthResponse(status="ok", graph_version=ws.graph.version,
                                version=__version__)

    @api.get("/graph", response_model=s.GraphSummaryResponse)
    def graph_summary():
        return s.GraphSummaryResponse(
            graph_version=ws.graph.version,
            node_count=ws.graph.node_count,
            edge_count=ws.graph.edge_count,
            node_counts_by_kind=ws.graph.counts_by_kind(),
            edge_counts_by_kind=ws.graph.edge_counts_by_kind(),
        )

    @api.get("/applications", response_model=s.ApplicationsResponse)
    def applications():
        return s.ApplicationsResponse(
            graph_version=ws.graph.version,
            applications=[
                s.ApplicationModel(id=node.id, kind=node.kind, name=node.name,
                                   member_count=count)
                for node, count in ws.applications()
            ],
        )

    @api.get("/nodes", response_model=s.NodePageResponse)
    def search_nodes(q: Optional[str] = None, kind: Optional[str] = None,
                     application: Optional[str] = None,
                     page: int = Query(1, ge=1),
                     page_size: int = Query(DEFAULT_PAGE_SIZE, ge=1, le=MAX_PAGE_SIZE)):
        total, items = ws.search_nodes(q, kind, application, page, page_size)
        return s.NodePageResponse(graph_version=ws.graph.version, total=total,
                                  page=page, page_size=page_size,
                                  items=[_node_model(n) for n in items])

    @api.get("/nodes/{node_id:path}/detail", response_model=s.NodeDetailResponse)
    def node_detail(node_id: str):
        node, neighbors, app_id = ws.node_detail(node_id)
        return s.NodeDetailResponse(
            graph_version=ws.graph.version,
            node=_node_model(node),
            application=app_id,
            neighbors=[s.NeighborModel(edge=_edge_model(e), node=_node_model(n))
                       for e, n in neighbors],
        )

    @api.get("/validate", response_model=s.ValidateResponse)
    def validate():
        return s.ValidateResponse(
            graph_version=ws.graph.version,
            violations=[f"{v.subject_type} {v.subject_id}: {v.message}"
                        for v in ws.validate()],
        )

    # -- increments -------------------------------------------------------

    @api.get("/increments", response_model=s.IncrementListResponse)
    def list_increments():
        return s.IncrementListResponse(
            graph_version=ws.graph.version,
            increments=[_increment_model(ws, i) for i in ws.list_increments()],
        )

    @api.post("/increments", response_model=s.IncrementResponse, status_code=201)
    def create_increment(req: s.CreateIncrementRequest):
        increment = ws.create_increment(req.name, req.seeds, inc_id=req.id,
                                        policy_name=req.policy)
        return s.IncrementResponse(graph_version=ws.graph.version,
                                   increment=_increment_model(ws, increment))

    @api.get("/increments/{inc_id}", response_model=s.IncrementResponse)
    def get_increment(inc_id: str):
        return s.IncrementResponse(graph_version=ws.graph.version,
                                   increment=_increment_model(ws, ws.get_increment(inc_id)))

    @api.post("/increments/{inc_id}/expand", response_model=s.IncrementResponse)
    def expand_increment(inc_id: str, req: Optional[s.ExpandRequest] = None):
        expected = req.expected_graph_version if req else None
        increment = ws.expand_increment(inc_id, expected)
        return s.IncrementResponse(graph_version=ws.graph.version,
                                   increment=_increment_model(ws, increment))

    @api.post("/increments/{inc_id}/members", response_model=s.IncrementResponse)
    def edit_members(inc_id: str, req: s.EditMembersRequest):
        increment = ws.edit_increment(inc_id, req.add, req.remove,
                                      req.expected_graph_version)
        return s.IncrementResponse(graph_version=ws.graph.version,
                                   increment=_increment_model(ws, increment))

    @api.get("/increments/{inc_id}/impact", response_model=s.ImpactResponse)
    def move_impact(inc_id: str, node: str):
        report = ws.move_impact(inc_id, node)
        return s.ImpactResponse(
            graph_version=ws.graph.version,
            node=report.node_id,
            boundary_before=report.boundary_before,
            boundary_after=report.boundary_after,
            delta=report.delta,
            affected_edges=[s.ImpactEdgeModel(edge=_edge_model(a.edge), change=a.change)
                            for a in report.affected_edges],
        )

    @api.get("/increments/{inc_id}/boundary", response_model=s.BoundaryResponse)
    def boundary(inc_id: str):
        inside_out, outside_in = ws.boundary(inc_id)
        return s.BoundaryResponse(
            graph_version=ws.graph.version,
            inside_out=[_boundary_model(b) for b in inside_out],
            outside_in=[_boundary_model(b) for b in outside_in],
        )

    @api.get("/increments/{inc_id}/interfaces", response_model=s.InterfacesResponse)
    def interfaces(inc_id: str, interface_type: Optional[str] = None,
                   application: Optional[str] = None, q: Optional[str] = None,
                   page: int = Query(1, ge=1),
                   page_size: int = Query(DEFAULT_PAGE_SIZE, ge=1, le=MAX_PAGE_SIZE)):
        rows = ws.interfaces(inc_id, interface_type, application, q)
        return s.InterfacesResponse(
            graph_version=ws.graph.version, total=len(rows), page=page,
            page_size=page_size,
            rows=[_interface_row_model(r) for r in _page(rows, page, page_size)],
        )

    @api.get("/increments/{inc_id}/retire", response_model=s.RetireResponse)
    def retire(inc_id: str):
        verdict = ws.retire_check(inc_id)
        def finding(f):
            return s.RetireFindingModel(reason=f.reason, edge=_boundary_model(f.edge))
        return s.RetireResponse(
            graph_version=ws.graph.version,
            increment=inc_id,
            safe=verdict.safe,
            blockers=[finding(f) for f in verdict.blockers],
            notes=[finding(f) for f in verdict.notes],
        )

    @api.get("/increments/{inc_id}/export", response_class=PlainTextResponse)
    def export_increment(inc_id: str, format: str = Query("dot", pattern="^(dot|graphml)$")):
        media = "text/vnd.graphviz" if format == "dot" else "application/xml"
        return Response(content=ws.export(format, inc_id), media_type=media)

    # -- reports ------------------------------------------------------------

    @api.post("/reports/shared", response_model=s.SharedReportResponse)
    def shared_report(req: s.SharedReportRequest):
        rows = ws.shared_report(req.entries, req.threshold, req.policy)
        return s.SharedReportResponse(
            graph_version=ws.graph.version,
            threshold=req.threshold,
            rows=[s.SharedArtifactModel(node_id=r.node_id, name=r.name,
                                        entry_count=r.entry_count) for r in rows],
        )

    # -- export / ingest / admin ----------------------------------------------

    @api.get("/export/graph", response_class=PlainTextResponse)
    def export_graph(format: str = Query("dot", pattern="^(dot|graphml)$")):
        media = "text/vnd.graphviz" if format == "dot" else "application/xml"
        return Response(content=ws.export(format), media_type=media)

    @api.post("/ingest", response_model=s.IngestResponse)
    async def ingest(request: Request,
                     expected_graph_version: Optional[int] = None):
        body = (await request.body()).decode("utf-8")
        report = ws.ingest_lines(body.splitlines(), expected_graph_version)
        return s.IngestResponse(
            graph_version=ws.graph.version,
            clean=report.clean,
            nodes_added=report.nodes_added,
            edges_added=report.edges_added,
            groups_added=report.groups_added,
            has_edges_added=report.has_edges_added,
            has_edges_removed=report.has_edges_removed,
            violations=[f"{v.subject_id}: {v.message}" for v in report.violations],
            dangling_refs=[s.DanglingRefModel(ordinal=d.ordinal, missing_id=d.missing_id)
                           for d in report.dangling_refs],
            parse_errors=[s.ParseErrorModel(line=p.line, message=p.message)
                          for p in report.parse_errors],
        )

    @api.post("/admin/snapshot/save", response_model=s.SnapshotResponse)
    def snapshot_save(req: Optional[s.SnapshotRequest] = None):
        path = req.path if req and req.path else snapshot_path
        if not path:
            raise InvalidInput("no snapshot path configured; pass one in the request")
        ws.save(path)
        return s.SnapshotResponse(graph_version=ws.graph.version, path=str(path),
                                  node_count=ws.graph.node_count,
                                  edge_count=ws.graph.edge_count)

    @api.post("/admin/snapshot/load", response_model=s.SnapshotResponse)
    def snapshot_load(req: s.SnapshotRequest):
        from .. import snapshot as snapshot_mod
        from ..increments import increment_from_doc
        with ws._lock:
            if req.expected_graph_version is not None \
                    and req.expected_graph_version != ws.graph.version:
                raise VersionConflict(req.expected_graph_version, ws.graph.version)
            graph, inc_docs = snapshot_mod.load(req.path)
            ws.graph = graph
            ws.increments = {doc["id"]: increment_from_doc(doc, graph)
                             for doc in inc_docs}
        return s.SnapshotResponse(graph_version=ws.graph.version, path=req.path,
                                  node_count=ws.graph.node_count,
                                  edge_count=ws.graph.edge_count)

    app.include_router(api)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
