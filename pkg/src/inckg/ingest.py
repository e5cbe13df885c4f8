"""Stream facts records into an ontology-validated graph.

Facts files are UTF-8 JSON Lines — one record per line, ``#`` comment
lines and blank lines ignored. Three record shapes (this format is the
stable public ingestion contract):

    {"rec": "node",  "id": "...", "kind": "...", "name": "...", "attrs": {...}}
    {"rec": "edge",  "src": "...", "dst": "...", "kind": "...", "attrs": {...}}
    {"rec": "group", "group_id": "...", "kind": "...", "name": "...", "members": [...]}

Ingest is two-pass — nodes first, then edges and groups — so forward
references within one file resolve. A ``group`` record materializes one
grouping node plus one logical (HAS) edge per member. Records violating
the ontology are skipped and reported, never fatal; the whole ingest is
one atomic graph batch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidInput
from .graph import ArtifactNode, Graph, edge_key, make_edge
from .ontology import Ontology, Violation, check_attr_conformance

_RECORD_KINDS = ("node", "edge", "group")


@dataclass(frozen=True)
class ParseError:
    line: int
    message: str


@dataclass(frozen=True)
class DanglingRef:
    ordinal: int  # line number of the offending record
    missing_id: str


@dataclass
class IngestReport:
    nodes_added: int = 0
    edges_added: int = 0
    groups_added: int = 0
    has_edges_added: int = 0
    has_edges_removed: int = 0
    nodes_added_by_kind: dict = field(default_factory=dict)
    edges_added_by_kind: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    dangling_refs: list = field(default_factory=list)
    parse_errors: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        """True iff no record was skipped for any reason."""
        return not (self.violations or self.dangling_refs or self.parse_errors)


def _parse_lines(lines: Iterable, report: IngestReport):
    node_recs = []
    other_recs = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            report.parse_errors.append(ParseError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(rec, dict) or rec.get("rec") not in _RECORD_KINDS:
            report.parse_errors.append(
                ParseError(line_no, "record must be an object with rec one of node|edge|group")
            )
            continue
        (node_recs if rec["rec"] == "node" else other_recs).append((line_no, rec))
    return node_recs, other_recs


def _record_violation(report, line_no, category, message):
    report.violations.append(Violation("record", f"line {line_no}", category, message))


def _ingest_node(graph, ontology, report, line_no, rec):
    node_id = rec.get("id")
    kind = rec.get("kind")
    if not isinstance(node_id, str) or not node_id or not isinstance(kind, str) or not kind:
        report.parse_errors.append(ParseError(line_no, "node records need non-empty id and kind"))
        return
    decl = ontology.node_kinds.get(kind)
    if decl is None:
        _record_violation(report, line_no, "unknown_kind", f"unknown node kind {kind!r}")
        return
    attrs = rec.get("attrs", {}) or {}
    problems = check_attr_conformance(decl.attrs, attrs)
    if problems:
        for category, message in problems:
            _record_violation(report, line_no, category, f"node {node_id!r}: {message}")
        return
    existed = graph.has_node(node_id)
    graph.upsert_node(ArtifactNode(node_id, kind, str(rec.get("name", "")), dict(attrs)))
    if not existed:
        report.nodes_added += 1
        report.nodes_added_by_kind[kind] = report.nodes_added_by_kind.get(kind, 0) + 1


def _assign_member(graph, ontology, report, line_no, group_node, member_id, has_decl):
    """One HAS-style membership edge, honoring the partition rule.

    Returns (added, removed) edge counts."""
    member = graph.node(member_id)
    if member.kind not in has_decl.dst:
        _record_violation(
            report, line_no, "endpoint_kind",
            f"{has_decl.name} may not target {member.kind} ({member_id})")
        return 0, 0
    removed = 0
    group_decl = ontology.node_kinds[group_node.kind]
    new_eid = edge_key(group_node.id, member_id, has_decl.name, {})
    if group_decl.partition:
        # Membership in a partition grouping kind is exclusive: drop any
        # previous parent of the same kind before re-assigning.
        for eid in graph.in_edge_ids(member_id):
            if eid == new_eid:
                continue
            edge = graph.edge(eid)
            if edge.kind != has_decl.name:
                continue
            if graph.node(edge.src).kind == group_node.kind:
                graph.remove_edge(eid)
                removed += 1
    if not graph.has_edge(new_eid):
        graph.upsert_edge(make_edge(group_node.id, member_id, has_decl.name, {}))
        return 1, removed
    return 0, removed


def _ingest_group(graph, ontology, report, line_no, rec):
    group_id = rec.get("group_id")
    kind = rec.get("kind")
    members = rec.get("members")
    if not isinstance(group_id, str) or not group_id or not isinstance(kind, str) or not kind:
        report.parse_errors.append(ParseError(line_no, "group records need non-empty group_id and kind"))
        return
    if not isinstance(members, list) or not members:
        report.parse_errors.append(ParseError(line_no, "group records need a non-empty members list"))
        return
    decl = ontology.node_kinds.get(kind)
    if decl is None or decl.role_class != "grouping":
        _record_violation(report, line_no, "unknown_kind",
                          f"group kind {kind!r} is not a declared grouping kind")
        return
    has_decl = ontology.logical_kind_for(kind)
    if has_decl is None:
        _record_violation(report, line_no, "unknown_kind",
                          f"no logical edge kind declared for grouping kind {kind!r}")
        return
    existed = graph.has_node(group_id)
    graph.upsert_node(ArtifactNode(group_id, kind, str(rec.get("name", "")), {}))
    if not existed:
        report.groups_added += 1
    for member_id in members:
        if not isinstance(member_id, str) or not graph.has_node(member_id):
            report.dangling_refs.append(DanglingRef(line_no, str(member_id)))
            continue
        added, removed = _assign_member(graph, ontology, report, line_no,
                                        graph.node(group_id), member_id, has_decl)
        report.has_edges_added += added
        report.has_edges_removed += removed


def _ingest_edge(graph, ontology, report, line_no, rec):
    src, dst, kind = rec.get("src"), rec.get("dst"), rec.get("kind")
    if not all(isinstance(v, str) and v for v in (src, dst, kind)):
        report.parse_errors.append(ParseError(line_no, "edge records need non-empty src, dst, kind"))
        return
    decl = ontology.edge_kinds.get(kind)
    if decl is None:
        _record_violation(report, line_no, "unknown_kind", f"unknown edge kind {kind!r}")
        return
    missing = [v for v in (src, dst) if not graph.has_node(v)]
    if missing:
        for node_id in missing:
            report.dangling_refs.append(DanglingRef(line_no, node_id))
        return
    attrs = rec.get("attrs", {}) or {}
    if decl.logical:
        # A raw logical edge record is membership assignment in disguise;
        # route it through the same partition-aware path as group records.
        src_node = graph.node(src)
        if src_node.kind not in decl.src:
            _record_violation(report, line_no, "endpoint_kind",
                              f"{kind} may not originate from {src_node.kind} ({src})")
            return
        added, removed = _assign_member(graph, ontology, report, line_no, src_node, dst, decl)
        report.has_edges_added += added
        report.has_edges_removed += removed
        return
    src_kind = graph.node(src).kind
    dst_kind = graph.node(dst).kind
    problems = []
    if src_kind not in decl.src:
        problems.append(("endpoint_kind", f"{kind} may not originate from {src_kind} ({src})"))
    if dst_kind not in decl.dst:
        problems.append(("endpoint_kind", f"{kind} may not target {dst_kind} ({dst})"))
    problems.extend(check_attr_conformance(decl.attrs, attrs))
    if problems:
        for category, message in problems:
            _record_violation(report, line_no, category, message)
        return
    if not graph.has_edge(edge_key(src, dst, kind, attrs)):
        graph.upsert_edge(make_edge(src, dst, kind, dict(attrs)))
        report.edges_added += 1
        report.edges_added_by_kind[kind] = report.edges_added_by_kind.get(kind, 0) + 1


def ingest_facts(lines: Iterable, ontology: Ontology, graph: Graph) -> IngestReport:
    """Ingest a facts stream into the graph as one atomic batch.

    Skip-and-report: bad lines and ontology-violating records are recorded
    in the report and processing continues. ``report.clean`` tells whether
    anything was skipped.
    """
    report = IngestReport()
    node_recs, other_recs = _parse_lines(lines, report)
    with graph.batch():
        for line_no, rec in node_recs:
            _ingest_node(graph, ontology, report, line_no, rec)
        for line_no, rec in other_recs:
            if rec["rec"] == "group":
                _ingest_group(graph, ontology, report, line_no, rec)
            else:
                _ingest_edge(graph, ontology, report, line_no, rec)
    return report


def ingest_file(path, ontology: Ontology, graph: Graph) -> IngestReport:
    with open(path, "r", encoding="utf-8") as fh:
        return ingest_facts(fh, ontology, graph)


@dataclass(frozen=True)
class AssignGroupResult:
    added: int
    removed: int
    skipped: tuple  # member ids that do not exist


def assign_group(graph: Graph, ontology: Ontology, group_id: str, member_ids,
                 kind: str | None = None, name: str = "") -> AssignGroupResult:
    """Assign members to a logical group, creating the group node if needed.

    For partition grouping kinds (Application), re-assignment moves
    membership: the member's previous parent edge of the same kind is
    removed. Unknown member ids are skipped and returned.
    """
    report = IngestReport()  # reuses the membership machinery's reporting
    with graph.batch():
        if graph.has_node(group_id):
            group_node = graph.node(group_id)
            decl = ontology.node_kinds.get(group_node.kind)
            if decl is None or decl.role_class != "grouping":
                raise InvalidInput(f"node {group_id!r} is not a grouping node")
        else:
            if kind is None:
                raise InvalidInput(
                    f"group {group_id!r} does not exist; pass a grouping kind to create it")
            decl = ontology.node_kinds.get(kind)
            if decl is None or decl.role_class != "grouping":
                raise InvalidInput(f"{kind!r} is not a declared grouping kind")
            graph.upsert_node(ArtifactNode(group_id, kind, name or group_id, {}))
            group_node = graph.node(group_id)
        has_decl = ontology.logical_kind_for(group_node.kind)
        if has_decl is None:
            raise InvalidInput(
                f"no logical edge kind declared for grouping kind {group_node.kind!r}")
        added = removed = 0
        skipped = []
        for member_id in member_ids:
            if not graph.has_node(member_id):
                skipped.append(member_id)
                continue
            a, r = _assign_member(graph, ontology, report, 0, group_node, member_id, has_decl)
            added += a
            removed += r
        if report.violations:
            raise InvalidInput("; ".join(v.message for v in report.violations))
    return AssignGroupResult(added=added, removed=removed, skipped=tuple(skipped))
