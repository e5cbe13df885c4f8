"""Increments: bounded scopes of seed artifacts plus their neighborhood.

The engine grows an increment from its seeds (and manual pins) to a
fixpoint under a traversal policy, classifies every non-logical edge
crossing the member boundary as inside-out (source inside) or outside-in
(source outside), and aggregates per-member metrics. Expansion is a pure
function of (graph version, seeds, pins, policy); worklist order is
sorted so traces are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import InvalidInput, NotFound, SnapshotFormatError
from .graph import Graph, RelationEdge
from .ontology import Ontology
from .policy import TraversalPolicy, validate_policy

INSIDE_OUT = "inside_out"
OUTSIDE_IN = "outside_in"


@dataclass(frozen=True)
class BoundaryEdge:
    edge: RelationEdge
    direction_class: str  # inside_out | outside_in
    inner_node: str
    outer_node: str
    outer_application: Optional[str]  # partition-group parent of the outer node


@dataclass(frozen=True)
class AggregateMetrics:
    total_loc: int = 0
    total_cyclomatic: int = 0
    member_count_by_kind: dict = field(default_factory=dict)
    metrics_missing: int = 0  # code members lacking loc or cyclomatic


@dataclass(frozen=True)
class Increment:
    id: str
    name: str
    seeds: frozenset
    members: frozenset
    manual_adds: frozenset = frozenset()
    manual_removes: frozenset = frozenset()
    policy_ref: str = "default"
    graph_version: int = 0
    boundary: tuple = ()  # BoundaryEdge, sorted by edge id
    metrics: AggregateMetrics = AggregateMetrics()


@dataclass(frozen=True)
class ImpactEdge:
    edge: RelationEdge
    change: str  # added_to_boundary | removed_from_boundary


@dataclass(frozen=True)
class ImpactReport:
    node_id: str
    boundary_before: int
    boundary_after: int
    delta: int
    affected_edges: tuple


# ---------------------------------------------------------------------------
# Application lookup
# ---------------------------------------------------------------------------


def application_of(graph: Graph, ontology: Ontology, node_id: str) -> Optional[str]:
    """Id of the node's partition-group parent (its Application), if any."""
    for eid in graph.in_edge_ids(node_id):
        edge = graph.edge(eid)
        if edge.kind not in ontology.logical_edge_kinds:
            continue
        src_decl = ontology.node_kinds.get(graph.node(edge.src).kind)
        if src_decl is not None and src_decl.partition:
            return edge.src
    return None


class _AppCache:
    __slots__ = ("graph", "ontology", "cache")

    def __init__(self, graph, ontology):
        self.graph = graph
        self.ontology = ontology
        self.cache: dict = {}

    def __call__(self, node_id: str) -> Optional[str]:
        if node_id not in self.cache:
            self.cache[node_id] = application_of(self.graph, self.ontology, node_id)
        return self.cache[node_id]


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------


def _check_member_candidate(graph: Graph, ontology: Ontology, node_id: str, what: str) -> None:
    node = graph.node(node_id)  # raises NotFound
    if ontology.is_grouping(node.kind):
        raise InvalidInput(f"{what} {node_id!r} is a grouping node; grouping nodes "
                           "cannot be increment members")


def expand_members(graph: Graph, ontology: Ontology, policy: TraversalPolicy,
                   start_ids: Iterable, blocked: frozenset = frozenset()) -> set:
    """Rule-closure of the start set: breadth-first worklist to a fixpoint
    (or max_depth). Blocked ids are never added; their incident edges end
    up on the boundary."""
    app_of = _AppCache(graph, ontology)
    members: set = set()
    queue: deque = deque()
    seen: set = set()

    for node_id in sorted(set(start_ids)):
        _check_member_candidate(graph, ontology, node_id, "seed")
        if node_id in blocked:
            raise InvalidInput(f"seed {node_id!r} is also marked removed")
        rule_set = policy.rule_set_for_seed(ontology.role_class(graph.node(node_id).kind))
        members.add(node_id)
        key = (node_id, rule_set.name)
        if key not in seen:
            seen.add(key)
            queue.append((node_id, rule_set.name, 0))

    logical = ontology.logical_edge_kinds
    while queue:
        node_id, rs_name, depth = queue.popleft()
        if policy.max_depth is not None and depth >= policy.max_depth:
            continue
        rule_set = policy.rule_sets[rs_name]
        node = graph.node(node_id)
        role = ontology.role_class(node.kind)
        for eid, direction in _incident(graph, node_id):
            edge = graph.edge(eid)
            if edge.kind in logical:
                continue
            far_id = edge.dst if direction == "out" else edge.src
            if far_id in blocked:
                continue
            far = graph.node(far_id)
            if ontology.is_grouping(far.kind):
                continue
            rule = rule_set.lookup(node.kind, role, edge.kind, direction)
            if rule is None or rule.action == "stop":
                continue
            if rule.guard == "same_application":
                near_app = app_of(node_id)
                if near_app is None or near_app != app_of(far_id):
                    continue
            members.add(far_id)
            if rule.action == "traverse":
                key = (far_id, rs_name)
                if key not in seen:
                    seen.add(key)
                    queue.append((far_id, rs_name, depth + 1))
    return members


def _incident(graph: Graph, node_id: str):
    for eid in graph.out_edge_ids(node_id):
        yield eid, "out"
    for eid in graph.in_edge_ids(node_id):
        yield eid, "in"


# ---------------------------------------------------------------------------
# Boundary and metrics
# ---------------------------------------------------------------------------


def compute_boundary(graph: Graph, ontology: Ontology, members) -> list:
    """Every non-logical edge with exactly one endpoint among members,
    classified by source membership. Sorted by edge id."""
    members = set(members)
    app_of = _AppCache(graph, ontology)
    logical = ontology.logical_edge_kinds
    crossing = []
    for node_id in sorted(members):
        for eid in graph.out_edge_ids(node_id):
            edge = graph.edge(eid)
            if edge.kind in logical or edge.dst in members:
                continue
            crossing.append(BoundaryEdge(edge, INSIDE_OUT, node_id, edge.dst,
                                         app_of(edge.dst)))
        for eid in graph.in_edge_ids(node_id):
            edge = graph.edge(eid)
            if edge.kind in logical or edge.src in members:
                continue
            crossing.append(BoundaryEdge(edge, OUTSIDE_IN, node_id, edge.src,
                                         app_of(edge.src)))
    crossing.sort(key=lambda b: b.edge.id)
    return crossing


def split_boundary(boundary) -> tuple:
    inside_out = [b for b in boundary if b.direction_class == INSIDE_OUT]
    outside_in = [b for b in boundary if b.direction_class == OUTSIDE_IN]
    return inside_out, outside_in


def compute_metrics(graph: Graph, ontology: Ontology, members) -> AggregateMetrics:
    total_loc = 0
    total_cyc = 0
    missing = 0
    by_kind: dict = {}
    for node_id in members:
        node = graph.node(node_id)
        by_kind[node.kind] = by_kind.get(node.kind, 0) + 1
        if ontology.role_class(node.kind) != "code":
            continue
        loc = node.attrs.get("loc")
        cyc = node.attrs.get("cyclomatic")
        loc_ok = isinstance(loc, int) and not isinstance(loc, bool)
        cyc_ok = isinstance(cyc, int) and not isinstance(cyc, bool)
        total_loc += loc if loc_ok else 0
        total_cyc += cyc if cyc_ok else 0
        if not (loc_ok and cyc_ok):
            missing += 1
    return AggregateMetrics(
        total_loc=total_loc,
        total_cyclomatic=total_cyc,
        member_count_by_kind=dict(sorted(by_kind.items())),
        metrics_missing=missing,
    )


# ---------------------------------------------------------------------------
# Increment lifecycle
# ---------------------------------------------------------------------------


def _recompute(graph, ontology, increment: Increment, members) -> Increment:
    members = frozenset(members)
    return replace(
        increment,
        members=members,
        boundary=tuple(compute_boundary(graph, ontology, members)),
        metrics=compute_metrics(graph, ontology, members),
        graph_version=graph.version,
    )


def create_increment(graph: Graph, ontology: Ontology, policy: TraversalPolicy,
                     inc_id: str, name: str, seeds: Iterable) -> Increment:
    """A fresh increment: members = seeds, boundary and metrics computed,
    no expansion performed yet."""
    seeds = frozenset(seeds)
    if not seeds:
        raise InvalidInput("seed set must not be empty")
    validate_policy(policy, ontology)
    for seed in sorted(seeds):
        _check_member_candidate(graph, ontology, seed, "seed")
        # Fail now, not at expand time, if the policy cannot dispatch the seed.
        policy.rule_set_for_seed(ontology.role_class(graph.node(seed).kind))
    increment = Increment(id=inc_id, name=name, seeds=seeds, members=seeds,
                          policy_ref=policy.name)
    return _recompute(graph, ontology, increment, seeds)


def expand(graph: Graph, ontology: Ontology, policy: TraversalPolicy,
           increment: Increment) -> Increment:
    """Breadth-first closure from seeds plus manual adds under the policy;
    manual removes are never re-added. Idempotent at a fixed graph version."""
    validate_policy(policy, ontology)
    members = expand_members(graph, ontology, policy,
                             increment.seeds | increment.manual_adds,
                             increment.manual_removes)
    return _recompute(graph, ontology, increment, members)


def edit_members(graph: Graph, ontology: Ontology, increment: Increment,
                 add: Iterable = (), remove: Iterable = ()) -> Increment:
    """Pin nodes into / out of the increment and recompute boundary and
    metrics (no expansion). Pins survive subsequent expands."""
    add = set(add)
    remove = set(remove)
    overlap = add & remove
    if overlap:
        raise InvalidInput(f"cannot both add and remove: {sorted(overlap)}")
    bad_seeds = remove & increment.seeds
    if bad_seeds:
        raise InvalidInput("seed cannot be removed")
    for node_id in sorted(add):
        _check_member_candidate(graph, ontology, node_id, "added member")
    for node_id in sorted(remove):
        graph.node(node_id)  # existence check

    # Adding an id that is already a member is a no-op (it does not become
    # a pin); adding a previously removed id clears that pin.
    new_adds = {n for n in add if n not in increment.members}
    manual_adds = (increment.manual_adds | new_adds) - remove
    manual_removes = (increment.manual_removes | remove) - add
    members = (increment.members | new_adds) - remove
    updated = replace(increment, manual_adds=frozenset(manual_adds),
                      manual_removes=frozenset(manual_removes))
    return _recompute(graph, ontology, updated, members)


def move_impact(graph: Graph, ontology: Ontology, increment: Increment,
                node_id: str) -> ImpactReport:
    """Side-effect-free what-if: boundary size if the node were pulled in
    (when outside) or pushed out (when inside)."""
    if node_id in increment.seeds:
        raise InvalidInput("seed cannot be moved")
    _check_member_candidate(graph, ontology, node_id, "node")
    before = compute_boundary(graph, ontology, increment.members)
    if node_id in increment.members:
        hypothetical = increment.members - {node_id}
    else:
        hypothetical = increment.members | {node_id}
    after = compute_boundary(graph, ontology, hypothetical)
    before_ids = {b.edge.id for b in before}
    after_ids = {b.edge.id for b in after}
    affected = [ImpactEdge(graph.edge(eid), "added_to_boundary")
                for eid in sorted(after_ids - before_ids)]
    affected += [ImpactEdge(graph.edge(eid), "removed_from_boundary")
                 for eid in sorted(before_ids - after_ids)]
    affected.sort(key=lambda item: item.edge.id)
    return ImpactReport(
        node_id=node_id,
        boundary_before=len(before),
        boundary_after=len(after),
        delta=len(after) - len(before),
        affected_edges=tuple(affected),
    )


# ---------------------------------------------------------------------------
# Serialization (used by workspace snapshots)
# ---------------------------------------------------------------------------


def increment_to_doc(increment: Increment) -> dict:
    return {
        "id": increment.id,
        "name": increment.name,
        "seeds": sorted(increment.seeds),
        "members": sorted(increment.members),
        "manual_adds": sorted(increment.manual_adds),
        "manual_removes": sorted(increment.manual_removes),
        "policy_ref": increment.policy_ref,
        "graph_version": increment.graph_version,
        "boundary": [
            {
                "edge_id": b.edge.id,
                "direction_class": b.direction_class,
                "inner_node": b.inner_node,
                "outer_node": b.outer_node,
                "outer_application": b.outer_application,
            }
            for b in increment.boundary
        ],
        "metrics": {
            "total_loc": increment.metrics.total_loc,
            "total_cyclomatic": increment.metrics.total_cyclomatic,
            "member_count_by_kind": increment.metrics.member_count_by_kind,
            "metrics_missing": increment.metrics.metrics_missing,
        },
    }


def increment_from_doc(doc: dict, graph: Graph) -> Increment:
    try:
        boundary = tuple(
            BoundaryEdge(
                edge=graph.edge(b["edge_id"]),
                direction_class=b["direction_class"],
                inner_node=b["inner_node"],
                outer_node=b["outer_node"],
                outer_application=b.get("outer_application"),
            )
            for b in doc.get("boundary", [])
        )
        metrics_doc = doc.get("metrics", {})
        return Increment(
            id=doc["id"],
            name=doc.get("name", doc["id"]),
            seeds=frozenset(doc.get("seeds", [])),
            members=frozenset(doc.get("members", [])),
            manual_adds=frozenset(doc.get("manual_adds", [])),
            manual_removes=frozenset(doc.get("manual_removes", [])),
            policy_ref=doc.get("policy_ref", "default"),
            graph_version=int(doc.get("graph_version", 0)),
            boundary=boundary,
            metrics=AggregateMetrics(
                total_loc=int(metrics_doc.get("total_loc", 0)),
                total_cyclomatic=int(metrics_doc.get("total_cyclomatic", 0)),
                member_count_by_kind=dict(metrics_doc.get("member_count_by_kind", {})),
                metrics_missing=int(metrics_doc.get("metrics_missing", 0)),
            ),
        )
    except (KeyError, TypeError, ValueError, NotFound) as exc:
        raise SnapshotFormatError(f"corrupt increment record: {exc}") from exc
