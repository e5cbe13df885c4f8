"""In-memory directed property multigraph with stable ids and versioning.

Design notes:

* Mutations run in batches. A batch works on copy-on-write structures and
  is swapped in atomically on commit, so concurrent readers always observe
  a fully committed state and the version counter advances once per batch.
* Edge identity is content-derived from (src, dst, kind, attrs). Identical
  records therefore collapse into one edge (de-duplication) while records
  differing in any attribute coexist (multigraph).
* All iteration orders are sorted, so expansions, reports, and exports
  built on top are reproducible.
"""

from __future__ import annotations

import hashlib
import json
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidInput, NotFound, ReferentialError

# Attribute values: string | integer | boolean | list of strings.
Attrs = dict

_SCALAR_TYPES = (str, bool, int)


def _check_attrs(attrs: dict) -> None:
    for key, value in attrs.items():
        if not isinstance(key, str) or not key:
            raise InvalidInput(f"attribute names must be non-empty strings, got {key!r}")
        if isinstance(value, list):
            if not all(isinstance(item, str) for item in value):
                raise InvalidInput(f"attribute {key!r}: list values may only contain strings")
        elif not isinstance(value, _SCALAR_TYPES):
            raise InvalidInput(
                f"attribute {key!r}: unsupported value type {type(value).__name__}"
            )


@dataclass(frozen=True)
class ArtifactNode:
    """A typed, attributed artifact (program, transaction, table, ...)."""

    id: str
    kind: str
    name: str = ""
    attrs: Attrs = field(default_factory=dict)


@dataclass(frozen=True)
class RelationEdge:
    """A typed, attributed directed dependency between two artifacts."""

    id: str
    src: str
    dst: str
    kind: str
    attrs: Attrs = field(default_factory=dict)


def edge_key(src: str, dst: str, kind: str, attrs: Attrs | None = None) -> str:
    """Content-derived edge id: identical records collide by construction."""
    canon = json.dumps([src, dst, kind, attrs or {}], sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(canon.encode("utf-8")).hexdigest()[:20]


def make_edge(src: str, dst: str, kind: str, attrs: Attrs | None = None) -> RelationEdge:
    """Build an edge record with its canonical content-derived id."""
    attrs = dict(attrs or {})
    return RelationEdge(id=edge_key(src, dst, kind, attrs), src=src, dst=dst, kind=kind, attrs=attrs)


@dataclass
class _State:
    """One committed, internally consistent graph state."""

    nodes: dict
    edges: dict
    out: dict  # node id -> tuple of edge ids, sorted
    inc: dict  # node id -> tuple of edge ids, sorted
    version: int


class _Txn:
    """Copy-on-write working set for one mutation batch."""

    __slots__ = ("nodes", "edges", "out", "inc", "version", "owner", "ops",
                 "_dirty_out", "_dirty_in")

    def __init__(self, base: _State):
        self.nodes = dict(base.nodes)
        self.edges = dict(base.edges)
        self.out = dict(base.out)
        self.inc = dict(base.inc)
        self.version = base.version
        self.owner = threading.get_ident()
        self.ops = 0
        self._dirty_out: set = set()
        self._dirty_in: set = set()

    def out_list(self, node_id: str) -> list:
        if node_id not in self._dirty_out:
            self.out[node_id] = list(self.out.get(node_id, ()))
            self._dirty_out.add(node_id)
        return self.out[node_id]

    def in_list(self, node_id: str) -> list:
        if node_id not in self._dirty_in:
            self.inc[node_id] = list(self.inc.get(node_id, ()))
            self._dirty_in.add(node_id)
        return self.inc[node_id]

    def commit(self) -> _State:
        for node_id in self._dirty_out:
            self.out[node_id] = tuple(sorted(self.out[node_id]))
        for node_id in self._dirty_in:
            self.inc[node_id] = tuple(sorted(self.inc[node_id]))
        return _State(self.nodes, self.edges, self.out, self.inc, self.version + 1)


class Graph:
    """Embedded property multigraph: single writer, many concurrent readers.

    Readers never block; they capture the current committed state once per
    operation. Writers serialize on a lock and publish whole batches
    atomically. Returned node/edge records are frozen dataclasses and must
    be treated as immutable.
    """

    def __init__(self):
        self._write_lock = threading.RLock()
        self._state = _State({}, {}, {}, {}, 0)
        self._txn: Optional[_Txn] = None
        self._depth = 0

    # -- read side -----------------------------------------------------

    def _view(self):
        # The writer thread sees its own in-flight batch; everyone else
        # sees the last committed state.
        txn = self._txn
        if txn is not None and txn.owner == threading.get_ident():
            return txn
        return self._state

    @property
    def version(self) -> int:
        return self._view().version

    def has_node(self, node_id: str) -> bool:
        return node_id in self._view().nodes

    def node(self, node_id: str) -> ArtifactNode:
        try:
            return self._view().nodes[node_id]
        except KeyError:
            raise NotFound(f"unknown node: {node_id}") from None

    def edge(self, edge_id: str) -> RelationEdge:
        try:
            return self._view().edges[edge_id]
        except KeyError:
            raise NotFound(f"unknown edge: {edge_id}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._view().edges

    @property
    def node_count(self) -> int:
        return len(self._view().nodes)

    @property
    def edge_count(self) -> int:
        return len(self._view().edges)

    def node_ids(self) -> list:
        return sorted(self._view().nodes)

    def nodes(self) -> list:
        st = self._view()
        return [st.nodes[k] for k in sorted(st.nodes)]

    def edges(self) -> list:
        st = self._view()
        return [st.edges[k] for k in sorted(st.edges)]

    def counts_by_kind(self) -> dict:
        counts: dict = {}
        for node in self._view().nodes.values():
            counts[node.kind] = counts.get(node.kind, 0) + 1
        return dict(sorted(counts.items()))

    def edge_counts_by_kind(self) -> dict:
        counts: dict = {}
        for edge in self._view().edges.values():
            counts[edge.kind] = counts.get(edge.kind, 0) + 1
        return dict(sorted(counts.items()))

    def out_edge_ids(self, node_id: str) -> tuple:
        return tuple(self._view().out.get(node_id, ()))

    def in_edge_ids(self, node_id: str) -> tuple:
        return tuple(self._view().inc.get(node_id, ()))

    def neighbors(self, node_id: str, direction: str = "both",
                  edge_kinds: Optional[Iterable] = None) -> list:
        """Incident edges matching direction/kind filter, each paired with
        the far endpoint. Sorted by edge id; for direction='both' every
        incident edge appears exactly once (self-loops included once)."""
        if direction not in ("out", "in", "both"):
            raise InvalidInput(f"direction must be out, in, or both, got {direction!r}")
        st = self._view()
        if node_id not in st.nodes:
            raise NotFound(f"unknown node: {node_id}")
        kinds = frozenset(edge_kinds) if edge_kinds is not None else None
        seen: set = set()
        result = []
        if direction in ("out", "both"):
            for eid in st.out.get(node_id, ()):
                edge = st.edges[eid]
                if kinds is not None and edge.kind not in kinds:
                    continue
                seen.add(eid)
                result.append((edge, st.nodes[edge.dst]))
        if direction in ("in", "both"):
            for eid in st.inc.get(node_id, ()):
                if direction == "both" and eid in seen:
                    continue
                edge = st.edges[eid]
                if kinds is not None and edge.kind not in kinds:
                    continue
                result.append((edge, st.nodes[edge.src]))
        result.sort(key=lambda pair: pair[0].id)
        return result

    # -- write side ----------------------------------------------------

    @contextmanager
    def batch(self):
        """Group mutations into one atomic commit; version bumps once.

        A batch that raises is discarded entirely. Nested batches join
        the outermost one.
        """
        self._write_lock.acquire()
        if self._txn is None:
            self._txn = _Txn(self._state)
        self._depth += 1
        try:
            yield self
        except BaseException:
            self._depth -= 1
            if self._depth == 0:
                self._txn = None
            self._write_lock.release()
            raise
        else:
            self._depth -= 1
            if self._depth == 0:
                txn = self._txn
                self._txn = None
                if txn.ops:
                    self._state = txn.commit()
            self._write_lock.release()

    def upsert_node(self, node: ArtifactNode) -> str:
        """Insert a node, or merge attrs into an existing one (incoming
        keys win; incoming kind replaces; empty incoming name keeps the
        existing one)."""
        if not isinstance(node.id, str) or not node.id:
            raise InvalidInput("node id must be a non-empty string")
        if not isinstance(node.kind, str) or not node.kind:
            raise InvalidInput(f"node {node.id!r}: kind must be a non-empty string")
        _check_attrs(node.attrs)
        with self.batch():
            txn = self._txn
            txn.ops += 1
            prev = txn.nodes.get(node.id)
            if prev is None:
                txn.nodes[node.id] = ArtifactNode(node.id, node.kind, node.name, dict(node.attrs))
            else:
                merged = dict(prev.attrs)
                merged.update(node.attrs)
                txn.nodes[node.id] = ArtifactNode(
                    node.id, node.kind, node.name or prev.name, merged
                )
        return node.id

    def upsert_edge(self, edge: RelationEdge) -> str:
        """Insert an edge; a byte-identical record is a no-op.

        The stored id is always the content-derived key; any id on the
        input record is ignored. Returns the canonical id.
        """
        if not edge.src or not edge.dst or not edge.kind:
            raise InvalidInput("edge src, dst, and kind must be non-empty")
        _check_attrs(edge.attrs)
        with self.batch():
            txn = self._txn
            for endpoint in (edge.src, edge.dst):
                if endpoint not in txn.nodes:
                    raise ReferentialError(endpoint)
            txn.ops += 1
            eid = edge_key(edge.src, edge.dst, edge.kind, edge.attrs)
            if eid not in txn.edges:
                txn.edges[eid] = RelationEdge(eid, edge.src, edge.dst, edge.kind, dict(edge.attrs))
                txn.out_list(edge.src).append(eid)
                txn.in_list(edge.dst).append(eid)
        return eid

    def add_edge(self, src: str, dst: str, kind: str, attrs: Attrs | None = None) -> str:
        return self.upsert_edge(make_edge(src, dst, kind, attrs))

    def remove_edge(self, edge_id: str) -> None:
        with self.batch():
            txn = self._txn
            edge = txn.edges.get(edge_id)
            if edge is None:
                raise NotFound(f"unknown edge: {edge_id}")
            txn.ops += 1
            del txn.edges[edge_id]
            txn.out_list(edge.src).remove(edge_id)
            txn.in_list(edge.dst).remove(edge_id)

    # -- restore (snapshot loader) ---------------------------------------

    @classmethod
    def _restore(cls, nodes: dict, edges: dict, version: int) -> "Graph":
        """Rebuild a graph from already-validated tables, preserving the
        recorded version. Used by the snapshot loader only."""
        out: dict = {}
        inc: dict = {}
        for eid, edge in edges.items():
            out.setdefault(edge.src, []).append(eid)
            inc.setdefault(edge.dst, []).append(eid)
        graph = cls()
        graph._state = _State(
            dict(nodes),
            dict(edges),
            {k: tuple(sorted(v)) for k, v in out.items()},
            {k: tuple(sorted(v)) for k, v in inc.items()},
            version,
        )
        return graph
