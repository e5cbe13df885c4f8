"""Deterministic JSON snapshot container for graphs and workspace state.

Layout (format tag ``inckg/1``): one JSON document with sorted keys and
sorted node/edge tables, so two graphs with identical content serialize
byte-identically::

    {
      "format": "inckg/1",
      "graph_version": 7,
      "nodes": [{"id": ..., "kind": ..., "name": ..., "attrs": {...}}, ...],
      "edges": [{"id": ..., "src": ..., "dst": ..., "kind": ..., "attrs": {...}}, ...],
      "increments": [...]        # optional, present in workspace snapshots
    }

Loading parses and validates the whole document before constructing the
graph; a truncated or corrupt file raises and leaves nothing behind.
"""

from __future__ import annotations

import json
import os
from typing import Optional

from .errors import SnapshotFormatError
from .graph import ArtifactNode, Graph, RelationEdge, edge_key

FORMAT = "inckg/1"


def _node_doc(node: ArtifactNode) -> dict:
    return {"id": node.id, "kind": node.kind, "name": node.name, "attrs": node.attrs}


def _edge_doc(edge: RelationEdge) -> dict:
    return {"id": edge.id, "src": edge.src, "dst": edge.dst, "kind": edge.kind, "attrs": edge.attrs}


def dump(graph: Graph, increments: Optional[list] = None) -> str:
    doc = {
        "format": FORMAT,
        "graph_version": graph.version,
        "nodes": [_node_doc(n) for n in graph.nodes()],
        "edges": [_edge_doc(e) for e in graph.edges()],
    }
    if increments is not None:
        doc["increments"] = increments
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def save(graph: Graph, path: str, increments: Optional[list] = None) -> None:
    """Write a snapshot atomically (temp file + rename)."""
    data = dump(graph, increments)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _require(doc: dict, key: str, types) -> object:
    if key not in doc:
        raise SnapshotFormatError(f"snapshot is missing required key {key!r}")
    value = doc[key]
    if not isinstance(value, types):
        raise SnapshotFormatError(f"snapshot key {key!r} has the wrong type")
    return value


def loads(data: str) -> tuple:
    """Parse a snapshot string into (Graph, increment docs)."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SnapshotFormatError(f"snapshot is not valid JSON: {exc.msg}", exc.pos) from exc
    if not isinstance(doc, dict):
        raise SnapshotFormatError("snapshot root must be an object")
    fmt = _require(doc, "format", str)
    if fmt != FORMAT:
        raise SnapshotFormatError(f"unsupported snapshot format {fmt!r}, expected {FORMAT!r}")
    version = _require(doc, "graph_version", int)
    if isinstance(version, bool) or version < 0:
        raise SnapshotFormatError("graph_version must be a non-negative integer")

    nodes: dict = {}
    for entry in _require(doc, "nodes", list):
        if not isinstance(entry, dict):
            raise SnapshotFormatError("node table entries must be objects")
        node = ArtifactNode(
            id=entry.get("id", ""),
            kind=entry.get("kind", ""),
            name=entry.get("name", ""),
            attrs=entry.get("attrs", {}) or {},
        )
        if not node.id or not node.kind:
            raise SnapshotFormatError(f"node entry {entry.get('id')!r} lacks id or kind")
        if node.id in nodes:
            raise SnapshotFormatError(f"duplicate node id {node.id!r} in snapshot")
        nodes[node.id] = node

    edges: dict = {}
    for entry in _require(doc, "edges", list):
        if not isinstance(entry, dict):
            raise SnapshotFormatError("edge table entries must be objects")
        attrs = entry.get("attrs", {}) or {}
        edge = RelationEdge(
            id=entry.get("id", ""),
            src=entry.get("src", ""),
            dst=entry.get("dst", ""),
            kind=entry.get("kind", ""),
            attrs=attrs,
        )
        for endpoint in (edge.src, edge.dst):
            if endpoint not in nodes:
                raise SnapshotFormatError(
                    f"edge {edge.id!r} references missing node {endpoint!r}"
                )
        expected = edge_key(edge.src, edge.dst, edge.kind, attrs)
        if edge.id != expected:
            raise SnapshotFormatError(
                f"edge id {edge.id!r} does not match its content key {expected!r}"
            )
        edges[edge.id] = edge

    increments = doc.get("increments", [])
    if not isinstance(increments, list):
        raise SnapshotFormatError("increments table must be a list")
    return Graph._restore(nodes, edges, version), increments


def load(path: str) -> tuple:
    """Load (Graph, increment docs) from a snapshot file."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def load_graph(path: str) -> Graph:
    return load(path)[0]
