"""DOT and GraphML export, bit-stable for fixed inputs.

Whole-graph exports carry every node and edge (logical edges included);
increment exports carry the members plus their one-hop boundary
neighbors, with boundary edges colored by the workbench convention
(inside-out red, outside-in yellow). Elements are emitted in sorted
order so repeated exports of the same graph are byte-identical.
"""

from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from .graph import Graph
from .increments import Increment
from .ontology import Ontology

INSIDE_OUT_COLOR = "red"
OUTSIDE_IN_COLOR = "yellow"


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _edge_sort_key(edge):
    return (edge.src, edge.dst, edge.kind, edge.id)


def graph_to_dot(graph: Graph) -> str:
    lines = ["digraph inckg {", "  rankdir=LR;"]
    for node in graph.nodes():
        label = f"{node.name or node.id}\\n({node.kind})"
        lines.append(f"  {_dot_quote(node.id)} [label={_dot_quote(label)}];")
    for edge in sorted(graph.edges(), key=_edge_sort_key):
        lines.append(
            f"  {_dot_quote(edge.src)} -> {_dot_quote(edge.dst)} "
            f"[label={_dot_quote(edge.kind)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _increment_scope(graph: Graph, ontology: Ontology, increment: Increment):
    """(node ids, plain edges, boundary class by edge id) for an increment
    export: members, boundary neighbors, and every non-logical edge with
    at least one member endpoint."""
    members = set(increment.members)
    boundary_class = {b.edge.id: b.direction_class for b in increment.boundary}
    node_ids = set(members)
    edges = []
    seen = set()
    for node_id in sorted(members):
        for eid in graph.out_edge_ids(node_id) + graph.in_edge_ids(node_id):
            if eid in seen:
                continue
            seen.add(eid)
            edge = graph.edge(eid)
            if edge.kind in ontology.logical_edge_kinds:
                continue
            edges.append(edge)
            node_ids.add(edge.src)
            node_ids.add(edge.dst)
    edges.sort(key=_edge_sort_key)
    return node_ids, edges, boundary_class


def increment_to_dot(graph: Graph, ontology: Ontology, increment: Increment) -> str:
    members = set(increment.members)
    node_ids, edges, boundary_class = _increment_scope(graph, ontology, increment)
    lines = ["digraph increment {", "  rankdir=LR;"]
    for node_id in sorted(node_ids):
        node = graph.node(node_id)
        label = f"{node.name or node.id}\\n({node.kind})"
        style = ' style=filled fillcolor="lightgrey"' if node_id in members else ""
        lines.append(f"  {_dot_quote(node.id)} [label={_dot_quote(label)}{style}];")
    for edge in edges:
        color = ""
        direction_class = boundary_class.get(edge.id)
        if direction_class == "inside_out":
            color = f' color="{INSIDE_OUT_COLOR}"'
        elif direction_class == "outside_in":
            color = f' color="{OUTSIDE_IN_COLOR}"'
        lines.append(
            f"  {_dot_quote(edge.src)} -> {_dot_quote(edge.dst)} "
            f"[label={_dot_quote(edge.kind)}{color}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# GraphML
# ---------------------------------------------------------------------------


def _attr_str(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ",".join(value)
    return str(value)


def _graphml(nodes, edges, extra_node_data=None, extra_edge_data=None) -> str:
    """Serialize node/edge tables to GraphML. All data values are emitted
    as strings (export-only format, no round-trip)."""
    extra_node_data = extra_node_data or {}
    extra_edge_data = extra_edge_data or {}
    node_attr_names = sorted({name for n in nodes for name in n.attrs})
    edge_attr_names = sorted({name for e in edges for name in e.attrs})
    extra_node_keys = sorted({name for data in extra_node_data.values() for name in data})
    extra_edge_keys = sorted({name for data in extra_edge_data.values() for name in data})

    keys = []
    key_ids = {}

    def declare(domain: str, name: str):
        key_id = f"k{len(keys)}"
        key_ids[(domain, name)] = key_id
        keys.append(
            f'  <key id="{key_id}" for="{domain}" attr.name={quoteattr(name)} attr.type="string"/>'
        )

    for name in ["kind", "name"] + node_attr_names + extra_node_keys:
        if ("node", name) not in key_ids:
            declare("node", name)
    for name in ["kind"] + edge_attr_names + extra_edge_keys:
        if ("edge", name) not in key_ids:
            declare("edge", name)

    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">']
    lines.extend(keys)
    lines.append('  <graph id="G" edgedefault="directed">')
    for node in nodes:
        lines.append(f"    <node id={quoteattr(node.id)}>")
        data = {"kind": node.kind, "name": node.name}
        data.update({k: _attr_str(v) for k, v in sorted(node.attrs.items())})
        data.update(extra_node_data.get(node.id, {}))
        for name in sorted(data):
            lines.append(
                f'      <data key="{key_ids[("node", name)]}">{escape(str(data[name]))}</data>')
        lines.append("    </node>")
    for edge in edges:
        lines.append(
            f"    <edge id={quoteattr(edge.id)} source={quoteattr(edge.src)} "
            f"target={quoteattr(edge.dst)}>")
        data = {"kind": edge.kind}
        data.update({k: _attr_str(v) for k, v in sorted(edge.attrs.items())})
        data.update(extra_edge_data.get(edge.id, {}))
        for name in sorted(data):
            lines.append(
                f'      <data key="{key_ids[("edge", name)]}">{escape(str(data[name]))}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def graph_to_graphml(graph: Graph) -> str:
    return _graphml(graph.nodes(), sorted(graph.edges(), key=_edge_sort_key))


def increment_to_graphml(graph: Graph, ontology: Ontology, increment: Increment) -> str:
    members = set(increment.members)
    node_ids, edges, boundary_class = _increment_scope(graph, ontology, increment)
    nodes = [graph.node(node_id) for node_id in sorted(node_ids)]
    extra_node_data = {n.id: {"member": "true" if n.id in members else "false"} for n in nodes}
    extra_edge_data = {e.id: {"boundary": boundary_class.get(e.id, "")} for e in edges}
    return _graphml(nodes, edges, extra_node_data, extra_edge_data)


def export_graph(graph: Graph, fmt: str, ontology: Optional[Ontology] = None,
                 increment: Optional[Increment] = None) -> str:
    if fmt not in ("dot", "graphml"):
        raise ValueError(f"unknown export format {fmt!r}")
    if increment is not None:
        if ontology is None:
            raise ValueError("increment export needs an ontology")
        return (increment_to_dot if fmt == "dot" else increment_to_graphml)(
            graph, ontology, increment)
    return (graph_to_dot if fmt == "dot" else graph_to_graphml)(graph)
