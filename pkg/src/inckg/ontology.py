"""Declarative graph schema: node kinds, edge kinds, attributes, role classes.

An ontology is loaded from a YAML document and is immutable afterwards.
Node kinds carry a *role class* (code | data | control | grouping) so that
traversal policies can be written once and reused across languages and
platforms; edge kinds constrain their endpoint kinds and may be flagged
``logical`` for SME-asserted grouping relations (HAS), which are excluded
from traversal and boundary classification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .errors import OntologySchemaError
from .graph import Graph

ROLE_CLASSES = ("code", "data", "control", "grouping")
ATTR_TYPES = ("string", "integer", "boolean", "string_list")


@dataclass(frozen=True)
class AttrDecl:
    name: str
    type: str = "string"
    required: bool = False


@dataclass(frozen=True)
class NodeKindDecl:
    name: str
    role_class: str
    attrs: tuple = ()
    # partition=True on a grouping kind means each node may belong to at
    # most one group of this kind (Application membership is a partition).
    partition: bool = False


@dataclass(frozen=True)
class EdgeKindDecl:
    name: str
    src: frozenset
    dst: frozenset
    logical: bool = False
    attrs: tuple = ()


@dataclass(frozen=True)
class Ontology:
    version: str
    node_kinds: dict  # name -> NodeKindDecl
    edge_kinds: dict  # name -> EdgeKindDecl
    logical_edge_kinds: frozenset = field(default_factory=frozenset)
    partition_grouping_kinds: frozenset = field(default_factory=frozenset)

    def role_class(self, kind: str) -> Optional[str]:
        decl = self.node_kinds.get(kind)
        return decl.role_class if decl else None

    def is_grouping(self, kind: str) -> bool:
        return self.role_class(kind) == "grouping"

    def grouping_kinds(self) -> list:
        return sorted(k for k, d in self.node_kinds.items() if d.role_class == "grouping")

    def logical_kind_for(self, grouping_kind: str) -> Optional[EdgeKindDecl]:
        """The logical edge kind whose sources include the given grouping kind."""
        for name in sorted(self.edge_kinds):
            decl = self.edge_kinds[name]
            if decl.logical and grouping_kind in decl.src:
                return decl
        return None


@dataclass(frozen=True)
class Violation:
    """One ontology conformance problem found in a graph or facts record."""

    subject_type: str  # "node" | "edge" | "record"
    subject_id: str
    category: str  # unknown_kind | endpoint_kind | missing_attr | attr_type
    message: str


# ---------------------------------------------------------------------------
# Document loading
# ---------------------------------------------------------------------------


def _parse_attr_decls(raw, where: str, problems: list) -> tuple:
    decls = []
    seen = set()
    for item in raw or []:
        if not isinstance(item, dict) or "name" not in item:
            problems.append(f"{where}: attribute declarations need a name")
            continue
        name = str(item["name"])
        attr_type = str(item.get("type", "string"))
        if attr_type not in ATTR_TYPES:
            problems.append(f"{where}: attribute {name!r} has unknown type {attr_type!r}")
            continue
        if name in seen:
            problems.append(f"{where}: duplicate attribute {name!r}")
            continue
        seen.add(name)
        decls.append(AttrDecl(name=name, type=attr_type, required=bool(item.get("required", False))))
    return tuple(decls)


def ontology_from_doc(doc: dict) -> Ontology:
    """Build and validate an Ontology from a parsed document.

    Collects every schema problem and raises one OntologySchemaError
    listing all of them.
    """
    problems: list = []
    if not isinstance(doc, dict):
        raise OntologySchemaError(["ontology document must be a mapping"])

    node_kinds: dict = {}
    for item in doc.get("node_kinds", []) or []:
        if not isinstance(item, dict) or "name" not in item:
            problems.append("node kind declarations need a name")
            continue
        name = str(item["name"])
        role = str(item.get("role_class", ""))
        if role not in ROLE_CLASSES:
            problems.append(f"node kind {name!r}: unknown role class {role!r}")
            continue
        if name in node_kinds:
            problems.append(f"duplicate node kind {name!r}")
            continue
        partition = bool(item.get("partition", False))
        if partition and role != "grouping":
            problems.append(f"node kind {name!r}: partition is only valid on grouping kinds")
        node_kinds[name] = NodeKindDecl(
            name=name,
            role_class=role,
            attrs=_parse_attr_decls(item.get("attrs"), f"node kind {name!r}", problems),
            partition=partition,
        )

    grouping = {k for k, d in node_kinds.items() if d.role_class == "grouping"}

    edge_kinds: dict = {}
    for item in doc.get("edge_kinds", []) or []:
        if not isinstance(item, dict) or "name" not in item:
            problems.append("edge kind declarations need a name")
            continue
        name = str(item["name"])
        if name in edge_kinds:
            problems.append(f"duplicate edge kind {name!r}")
            continue
        if name in node_kinds:
            problems.append(f"kind name {name!r} is declared as both a node and an edge kind")
        src = [str(k) for k in item.get("src", []) or []]
        dst = [str(k) for k in item.get("dst", []) or []]
        if not src:
            problems.append(f"edge kind {name!r}: empty src endpoint set")
        if not dst:
            problems.append(f"edge kind {name!r}: empty dst endpoint set")
        for endpoint in src + dst:
            if endpoint not in node_kinds:
                problems.append(f"edge kind {name!r}: undeclared endpoint kind {endpoint!r}")
        logical = bool(item.get("logical", False))
        if logical:
            bad = [k for k in src if k in node_kinds and k not in grouping]
            if bad:
                problems.append(
                    f"edge kind {name!r}: logical edges may only originate from grouping kinds, "
                    f"got {sorted(bad)}"
                )
        else:
            bad = [k for k in src if k in grouping]
            if bad:
                problems.append(
                    f"edge kind {name!r}: grouping kinds may only source logical edges, "
                    f"got {sorted(bad)}"
                )
        edge_kinds[name] = EdgeKindDecl(
            name=name,
            src=frozenset(src),
            dst=frozenset(dst),
            logical=logical,
            attrs=_parse_attr_decls(item.get("attrs"), f"edge kind {name!r}", problems),
        )

    if problems:
        raise OntologySchemaError(problems)

    return Ontology(
        version=str(doc.get("version", "1")),
        node_kinds=node_kinds,
        edge_kinds=edge_kinds,
        logical_edge_kinds=frozenset(k for k, d in edge_kinds.items() if d.logical),
        partition_grouping_kinds=frozenset(
            k for k, d in node_kinds.items() if d.role_class == "grouping" and d.partition
        ),
    )


def parse_ontology(text: str) -> Ontology:
    return ontology_from_doc(yaml.safe_load(text))


def load_ontology(path) -> Ontology:
    return parse_ontology(Path(path).read_text(encoding="utf-8"))


def default_ontology_path() -> Path:
    return Path(str(resources.files("inckg").joinpath("data/default_ontology.yaml")))


def load_default_ontology() -> Ontology:
    return load_ontology(default_ontology_path())


# ---------------------------------------------------------------------------
# Graph validation
# ---------------------------------------------------------------------------


def _attr_type_ok(value, attr_type: str) -> bool:
    if attr_type == "string":
        return isinstance(value, str)
    if attr_type == "integer":
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0
    if attr_type == "boolean":
        return isinstance(value, bool)
    if attr_type == "string_list":
        return isinstance(value, list) and all(isinstance(v, str) for v in value)
    return False


def check_attr_conformance(decls: tuple, attrs: dict) -> list:
    """(category, message) pairs for declared-attribute problems.

    Undeclared attributes are allowed (open-world: SME annotations and
    extensions ride along untyped)."""
    out = []
    for decl in decls:
        if decl.name not in attrs:
            if decl.required:
                out.append(("missing_attr", f"missing required attr {decl.name!r}"))
            continue
        if not _attr_type_ok(attrs[decl.name], decl.type):
            out.append(
                ("attr_type",
                 f"attr {decl.name!r} must be a {decl.type}"
                 + (" >= 0" if decl.type == "integer" else "")
                 + f", got {attrs[decl.name]!r}")
            )
    return out


def validate_graph(graph: Graph, ontology: Ontology) -> list:
    """Every conformance violation in the graph; empty iff conformant."""
    violations = []

    for node in graph.nodes():
        decl = ontology.node_kinds.get(node.kind)
        if decl is None:
            violations.append(
                Violation("node", node.id, "unknown_kind", f"unknown node kind {node.kind!r}")
            )
            continue
        for category, message in check_attr_conformance(decl.attrs, node.attrs):
            violations.append(Violation("node", node.id, category, message))

    for edge in graph.edges():
        decl = ontology.edge_kinds.get(edge.kind)
        if decl is None:
            violations.append(
                Violation("edge", edge.id, "unknown_kind", f"unknown edge kind {edge.kind!r}")
            )
            continue
        src_kind = graph.node(edge.src).kind
        dst_kind = graph.node(edge.dst).kind
        # Endpoint checks only apply when the endpoint's kind is itself
        # declared; an undeclared kind is already reported on the node.
        if src_kind in ontology.node_kinds and src_kind not in decl.src:
            violations.append(
                Violation("edge", edge.id, "endpoint_kind",
                          f"{edge.kind} may not originate from {src_kind} ({edge.src})")
            )
        if dst_kind in ontology.node_kinds and dst_kind not in decl.dst:
            violations.append(
                Violation("edge", edge.id, "endpoint_kind",
                          f"{edge.kind} may not target {dst_kind} ({edge.dst})")
            )
        for category, message in check_attr_conformance(decl.attrs, edge.attrs):
            violations.append(Violation("edge", edge.id, category, message))

    violations.sort(key=lambda v: (v.subject_type, v.subject_id, v.category, v.message))
    return violations
