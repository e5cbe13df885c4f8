"""Workspace: one graph plus ontology, policy registry, and named increments.

This is the unit both the service and the CLI operate on. Reads run
against committed graph state; graph mutations (ingest, snapshot load)
serialize on a workspace lock, and each increment's mutations serialize
on their own lock so work on one increment never blocks another.
"""

from __future__ import annotations

import os
import threading
from typing import Iterable, Optional

from . import analysis, export, increments as inc_ops, snapshot
from .errors import InvalidInput, NotFound, VersionConflict
from .graph import Graph
from .ingest import IngestReport, ingest_facts
from .ontology import Ontology, load_default_ontology, load_ontology, validate_graph
from .policy import TraversalPolicy, load_default_policy, load_policy

# CLI/service shorthand for node references: "<kind-alias>:<name>".
KIND_ALIASES = {
    "txn": "Transaction",
    "transaction": "Transaction",
    "prog": "Program",
    "program": "Program",
    "table": "Table",
    "file": "File",
    "queue": "Queue",
    "dataset": "Dataset",
    "job": "Job",
    "app": "Application",
    "application": "Application",
}


class Workspace:
    def __init__(self, graph: Graph, ontology: Ontology, policies: dict,
                 default_policy: str, increments: Optional[dict] = None):
        self.graph = graph
        self.ontology = ontology
        self.policies = dict(policies)
        self.default_policy = default_policy
        self.increments: dict = dict(increments or {})
        self._lock = threading.RLock()  # graph mutations + registry writes
        self._inc_locks: dict = {}
        self._inc_locks_guard = threading.Lock()

    # -- construction ----------------------------------------------------

    @classmethod
    def create(cls, ontology_path=None, policy_path=None) -> "Workspace":
        ontology = load_ontology(ontology_path) if ontology_path else load_default_ontology()
        policies = {}
        default = load_default_policy()
        policies[default.name] = default
        default_name = default.name
        if policy_path:
            policy = load_policy(policy_path)
            policies[policy.name] = policy
            default_name = policy.name
        return cls(Graph(), ontology, policies, default_name)

    @classmethod
    def open(cls, snapshot_path, ontology_path=None, policy_path=None) -> "Workspace":
        """Load a snapshot if one exists at the path, else start empty."""
        ws = cls.create(ontology_path, policy_path)
        if snapshot_path and os.path.exists(snapshot_path):
            graph, inc_docs = snapshot.load(snapshot_path)
            ws.graph = graph
            ws.increments = {
                doc["id"]: inc_ops.increment_from_doc(doc, graph) for doc in inc_docs
            }
        return ws

    def save(self, path) -> None:
        with self._lock:
            docs = [inc_ops.increment_to_doc(self.increments[k])
                    for k in sorted(self.increments)]
            snapshot.save(self.graph, path, docs)

    # -- helpers -----------------------------------------------------------

    def policy(self, name: Optional[str] = None) -> TraversalPolicy:
        name = name or self.default_policy
        try:
            return self.policies[name]
        except KeyError:
            raise NotFound(f"unknown policy: {name}") from None

    def _check_version(self, expected: Optional[int]) -> None:
        if expected is not None and expected != self.graph.version:
            raise VersionConflict(expected, self.graph.version)

    def _inc_lock(self, inc_id: str) -> threading.Lock:
        with self._inc_locks_guard:
            return self._inc_locks.setdefault(inc_id, threading.Lock())

    def resolve_ref(self, ref: str) -> str:
        """Resolve a node reference: a raw node id, or "kind:name" with a
        case-insensitive unique name lookup (e.g. txn:SSP3, table:HOUSE)."""
        if self.graph.has_node(ref):
            return ref
        if ":" in ref:
            alias, _, name = ref.partition(":")
            kind = KIND_ALIASES.get(alias.lower())
            if kind is None:
                for declared in self.ontology.node_kinds:
                    if declared.lower() == alias.lower():
                        kind = declared
                        break
            if kind is None:
                raise InvalidInput(f"unknown kind alias {alias!r} in reference {ref!r}")
            wanted = name.casefold()
            candidates = [n.id for n in self.graph.nodes()
                          if n.kind == kind and n.name.casefold() == wanted]
            if not candidates:
                raise NotFound(f"no {kind} named {name!r}")
            if len(candidates) > 1:
                raise InvalidInput(
                    f"ambiguous reference {ref!r}: candidates {', '.join(candidates)}")
            return candidates[0]
        raise NotFound(f"unknown node: {ref}")

    def resolve_refs(self, refs: Iterable) -> list:
        return [self.resolve_ref(r) for r in refs]

    # -- node / application queries -----------------------------------------

    def applications(self) -> list:
        """Grouping nodes with their member counts, sorted by id."""
        out = []
        for node in self.graph.nodes():
            if not self.ontology.is_grouping(node.kind):
                continue
            members = 0
            for eid in self.graph.out_edge_ids(node.id):
                if self.graph.edge(eid).kind in self.ontology.logical_edge_kinds:
                    members += 1
            out.append((node, members))
        return out

    def search_nodes(self, query: Optional[str] = None, kind: Optional[str] = None,
                     application: Optional[str] = None, page: int = 1,
                     page_size: int = 200) -> tuple:
        """(total, nodes) for a filtered, paginated node listing."""
        if kind is not None:
            kind = KIND_ALIASES.get(kind.lower(), kind)
        needle = query.casefold() if query else None
        matches = []
        for node in self.graph.nodes():
            if kind is not None and node.kind != kind:
                continue
            if needle is not None and needle not in node.name.casefold() \
                    and needle not in node.id.casefold():
                continue
            if application is not None:
                app = inc_ops.application_of(self.graph, self.ontology, node.id)
                if app != application:
                    continue
            matches.append(node)
        start = max(page - 1, 0) * page_size
        return len(matches), matches[start:start + page_size]

    def node_detail(self, ref: str) -> tuple:
        node_id = self.resolve_ref(ref)
        node = self.graph.node(node_id)
        neighbors = self.graph.neighbors(node_id, "both")
        app = inc_ops.application_of(self.graph, self.ontology, node_id)
        return node, neighbors, app

    def validate(self):
        return validate_graph(self.graph, self.ontology)

    # -- ingest ----------------------------------------------------------

    def ingest_lines(self, lines, expected_version: Optional[int] = None) -> IngestReport:
        with self._lock:
            self._check_version(expected_version)
            return ingest_facts(lines, self.ontology, self.graph)

    # -- increments ---------------------------------------------------------

    def is_stale(self, increment) -> bool:
        return increment.graph_version < self.graph.version

    def get_increment(self, inc_id: str):
        try:
            return self.increments[inc_id]
        except KeyError:
            raise NotFound(f"unknown increment: {inc_id}") from None

    def list_increments(self) -> list:
        return [self.increments[k] for k in sorted(self.increments)]

    def create_increment(self, name: str, seed_refs: Iterable,
                         inc_id: Optional[str] = None,
                         policy_name: Optional[str] = None):
        inc_id = inc_id or name
        if not inc_id:
            raise InvalidInput("increment needs an id or name")
        policy = self.policy(policy_name)
        seeds = self.resolve_refs(seed_refs)
        with self._lock:
            if inc_id in self.increments:
                raise InvalidInput(f"increment {inc_id!r} already exists")
            increment = inc_ops.create_increment(
                self.graph, self.ontology, policy, inc_id, name or inc_id, seeds)
            self.increments[inc_id] = increment
        return increment

    def expand_increment(self, inc_id: str, expected_version: Optional[int] = None):
        with self._inc_lock(inc_id):
            self._check_version(expected_version)
            increment = self.get_increment(inc_id)
            updated = inc_ops.expand(self.graph, self.ontology,
                                     self.policy(increment.policy_ref), increment)
            self.increments[inc_id] = updated
        return updated

    def edit_increment(self, inc_id: str, add_refs=(), remove_refs=(),
                       expected_version: Optional[int] = None):
        with self._inc_lock(inc_id):
            self._check_version(expected_version)
            increment = self.get_increment(inc_id)
            updated = inc_ops.edit_members(
                self.graph, self.ontology, increment,
                self.resolve_refs(add_refs), self.resolve_refs(remove_refs))
            self.increments[inc_id] = updated
        return updated

    def move_impact(self, inc_id: str, node_ref: str):
        increment = self.get_increment(inc_id)
        return inc_ops.move_impact(self.graph, self.ontology, increment,
                                   self.resolve_ref(node_ref))

    def boundary(self, inc_id: str) -> tuple:
        return inc_ops.split_boundary(self.get_increment(inc_id).boundary)

    def interfaces(self, inc_id: str, interface_type=None, application=None,
                   query=None) -> list:
        return analysis.interface_report(
            self.graph, self.ontology, self.get_increment(inc_id),
            interface_type=interface_type, application=application, query=query)

    def retire_check(self, inc_id: str):
        return analysis.retire_check(self.graph, self.ontology, self.get_increment(inc_id))

    def shared_report(self, entry_refs, threshold: int = 2,
                      policy_name: Optional[str] = None) -> list:
        return analysis.shared_artifact_report(
            self.graph, self.ontology, self.policy(policy_name),
            self.resolve_refs(entry_refs), threshold)

    # -- export -----------------------------------------------------------

    def export(self, fmt: str, inc_id: Optional[str] = None) -> str:
        increment = self.get_increment(inc_id) if inc_id else None
        return export.export_graph(self.graph, fmt, self.ontology, increment)
