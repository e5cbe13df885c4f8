"""Decision-support analyses over increments.

* retire_check — can the increment be retired without breaking the rest
  of the estate? External callers / control entries and mutating access
  to shared data block it; read-only access and writes to SME-flagged
  log sinks (node attr ``log_sink: true``) are merely noted.
* shared_artifact_report — code artifacts reachable from several control
  entries; the refactor candidates when decomposing a monolith.
* interface_report — the filterable boundary-interface table.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InvalidInput
from .graph import Graph
from .increments import BoundaryEdge, Increment, expand_members
from .ontology import Ontology
from .policy import TraversalPolicy

READ_ONLY = "read_only"
MUTATING = "mutating"
UNKNOWN = "unknown"

# Boundary edge kinds that block retirement when they point into the
# increment from outside.
OUTSIDE_IN_BLOCKERS = {
    "CALLS": "external_caller",
    "STARTS": "external_control_entry",
    "SUBMITS": "external_control_entry",
}


@dataclass(frozen=True)
class CrudClassifier:
    """Maps crud/access-type strings to read-only vs mutating.

    The ``crud`` attr wins when present (any of C/U/D means mutating);
    otherwise access-type tokens decide. Composite strings such as
    ``CICS:READ_QTS:CICS:WRITEQ_TS`` classify as mutating. Strings that
    match no token classify as unknown, which retire_check treats as
    mutating — the conservative call for a retirement decision.
    """

    read_tokens: tuple = ("READ",)
    mutate_tokens: tuple = ("WRITE", "UPDATE", "INSERT", "DELETE", "WRITEQ")

    def classify(self, attrs: dict) -> str:
        crud = attrs.get("crud")
        if isinstance(crud, str) and crud.strip():
            letters = set(crud.upper())
            if letters & {"C", "U", "D"}:
                return MUTATING
            if "R" in letters:
                return READ_ONLY
        access = attrs.get("access_type")
        if isinstance(access, str) and access.strip():
            upper = access.upper()
            if any(token in upper for token in self.mutate_tokens):
                return MUTATING
            if any(token in upper for token in self.read_tokens):
                return READ_ONLY
        return UNKNOWN


DEFAULT_CLASSIFIER = CrudClassifier()


def _is_data_access(edge) -> bool:
    return edge.kind == "ACCESSES" or "access_type" in edge.attrs or "crud" in edge.attrs


# ---------------------------------------------------------------------------
# Retire check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RetireFinding:
    edge: BoundaryEdge
    reason: str


@dataclass(frozen=True)
class RetireVerdict:
    safe: bool
    blockers: tuple  # RetireFinding, reason in {external_caller, external_control_entry, mutating_shared_data}
    notes: tuple  # RetireFinding, reason in {read_only_access, log_sink_write}


def retire_check(graph: Graph, ontology: Ontology, increment: Increment,
                 classifier: CrudClassifier = DEFAULT_CLASSIFIER) -> RetireVerdict:
    blockers = []
    notes = []
    for b in increment.boundary:
        if b.direction_class == "outside_in":
            reason = OUTSIDE_IN_BLOCKERS.get(b.edge.kind)
            if reason is not None:
                blockers.append(RetireFinding(b, reason))
            continue
        # inside_out
        if not _is_data_access(b.edge):
            continue
        verdict = classifier.classify(b.edge.attrs)
        if verdict == READ_ONLY:
            notes.append(RetireFinding(b, "read_only_access"))
        elif graph.node(b.outer_node).attrs.get("log_sink") is True:
            notes.append(RetireFinding(b, "log_sink_write"))
        else:
            blockers.append(RetireFinding(b, "mutating_shared_data"))
    return RetireVerdict(safe=not blockers, blockers=tuple(blockers), notes=tuple(notes))


# ---------------------------------------------------------------------------
# Shared-artifact (refactor candidate) report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SharedArtifact:
    node_id: str
    name: str
    entry_count: int


def shared_artifact_report(graph: Graph, ontology: Ontology, policy: TraversalPolicy,
                           entry_ids: Iterable, threshold: int = 2) -> list:
    """Code-class nodes reachable from >= threshold distinct control
    entries (each entry expanded on its own), sorted by descending count."""
    entries = list(entry_ids)
    if not isinstance(threshold, int) or isinstance(threshold, bool) or threshold < 1:
        raise InvalidInput("threshold must be a positive integer")
    if not entries:
        raise InvalidInput("entry set must not be empty")
    for entry in entries:
        node = graph.node(entry)
        if ontology.role_class(node.kind) != "control":
            raise InvalidInput(f"entry {entry!r} is not a control-class node")
    counts: dict = {}
    for entry in sorted(set(entries)):
        members = expand_members(graph, ontology, policy, {entry})
        for node_id in members:
            if ontology.role_class(graph.node(node_id).kind) == "code":
                counts[node_id] = counts.get(node_id, 0) + 1
    report = [
        SharedArtifact(node_id=node_id, name=graph.node(node_id).name, entry_count=count)
        for node_id, count in counts.items()
        if count >= threshold
    ]
    report.sort(key=lambda item: (-item.entry_count, item.node_id))
    return report


# ---------------------------------------------------------------------------
# Interface table
# ---------------------------------------------------------------------------

# Documented column order for exports.
INTERFACE_COLUMNS = (
    "interface_type",
    "interfacing_application",
    "calling_node",
    "called_node",
    "edge_kind",
    "access_type",
    "role",
)


@dataclass(frozen=True)
class InterfaceRow:
    interface_type: str
    interfacing_application: str
    calling_node: str
    called_node: str
    edge_kind: str
    access_type: str
    role: str
    calling_id: str = ""
    called_id: str = ""
    edge_id: str = ""


def _derive_role(edge, classifier: CrudClassifier) -> str:
    role = edge.attrs.get("role")
    if isinstance(role, str) and role:
        return role
    if _is_data_access(edge):
        return "reader" if classifier.classify(edge.attrs) == READ_ONLY else "updater"
    return ""


def interface_rows(graph: Graph, ontology: Ontology, increment: Increment,
                   classifier: CrudClassifier = DEFAULT_CLASSIFIER) -> list:
    rows = []
    for b in increment.boundary:
        edge = b.edge
        app = b.outer_application or ""
        rows.append(InterfaceRow(
            interface_type=b.direction_class,
            interfacing_application=app,
            calling_node=graph.node(edge.src).name or edge.src,
            called_node=graph.node(edge.dst).name or edge.dst,
            edge_kind=edge.kind,
            access_type=str(edge.attrs.get("access_type", "")),
            role=_derive_role(edge, classifier),
            calling_id=edge.src,
            called_id=edge.dst,
            edge_id=edge.id,
        ))
    rows.sort(key=lambda r: (r.interface_type, r.interfacing_application,
                             r.calling_node, r.called_node, r.edge_kind, r.edge_id))
    return rows


def interface_report(graph: Graph, ontology: Ontology, increment: Increment,
                     interface_type: Optional[str] = None,
                     application: Optional[str] = None,
                     query: Optional[str] = None,
                     classifier: CrudClassifier = DEFAULT_CLASSIFIER) -> list:
    """Boundary interface rows surviving all filters (conjunctive).

    The application filter matches the outer application's id or display
    name; the text query substring-matches node names. Unknown filter
    values yield an empty result, matching a search-box UX.
    """
    rows = interface_rows(graph, ontology, increment, classifier)
    if interface_type is not None:
        rows = [r for r in rows if r.interface_type == interface_type]
    if application is not None:
        wanted = application.casefold()
        kept = []
        for r in rows:
            app_name = ""
            if r.interfacing_application and graph.has_node(r.interfacing_application):
                app_name = graph.node(r.interfacing_application).name
            if wanted in (r.interfacing_application.casefold(), app_name.casefold()):
                kept.append(r)
        rows = kept
    if query is not None and query != "":
        needle = query.casefold()
        rows = [r for r in rows
                if needle in r.calling_node.casefold() or needle in r.called_node.casefold()]
    return rows


# ---------------------------------------------------------------------------
# Report export
# ---------------------------------------------------------------------------


def rows_to_csv(rows: Iterable, columns: tuple) -> str:
    """Delimiter-separated export with the documented column order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([getattr(row, col) for col in columns])
    return buf.getvalue()


def rows_to_records(rows: Iterable, columns: tuple) -> str:
    """JSON Lines export; field names and order are stable."""
    out = []
    for row in rows:
        out.append(json.dumps({col: getattr(row, col) for col in columns},
                              sort_keys=False, separators=(",", ":"), ensure_ascii=False))
    return "\n".join(out) + ("\n" if out else "")
