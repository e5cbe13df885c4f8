"""Incremental knowledge-graph analysis of legacy applications.

The package ingests static-analysis facts into an ontology-validated
property graph, grows bounded increments around seed artifacts under a
rule-driven traversal policy, classifies boundary-crossing dependencies
as inside-out or outside-in, and answers retire-safety and
refactor-candidate questions on top of that.
"""

__version__ = "0.1.0"

from .errors import (
    EngineError,
    InvalidInput,
    NotFound,
    OntologySchemaError,
    PolicyError,
    ReferentialError,
    SnapshotFormatError,
    VersionConflict,
)
from .graph import ArtifactNode, Graph, RelationEdge

__all__ = [
    "ArtifactNode",
    "EngineError",
    "Graph",
    "InvalidInput",
    "NotFound",
    "OntologySchemaError",
    "PolicyError",
    "ReferentialError",
    "RelationEdge",
    "SnapshotFormatError",
    "VersionConflict",
    "__version__",
]
