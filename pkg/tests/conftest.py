import pytest

from inckg.fixture import genapp_manifest, genapp_records, records_to_lines
from inckg.graph import Graph
from inckg.ingest import ingest_facts
from inckg.ontology import load_default_ontology
from inckg.policy import load_default_policy
from inckg.workspace import Workspace


def build_genapp_graph(ontology):
    graph = Graph()
    report = ingest_facts(records_to_lines(genapp_records()), ontology, graph)
    assert report.clean, "fixture must ingest cleanly"
    return graph


@pytest.fixture(scope="session")
def ontology():
    return load_default_ontology()


@pytest.fixture(scope="session")
def policy():
    return load_default_policy()


@pytest.fixture(scope="session")
def manifest():
    return genapp_manifest(genapp_records())


@pytest.fixture(scope="session")
def genapp_graph(ontology):
    """Shared read-only GENAPP graph; tests must not mutate it."""
    return build_genapp_graph(ontology)


@pytest.fixture
def genapp_graph_fresh(ontology):
    return build_genapp_graph(ontology)


@pytest.fixture
def genapp_workspace():
    ws = Workspace.create()
    report = ws.ingest_lines(records_to_lines(genapp_records()))
    assert report.clean
    return ws
