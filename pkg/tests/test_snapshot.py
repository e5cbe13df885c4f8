import json
import random

import pytest

from inckg import snapshot
from inckg.errors import SnapshotFormatError
from inckg.fixture import genapp_records, records_to_lines
from inckg.graph import ArtifactNode, Graph
from inckg.ingest import ingest_facts

from conftest import build_genapp_graph
from oracles import random_graph


def test_empty_graph_round_trip(tmp_path):
    g = Graph()
    path = tmp_path / "empty.snap"
    snapshot.save(g, path)
    loaded = snapshot.load_graph(path)
    assert loaded.node_count == 0
    assert loaded.edge_count == 0
    assert loaded.version == 0


def test_version_preserved_across_round_trip(tmp_path):
    g = Graph()
    g.upsert_node(ArtifactNode("P1", "Program"))
    g.upsert_node(ArtifactNode("P2", "Program"))
    assert g.version == 2
    path = tmp_path / "two.snap"
    snapshot.save(g, path)
    assert snapshot.load_graph(path).version == 2


def test_genapp_round_trip_counts_and_sampled_attrs(tmp_path, genapp_graph, manifest):
    path = tmp_path / "genapp.snap"
    snapshot.save(genapp_graph, path)
    loaded = snapshot.load_graph(path)
    assert loaded.counts_by_kind() == manifest["node_counts"]
    assert loaded.edge_counts_by_kind() == manifest["edge_counts"]
    assert loaded.version == genapp_graph.version
    # ten sampled program attrs drawn from the manifest
    rng = random.Random(7)
    sample = rng.sample(sorted(manifest["programs"]), 10)
    for prog_id in sample:
        node = loaded.node(prog_id)
        assert node.attrs["loc"] == manifest["programs"][prog_id]["loc"]
        assert node.attrs["cyclomatic"] == manifest["programs"][prog_id]["cyclomatic"]


def test_round_trip_is_identity(tmp_path):
    rng = random.Random(42)
    for _ in range(20):
        graph, _ = random_graph(rng, max_nodes=60, max_edges=200)
        first = snapshot.dump(graph)
        loaded, _ = snapshot.loads(first)
        assert snapshot.dump(loaded) == first


def test_same_stream_builds_byte_identical_snapshots(ontology):
    a = build_genapp_graph(ontology)
    b = build_genapp_graph(ontology)
    assert snapshot.dump(a) == snapshot.dump(b)


def test_truncated_file_is_format_error_with_offset(tmp_path, genapp_graph):
    path = tmp_path / "genapp.snap"
    snapshot.save(genapp_graph, path)
    data = path.read_bytes()
    truncated = tmp_path / "truncated.snap"
    truncated.write_bytes(data[: len(data) // 2])
    with pytest.raises(SnapshotFormatError) as err:
        snapshot.load(truncated)
    assert err.value.byte_offset is not None


def test_wrong_format_tag_rejected(tmp_path):
    path = tmp_path / "bad.snap"
    path.write_text(json.dumps({"format": "other/9", "graph_version": 0,
                                "nodes": [], "edges": []}))
    with pytest.raises(SnapshotFormatError):
        snapshot.load(path)


def test_dangling_edge_in_snapshot_rejected(tmp_path):
    doc = {"format": snapshot.FORMAT, "graph_version": 1,
           "nodes": [{"id": "a", "kind": "Program", "name": "", "attrs": {}}],
           "edges": [{"id": "x", "src": "a", "dst": "ghost", "kind": "CALLS",
                      "attrs": {}}]}
    path = tmp_path / "dangling.snap"
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotFormatError) as err:
        snapshot.load(path)
    assert "ghost" in str(err.value)


def test_edge_id_content_mismatch_rejected(tmp_path):
    g = Graph()
    g.upsert_node(ArtifactNode("a", "Program"))
    g.upsert_node(ArtifactNode("b", "Program"))
    g.add_edge("a", "b", "CALLS")
    doc = json.loads(snapshot.dump(g))
    doc["edges"][0]["id"] = "deadbeefdeadbeefdead"
    path = tmp_path / "tampered.snap"
    path.write_text(json.dumps(doc))
    with pytest.raises(SnapshotFormatError):
        snapshot.load(path)


def test_increments_round_trip(tmp_path, genapp_graph, ontology, policy):
    from inckg import increments as inc_ops

    increment = inc_ops.create_increment(genapp_graph, ontology, policy,
                                         "ssp3", "ssp3", ["txn:SSP3"])
    increment = inc_ops.expand(genapp_graph, ontology, policy, increment)
    path = tmp_path / "ws.snap"
    snapshot.save(genapp_graph, path, [inc_ops.increment_to_doc(increment)])
    graph, docs = snapshot.load(path)
    assert len(docs) == 1
    restored = inc_ops.increment_from_doc(docs[0], graph)
    assert restored.members == increment.members
    assert restored.metrics == increment.metrics
    assert [b.edge.id for b in restored.boundary] == [b.edge.id for b in increment.boundary]


def test_ingest_replay_keeps_snapshot_stable(tmp_path, ontology):
    graph = build_genapp_graph(ontology)
    before = snapshot.dump(graph)
    report = ingest_facts(records_to_lines(genapp_records()), ontology, graph)
    assert report.clean
    assert report.nodes_added == 0 and report.edges_added == 0
    after = snapshot.dump(graph)
    before_doc = json.loads(before)
    after_doc = json.loads(after)
    # replay bumps only the version counter; tables are untouched
    assert before_doc["nodes"] == after_doc["nodes"]
    assert before_doc["edges"] == after_doc["edges"]
