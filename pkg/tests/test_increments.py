import random

import pytest

from inckg import increments as inc_ops
from inckg.errors import InvalidInput, NotFound, PolicyError
from inckg.graph import ArtifactNode, Graph, make_edge
from inckg.ingest import assign_group
from inckg.policy import parse_policy

from oracles import (
    naive_expand,
    random_builtin_policy,
    random_graph,
    random_rule_table_policy,
    random_seeds,
    scan_boundary,
)


# ---------------------------------------------------------------------------
# create
# ---------------------------------------------------------------------------


def test_create_single_seed_metrics(genapp_graph, ontology, policy):
    inc = inc_ops.create_increment(genapp_graph, ontology, policy,
                                   "ssp3", "ssp3", ["txn:SSP3"])
    assert inc.members == frozenset({"txn:SSP3"})
    assert inc.metrics.total_loc == 0  # transactions carry no loc
    assert inc.metrics.metrics_missing == 0
    assert inc.metrics.member_count_by_kind == {"Transaction": 1}


def test_create_empty_seeds_rejected(genapp_graph, ontology, policy):
    with pytest.raises(InvalidInput):
        inc_ops.create_increment(genapp_graph, ontology, policy, "x", "x", [])


def test_create_unknown_seed_rejected(genapp_graph, ontology, policy):
    with pytest.raises(NotFound):
        inc_ops.create_increment(genapp_graph, ontology, policy, "x", "x", ["ghost"])


def test_create_grouping_seed_rejected(genapp_graph, ontology, policy):
    with pytest.raises(InvalidInput):
        inc_ops.create_increment(genapp_graph, ontology, policy, "x", "x",
                                 ["App-PolicyManagement"])


# ---------------------------------------------------------------------------
# expand: the three demo scenarios
# ---------------------------------------------------------------------------


def _expand(graph, ontology, policy, seeds, inc_id="inc"):
    inc = inc_ops.create_increment(graph, ontology, policy, inc_id, inc_id, seeds)
    return inc_ops.expand(graph, ontology, policy, inc)


def test_scenario_ssp3(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    assert inc.metrics.member_count_by_kind == {"Program": 13, "Table": 6,
                                                "Transaction": 1}
    tables = {genapp_graph.node(m).name for m in inc.members
              if genapp_graph.node(m).kind == "Table"}
    assert tables == {"House", "Commercial", "Motor", "Endowment", "Claim", "Policy"}


def test_scenario_house(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["table:HOUSE"])
    assert inc.metrics.member_count_by_kind == {"Program": 13, "Table": 1,
                                                "Transaction": 4}
    txns = {genapp_graph.node(m).name for m in inc.members
            if genapp_graph.node(m).kind == "Transaction"}
    assert txns == {"SSP1", "SSP2", "SSP3", "SSP4"}


def test_scenario_lgcf(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:LGCF"])
    assert inc.metrics.member_count_by_kind == {"Program": 1, "Transaction": 1}
    programs = {genapp_graph.node(m).name for m in inc.members
                if genapp_graph.node(m).kind == "Program"}
    assert programs == {"LGICVS01"}
    inside_out, outside_in = inc_ops.split_boundary(inc.boundary)
    assert len(inside_out) == 2
    assert outside_in == []


def test_isolated_seed(ontology, policy):
    g = Graph()
    g.upsert_node(ArtifactNode("lonely", "Program", "lonely"))
    inc = _expand(g, ontology, policy, ["lonely"])
    assert inc.members == frozenset({"lonely"})
    assert inc.boundary == ()


def test_mixed_seed_kinds_dispatch_per_seed(genapp_graph, ontology, policy):
    mixed = _expand(genapp_graph, ontology, policy, ["txn:SSP3", "table:HOUSE"])
    ssp3 = _expand(genapp_graph, ontology, policy, ["txn:SSP3"], "a")
    house = _expand(genapp_graph, ontology, policy, ["table:HOUSE"], "b")
    assert mixed.members == ssp3.members | house.members


def test_policy_with_unknown_edge_kind_fails_before_traversal(genapp_graph, ontology):
    bad = parse_policy("""
name: bad
rule_sets:
  main:
    - {at: code, edge: TELEPORTS, direction: out, action: traverse}
seed_dispatch:
  control: main
  code: main
  data: main
""")
    inc = inc_ops.Increment(id="x", name="x", seeds=frozenset({"txn:SSP3"}),
                            members=frozenset({"txn:SSP3"}))
    with pytest.raises(PolicyError):
        inc_ops.expand(genapp_graph, ontology, bad, inc)


def test_max_depth_limits_expansion(ontology):
    g = Graph()
    with g.batch():
        for i in range(5):
            g.upsert_node(ArtifactNode(f"p{i}", "Program", f"p{i}"))
        for i in range(4):
            g.upsert_edge(make_edge(f"p{i}", f"p{i+1}", "CALLS"))
    policy = parse_policy("""
name: depth2
max_depth: 2
rule_sets:
  main:
    - {at: code, edge: CALLS, direction: out, action: traverse}
seed_dispatch:
  code: main
""")
    inc = _expand(g, ontology, policy, ["p0"])
    assert inc.members == frozenset({"p0", "p1", "p2"})


# ---------------------------------------------------------------------------
# boundary
# ---------------------------------------------------------------------------


def test_boundary_of_everything_is_empty(genapp_graph, ontology, policy):
    members = [n.id for n in genapp_graph.nodes()
               if not ontology.is_grouping(n.kind)]
    boundary = inc_ops.compute_boundary(genapp_graph, ontology, members)
    assert boundary == []


def test_boundary_carries_outer_application(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:LGCF"])
    apps = {b.outer_application for b in inc.boundary}
    assert apps == {"App-CustomerManagement"}


def test_logical_edges_never_in_boundary(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    assert all(b.edge.kind != "HAS" for b in inc.boundary)


def test_boundary_matches_edge_scan_oracle(ontology):
    rng = random.Random(31)
    for _ in range(50):
        graph, pg = random_graph(rng, max_nodes=60, max_edges=250)
        members = set(random_seeds(rng, pg, k=rng.randint(1, max(1, len(pg.kinds) // 3))))
        got = inc_ops.compute_boundary(graph, ontology, members)
        got_io = {(b.edge.src, b.edge.dst, b.edge.kind) for b in got
                  if b.direction_class == "inside_out"}
        got_oi = {(b.edge.src, b.edge.dst, b.edge.kind) for b in got
                  if b.direction_class == "outside_in"}
        want_io, want_oi = scan_boundary(pg, members)
        assert got_io == want_io
        assert got_oi == want_oi


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


def test_metrics_additivity_two_programs(ontology):
    g = Graph()
    g.upsert_node(ArtifactNode("a", "Program", "a", {"loc": 100, "cyclomatic": 2}))
    g.upsert_node(ArtifactNode("b", "Program", "b", {"loc": 200, "cyclomatic": 3}))
    metrics = inc_ops.compute_metrics(g, ontology, {"a", "b"})
    assert metrics.total_loc == 300
    assert metrics.total_cyclomatic == 5
    assert metrics.metrics_missing == 0


def test_metrics_table_only_member(ontology):
    g = Graph()
    g.upsert_node(ArtifactNode("t", "Table", "t"))
    metrics = inc_ops.compute_metrics(g, ontology, {"t"})
    assert metrics.total_loc == 0
    assert metrics.metrics_missing == 0  # tables are not code-class


def test_metrics_missing_counted(ontology):
    g = Graph()
    g.upsert_node(ArtifactNode("a", "Program", "a", {"loc": 10}))  # cyclomatic missing
    g.upsert_node(ArtifactNode("b", "Program", "b"))
    metrics = inc_ops.compute_metrics(g, ontology, {"a", "b"})
    assert metrics.total_loc == 10
    assert metrics.metrics_missing == 2


def test_ssp3_loc_equals_manifest_sum(genapp_graph, ontology, policy, manifest):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    expected = sum(manifest["programs"][m]["loc"] for m in inc.members
                   if m in manifest["programs"])
    assert inc.metrics.total_loc == expected
    expected_cyc = sum(manifest["programs"][m]["cyclomatic"] for m in inc.members
                       if m in manifest["programs"])
    assert inc.metrics.total_cyclomatic == expected_cyc


# ---------------------------------------------------------------------------
# edit_members / move_impact (Fig-4-style configuration)
# ---------------------------------------------------------------------------


def _fig4_graph(ontology):
    """Increment around {P1,P2,P3}; P4 sits outside with 3 links in and
    1 link onward, so pulling P4 in shrinks the boundary."""
    g = Graph()
    with g.batch():
        for i in range(1, 6):
            g.upsert_node(ArtifactNode(f"P{i}", "Program", f"P{i}"))
        g.upsert_edge(make_edge("P1", "P4", "CALLS"))
        g.upsert_edge(make_edge("P4", "P2", "CALLS"))
        g.upsert_edge(make_edge("P4", "P3", "CALLS"))
        g.upsert_edge(make_edge("P4", "P5", "CALLS"))
        g.upsert_edge(make_edge("P1", "P2", "CALLS"))
    assign_group(g, ontology, "App-A", ["P4", "P5"], kind="Application")
    assign_group(g, ontology, "App-B", ["P1", "P2", "P3"], kind="Application")
    return g


def _fig4_increment(g, ontology, policy):
    inc = inc_ops.create_increment(g, ontology, policy, "fig4", "fig4", ["P1"])
    return inc_ops.edit_members(g, ontology, inc, add=["P2", "P3"])


def test_fig4_pull_p4_reduces_boundary(ontology, policy):
    g = _fig4_graph(ontology)
    inc = _fig4_increment(g, ontology, policy)
    before = len(inc.boundary)
    edited = inc_ops.edit_members(g, ontology, inc, add=["P4"])
    after = len(edited.boundary)
    assert after < before
    # oracle: recompute from scratch on the edited member set
    recomputed = inc_ops.compute_boundary(g, ontology, edited.members)
    assert len(recomputed) == after


def test_fig4_move_impact_is_negative_and_consistent(ontology, policy):
    g = _fig4_graph(ontology)
    inc = _fig4_increment(g, ontology, policy)
    report = inc_ops.move_impact(g, ontology, inc, "P4")
    assert report.delta < 0
    edited = inc_ops.edit_members(g, ontology, inc, add=["P4"])
    assert len(edited.boundary) == report.boundary_after


def test_add_existing_member_is_noop(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    edited = inc_ops.edit_members(genapp_graph, ontology, inc, add=["prog:LGAPOL01"])
    assert edited.members == inc.members
    assert edited.manual_adds == inc.manual_adds == frozenset()
    assert edited.boundary == inc.boundary
    assert edited.metrics == inc.metrics


def test_remove_seed_rejected(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    with pytest.raises(InvalidInput, match="seed cannot be removed"):
        inc_ops.edit_members(genapp_graph, ontology, inc, remove=["txn:SSP3"])


def test_edit_unknown_id_rejected(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    with pytest.raises(NotFound):
        inc_ops.edit_members(genapp_graph, ontology, inc, add=["ghost"])


def test_pins_survive_expand(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    edited = inc_ops.edit_members(genapp_graph, ontology, inc,
                                  add=["prog:LGICVS01"], remove=["table:CLAIM"])
    re_expanded = inc_ops.expand(genapp_graph, ontology, policy, edited)
    assert "prog:LGICVS01" in re_expanded.members
    assert "table:CLAIM" not in re_expanded.members
    assert re_expanded.manual_adds == frozenset({"prog:LGICVS01"})
    assert re_expanded.manual_removes == frozenset({"table:CLAIM"})


def test_add_clears_previous_remove_pin(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    removed = inc_ops.edit_members(genapp_graph, ontology, inc, remove=["table:CLAIM"])
    assert "table:CLAIM" in removed.manual_removes
    restored = inc_ops.edit_members(genapp_graph, ontology, removed, add=["table:CLAIM"])
    assert "table:CLAIM" in restored.members
    assert "table:CLAIM" not in restored.manual_removes


def test_move_impact_disconnected_node_is_zero(ontology, policy):
    g = Graph()
    g.upsert_node(ArtifactNode("seed", "Program", "seed"))
    g.upsert_node(ArtifactNode("island", "Program", "island"))
    inc = _expand(g, ontology, policy, ["seed"])
    report = inc_ops.move_impact(g, ontology, inc, "island")
    assert report.delta == 0
    assert report.affected_edges == ()


def test_move_impact_all_edges_into_members(ontology, policy):
    g = Graph()
    with g.batch():
        for name in ("a", "b", "c", "x"):
            g.upsert_node(ArtifactNode(name, "Program", name))
        g.upsert_edge(make_edge("x", "a", "CALLS"))
        g.upsert_edge(make_edge("x", "b", "CALLS"))
        g.upsert_edge(make_edge("c", "x", "CALLS"))
    inc = inc_ops.create_increment(g, ontology, policy, "i", "i", ["a"])
    inc = inc_ops.edit_members(g, ontology, inc, add=["b", "c"])
    report = inc_ops.move_impact(g, ontology, inc, "x")
    assert report.delta == -3
    edited = inc_ops.edit_members(g, ontology, inc, add=["x"])
    assert len(edited.boundary) == report.boundary_after


def test_move_impact_on_seed_rejected(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    with pytest.raises(InvalidInput):
        inc_ops.move_impact(genapp_graph, ontology, inc, "txn:SSP3")


def test_move_impact_is_side_effect_free(genapp_graph, ontology, policy):
    inc = _expand(genapp_graph, ontology, policy, ["txn:SSP3"])
    before = inc.members
    inc_ops.move_impact(genapp_graph, ontology, inc, "prog:LGICVS01")
    assert inc.members == before


# ---------------------------------------------------------------------------
# randomized oracle equivalence (smoke-scale; full scale in acceptance)
# ---------------------------------------------------------------------------


def test_expansion_matches_naive_oracle_builtin_policies(ontology):
    rng = random.Random(777)
    for _ in range(100):
        graph, pg = random_graph(rng, max_nodes=60, max_edges=250)
        policy, doc = random_builtin_policy(rng)
        seeds = random_seeds(rng, pg)
        got = inc_ops.expand_members(graph, ontology, policy, seeds)
        want = naive_expand(pg, doc, seeds)
        assert got == want


def test_expansion_matches_naive_oracle_random_tables(ontology):
    rng = random.Random(778)
    for _ in range(100):
        graph, pg = random_graph(rng, max_nodes=60, max_edges=250)
        policy, doc = random_rule_table_policy(rng)
        seeds = random_seeds(rng, pg)
        blocked = frozenset(random_seeds(rng, pg, k=1)) - set(seeds)
        got = inc_ops.expand_members(graph, ontology, policy, seeds, blocked)
        want = naive_expand(pg, doc, seeds, blocked)
        assert got == want


def test_fixpoint_idempotence_smoke(ontology):
    rng = random.Random(779)
    for _ in range(50):
        graph, pg = random_graph(rng, max_nodes=50, max_edges=200)
        policy, _ = random_builtin_policy(rng)
        seeds = random_seeds(rng, pg)
        inc = inc_ops.create_increment(graph, ontology, policy, "i", "i", seeds)
        once = inc_ops.expand(graph, ontology, policy, inc)
        twice = inc_ops.expand(graph, ontology, policy, once)
        assert once.members == twice.members
        assert once.boundary == twice.boundary


def test_monotone_seed_union_smoke(ontology):
    rng = random.Random(780)
    for _ in range(50):
        graph, pg = random_graph(rng, max_nodes=50, max_edges=200)
        policy, _ = random_builtin_policy(rng)
        node_ids = sorted(pg.kinds)
        a = set(rng.sample(node_ids, min(2, len(node_ids))))
        b = set(rng.sample(node_ids, min(2, len(node_ids))))
        union = inc_ops.expand_members(graph, ontology, policy, a | b)
        expanded_a = inc_ops.expand_members(graph, ontology, policy, a)
        expanded_b = inc_ops.expand_members(graph, ontology, policy, b)
        assert union >= expanded_a | expanded_b
