import pytest

from inckg.errors import PolicyError
from inckg.policy import (
    Rule,
    RuleSet,
    load_default_policy,
    parse_policy,
    validate_policy,
)


def test_default_policy_shape(ontology):
    policy = load_default_policy()
    assert sorted(policy.rule_sets) == ["control-seeded", "data-seeded"]
    assert policy.seed_dispatch == {
        "control": "control-seeded", "code": "control-seeded", "data": "data-seeded",
    }
    assert policy.max_depth is None
    validate_policy(policy, ontology)


def test_kind_specific_rule_beats_role_class():
    rs = RuleSet("x", [
        Rule("code", "CALLS", "out", "traverse"),
        Rule("Program", "CALLS", "out", "stop"),
    ])
    assert rs.lookup("Program", "code", "CALLS", "out").action == "stop"
    assert rs.lookup("OtherCode", "code", "CALLS", "out").action == "traverse"
    assert rs.lookup("Program", "code", "CALLS", "in") is None


def test_duplicate_rule_rejected():
    with pytest.raises(PolicyError):
        RuleSet("x", [
            Rule("code", "CALLS", "out", "traverse"),
            Rule("code", "CALLS", "out", "stop"),
        ])


def test_bad_direction_action_guard_reported():
    text = """
name: broken
rule_sets:
  main:
    - {at: code, edge: CALLS, direction: sideways, action: traverse}
    - {at: code, edge: CALLS, direction: out, action: explode}
    - {at: code, edge: CALLS, direction: in, action: stop, guard: maybe}
seed_dispatch:
  code: main
"""
    with pytest.raises(PolicyError) as err:
        parse_policy(text)
    assert len(err.value.problems) == 3


def test_dispatch_must_target_known_rule_set():
    text = """
name: broken
rule_sets:
  main:
    - {at: code, edge: CALLS, direction: out, action: traverse}
seed_dispatch:
  code: elsewhere
"""
    with pytest.raises(PolicyError) as err:
        parse_policy(text)
    assert "elsewhere" in str(err.value)


def test_dispatch_keys_must_be_role_classes():
    text = """
name: broken
rule_sets:
  main:
    - {at: code, edge: CALLS, direction: out, action: traverse}
seed_dispatch:
  Program: main
"""
    with pytest.raises(PolicyError):
        parse_policy(text)


def test_max_depth_must_be_positive():
    text = """
name: broken
max_depth: 0
rule_sets:
  main:
    - {at: code, edge: CALLS, direction: out, action: traverse}
seed_dispatch:
  code: main
"""
    with pytest.raises(PolicyError):
        parse_policy(text)


def test_unknown_edge_kind_fails_validation(ontology):
    text = """
name: custom
rule_sets:
  main:
    - {at: code, edge: TELEPORTS, direction: out, action: traverse}
seed_dispatch:
  code: main
"""
    policy = parse_policy(text)
    with pytest.raises(PolicyError) as err:
        validate_policy(policy, ontology)
    assert "TELEPORTS" in str(err.value)


def test_logical_edge_kind_cannot_be_traversed(ontology):
    text = """
name: custom
rule_sets:
  main:
    - {at: code, edge: HAS, direction: in, action: traverse}
seed_dispatch:
  code: main
"""
    policy = parse_policy(text)
    with pytest.raises(PolicyError):
        validate_policy(policy, ontology)


def test_unknown_subject_fails_validation(ontology):
    text = """
name: custom
rule_sets:
  main:
    - {at: Widget, edge: CALLS, direction: out, action: traverse}
seed_dispatch:
  code: main
"""
    policy = parse_policy(text)
    with pytest.raises(PolicyError) as err:
        validate_policy(policy, ontology)
    assert "Widget" in str(err.value)


def test_missing_dispatch_for_seed_role():
    policy = load_default_policy()
    with pytest.raises(PolicyError):
        policy.rule_set_for_seed("grouping")
