"""Traversal policies: the rule tables that drive increment expansion.

A policy declares named rule sets plus a seed dispatch table mapping seed
role classes to rule sets. Each rule is keyed by (node kind or role
class, edge kind, direction) and picks one action:

* ``traverse`` — add the far node and keep expanding from it,
* ``absorb``   — add the far node but never expand from it,
* ``stop``     — leave the edge on the boundary.

Kind-specific rules win over role-class rules. A rule may carry the
``same_application`` guard: the action applies only when both endpoints
belong to the same partition group (Application); otherwise the edge
stops at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .errors import PolicyError
from .ontology import ROLE_CLASSES, Ontology

DIRECTIONS = ("out", "in")
ACTIONS = ("traverse", "absorb", "stop")
GUARDS = ("none", "same_application")


@dataclass(frozen=True)
class Rule:
    subject: str  # node kind or role class
    edge_kind: str
    direction: str
    action: str
    guard: str = "none"


class RuleSet:
    """One named rule table with (subject, edge kind, direction) lookup."""

    def __init__(self, name: str, rules):
        self.name = name
        self.rules = tuple(rules)
        self._by_key = {}
        for rule in self.rules:
            key = (rule.subject, rule.edge_kind, rule.direction)
            if key in self._by_key:
                raise PolicyError(
                    [f"rule set {name!r}: duplicate rule for {key}"])
            self._by_key[key] = rule

    def lookup(self, kind: str, role_class: Optional[str], edge_kind: str,
               direction: str) -> Optional[Rule]:
        rule = self._by_key.get((kind, edge_kind, direction))
        if rule is None and role_class is not None:
            rule = self._by_key.get((role_class, edge_kind, direction))
        return rule

    def __eq__(self, other):
        return isinstance(other, RuleSet) and (self.name, self.rules) == (other.name, other.rules)

    def __repr__(self):
        return f"RuleSet({self.name!r}, {len(self.rules)} rules)"


@dataclass(frozen=True)
class TraversalPolicy:
    name: str
    rule_sets: dict  # name -> RuleSet
    seed_dispatch: dict  # role class -> rule set name
    max_depth: Optional[int] = None  # None = expand to the fixpoint

    def rule_set_for_seed(self, role_class: Optional[str]) -> RuleSet:
        name = self.seed_dispatch.get(role_class or "")
        if name is None:
            raise PolicyError(
                [f"policy {self.name!r} has no rule set for seed role class {role_class!r}"])
        return self.rule_sets[name]


def policy_from_doc(doc: dict) -> TraversalPolicy:
    problems: list = []
    if not isinstance(doc, dict):
        raise PolicyError(["policy document must be a mapping"])
    name = str(doc.get("name", "unnamed"))

    max_depth = doc.get("max_depth")
    if max_depth is not None:
        if not isinstance(max_depth, int) or isinstance(max_depth, bool) or max_depth < 1:
            problems.append("max_depth must be a positive integer or null")
            max_depth = None

    rule_sets: dict = {}
    raw_sets = doc.get("rule_sets", {})
    if not isinstance(raw_sets, dict) or not raw_sets:
        problems.append("policy must declare at least one rule set")
        raw_sets = {}
    for rs_name, raw_rules in raw_sets.items():
        rules = []
        for item in raw_rules or []:
            if not isinstance(item, dict):
                problems.append(f"rule set {rs_name!r}: rules must be mappings")
                continue
            subject = str(item.get("at", ""))
            edge_kind = str(item.get("edge", ""))
            direction = str(item.get("direction", ""))
            action = str(item.get("action", ""))
            guard = str(item.get("guard", "none"))
            if not subject or not edge_kind:
                problems.append(f"rule set {rs_name!r}: rules need 'at' and 'edge'")
                continue
            if direction not in DIRECTIONS:
                problems.append(
                    f"rule set {rs_name!r}: direction must be out or in, got {direction!r}")
                continue
            if action not in ACTIONS:
                problems.append(
                    f"rule set {rs_name!r}: action must be traverse, absorb or stop, got {action!r}")
                continue
            if guard not in GUARDS:
                problems.append(f"rule set {rs_name!r}: unknown guard {guard!r}")
                continue
            rules.append(Rule(subject, edge_kind, direction, action, guard))
        try:
            rule_sets[str(rs_name)] = RuleSet(str(rs_name), rules)
        except PolicyError as exc:
            problems.extend(exc.problems)

    seed_dispatch: dict = {}
    raw_dispatch = doc.get("seed_dispatch", {})
    if not isinstance(raw_dispatch, dict) or not raw_dispatch:
        problems.append("policy must declare a seed_dispatch table")
        raw_dispatch = {}
    for role, rs_name in raw_dispatch.items():
        if str(role) not in ROLE_CLASSES:
            problems.append(f"seed_dispatch: {role!r} is not a role class")
            continue
        if str(rs_name) not in rule_sets:
            problems.append(f"seed_dispatch: unknown rule set {rs_name!r}")
            continue
        seed_dispatch[str(role)] = str(rs_name)

    if problems:
        raise PolicyError(problems)
    return TraversalPolicy(name=name, rule_sets=rule_sets,
                           seed_dispatch=seed_dispatch, max_depth=max_depth)


def parse_policy(text: str) -> TraversalPolicy:
    return policy_from_doc(yaml.safe_load(text))


def load_policy(path) -> TraversalPolicy:
    return parse_policy(Path(path).read_text(encoding="utf-8"))


def default_policy_path() -> Path:
    return Path(str(resources.files("inckg").joinpath("data/default_policy.yaml")))


def load_default_policy() -> TraversalPolicy:
    return load_policy(default_policy_path())


def validate_policy(policy: TraversalPolicy, ontology: Ontology) -> None:
    """Check a policy against an ontology before any traversal runs."""
    problems = []
    kinds = set(ontology.node_kinds)
    for rule_set in policy.rule_sets.values():
        for rule in rule_set.rules:
            if rule.edge_kind not in ontology.edge_kinds:
                problems.append(
                    f"rule set {rule_set.name!r}: unknown edge kind {rule.edge_kind!r}")
            elif rule.edge_kind in ontology.logical_edge_kinds:
                problems.append(
                    f"rule set {rule_set.name!r}: logical edge kind {rule.edge_kind!r} "
                    "cannot be traversed")
            if rule.subject not in kinds and rule.subject not in ROLE_CLASSES:
                problems.append(
                    f"rule set {rule_set.name!r}: subject {rule.subject!r} is neither a "
                    "declared node kind nor a role class")
    if problems:
        raise PolicyError(sorted(set(problems)))
