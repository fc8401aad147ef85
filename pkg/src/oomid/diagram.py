"""Influence diagram data model, validation, and file I/O.

A diagram has chance variables with conditional probability tables,
decision variables with information sets (the variables known when the
decision is made), and utility functions.  Tables are stored flat in
row-major order over their scope: the first scope variable varies slowest
and the last (the child, for CPTs) varies fastest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np


class DiagramError(ValueError):
    """Structural problem that prevents using a diagram."""


class GuardExceeded(RuntimeError):
    """A brute-force guard limit was exceeded."""


class Kind(Enum):
    CHANCE = "chance"
    DECISION = "decision"


@dataclass(frozen=True)
class Variable:
    id: str
    kind: Kind
    domain: tuple[str, ...]


@dataclass(frozen=True)
class CPT:
    child: str
    parents: tuple[str, ...]
    table: tuple[float, ...]  # row-major over parents + (child,)

    @property
    def scope(self) -> tuple[str, ...]:
        return self.parents + (self.child,)


@dataclass(frozen=True)
class UtilityFunction:
    scope: tuple[str, ...]
    table: tuple[float, ...]  # row-major over scope


@dataclass(frozen=True)
class InfluenceDiagram:
    variables: tuple[Variable, ...]
    cpts: tuple[CPT, ...]
    utilities: tuple[UtilityFunction, ...]
    decision_order: tuple[str, ...]
    information_sets: Mapping[str, tuple[str, ...]]
    evidence: Mapping[str, str] = field(default_factory=dict)

    def variable(self, var_id: str) -> Variable:
        for v in self.variables:
            if v.id == var_id:
                return v
        raise KeyError(var_id)

    @property
    def chance_vars(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.kind is Kind.CHANCE)

    @property
    def decision_vars(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables if v.kind is Kind.DECISION)

    def domain(self, var_id: str) -> tuple[str, ...]:
        return self.variable(var_id).domain

    def domain_sizes(self, scope: Iterable[str]) -> tuple[int, ...]:
        return tuple(len(self.domain(v)) for v in scope)

    def iter_configs(self, scope: Iterable[str]) -> Iterator[tuple[str, ...]]:
        """Row-major enumeration of label configurations over a scope."""
        scope = tuple(scope)
        if not scope:
            yield ()
            return
        head, tail = scope[0], scope[1:]
        for label in self.domain(head):
            for rest in self.iter_configs(tail):
                yield (label,) + rest


def _as_tuple(values: Iterable) -> tuple:
    return tuple(values)


def apply_nonforgetting(diagram: InfluenceDiagram) -> InfluenceDiagram:
    """Close the information sets: every decision also observes all earlier
    decisions and everything those decisions observed."""
    closed: dict[str, tuple[str, ...]] = {}
    seen: list[str] = []  # earlier decisions and their observations, in order
    for d in diagram.decision_order:
        own = [p for p in diagram.information_sets.get(d, ()) if p not in seen]
        closed[d] = tuple(seen) + tuple(own)
        for p in closed[d]:
            if p not in seen:
                seen.append(p)
        if d not in seen:
            seen.append(d)
    return replace(diagram, information_sets=closed)


def validate(diagram: InfluenceDiagram) -> list[str]:
    """Collect invariant violations; an empty list means the diagram is usable."""
    out: list[str] = []
    ids = [v.id for v in diagram.variables]
    if len(set(ids)) != len(ids):
        out.append("duplicate variable ids")
        return out
    known = set(ids)

    for v in diagram.variables:
        if len(v.domain) < 1:
            out.append(f"variable {v.id}: empty domain")
        if len(set(v.domain)) != len(v.domain):
            out.append(f"variable {v.id}: duplicate domain labels")

    chance = set(diagram.chance_vars)
    decisions = set(diagram.decision_vars)

    # CPTs: one per chance variable, child chance, normalized rows
    seen_children = set()
    for cpt in diagram.cpts:
        name = f"cpt for {cpt.child}"
        if cpt.child not in known:
            out.append(f"{name}: unknown child")
            continue
        if cpt.child not in chance:
            out.append(f"{name}: child is not a chance variable")
            continue
        if cpt.child in seen_children:
            out.append(f"{name}: duplicate")
            continue
        seen_children.add(cpt.child)
        bad_scope = [p for p in cpt.parents if p not in known]
        if bad_scope or len(set(cpt.scope)) != len(cpt.scope):
            out.append(f"{name}: bad parent list")
            continue
        expected = int(np.prod(diagram.domain_sizes(cpt.scope), dtype=object))
        if len(cpt.table) != expected:
            out.append(f"{name}: table has {len(cpt.table)} entries, expected {expected}")
            continue
        arr = np.asarray(cpt.table, dtype=float)
        if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
            out.append(f"{name}: entries outside [0, 1]")
            continue
        k = len(diagram.domain(cpt.child))
        sums = arr.reshape(-1, k).sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            out.append(f"{name}: rows do not sum to 1")
    for x in sorted(chance - seen_children):
        out.append(f"chance variable {x}: missing cpt")

    if not diagram.utilities:
        out.append("no utility functions")
    for i, u in enumerate(diagram.utilities):
        name = f"utility {i} over {list(u.scope)}"
        if not u.scope:
            out.append(f"{name}: empty scope")
            continue
        if any(s not in known for s in u.scope) or len(set(u.scope)) != len(u.scope):
            out.append(f"{name}: bad scope")
            continue
        expected = int(np.prod(diagram.domain_sizes(u.scope), dtype=object))
        if len(u.table) != expected:
            out.append(f"{name}: table has {len(u.table)} entries, expected {expected}")
            continue
        if not np.all(np.isfinite(np.asarray(u.table, dtype=float))):
            out.append(f"{name}: non-finite entries")

    if set(diagram.decision_order) != decisions or len(diagram.decision_order) != len(
        decisions
    ):
        out.append("decision_order must list each decision variable exactly once")
    for d, parents in diagram.information_sets.items():
        if d not in decisions:
            out.append(f"information set for non-decision {d}")
            continue
        for p in parents:
            if p not in known:
                out.append(f"decision {d}: unknown parent {p}")
            elif p == d:
                out.append(f"decision {d}: observes itself")
        later = set(diagram.decision_order[diagram.decision_order.index(d) :]) if (
            d in diagram.decision_order
        ) else set()
        for p in parents:
            if p in later:
                out.append(f"decision {d}: parent {p} does not precede it")
    for d in decisions:
        if d not in diagram.information_sets:
            out.append(f"decision {d}: missing information set")

    for var, label in diagram.evidence.items():
        if var not in known:
            out.append(f"evidence on unknown variable {var}")
        elif var not in chance:
            out.append(f"evidence on non-chance variable {var}")
        elif label not in diagram.domain(var):
            out.append(f"evidence {var}={label}: label not in domain")

    if not out:
        out.extend(_graph_violations(diagram))
    return out


def _graph_violations(diagram: InfluenceDiagram) -> list[str]:
    """Cycle and temporal checks on the arc structure."""
    arcs: dict[str, set[str]] = {v.id: set() for v in diagram.variables}
    for cpt in diagram.cpts:
        for p in cpt.parents:
            arcs[p].add(cpt.child)
    for d, parents in diagram.information_sets.items():
        for p in parents:
            arcs[p].add(d)

    # depth-first cycle detection
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in arcs}
    out: list[str] = []

    def visit(u: str) -> bool:
        color[u] = GREY
        for w in arcs[u]:
            if color[w] == GREY:
                return True
            if color[w] == WHITE and visit(w):
                return True
        color[u] = BLACK
        return False

    for v in arcs:
        if color[v] == WHITE and visit(v):
            out.append("graph has a directed cycle")
            break
    if out:
        return out

    # a chance variable observed at decision k must not depend on a decision
    # made at k or later
    ancestors: dict[str, set[str]] = {}

    def anc(u: str) -> set[str]:
        if u not in ancestors:
            parents = set()
            for cpt in diagram.cpts:
                if cpt.child == u:
                    parents = set(cpt.parents)
            if u in diagram.information_sets:
                parents |= set(diagram.information_sets[u])
            result = set(parents)
            for p in parents:
                result |= anc(p)
            ancestors[u] = result
        return ancestors[u]

    order = diagram.decision_order
    for k, d in enumerate(order):
        not_yet_made = set(order[k:])
        for p in diagram.information_sets.get(d, ()):
            if p in set(diagram.chance_vars) and anc(p) & not_yet_made:
                out.append(
                    f"chance variable {p} is observed at {d} but depends on a later decision"
                )
    return out


@dataclass(frozen=True)
class TemporalPartition:
    """Alternating structure: initial observations, then per decision the
    chance variables revealed after it (the last block is never observed)."""

    initial: tuple[str, ...]
    stages: tuple[tuple[str, tuple[str, ...]], ...]  # (decision, revealed after)

    def blocks(self) -> list[tuple[str, ...]]:
        """Elimination blocks, last-observed first: I_m, D_m, ..., D_1, I_0."""
        out: list[tuple[str, ...]] = []
        for d, revealed in reversed(self.stages):
            out.append(revealed)
            out.append((d,))
        out.append(self.initial)
        return out


def temporal_partition(diagram: InfluenceDiagram) -> TemporalPartition:
    """Partition the chance variables by when they become observed.

    Requires closed (non-forgetting) information sets, so observation sets
    grow along the decision order.
    """
    chance = set(diagram.chance_vars)
    observed_so_far: set[str] = set()
    initial: tuple[str, ...] = ()
    stages: list[tuple[str, tuple[str, ...]]] = []
    prev: str | None = None
    for d in diagram.decision_order:
        info = set(diagram.information_sets.get(d, ()))
        new = sorted((info - observed_so_far) & chance)
        missing = (observed_so_far - info) & chance
        if missing:
            raise DiagramError(
                f"information sets are not non-forgetting at {d}: missing {sorted(missing)}"
            )
        if prev is None:
            initial = tuple(new)
        else:
            stages.append((prev, tuple(new)))
        observed_so_far |= info | set(new)
        prev = d
    tail = tuple(sorted(chance - observed_so_far))
    if prev is None:
        # no decisions: a single initial block holds everything
        return TemporalPartition(initial=tail, stages=())
    stages.append((prev, tail))
    return TemporalPartition(initial=initial, stages=tuple(stages))


@dataclass(frozen=True)
class PolicyRule:
    """Decision rule: an action index for every parent configuration."""

    decision: str
    scope: tuple[str, ...]
    actions: tuple[int, ...]  # row-major over scope, values index the domain

    def action_index(self, sizes: tuple[int, ...], config: tuple[int, ...]) -> int:
        idx = 0
        for size, value in zip(sizes, config):
            idx = idx * size + value
        return self.actions[idx]


@dataclass(frozen=True)
class Policy:
    rules: Mapping[str, PolicyRule]

    def action_for(
        self, diagram: InfluenceDiagram, decision: str, assignment: Mapping[str, str]
    ) -> str:
        rule = self.rules[decision]
        sizes = diagram.domain_sizes(rule.scope)
        config = tuple(
            diagram.domain(v).index(assignment[v]) for v in rule.scope
        )
        return diagram.domain(decision)[rule.action_index(sizes, config)]

    def to_dict(self, diagram: InfluenceDiagram) -> dict:
        out: dict = {}
        for d, rule in self.rules.items():
            table = {}
            for i, config in enumerate(diagram.iter_configs(rule.scope)):
                table[config] = diagram.domain(d)[rule.actions[i]]
            out[d] = {"scope": rule.scope, "table": table}
        return out


# ---------------------------------------------------------------------------
# file format

def to_dict(diagram: InfluenceDiagram) -> dict:
    return {
        "variables": [
            {"id": v.id, "kind": v.kind.value, "domain": list(v.domain)}
            for v in diagram.variables
        ],
        "cpts": [
            {"child": c.child, "parents": list(c.parents), "table": list(c.table)}
            for c in diagram.cpts
        ],
        "utilities": [
            {"scope": list(u.scope), "table": list(u.table)} for u in diagram.utilities
        ],
        "decision_order": list(diagram.decision_order),
        "information_sets": {d: list(ps) for d, ps in diagram.information_sets.items()},
        "evidence": dict(diagram.evidence),
    }


def from_dict(data: Mapping, nonforgetting: bool = True) -> InfluenceDiagram:
    try:
        variables = tuple(
            Variable(v["id"], Kind(v["kind"]), _as_tuple(v["domain"]))
            for v in data["variables"]
        )
        cpts = tuple(
            CPT(c["child"], _as_tuple(c["parents"]), _as_tuple(float(x) for x in c["table"]))
            for c in data["cpts"]
        )
        utilities = tuple(
            UtilityFunction(_as_tuple(u["scope"]), _as_tuple(float(x) for x in u["table"]))
            for u in data["utilities"]
        )
        diagram = InfluenceDiagram(
            variables=variables,
            cpts=cpts,
            utilities=utilities,
            decision_order=_as_tuple(data["decision_order"]),
            information_sets={
                d: _as_tuple(ps) for d, ps in data.get("information_sets", {}).items()
            },
            evidence=dict(data.get("evidence", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"malformed diagram document: {exc}") from exc
    if nonforgetting:
        diagram = apply_nonforgetting(diagram)
    return diagram


def load(path: str | Path, nonforgetting: bool = True) -> InfluenceDiagram:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"{path}: not valid JSON: {exc}") from exc
    return from_dict(data, nonforgetting=nonforgetting)


def save(diagram: InfluenceDiagram, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(diagram), fh, indent=2)
        fh.write("\n")


def wildcatter(nonforgetting: bool = True) -> InfluenceDiagram:
    """The bundled oil wildcatter example diagram."""
    text = resources.files("oomid").joinpath("data/wildcatter.json").read_text()
    return from_dict(json.loads(text), nonforgetting=nonforgetting)
