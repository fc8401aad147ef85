"""Order-of-magnitude influence diagrams and the epsilon quantization.

A numeric diagram converts entry-by-entry: a probability ``p`` maps to the
positive value ``(+,k)`` whose bracket ``eps**(k+1) < p <= eps**k``
contains it (zero maps to the zero element); a utility ``u`` maps to the
singleton ``{(sign,-k)}`` with ``eps**-k <= |u| < eps**-(k+1)``.  The
candidate exponent comes from a logarithm and is then snapped by direct
inequality tests, so exact powers of ``eps`` land in the right bracket.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .diagram import DiagramError, InfluenceDiagram, Kind, Variable, validate
from .sets import OOMSet, ZERO_SET, parse_set, singleton
from .values import ZERO, OOMValue, Sign, parse_value


@dataclass(frozen=True)
class ConversionConfig:
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")


def _bracket_exponent(x: float, eps: float) -> int:
    """The integer k with ``eps**(k+1) < x <= eps**k``.

    The log gives a candidate that can sit one off at exact powers of
    ``eps``; the direct comparisons snap it.
    """
    guess = int(math.floor(math.log(x) / math.log(eps)))
    for k in (guess - 1, guess, guess + 1, guess + 2):
        if eps ** (k + 1) < x <= eps**k:
            return k
    raise ArithmeticError(f"no bracket found for {x} at epsilon={eps}")


def spohn_prob(p: float, cfg: ConversionConfig) -> OOMValue:
    """Probability quantization; zero maps to the zero element."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0:
        return ZERO
    return OOMValue(Sign.PLUS, _bracket_exponent(p, cfg.epsilon))


def spohn_util(u: float, cfg: ConversionConfig) -> OOMSet:
    """Utility quantization; the sign carries over, zero maps to zero.

    ``eps**-k <= |u| < eps**-(k+1)`` is evaluated as the probability-style
    bracket on ``1/|u|``, which keeps the powers of ``eps`` nonnegative for
    the common case ``|u| >= 1``.
    """
    if not math.isfinite(u):
        raise ValueError(f"utility must be finite: {u}")
    if u == 0.0:
        return ZERO_SET
    sign = Sign.PLUS if u > 0 else Sign.MINUS
    k = _bracket_exponent(1.0 / abs(u), cfg.epsilon)
    return singleton(OOMValue(sign, -k))


@dataclass(frozen=True)
class OOMCPT:
    child: str
    parents: tuple[str, ...]
    table: tuple[OOMValue, ...]  # row-major over parents + (child,)

    @property
    def scope(self) -> tuple[str, ...]:
        return self.parents + (self.child,)


@dataclass(frozen=True)
class OOMUtilityFunction:
    scope: tuple[str, ...]
    table: tuple[OOMSet, ...]


@dataclass(frozen=True)
class OOMInfluenceDiagram:
    variables: tuple[Variable, ...]
    cpts: tuple[OOMCPT, ...]
    utilities: tuple[OOMUtilityFunction, ...]
    decision_order: tuple[str, ...]
    information_sets: Mapping[str, tuple[str, ...]]

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

    def domain_sizes(self, scope) -> tuple[int, ...]:
        return tuple(len(self.domain(v)) for v in scope)


def validate_oom(diagram: OOMInfluenceDiagram) -> list[str]:
    """Probability entries must be positive or zero; shapes must line up."""
    out: list[str] = []
    for cpt in diagram.cpts:
        expected = math.prod(diagram.domain_sizes(cpt.scope))
        if len(cpt.table) != expected:
            out.append(f"cpt for {cpt.child}: wrong table size")
            continue
        for v in cpt.table:
            if not (v.is_positive or v.is_zero):
                out.append(f"cpt for {cpt.child}: entry {v} is not a probability")
                break
    for i, u in enumerate(diagram.utilities):
        expected = math.prod(diagram.domain_sizes(u.scope))
        if len(u.table) != expected:
            out.append(f"utility {i}: wrong table size")
    if not diagram.utilities:
        out.append("no utility functions")
    return out


def convert(diagram: InfluenceDiagram, cfg: ConversionConfig) -> OOMInfluenceDiagram:
    """Entry-wise quantization; the graph structure carries over unchanged."""
    problems = validate(diagram)
    if problems:
        raise DiagramError("; ".join(problems))
    return OOMInfluenceDiagram(
        variables=diagram.variables,
        cpts=tuple(
            OOMCPT(
                child=c.child,
                parents=c.parents,
                table=tuple(spohn_prob(p, cfg) for p in c.table),
            )
            for c in diagram.cpts
        ),
        utilities=tuple(
            OOMUtilityFunction(
                scope=u.scope, table=tuple(spohn_util(x, cfg) for x in u.table)
            )
            for u in diagram.utilities
        ),
        decision_order=diagram.decision_order,
        information_sets=dict(diagram.information_sets),
    )


# ---------------------------------------------------------------------------
# file format (same skeleton as the numeric one, with textual tables)

def oom_to_dict(diagram: OOMInfluenceDiagram) -> dict:
    return {
        "variables": [
            {"id": v.id, "kind": v.kind.value, "domain": list(v.domain)}
            for v in diagram.variables
        ],
        "cpts": [
            {
                "child": c.child,
                "parents": list(c.parents),
                "table": [str(v) for v in c.table],
            }
            for c in diagram.cpts
        ],
        "utilities": [
            {"scope": list(u.scope), "table": [str(s) for s in u.table]}
            for u in diagram.utilities
        ],
        "decision_order": list(diagram.decision_order),
        "information_sets": {d: list(ps) for d, ps in diagram.information_sets.items()},
    }


def oom_from_dict(data: Mapping) -> OOMInfluenceDiagram:
    try:
        diagram = OOMInfluenceDiagram(
            variables=tuple(
                Variable(v["id"], Kind(v["kind"]), tuple(v["domain"]))
                for v in data["variables"]
            ),
            cpts=tuple(
                OOMCPT(
                    c["child"],
                    tuple(c["parents"]),
                    tuple(parse_value(x) for x in c["table"]),
                )
                for c in data["cpts"]
            ),
            utilities=tuple(
                OOMUtilityFunction(
                    tuple(u["scope"]), tuple(parse_set(x) for x in u["table"])
                )
                for u in data["utilities"]
            ),
            decision_order=tuple(data["decision_order"]),
            information_sets={
                d: tuple(ps) for d, ps in data.get("information_sets", {}).items()
            },
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"malformed order-of-magnitude diagram: {exc}") from exc
    return diagram


def load_oom(path: str | Path) -> OOMInfluenceDiagram:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"{path}: not valid JSON: {exc}") from exc
    return oom_from_dict(data)


def save_oom(diagram: OOMInfluenceDiagram, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(oom_to_dict(diagram), fh, indent=2)
        fh.write("\n")
