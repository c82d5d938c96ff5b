"""Solver-agnostic linear model containers and the variable naming scheme.

Names are canonical and stable across runs:

* ``y_<stem>_<i>_<j>``: logical link ``stem`` routed over physical arc i->j
* ``m_<scen>_<a>_<b>``: survival flow on directed logical arc a->b
* ``h_<scen>_<stem>``: logical link ``stem`` is hit by scenario ``scen``

A stem is ``<s>_<t>`` for logical link (s, t); links that share endpoints
with another link get an ``x<id>`` suffix so every stem stays unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from survmap.errors import ModelError
from survmap.failure_model import FailureScenario
from survmap.net_model import LogicalNetwork, PhysicalNetwork

BINARY = "binary"
CONTINUOUS = "continuous"

TAG_ROUTE = "route"
TAG_FLOW = "flow"
TAG_HIT = "hit"

FAMILIES = ("tree-srlg", "tree-k", "cut-srlg", "cut-k")
MAX_NAME_LENGTH = 255


@dataclass(frozen=True)
class VariableRef:
    name: str
    kind: str
    lo: float = 0.0
    hi: float = 1.0
    tag: str = TAG_ROUTE
    key: tuple = ()

    def __post_init__(self):
        if self.kind not in (BINARY, CONTINUOUS):
            raise ModelError(f"unknown variable kind {self.kind!r}")
        if self.kind == BINARY and (self.lo, self.hi) != (0, 1):
            raise ModelError(f"binary variable {self.name} must have bounds [0, 1]")
        if not self.lo <= self.hi:
            raise ModelError(f"variable {self.name} has empty bounds")
        if len(self.name) > MAX_NAME_LENGTH:
            raise ModelError(f"variable name longer than {MAX_NAME_LENGTH} characters: {self.name[:40]}...")


@dataclass(frozen=True)
class Constraint:
    """``sum(coef * var) <sense> rhs`` with sense one of ``<=``, ``=``, ``>=``."""

    terms: tuple[tuple[float, str], ...]
    sense: str
    rhs: float
    label: str

    def __post_init__(self):
        if self.sense not in ("<=", "=", ">="):
            raise ModelError(f"bad sense {self.sense!r} in row {self.label}")
        if not self.terms:
            raise ModelError(f"row {self.label} has no terms")
        if not all(math.isfinite(c) for c, _ in self.terms) or not math.isfinite(self.rhs):
            raise ModelError(f"row {self.label} has a non-finite number")

    def activity(self, values: dict[str, float]) -> float:
        return math.fsum(c * values[v] for c, v in self.terms)

    def violation(self, values: dict[str, float]) -> float:
        lhs = self.activity(values)
        if self.sense == "<=":
            return max(0.0, lhs - self.rhs)
        if self.sense == ">=":
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass
class MilpModel:
    family: str
    phys: PhysicalNetwork
    logical: LogicalNetwork
    scenarios: tuple[FailureScenario, ...]
    root: int
    instance: str = ""
    variables: dict[str, VariableRef] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[tuple[float, str]] = field(default_factory=list)
    _labels: set[str] = field(default_factory=set, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(f"unknown family {self.family!r}")

    def add_variable(self, var: VariableRef) -> str:
        if var.name in self.variables:
            raise ModelError(f"duplicate variable name {var.name}")
        self.variables[var.name] = var
        return var.name

    def add_constraint(self, row: Constraint) -> None:
        if row.label in self._labels:
            raise ModelError(f"duplicate row label {row.label}")
        for _, name in row.terms:
            if name not in self.variables:
                raise ModelError(f"row {row.label} references undeclared variable {name}")
        self._labels.add(row.label)
        self.constraints.append(row)

    def set_objective(self, terms: list[tuple[float, str]]) -> None:
        for _, name in terms:
            if name not in self.variables:
                raise ModelError(f"objective references undeclared variable {name}")
        self.objective = list(terms)

    def variables_tagged(self, tag: str) -> list[VariableRef]:
        return [v for v in self.variables.values() if v.tag == tag]

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_binary(self) -> int:
        return sum(v.kind == BINARY for v in self.variables.values())

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def objective_value(self, values: dict[str, float]) -> float:
        return math.fsum(c * values[v] for c, v in self.objective)


def link_stems(logical: LogicalNetwork) -> dict[int, tuple[str, str]]:
    """Per logical link id: (forward stem, backward stem)."""
    pairs: dict[frozenset[int], int] = {}
    for _, (s, t) in logical.edge_items():
        key = frozenset((s, t))
        pairs[key] = pairs.get(key, 0) + 1
    out = {}
    for lid, (s, t) in logical.edge_items():
        suffix = f"x{lid}" if pairs[frozenset((s, t))] > 1 else ""
        out[lid] = (f"{s}_{t}{suffix}", f"{t}_{s}{suffix}")
    return out


def route_var(stem: str, i: int, j: int) -> str:
    return f"y_{stem}_{i}_{j}"


def flow_var(scenario: str, arc: str) -> str:
    return f"m_{scenario}_{arc}"


def hit_var(scenario: str, stem: str) -> str:
    return f"h_{scenario}_{stem}"
