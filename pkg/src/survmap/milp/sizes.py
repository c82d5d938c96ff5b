"""Exact size formulas for the four families and their asymptotic bounds.

Exact counts follow directly from the construction in ``builders``:

==========  =====================================  ==============================================
family      variables                              constraints
==========  =====================================  ==============================================
tree        2|E_S||E_P| + 2|E_S||R|                 |E_S||V_P| + 2|E_S| sum|r| + |R||V_S|
cutset      2|E_S||E_P| + |E_S||R|                  |E_S||V_P| + |E_S| sum|r| + |E_S||R| + |R|(2^(|V_S|-1) - 1)
==========  =====================================  ==============================================

For k-failure families ``|R| = C(|E_P|, k)`` and ``sum|r| = k |R|``. The
asymptotic forms drop the per-scenario link multiplicity, so the exact count
is bounded by ``C * formula`` with ``C = 2 max(1, r_max)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from survmap.errors import DomainError, ModelError
from survmap.milp.model import FAMILIES, MilpModel


@dataclass(frozen=True)
class ModelDims:
    phys_nodes: int
    phys_edges: int
    logical_nodes: int
    logical_edges: int
    scenarios: int
    scenario_edge_total: int
    max_scenario_size: int

    @classmethod
    def from_sizes(cls, phys_nodes, phys_edges, logical_nodes, logical_edges, scenario_sizes: Iterable[int]):
        sizes = list(scenario_sizes)
        return cls(
            phys_nodes, phys_edges, logical_nodes, logical_edges, len(sizes), sum(sizes), max(sizes, default=0)
        )

    @classmethod
    def for_k(cls, phys_nodes, phys_edges, logical_nodes, logical_edges, k: int):
        count = math.comb(phys_edges, k)
        return cls(phys_nodes, phys_edges, logical_nodes, logical_edges, count, k * count, k if count else 0)

    @classmethod
    def of_model(cls, model: MilpModel):
        return cls.from_sizes(
            model.phys.num_nodes,
            model.phys.num_edges,
            model.logical.num_nodes,
            model.logical.num_edges,
            (len(s.edge_ids) for s in model.scenarios),
        )


@dataclass(frozen=True)
class SizeCounts:
    variables: int
    binaries: int
    constraints: int


def exact_counts(family: str, d: ModelDims) -> SizeCounts:
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    routes = 2 * d.logical_edges * d.phys_edges
    route_rows = d.logical_edges * d.phys_nodes
    if family.startswith("tree"):
        return SizeCounts(
            routes + 2 * d.logical_edges * d.scenarios,
            routes,
            route_rows + 2 * d.logical_edges * d.scenario_edge_total + d.scenarios * d.logical_nodes,
        )
    bipartitions = 2 ** (d.logical_nodes - 1) - 1
    hits = d.logical_edges * d.scenarios
    return SizeCounts(
        routes + hits,
        routes + hits,
        route_rows + d.logical_edges * d.scenario_edge_total + hits + d.scenarios * bipartitions,
    )


def formula_counts(family: str, d: ModelDims) -> tuple[int, int]:
    """Asymptotic (variables, constraints), without constants."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    variables = d.logical_edges * (d.scenarios + d.phys_edges)
    constraints = d.logical_edges * d.phys_nodes + d.scenarios * (d.logical_edges + d.logical_nodes)
    if family.startswith("cut"):
        constraints += d.scenarios * 2 ** d.logical_nodes
    return variables, constraints


def bound_constant(d: ModelDims) -> int:
    return 2 * max(1, d.max_scenario_size)


@dataclass(frozen=True)
class SizeReport:
    family: str
    dims: ModelDims
    predicted: SizeCounts
    actual: SizeCounts | None
    formula_variables: int
    formula_constraints: int
    constant: int

    @property
    def within_bounds(self) -> bool:
        counts = self.actual or self.predicted
        return (
            counts.variables <= self.constant * self.formula_variables
            and counts.constraints <= self.constant * self.formula_constraints
        )

    @property
    def exact_match(self) -> bool:
        return self.actual is None or self.actual == self.predicted

    def rows(self) -> list[tuple[str, int, int | None, int]]:
        a = self.actual
        return [
            ("variables", self.predicted.variables, a.variables if a else None, self.formula_variables),
            ("binaries", self.predicted.binaries, a.binaries if a else None, self.formula_variables),
            ("constraints", self.predicted.constraints, a.constraints if a else None, self.formula_constraints),
        ]

    def __str__(self) -> str:
        lines = [f"family {self.family}  (bound constant C={self.constant})", "quantity     exact  actual  formula"]
        for name, exact, actual, formula in self.rows():
            shown = "-" if actual is None else str(actual)
            lines.append(f"{name:<11} {exact:>6} {shown:>7} {formula:>8}")
        return "\n".join(lines)


def model_size_report(family: str, dims: ModelDims, model: MilpModel | None = None) -> SizeReport:
    """Predicted counts, the model's actual counts, and the asymptotic values.

    Raises :class:`ModelError` if a built model disagrees with the exact
    prediction or exceeds ``C * formula``.
    """
    actual = None
    if model is not None:
        actual = SizeCounts(model.num_variables, model.num_binary, model.num_constraints)
    fv, fc = formula_counts(family, dims)
    report = SizeReport(family, dims, exact_counts(family, dims), actual, fv, fc, bound_constant(dims))
    if not report.exact_match:
        raise ModelError(f"built model {actual} differs from predicted {report.predicted}")
    if not report.within_bounds:
        raise ModelError(f"model size exceeds {report.constant} x asymptotic bound")
    return report
