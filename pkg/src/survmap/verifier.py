"""Exhaustive survivability checks and the metrics reported for a mapping.

``verify_scenario`` is the ground truth: a scenario is survived iff the
logical network left after removing every logical link routed over a failed
physical link is connected. Two alternative criteria, protecting-tree
existence and cutset coverage, are provided for cross-checking; they are
deliberately implemented by brute-force enumeration.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from survmap.errors import CapacityError, DomainError
from survmap.failure_model import FailureScenario, SrlgSet, gen_k_failures
from survmap.net_model import (
    LogicalNetwork,
    Mapping,
    SpanningTree,
    enumerate_cutsets,
    enumerate_spanning_trees,
    is_connected,
    residual_logical,
    spanning_tree_of,
)

DEFAULT_ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True)
class SurvivabilityReport:
    """Outcome of checking a mapping against a family of scenarios.

    ``protected_count`` is MaxS in SRLG mode and SIdx in k mode.
    """

    mode: str
    survivable: bool
    protected_count: int
    total_count: int
    failed_scenarios: tuple[str, ...]
    phys_utilization: int

    def __post_init__(self):
        if not 0 <= self.protected_count <= self.total_count:
            raise DomainError("protected_count out of range")
        if self.survivable != (self.protected_count == self.total_count):
            raise DomainError("survivable must equal protected_count == total_count")
        if len(self.failed_scenarios) != self.total_count - self.protected_count:
            raise DomainError("failed_scenarios must list every unprotected scenario")

    def merge(self, other: SurvivabilityReport) -> SurvivabilityReport:
        """Combine reports over disjoint scenario ranges of the same mapping.

        Failed names come back sorted so that merging is commutative.
        """
        if (self.mode, self.phys_utilization) != (other.mode, other.phys_utilization):
            raise DomainError("can only merge reports for the same mapping and mode")
        protected = self.protected_count + other.protected_count
        total = self.total_count + other.total_count
        return SurvivabilityReport(
            self.mode,
            protected == total,
            protected,
            total,
            tuple(sorted(self.failed_scenarios + other.failed_scenarios)),
            self.phys_utilization,
        )

    @property
    def metric_name(self) -> str:
        return "MaxS" if self.mode == "srlg" else "SIdx"


def verify_scenario(logical: LogicalNetwork, mapping: Mapping, scenario: FailureScenario) -> bool:
    return is_connected(residual_logical(logical, mapping, scenario.edge_ids))


def phys_utilization(mapping: Mapping, logical: LogicalNetwork | None = None) -> int:
    """Total physical hops over all routes (PhyS)."""
    logical = logical or mapping.logical
    mapping.require_complete(logical)
    return sum(len(mapping.routes[lid]) for lid in logical.edges)


def _report(mode: str, logical: LogicalNetwork, mapping: Mapping, scenarios: Iterable[FailureScenario]) -> SurvivabilityReport:
    mapping.require_complete(logical)
    protected = 0
    total = 0
    failed = []
    for scenario in scenarios:
        total += 1
        if verify_scenario(logical, mapping, scenario):
            protected += 1
        else:
            failed.append(scenario.name)
    return SurvivabilityReport(
        mode, protected == total, protected, total, tuple(failed), phys_utilization(mapping, logical)
    )


def verify_srlg(logical: LogicalNetwork, mapping: Mapping, srlgs: SrlgSet) -> SurvivabilityReport:
    return _report("srlg", logical, mapping, srlgs)


def verify_k(
    logical: LogicalNetwork, mapping: Mapping, k: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> SurvivabilityReport:
    """Check every k-combination of physical links, streaming the scenarios."""
    count = math.comb(mapping.phys.num_edges, k) if 0 <= k <= mapping.phys.num_edges else 0
    if count > budget:
        raise CapacityError(f"C({mapping.phys.num_edges}, {k}) = {count} scenarios exceed budget {budget}")
    return _report("k", logical, mapping, gen_k_failures(mapping.phys, k))


def witness_tree(logical: LogicalNetwork, mapping: Mapping, scenario: FailureScenario | None) -> SpanningTree | None:
    """A protecting spanning tree for ``scenario``, or None if it disconnects.

    The tree is the BFS tree of the residual network rooted at the lowest
    logical node, so it never contains a logical link hit by the scenario.
    """
    failed = scenario.edge_ids if scenario is not None else frozenset()
    tree = spanning_tree_of(residual_logical(logical, mapping, failed))
    return SpanningTree(tree) if tree is not None else None


def survives_by_trees(logical: LogicalNetwork, mapping: Mapping, failed: Iterable[int]) -> bool:
    """Protecting-tree criterion: some spanning tree avoids every hit link."""
    mapping.require_complete(logical)
    hit = mapping.hit_by(failed)
    return any(tree.edge_ids.isdisjoint(hit) for tree in enumerate_spanning_trees(logical))


def survives_by_cutsets(logical: LogicalNetwork, mapping: Mapping, failed: Iterable[int]) -> bool:
    """Cutset criterion: no cutset loses all of its links."""
    mapping.require_complete(logical)
    hit = mapping.hit_by(failed)
    if not is_connected(logical):
        return False
    return all(len(c.edge_ids & hit) <= len(c.edge_ids) - 1 for c in enumerate_cutsets(logical))


def report_columns(mode: str) -> tuple[str, ...]:
    return ("instance", "Surv", "MaxS" if mode == "srlg" else "SIdx", "Total", "PhyS")


def report_rows(named: Sequence[tuple[str, SurvivabilityReport]]) -> list[dict[str, str]]:
    return [
        {
            "instance": name,
            "Surv": "Yes" if r.survivable else "No",
            r.metric_name: str(r.protected_count),
            "Total": str(r.total_count),
            "PhyS": str(r.phys_utilization),
        }
        for name, r in named
    ]


def format_table(rows: Sequence[dict[str, str]], columns: Sequence[str]) -> str:
    """Left-aligned text table with a dashed rule under the header."""
    widths = [max([len(c)] + [len(row[c]) for row in rows]) for c in columns]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(row[c].ljust(w) for c, w in zip(columns, widths)).rstrip() for row in rows)
    return "\n".join(lines) + "\n"


def format_csv(rows: Sequence[dict[str, str]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def format_reports(named: Sequence[tuple[str, SurvivabilityReport]]) -> str:
    """Text table mirroring the Surv / MaxS-or-SIdx / PhyS layout; one mode per call."""
    modes = {r.mode for _, r in named}
    if len(modes) > 1:
        raise DomainError("format_reports needs reports of a single mode")
    return format_table(report_rows(named), report_columns(modes.pop() if modes else "srlg"))
