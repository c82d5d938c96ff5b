"""Iterative protecting-spanning-tree construction with Big-M penalties.

For each failure scenario, in order, the algorithm first looks for an
existing tree whose branch routes all avoid the scenario. If there is none,
physical links in the scenario are penalized by a factor ``M``, every
unrouted logical link gets a fresh min-cost candidate route, every routed
link is re-priced at its committed route's penalized cost, and a minimum
spanning tree over those logical costs becomes the next protecting tree.
Tree branches are committed and never re-routed.

When even the new tree crosses the scenario, the logical network is short
of survivable structure for it; if the augmentation budget allows, a new
logical link is added between two logical components that the scenario
would separate, routed around the scenario, and the tree is rebuilt.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from survmap.errors import AugmentationError, CapacityError, DomainError, NoPathError, NumericRangeError
from survmap.failure_model import FailureScenario, SrlgSet, k_failure_set
from survmap.net_model import (
    CostVector,
    LogicalNetwork,
    Mapping,
    PhysicalNetwork,
    SpanningTree,
    _UnionFind,
    is_connected,
    minimum_spanning_tree,
    shortest_path,
)
from survmap.verifier import DEFAULT_ENUMERATION_BUDGET

log = logging.getLogger(__name__)

DEFAULT_BIG_M = 1e6


@dataclass(frozen=True)
class HeuristicConfig:
    """Knobs for :func:`run_srlg_heuristic`.

    Attributes:
        big_m: multiplicative penalty on scenario links; must exceed 1.
        max_augment: total logical links that may be added; None means the
            original number of logical links, 0 disables augmentation.
        order: ``"given"`` or ``"shuffled:<seed>"`` scenario processing order.
    """

    big_m: float = DEFAULT_BIG_M
    max_augment: int | None = None
    order: str = "given"

    def __post_init__(self):
        if not (math.isfinite(self.big_m) and self.big_m > 1):
            raise DomainError(f"big_m must be a finite number > 1, got {self.big_m}")
        if self.max_augment is not None and self.max_augment < 0:
            raise DomainError("max_augment must be non-negative")
        if self.order != "given" and not self.order.startswith("shuffled:"):
            raise DomainError(f"order must be 'given' or 'shuffled:<seed>', got {self.order!r}")

    def processing_order(self, n: int) -> list[int]:
        idx = list(range(n))
        if self.order.startswith("shuffled:"):
            try:
                seed = int(self.order.split(":", 1)[1])
            except ValueError:
                raise DomainError(f"bad shuffle seed in {self.order!r}") from None
            random.Random(seed).shuffle(idx)
        return idx


@dataclass(frozen=True)
class ProtectionPlan:
    """Result of the heuristic.

    Attributes:
        logical: the logical network including augmented links.
        trees: protecting trees in creation order.
        scenario_names: names of the input scenarios, in input order.
        protected: per input scenario, the index of its protecting tree or None.
        mapping: complete mapping over ``logical``.
        committed: logical links whose routes were fixed by the algorithm
            (tree branches and augmented links).
        completed_edges: links outside every tree, given min-hop routes at
            the end so the mapping is complete.
        augmented_edges: ids of links added by augmentation.
        candidate_routes: provisional routes never committed.
        processing_order: input indices in the order they were handled.
    """

    logical: LogicalNetwork
    trees: tuple[SpanningTree, ...]
    scenario_names: tuple[str, ...]
    protected: tuple[int | None, ...]
    mapping: Mapping
    committed: frozenset[int]
    completed_edges: tuple[int, ...]
    augmented_edges: tuple[int, ...]
    candidate_routes: dict[int, tuple[int, ...]] = field(default_factory=dict)
    processing_order: tuple[int, ...] = ()

    @property
    def protected_count(self) -> int:
        return sum(p is not None for p in self.protected)

    @property
    def tree_count(self) -> int:
        return len(self.trees)

    @property
    def logical_edges_used(self) -> int:
        """LogS: distinct logical links across all trees."""
        return len(set().union(*(t.edge_ids for t in self.trees))) if self.trees else 0

    def protects(self) -> dict[str, int]:
        return {n: p for n, p in zip(self.scenario_names, self.protected) if p is not None}


class _State:
    def __init__(self, phys: PhysicalNetwork, logical: LogicalNetwork, config: HeuristicConfig, budget: int):
        self.phys = phys
        self.logical = logical
        self.m = float(config.big_m)
        self.committed: dict[int, tuple[int, ...]] = {}
        self.candidates: dict[int, tuple[int, ...]] = {}
        self.trees: list[SpanningTree] = []
        self.augmented: list[int] = []
        self.augment_budget = budget

    def route_of(self, lid: int) -> tuple[int, ...] | None:
        return self.committed.get(lid, self.candidates.get(lid))

    def tree_avoids(self, tree: SpanningTree, scenario: FailureScenario) -> bool:
        for lid in tree.edge_ids:
            route = self.route_of(lid)
            if route is None or not scenario.edge_ids.isdisjoint(route):
                return False
        return True

    def penalized(self, scenario: FailureScenario) -> CostVector:
        return CostVector(
            tuple(self.m if e in scenario.edge_ids else 1.0 for e in range(self.phys.num_edges))
        )

    def protect_with_existing(self, scenario: FailureScenario) -> int | None:
        for idx, tree in enumerate(self.trees):
            if self.tree_avoids(tree, scenario):
                for lid in tree.edge_ids:
                    if lid not in self.committed:
                        self.committed[lid] = self.candidates[lid]
                return idx
        return None

    def penalized_tree(self, scenario: FailureScenario) -> SpanningTree:
        pcosts = self.penalized(scenario)
        nmap = self.logical.node_map
        logical_costs = {}
        for lid, (s, t) in self.logical.edge_items():
            if lid in self.committed:
                cost = pcosts.path_cost(self.committed[lid])
            else:
                route = shortest_path(self.phys, pcosts, nmap[s], nmap[t])
                self.candidates[lid] = route
                cost = pcosts.path_cost(route)
            if not math.isfinite(cost):
                raise NumericRangeError(f"cost of logical link {lid} overflowed")
            logical_costs[lid] = cost
        return minimum_spanning_tree(self.logical, CostVector(pcosts.physical_costs, logical_costs))

    def augment_once(self, scenario: FailureScenario) -> int:
        """Add one logical link bridging two scenario-separated components."""
        pcosts = self.penalized(scenario)
        uf = _UnionFind(self.logical.nodes)
        for lid, (s, t) in self.logical.edge_items():
            route = self.route_of(lid)
            if route is not None and scenario.edge_ids.isdisjoint(route):
                uf.union(s, t)
        adjacent = {frozenset(uv) for uv in self.logical.edges.values()}
        nodes = self.logical.nodes
        pairs = [
            (s, t) for i, s in enumerate(nodes) for t in nodes[i + 1:] if uf.find(s) != uf.find(t)
        ]
        pairs.sort(
            key=lambda p: (
                frozenset(p) in adjacent,
                self.logical.degree(p[0]) + self.logical.degree(p[1]),
                p,
            )
        )
        nmap = self.logical.node_map
        for s, t in pairs:
            try:
                route = shortest_path(self.phys, pcosts, nmap[s], nmap[t])
            except NoPathError:
                continue
            if scenario.edge_ids.isdisjoint(route):
                lid = self.logical.next_edge_id()
                self.logical = self.logical.with_edge(lid, s, t, augmented=True)
                self.committed[lid] = route
                self.augmented.append(lid)
                self.augment_budget -= 1
                log.debug("augmented logical link %d = (%d, %d) for %s", lid, s, t, scenario.name)
                return lid
        raise AugmentationError(f"no logical link can be routed around scenario {scenario.name}")

    def build_tree(self, scenario: FailureScenario) -> tuple[SpanningTree, bool]:
        tree = self.penalized_tree(scenario)
        while not self.tree_avoids(tree, scenario) and self.augment_budget > 0:
            try:
                self.augment_once(scenario)
            except AugmentationError as exc:
                log.info("%s", exc)
                break
            tree = self.penalized_tree(scenario)
        for lid in tree.edge_ids:
            if lid not in self.committed:
                self.committed[lid] = self.candidates[lid]
        self.trees.append(tree)
        return tree, self.tree_avoids(tree, scenario)


def _check_inputs(phys: PhysicalNetwork, logical: LogicalNetwork) -> None:
    if not is_connected(phys):
        raise DomainError("physical network is disconnected")
    if not is_connected(logical):
        raise DomainError("logical network is disconnected")
    logical.check_against(phys)


def _finish(state: _State, names: list[str], protected: list[int | None], order: list[int]) -> ProtectionPlan:
    unit = CostVector.unit(state.phys)
    nmap = state.logical.node_map
    routes = dict(state.committed)
    completed = []
    for lid, (s, t) in state.logical.edge_items():
        if lid not in routes:
            routes[lid] = shortest_path(state.phys, unit, nmap[s], nmap[t])
            completed.append(lid)
    leftover = {lid: r for lid, r in state.candidates.items() if lid not in state.committed}
    return ProtectionPlan(
        logical=state.logical,
        trees=tuple(state.trees),
        scenario_names=tuple(names),
        protected=tuple(protected),
        mapping=Mapping(state.phys, state.logical, routes),
        committed=frozenset(state.committed),
        completed_edges=tuple(completed),
        augmented_edges=tuple(state.augmented),
        candidate_routes=leftover,
        processing_order=tuple(order),
    )


def run_srlg_heuristic(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    srlgs: SrlgSet,
    config: HeuristicConfig | None = None,
) -> ProtectionPlan:
    """Build protecting spanning trees for ``srlgs``; see the module docstring."""
    config = config or HeuristicConfig()
    _check_inputs(phys, logical)
    for scenario in srlgs:
        scenario.check_against(phys)
    budget = logical.num_edges if config.max_augment is None else config.max_augment
    state = _State(phys, logical, config, budget)
    protected: list[int | None] = [None] * len(srlgs)
    order = config.processing_order(len(srlgs))
    for idx in order:
        scenario = srlgs[idx]
        hit = state.protect_with_existing(scenario)
        if hit is not None:
            protected[idx] = hit
            continue
        _, ok = state.build_tree(scenario)
        if ok:
            protected[idx] = len(state.trees) - 1
        else:
            log.info("scenario %s left unprotected", scenario.name)
    return _finish(state, srlgs.names(), protected, order)


def run_k_heuristic(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    k: int,
    config: HeuristicConfig | None = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> ProtectionPlan:
    """Run the SRLG heuristic over every k-combination of physical links."""
    count = math.comb(phys.num_edges, k) if 0 <= k <= phys.num_edges else 0
    if count > budget:
        raise CapacityError(f"C({phys.num_edges}, {k}) = {count} failure sets exceed budget {budget}")
    return run_srlg_heuristic(phys, logical, k_failure_set(phys, k), config)


def augment(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    plan: ProtectionPlan,
    scenario: FailureScenario,
    config: HeuristicConfig | None = None,
) -> tuple[LogicalNetwork, ProtectionPlan]:
    """Add logical links until a new tree protects ``scenario``.

    Works on a finished plan: committed routes are kept, links completed at
    the end of the run are treated as unrouted again. Each added link is
    routed around the scenario. The budget is ``config.max_augment``
    (default: the logical link count of ``logical``).

    Raises:
        AugmentationError: the budget ran out or no link can be routed
            around the scenario; nothing is returned in that case.
    """
    config = config or HeuristicConfig()
    if logical.edges.keys() - plan.logical.edges.keys():
        raise DomainError("plan does not cover the given logical network")
    budget = logical.num_edges if config.max_augment is None else config.max_augment
    state = _State(phys, plan.logical, config, budget)
    state.committed = {lid: plan.mapping.routes[lid] for lid in plan.committed}
    state.trees = list(plan.trees)
    state.augmented = list(plan.augmented_edges)
    if state.protect_with_existing(scenario) is None:
        tree = state.penalized_tree(scenario)
        while not state.tree_avoids(tree, scenario):
            if state.augment_budget <= 0:
                raise AugmentationError(f"augmentation budget exhausted for scenario {scenario.name}")
            state.augment_once(scenario)
            tree = state.penalized_tree(scenario)
        for lid in tree.edge_ids:
            if lid not in state.committed:
                state.committed[lid] = state.candidates[lid]
        state.trees.append(tree)
    names = list(plan.scenario_names)
    protected = list(plan.protected)
    tree_idx = next(i for i, t in enumerate(state.trees) if state.tree_avoids(t, scenario))
    if scenario.name in names:
        protected[names.index(scenario.name)] = tree_idx
    else:
        names.append(scenario.name)
        protected.append(tree_idx)
    new_plan = _finish(state, names, protected, list(plan.processing_order))
    return state.logical, new_plan
