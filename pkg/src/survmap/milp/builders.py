"""The tree-based and cutset-based survivable mapping models.

Both families share a routing block: for every logical link (s, t) a binary
per orientation of every physical link, unit flow out of the host of s and
into the host of t, and the objective of total routed hops.

Tree family, per scenario r: continuous flows on both arcs of every logical
link, capped at zero when the link's route uses a link of r, and a
fractional spanning-tree balance that sends ``1/(|V_S|-1)`` from every
non-root node to the root.

Cutset family, per scenario r: a binary hit indicator per logical link tied
to its route variables from both sides, and for every bipartition of the
logical nodes at most ``|chi| - 1`` hit links in the cut ``chi``.
"""

from __future__ import annotations

from typing import Iterable

from survmap.errors import CapacityError, DomainError
from survmap.failure_model import FailureScenario, SrlgSet, gen_k_failures
from survmap.milp.model import (
    BINARY,
    CONTINUOUS,
    TAG_FLOW,
    TAG_HIT,
    TAG_ROUTE,
    Constraint,
    MilpModel,
    VariableRef,
    flow_var,
    hit_var,
    link_stems,
    route_var,
)
from survmap.milp.sizes import ModelDims, exact_counts
from survmap.net_model import (
    DEFAULT_CUTSET_NODE_BOUND,
    LogicalNetwork,
    PhysicalNetwork,
    enumerate_cutsets,
    is_connected,
)

DEFAULT_MAX_VARIABLES = 2_000_000
DEFAULT_MAX_CONSTRAINTS = 5_000_000


def _check_nets(phys: PhysicalNetwork, logical: LogicalNetwork, root: int | None) -> int:
    if logical.num_nodes < 2:
        raise DomainError("the logical network needs at least 2 nodes")
    logical.check_against(phys)
    if not is_connected(logical):
        raise DomainError("the logical network must be connected")
    if not is_connected(phys):
        raise DomainError("the physical network must be connected")
    if root is None:
        return min(logical.nodes)
    if root not in logical.nodes:
        raise DomainError(f"root {root} is not a logical node")
    return root


def _check_budget(family: str, dims: ModelDims, max_variables: int, max_constraints: int) -> None:
    counts = exact_counts(family, dims)
    if counts.variables > max_variables or counts.constraints > max_constraints:
        raise CapacityError(
            f"{family} model would have {counts.variables} variables and {counts.constraints} constraints "
            f"({dims.scenarios} scenarios); budget is {max_variables} / {max_constraints}"
        )


def _add_routing(model: MilpModel) -> None:
    phys, logical = model.phys, model.logical
    stems = link_stems(logical)
    objective = []
    for lid, (s, t) in logical.edge_items():
        stem = stems[lid][0]
        for eid, (u, v) in phys.edge_items():
            for i, j in ((u, v), (v, u)):
                name = model.add_variable(VariableRef(route_var(stem, i, j), BINARY, tag=TAG_ROUTE, key=(lid, eid, i, j)))
                objective.append((1.0, name))
    for lid, (s, t) in logical.edge_items():
        stem = stems[lid][0]
        src, dst = logical.node_map[s], logical.node_map[t]
        inc = phys.incidence
        for node in phys.nodes:
            terms = []
            for _, w in inc[node]:
                terms.append((1.0, route_var(stem, node, w)))
                terms.append((-1.0, route_var(stem, w, node)))
            rhs = 1.0 if node == src else -1.0 if node == dst else 0.0
            model.add_constraint(Constraint(tuple(terms), "=", rhs, f"route_{stem}_{node}"))
    model.set_objective(objective)


def _link_usage(model: MilpModel, stem: str, edge_id: int) -> list[tuple[float, str]]:
    u, v = model.phys.endpoints(edge_id)
    return [(1.0, route_var(stem, u, v)), (1.0, route_var(stem, v, u))]


def _add_tree_block(model: MilpModel, scenario: FailureScenario) -> None:
    logical = model.logical
    stems = link_stems(logical)
    failed = sorted(scenario.edge_ids)
    r = scenario.name
    for lid, (s, t) in logical.edge_items():
        fwd, bwd = stems[lid]
        for arc, (a, b) in ((fwd, (s, t)), (bwd, (t, s))):
            name = model.add_variable(VariableRef(flow_var(r, arc), CONTINUOUS, 0.0, 1.0, TAG_FLOW, (r, lid, a, b)))
            for e in failed:
                terms = ((1.0, name), *_link_usage(model, fwd, e))
                model.add_constraint(Constraint(terms, "<=", 1.0, f"cap_{r}_{arc}_{e}"))
    n = logical.num_nodes
    share = 1.0 / (n - 1)
    for node in logical.nodes:
        terms = []
        for lid, (s, t) in logical.edge_items():
            fwd, bwd = stems[lid]
            if node == s:
                terms += [(1.0, flow_var(r, fwd)), (-1.0, flow_var(r, bwd))]
            elif node == t:
                terms += [(1.0, flow_var(r, bwd)), (-1.0, flow_var(r, fwd))]
        rhs = -1.0 if node == model.root else share
        model.add_constraint(Constraint(tuple(terms), "=", rhs, f"tree_{r}_{node}"))


def _add_cut_block(model: MilpModel, scenario: FailureScenario, cutsets) -> None:
    logical = model.logical
    stems = link_stems(logical)
    failed = sorted(scenario.edge_ids)
    r = scenario.name
    for lid, _ in logical.edge_items():
        stem = stems[lid][0]
        h = model.add_variable(VariableRef(hit_var(r, stem), BINARY, tag=TAG_HIT, key=(r, lid)))
        usage = []
        for e in failed:
            link = _link_usage(model, stem, e)
            usage += link
            terms = ((1.0, h), *((-c, v) for c, v in link))
            model.add_constraint(Constraint(terms, ">=", 0.0, f"hitlb_{r}_{stem}_{e}"))
        terms = ((1.0, h), *((-c, v) for c, v in usage))
        model.add_constraint(Constraint(terms, "<=", 0.0, f"hitub_{r}_{stem}"))
    for idx, cut in enumerate(cutsets):
        terms = tuple((1.0, hit_var(r, stems[lid][0])) for lid in sorted(cut.edge_ids))
        model.add_constraint(Constraint(terms, "<=", float(len(terms) - 1), f"cut_{r}_{idx}"))


def _scenarios_for(phys: PhysicalNetwork, scenarios: Iterable[FailureScenario]) -> tuple[FailureScenario, ...]:
    out = tuple(scenarios)
    for s in out:
        s.check_against(phys)
    return out


def _build(
    family: str,
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    scenarios: tuple[FailureScenario, ...],
    root: int,
    instance: str,
) -> MilpModel:
    model = MilpModel(family, phys, logical, scenarios, root, instance)
    _add_routing(model)
    if family.startswith("tree"):
        for scenario in scenarios:
            _add_tree_block(model, scenario)
    else:
        cutsets = enumerate_cutsets(logical)
        for scenario in scenarios:
            _add_cut_block(model, scenario, cutsets)
    return model


def build_tree_srlg_model(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    srlgs: SrlgSet,
    root: int | None = None,
    *,
    instance: str = "",
    max_variables: int = DEFAULT_MAX_VARIABLES,
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> MilpModel:
    root = _check_nets(phys, logical, root)
    scenarios = _scenarios_for(phys, srlgs)
    dims = ModelDims.from_sizes(
        phys.num_nodes, phys.num_edges, logical.num_nodes, logical.num_edges, (s.size for s in scenarios)
    )
    _check_budget("tree-srlg", dims, max_variables, max_constraints)
    return _build("tree-srlg", phys, logical, scenarios, root, instance)


def _k_scenarios(phys, logical, k, family, max_variables, max_constraints):
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= phys.num_edges:
        raise DomainError(f"k must be in 1..{phys.num_edges}, got {k!r}")
    dims = ModelDims.for_k(phys.num_nodes, phys.num_edges, logical.num_nodes, logical.num_edges, k)
    _check_budget(family, dims, max_variables, max_constraints)
    return tuple(gen_k_failures(phys, k))


def build_tree_k_model(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    k: int,
    root: int | None = None,
    *,
    instance: str = "",
    max_variables: int = DEFAULT_MAX_VARIABLES,
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> MilpModel:
    root = _check_nets(phys, logical, root)
    scenarios = _k_scenarios(phys, logical, k, "tree-k", max_variables, max_constraints)
    return _build("tree-k", phys, logical, scenarios, root, instance)


def _check_cut_nodes(logical: LogicalNetwork, max_nodes: int) -> None:
    if logical.num_nodes > max_nodes:
        raise CapacityError(
            f"{logical.num_nodes} logical nodes give {2 ** (logical.num_nodes - 1) - 1} bipartitions; "
            f"cutset bound is {max_nodes} nodes"
        )


def build_cutset_srlg_model(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    srlgs: SrlgSet,
    root: int | None = None,
    *,
    instance: str = "",
    max_nodes: int = DEFAULT_CUTSET_NODE_BOUND,
    max_variables: int = DEFAULT_MAX_VARIABLES,
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> MilpModel:
    """Cutset model; ``root`` is recorded as metadata only."""
    root = _check_nets(phys, logical, root)
    _check_cut_nodes(logical, max_nodes)
    scenarios = _scenarios_for(phys, srlgs)
    dims = ModelDims.from_sizes(
        phys.num_nodes, phys.num_edges, logical.num_nodes, logical.num_edges, (s.size for s in scenarios)
    )
    _check_budget("cut-srlg", dims, max_variables, max_constraints)
    return _build("cut-srlg", phys, logical, scenarios, root, instance)


def build_cutset_k_model(
    phys: PhysicalNetwork,
    logical: LogicalNetwork,
    k: int,
    root: int | None = None,
    *,
    instance: str = "",
    max_nodes: int = DEFAULT_CUTSET_NODE_BOUND,
    max_variables: int = DEFAULT_MAX_VARIABLES,
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> MilpModel:
    root = _check_nets(phys, logical, root)
    _check_cut_nodes(logical, max_nodes)
    scenarios = _k_scenarios(phys, logical, k, "cut-k", max_variables, max_constraints)
    return _build("cut-k", phys, logical, scenarios, root, instance)


def build_model(family: str, phys, logical, *, srlgs=None, k=None, root=None, instance="") -> MilpModel:
    """Dispatch on the family name used by the command line."""
    if family in ("tree-srlg", "cut-srlg"):
        if srlgs is None:
            raise DomainError(f"{family} needs an SRLG set")
        builder = build_tree_srlg_model if family == "tree-srlg" else build_cutset_srlg_model
        return builder(phys, logical, srlgs, root, instance=instance)
    if family in ("tree-k", "cut-k"):
        if k is None:
            raise DomainError(f"{family} needs k")
        builder = build_tree_k_model if family == "tree-k" else build_cutset_k_model
        return builder(phys, logical, k, root, instance=instance)
    raise DomainError(f"unknown family {family!r}")

