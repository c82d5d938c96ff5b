"""Solutions: reading them back as routes, checking them, and building them from mappings.

A solution file holds whitespace-separated ``name value`` pairs, one per
line, with ``#`` comments.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from survmap.errors import DomainError, IngestionError, SolutionFormatError
from survmap.milp.model import (
    BINARY,
    TAG_FLOW,
    TAG_HIT,
    TAG_ROUTE,
    Constraint,
    MilpModel,
    flow_var,
    hit_var,
    link_stems,
    route_var,
)
from survmap.net_model import LogicalNetwork, Mapping, SpanningTree, walk_route
from survmap.verifier import witness_tree

TOLERANCE = 1e-6


def parse_solution(text: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionFormatError(f"line {lineno}: expected 'name value'")
        name, token = parts
        try:
            value = float(token)
        except ValueError:
            raise SolutionFormatError(f"line {lineno}: bad value {token!r}") from None
        if not math.isfinite(value):
            raise SolutionFormatError(f"line {lineno}: non-finite value for {name}")
        if name in values:
            raise SolutionFormatError(f"line {lineno}: second value for {name}")
        values[name] = value
    return values


def format_solution(values: dict[str, float]) -> str:
    return "".join(f"{name} {float(v)!r}\n" for name, v in values.items())


def read_solution(path: str | Path) -> dict[str, float]:
    return parse_solution(Path(path).read_text(encoding="utf-8"))


def _active_arcs(model: MilpModel, values: dict[str, float], lid: int, stem: str) -> list[tuple[int, int, int]]:
    arcs = []
    for eid, (u, v) in model.phys.edge_items():
        for i, j in ((u, v), (v, u)):
            name = route_var(stem, i, j)
            x = values[name]
            r = round(x)
            if abs(x - r) > TOLERANCE or r not in (0, 1):
                raise IngestionError(f"logical edge {lid}: {name} = {x} is not binary")
            if r == 1:
                arcs.append((i, j, eid))
    return arcs


def _strict_path(lid: int, arcs, src: int, dst: int) -> tuple[int, ...]:
    out: dict[int, list[tuple[int, int]]] = {}
    for i, j, eid in arcs:
        out.setdefault(i, []).append((j, eid))
    for node, nxt in out.items():
        if len(nxt) > 1:
            raise IngestionError(f"logical edge {lid}: route branches at physical node {node}")
    path, node, seen = [], src, {src}
    while node != dst:
        if node not in out:
            raise IngestionError(f"logical edge {lid}: no route from {src} to {dst}")
        node, eid = out[node][0]
        if node in seen:
            raise IngestionError(f"logical edge {lid}: route revisits physical node {node}")
        seen.add(node)
        path.append(eid)
    if len(path) != len(arcs):
        raise IngestionError(
            f"logical edge {lid}: {len(arcs) - len(path)} active arcs off the route (cycle); try pruning"
        )
    return tuple(path)


def _pruned_path(lid: int, arcs, src: int, dst: int) -> tuple[int, ...]:
    out: dict[int, list[tuple[int, int]]] = {}
    for i, j, eid in sorted(arcs, key=lambda a: (a[2], a[1])):
        out.setdefault(i, []).append((j, eid))
    prev: dict[int, tuple[int, int] | None] = {src: None}
    queue = deque([src])
    while queue and dst not in prev:
        node = queue.popleft()
        for j, eid in out.get(node, ()):
            if j not in prev:
                prev[j] = (node, eid)
                queue.append(j)
    if dst not in prev:
        raise IngestionError(f"logical edge {lid}: no route from {src} to {dst}")
    path = []
    node = dst
    while prev[node] is not None:
        node, eid = prev[node]
        path.append(eid)
    return tuple(reversed(path))


def ingest_solution(model: MilpModel, solution: str | dict[str, float], prune_cycles: bool = False) -> Mapping:
    """Rebuild one physical route per logical link from the route variables.

    Flow and hit-indicator values are ignored. With ``prune_cycles`` the
    shortest source-to-target path through the active arcs is kept and
    anything else is dropped; otherwise the active arcs must form exactly
    one simple path.
    """
    values = parse_solution(solution) if isinstance(solution, str) else dict(solution)
    unknown = sorted(set(values) - set(model.variables))
    if unknown:
        raise SolutionFormatError(f"solution names unknown variables, e.g. {unknown[:3]}")
    missing = [v.name for v in model.variables_tagged(TAG_ROUTE) if v.name not in values]
    if missing:
        raise SolutionFormatError(f"solution lacks {len(missing)} route variables, e.g. {missing[:3]}")
    logical = model.logical
    stems = link_stems(logical)
    routes = {}
    for lid, (s, t) in logical.edge_items():
        arcs = _active_arcs(model, values, lid, stems[lid][0])
        src, dst = logical.node_map[s], logical.node_map[t]
        walk = _pruned_path if prune_cycles else _strict_path
        routes[lid] = walk(lid, arcs, src, dst)
    try:
        return Mapping(model.phys, logical, routes)
    except DomainError as exc:
        raise IngestionError(str(exc)) from None


@dataclass(frozen=True)
class ViolationReport:
    rows: tuple[str, ...] = ()
    bounds: tuple[str, ...] = ()
    integrality: tuple[str, ...] = ()
    missing: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.rows or self.bounds or self.integrality or self.missing)

    @property
    def count(self) -> int:
        return len(self.rows) + len(self.bounds) + len(self.integrality) + len(self.missing)

    def __str__(self) -> str:
        if self.ok:
            return "no violations"
        parts = []
        for title, items in (
            ("missing", self.missing),
            ("rows", self.rows),
            ("bounds", self.bounds),
            ("integrality", self.integrality),
        ):
            if items:
                parts.append(f"{title} ({len(items)}): " + " ".join(items))
        return "\n".join(parts)


def check_solution(model: MilpModel, assignment: dict[str, float], tol: float = TOLERANCE) -> ViolationReport:
    missing = tuple(name for name in model.variables if name not in assignment)
    if missing:
        return ViolationReport(missing=missing)
    bounds, integrality = [], []
    for var in model.variables.values():
        x = assignment[var.name]
        if x < var.lo - tol or x > var.hi + tol:
            bounds.append(var.name)
        if var.kind == BINARY and abs(x - round(x)) > tol:
            integrality.append(var.name)
    rows = tuple(row.label for row in model.constraints if row.violation(assignment) > tol)
    return ViolationReport(rows, tuple(bounds), tuple(integrality))


def tree_flows(logical: LogicalNetwork, tree: SpanningTree, root: int) -> dict[tuple[int, int, int], float]:
    """Flow toward ``root``: each tree link carries its child subtree size over ``|V_S| - 1``.

    Keys are ``(link_id, from_node, to_node)``.
    """
    if not tree.is_valid_for(logical):
        raise DomainError("not a spanning tree of the logical network")
    adj: dict[int, list[tuple[int, int]]] = {n: [] for n in logical.nodes}
    for lid in tree:
        s, t = logical.edges[lid]
        adj[s].append((lid, t))
        adj[t].append((lid, s))
    parent: dict[int, tuple[int, int]] = {}
    order = [root]
    seen = {root}
    for node in order:
        for lid, w in adj[node]:
            if w not in seen:
                seen.add(w)
                parent[w] = (lid, node)
                order.append(w)
    size = {n: 1 for n in logical.nodes}
    for node in reversed(order[1:]):
        size[parent[node][1]] += size[node]
    share = logical.num_nodes - 1
    return {(lid, node, up): size[node] / share for node, (lid, up) in parent.items()}


def construct_assignment(
    model: MilpModel, mapping: Mapping, trees: dict[str, SpanningTree] | None = None
) -> dict[str, float]:
    """A full assignment encoding ``mapping``.

    Route variables follow the routes; hit indicators record which links each
    scenario hits; flows follow ``trees[scenario]`` when given, else the
    residual network's BFS witness tree, and stay zero when no tree exists.
    """
    logical = model.logical
    mapping.require_complete(logical)
    stems = link_stems(logical)
    values = {name: 0.0 for name in model.variables}
    for lid, (s, _) in logical.edge_items():
        nodes = walk_route(model.phys, logical.node_map[s], mapping.routes[lid])
        for i, j in zip(nodes, nodes[1:]):
            values[route_var(stems[lid][0], i, j)] = 1.0
    has_flow = bool(model.variables_tagged(TAG_FLOW))
    has_hit = bool(model.variables_tagged(TAG_HIT))
    for scenario in model.scenarios:
        if has_hit:
            for lid in mapping.hit_by(scenario.edge_ids):
                values[hit_var(scenario.name, stems[lid][0])] = 1.0
        if not has_flow:
            continue
        tree = trees.get(scenario.name) if trees is not None else witness_tree(logical, mapping, scenario)
        if tree is None:
            continue
        for (lid, a, _), flow in tree_flows(logical, tree, model.root).items():
            fwd, bwd = stems[lid]
            arc = fwd if a == logical.edges[lid][0] else bwd
            values[flow_var(scenario.name, arc)] = flow
    return values


def pin_routes(model: MilpModel, mapping: Mapping) -> MilpModel:
    """Copy of ``model`` with every route variable fixed to ``mapping``."""
    fixed = construct_assignment(model, mapping, trees={})
    pinned = MilpModel(model.family, model.phys, model.logical, model.scenarios, model.root, model.instance)
    for var in model.variables.values():
        pinned.add_variable(var)
    for row in model.constraints:
        pinned.add_constraint(row)
    pinned.set_objective(model.objective)
    for var in model.variables_tagged(TAG_ROUTE):
        pinned.add_constraint(Constraint(((1.0, var.name),), "=", fixed[var.name], f"pin_{var.name}"))
    return pinned
