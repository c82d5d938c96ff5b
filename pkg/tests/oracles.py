"""Independent brute-force references used by the tests.

Nothing here calls the package's own graph algorithms: connectivity and path
enumeration come from networkx, and hit sets are read straight off routes.
"""

from __future__ import annotations

import itertools
import math
import os
import tempfile

import networkx as nx


def phys_graph(phys) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(phys.nodes)
    for eid, (u, v) in phys.edge_items():
        g.add_edge(u, v, eid=eid)
    return g


def hit_links(mapping, failed) -> set[int]:
    failed = set(failed)
    return {lid for lid, route in mapping.routes.items() if failed & set(route)}


def residual_connected(logical, mapping, failed) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(logical.nodes)
    hit = hit_links(mapping, failed)
    for lid, (s, t) in logical.edges.items():
        if lid not in hit:
            g.add_edge(s, t)
    return nx.is_connected(g)


def simple_routes(phys, a, b) -> list[tuple[int, ...]]:
    g = phys_graph(phys)
    out = []
    for path in nx.all_simple_edge_paths(g, a, b):
        out.append(tuple(g.edges[u, v]["eid"] for u, v in path))
    return sorted(out)


def min_hops(phys, a, b) -> int:
    return nx.shortest_path_length(phys_graph(phys), a, b)


def all_mappings(phys, logical):
    """Every assignment of one simple route per logical link."""
    from survmap.net_model import Mapping

    lids = sorted(logical.edges)
    options = [
        simple_routes(phys, logical.node_map[logical.edges[l][0]], logical.node_map[logical.edges[l][1]])
        for l in lids
    ]
    for combo in itertools.product(*options):
        yield Mapping(phys, logical, dict(zip(lids, combo)))


def mapping_survives(logical, mapping, scenarios) -> bool:
    return all(residual_connected(logical, mapping, s.edge_ids) for s in scenarios)


def best_survivable_phys(phys, logical, scenarios) -> int | None:
    """Minimum total hops over survivable mappings, or None if none exists."""
    best = None
    for mapping in all_mappings(phys, logical):
        if mapping_survives(logical, mapping, scenarios):
            cost = sum(len(r) for r in mapping.routes.values())
            best = cost if best is None else min(best, cost)
    return best


def spanning_trees_nx(logical) -> list[frozenset[int]]:
    """All spanning trees as edge-id sets, by checking every (n-1)-subset with networkx."""
    n = logical.num_nodes
    out = []
    for combo in itertools.combinations(sorted(logical.edges), n - 1):
        g = nx.MultiGraph()
        g.add_nodes_from(logical.nodes)
        g.add_edges_from(logical.edges[l] for l in combo)
        if nx.is_connected(g):
            out.append(frozenset(combo))
    return out


def solve_lp_text(text: str):
    """Solve LP-format text with HiGHS. Returns (status, objective, {name: value})."""
    import highspy

    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        status = h.readModel(path)
        if status != highspy.HighsStatus.kOk:
            raise RuntimeError(f"HiGHS could not read the model: {status}")
        h.run()
        ms = h.modelStatusToString(h.getModelStatus())
        if ms != "Optimal":
            return ms, math.nan, {}
        values = h.getSolution().col_value
        names = [h.getColName(i)[1] for i in range(h.getNumCol())]
        return ms, h.getInfo().objective_function_value, dict(zip(names, values))
    finally:
        os.unlink(path)


def lp_dimensions(text: str) -> tuple[int, int]:
    """(columns, rows) as HiGHS sees them after parsing."""
    import highspy

    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.readModel(path)
        return h.getNumCol(), h.getNumRow()
    finally:
        os.unlink(path)
