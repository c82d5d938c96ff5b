"""Built-in networks and random small instances.

NSF is the 14-node, 21-link NSFNET backbone with nodes numbered 0..13, so
that its two degree-2 nodes are 6 and 9; NSF1 adds link (6, 9). The four
virtual networks are seeded regenerations: CLN1 and CLN3 are 3-edge-connected
7-node, 11-link graphs, and CLN2 / CLN4 add a 3-link perfect matching on
their degree-3 nodes to become 4-regular and 4-edge-connected. Logical node
ids equal the physical node ids they map onto.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from survmap.errors import DomainError
from survmap.failure_model import FailureScenario, SrlgSet
from survmap.instance_io import Instance
from survmap.net_model import LogicalNetwork, Mapping, PhysicalNetwork, is_connected, walk_route

NSF_EDGES = (
    (0, 1), (0, 2), (0, 7), (1, 2), (1, 3), (2, 5), (3, 4), (3, 10), (4, 5), (4, 6), (5, 9),
    (5, 13), (6, 7), (7, 8), (8, 9), (8, 11), (8, 12), (10, 11), (10, 12), (11, 13), (12, 13),
)
NSF1_EXTRA = (6, 9)

CLN_A_NODES = (0, 2, 4, 7, 9, 11, 13)
CLN_B_NODES = (1, 3, 5, 6, 8, 10, 12)

# Output of generate_cln(CLN_A_NODES, CLN_A_SEED) and generate_cln(CLN_B_NODES, CLN_B_SEED).
CLN_A_SEED = 0
CLN_B_SEED = 1
CLN1_EDGES = (
    (0, 4), (0, 7), (0, 9), (2, 7), (2, 11), (2, 13), (4, 7), (4, 13), (7, 9), (9, 11), (11, 13),
)
CLN2_EXTRA = ((0, 13), (2, 9), (4, 11))
CLN3_EDGES = (
    (1, 6), (1, 10), (1, 12), (3, 5), (3, 10), (3, 12), (5, 6), (5, 12), (6, 8), (8, 10), (8, 12),
)
CLN4_EXTRA = ((1, 3), (5, 8), (6, 10))


def nsf() -> PhysicalNetwork:
    return PhysicalNetwork(tuple(range(14)), NSF_EDGES)


def nsf1() -> PhysicalNetwork:
    return PhysicalNetwork(tuple(range(14)), NSF_EDGES + (NSF1_EXTRA,))


def _identity_logical(nodes: tuple[int, ...], edges: tuple[tuple[int, int], ...]) -> LogicalNetwork:
    return LogicalNetwork(nodes, dict(enumerate(edges)), {n: n for n in nodes})


def cln(index: int) -> LogicalNetwork:
    """Virtual network CLN1..CLN4."""
    table = {
        1: (CLN_A_NODES, CLN1_EDGES),
        2: (CLN_A_NODES, CLN1_EDGES + CLN2_EXTRA),
        3: (CLN_B_NODES, CLN3_EDGES),
        4: (CLN_B_NODES, CLN3_EDGES + CLN4_EXTRA),
    }
    if index not in table:
        raise DomainError(f"no CLN{index}; choose 1..4")
    return _identity_logical(*table[index])


PHYSICAL_CATALOG = {"NSF": nsf, "NSF1": nsf1}
LOGICAL_CATALOG = {f"CLN{i}": (lambda i=i: cln(i)) for i in range(1, 5)}
ALIASES = {"NSF(1)": "NSF1", "NSF^(1)": "NSF1"}


def builtin_topologies() -> dict[str, object]:
    """Every catalogued network by name (physical and logical)."""
    out: dict[str, object] = {name: f() for name, f in PHYSICAL_CATALOG.items()}
    out.update({name: f() for name, f in LOGICAL_CATALOG.items()})
    out["FIG2"] = fig2_instance()
    return out


def physical_by_name(name: str) -> PhysicalNetwork:
    key = ALIASES.get(name.upper(), name.upper())
    if key == "FIG2":
        return fig2_instance().phys
    if key not in PHYSICAL_CATALOG:
        raise DomainError(f"unknown physical topology {name!r}; known: {sorted(PHYSICAL_CATALOG)} and FIG2")
    return PHYSICAL_CATALOG[key]()


def logical_by_name(name: str) -> LogicalNetwork:
    key = name.upper()
    if key == "FIG2":
        return fig2_instance().require_logical()
    if key not in LOGICAL_CATALOG:
        raise DomainError(f"unknown logical topology {name!r}; known: {sorted(LOGICAL_CATALOG)} and FIG2")
    return LOGICAL_CATALOG[key]()


def degree_profile(edges, nodes) -> dict[str, float]:
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    degs = [d for _, d in g.degree()]
    return {
        "conn": nx.edge_connectivity(g),
        "nodes": g.number_of_nodes(),
        "edges": g.number_of_edges(),
        "min_deg": min(degs),
        "max_deg": max(degs),
        "avg_deg": round(sum(degs) / len(degs), 2),
    }


def generate_cln(nodes: tuple[int, ...], seed: int, max_tries: int = 10_000):
    """Seeded 7-node base graph plus the matching that makes it 4-regular.

    The 4-regular graph is the complement of a random Hamiltonian cycle; the
    base graph drops a random perfect matching on six of its nodes and must
    stay 3-edge-connected. Returns ``(base_edges, extra_edges)`` with edges
    as sorted pairs and both lists sorted.
    """
    if len(nodes) != 7:
        raise DomainError("CLN graphs have 7 nodes")
    rng = random.Random(seed)
    for _ in range(max_tries):
        cycle = list(nodes)
        rng.shuffle(cycle)
        ring = {frozenset((cycle[i], cycle[(i + 1) % 7])) for i in range(7)}
        full = [
            (a, b) for i, a in enumerate(sorted(nodes)) for b in sorted(nodes)[i + 1:]
            if frozenset((a, b)) not in ring
        ]
        g4 = nx.Graph(full)
        if nx.edge_connectivity(g4) != 4:
            continue
        keep = rng.choice(nodes)
        others = [n for n in nodes if n != keep]
        rng.shuffle(others)
        matching = []
        free = list(others)
        while free:
            a = free.pop(0)
            mates = [b for b in free if g4.has_edge(a, b)]
            if not mates:
                break
            b = rng.choice(mates)
            free.remove(b)
            matching.append(tuple(sorted((a, b))))
        if len(matching) != 3:
            continue
        base = sorted(e for e in full if e not in matching)
        if nx.edge_connectivity(nx.Graph(base)) != 3:
            continue
        return tuple(base), tuple(sorted(matching))
    raise DomainError(f"no CLN graph found for seed {seed}")


def fig2_instance() -> Instance:
    """The four-node ring example with three SRLGs.

    Physical links I..VII are ids 0..6, logical links a..d are ids 0..3.
    Physical nodes 1..4 host logical nodes 1..4; nodes 5 and 6 are transit
    nodes for the two-hop routes of c and d. Link IV (5, 6) carries no route.
    """
    # I=(1,2) II=(3,5) III=(2,3) IV=(5,6) V=(5,4) VI=(4,6) VII=(6,1)
    phys = PhysicalNetwork((1, 2, 3, 4, 5, 6), ((1, 2), (3, 5), (2, 3), (5, 6), (5, 4), (4, 6), (6, 1)))
    logical = LogicalNetwork(
        (1, 2, 3, 4), {0: (1, 2), 1: (2, 3), 2: (3, 4), 3: (4, 1)}, {n: n for n in (1, 2, 3, 4)}
    )
    srlgs = SrlgSet(
        (
            FailureScenario("r1", frozenset({0, 3})),
            FailureScenario("r2", frozenset({1, 4})),
            FailureScenario("r3", frozenset({5, 6})),
        )
    )
    mapping = Mapping(phys, logical, {0: (0,), 1: (2,), 2: (1, 4), 3: (5, 6)})
    return Instance(phys, logical, srlgs, mapping)


FIG2_PHYS_LABELS = ("I", "II", "III", "IV", "V", "VI", "VII")
FIG2_LOGICAL_LABELS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class RandomInstance:
    phys: PhysicalNetwork
    logical: LogicalNetwork
    mapping: Mapping
    srlgs: SrlgSet


def _random_connected(rng: random.Random, nodes: list[int], n_edges: int) -> list[tuple[int, int]]:
    order = nodes[:]
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], rng.choice(order[:i])))) for i in range(1, len(order))}
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:] if (a, b) not in edges]
    rng.shuffle(pairs)
    while len(edges) < n_edges and pairs:
        edges.add(pairs.pop())
    return sorted(edges)


def _random_simple_path(rng: random.Random, phys: PhysicalNetwork, a: int, b: int) -> tuple[int, ...]:
    # Randomized DFS; a connected graph always yields some simple a-b path.
    inc = phys.incidence
    stack = [(a, (), frozenset({a}))]
    while stack:
        node, path, seen = stack.pop()
        if node == b:
            return path
        nxt = list(inc[node])
        rng.shuffle(nxt)
        for eid, w in nxt:
            if w not in seen:
                stack.append((w, path + (eid,), seen | {w}))
    raise DomainError("disconnected physical network")


def random_instance(
    seed: int,
    max_phys_nodes: int = 6,
    max_phys_edges: int = 8,
    max_logical_nodes: int = 4,
    n_scenarios: int = 3,
    max_scenario_size: int = 3,
    min_logical_nodes: int = 2,
) -> RandomInstance:
    """Small random two-layer instance with random simple-path routes."""
    rng = random.Random(seed)
    n_s = rng.randint(min_logical_nodes, max_logical_nodes)
    n_p = rng.randint(max(n_s, 2), max_phys_nodes)
    pnodes = list(range(n_p))
    max_e = min(max_phys_edges, n_p * (n_p - 1) // 2)
    pedges = _random_connected(rng, pnodes, rng.randint(n_p - 1, max_e))
    phys = PhysicalNetwork(tuple(pnodes), tuple(pedges))
    lnodes = list(range(n_s))
    max_le = n_s * (n_s - 1) // 2
    ledges = _random_connected(rng, lnodes, rng.randint(n_s - 1, max_le))
    hosts = rng.sample(pnodes, n_s)
    logical = LogicalNetwork(tuple(lnodes), dict(enumerate(ledges)), dict(zip(lnodes, hosts)))
    routes = {
        lid: _random_simple_path(rng, phys, hosts[s], hosts[t]) for lid, (s, t) in logical.edge_items()
    }
    mapping = Mapping(phys, logical, routes)
    scenarios = []
    for i in range(n_scenarios):
        size = rng.randint(1, min(max_scenario_size, phys.num_edges))
        scenarios.append(FailureScenario(f"r{i + 1}", frozenset(rng.sample(range(phys.num_edges), size))))
    return RandomInstance(phys, logical, mapping, SrlgSet(tuple(scenarios)))


def all_simple_routes(phys: PhysicalNetwork, a: int, b: int) -> list[tuple[int, ...]]:
    """Every simple a-b path as edge-id tuples (exhaustive, small graphs only)."""
    out = []
    inc = phys.incidence

    def dfs(node, path, seen):
        if node == b:
            out.append(path)
            return
        for eid, w in inc[node]:
            if w not in seen:
                dfs(w, path + (eid,), seen | {w})

    dfs(a, (), frozenset({a}))
    return out


def check_route(phys: PhysicalNetwork, a: int, b: int, route) -> bool:
    try:
        return walk_route(phys, a, route)[-1] == b
    except DomainError:
        return False


__all__ = [
    "nsf", "nsf1", "cln", "fig2_instance", "builtin_topologies", "physical_by_name", "logical_by_name",
    "generate_cln", "degree_profile", "random_instance", "all_simple_routes", "is_connected",
]
