"""Two-layer network model: physical graph, logical graph, and link routes.

Node ids are integers. Physical edge ids are dense ``0..|E_P|-1`` and index
``PhysicalNetwork.edges``. Logical edge ids are stable integers that survive
subgraph operations (a residual logical network keeps the ids of its
surviving edges), so they live in an ordered dict rather than a tuple.

All containers are immutable after construction and every operation is a
pure function of its inputs.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping as MappingABC, Protocol

from survmap.errors import CapacityError, DomainError, NoPathError

DEFAULT_CUTSET_NODE_BOUND = 16
DEFAULT_TREE_ENUMERATION_BOUND = 1_000_000


class Graph(Protocol):
    """Anything with a node tuple and ``(edge_id, (u, v))`` items."""

    nodes: tuple[int, ...]

    def edge_items(self) -> Iterable[tuple[int, tuple[int, int]]]: ...


def _check_simple_edges(
    nodes: Iterable[int],
    items: Iterable[tuple[int, tuple[int, int]]],
    allow_parallel: frozenset[int] = frozenset(),
) -> None:
    node_set = set(nodes)
    seen: dict[frozenset[int], int] = {}
    for eid, (u, v) in items:
        if u == v:
            raise DomainError(f"edge {eid} is a self-loop on node {u}")
        if u not in node_set or v not in node_set:
            raise DomainError(f"edge {eid} references unknown node")
        key = frozenset((u, v))
        if key in seen and eid not in allow_parallel and seen[key] not in allow_parallel:
            raise DomainError(f"edge {eid} duplicates edge {seen[key]} ({u}, {v})")
        seen.setdefault(key, eid)


@dataclass(frozen=True)
class PhysicalNetwork:
    """Undirected infrastructure graph with dense integer edge ids."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        if len(set(nodes)) != len(nodes):
            raise DomainError("duplicate physical node id")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        _check_simple_edges(nodes, enumerate(edges))

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_items(self) -> Iterator[tuple[int, tuple[int, int]]]:
        return iter(enumerate(self.edges))

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        self.check_edge(edge_id)
        return self.edges[edge_id]

    def check_edge(self, edge_id: int) -> None:
        if not isinstance(edge_id, int) or not 0 <= edge_id < len(self.edges):
            raise DomainError(f"unknown physical edge id {edge_id!r}")

    @cached_property
    def incidence(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Node -> ``(edge_id, neighbor)`` pairs, sorted by edge id."""
        inc: dict[int, list[tuple[int, int]]] = {n: [] for n in self.nodes}
        for eid, (u, v) in enumerate(self.edges):
            inc[u].append((eid, v))
            inc[v].append((eid, u))
        return {n: tuple(lst) for n, lst in inc.items()}

    def without_edges(self, edge_ids: Iterable[int]) -> list[tuple[int, tuple[int, int]]]:
        drop = set(edge_ids)
        return [(e, uv) for e, uv in enumerate(self.edges) if e not in drop]


@dataclass(frozen=True)
class LogicalNetwork:
    """Virtual network whose nodes are pinned to physical nodes.

    Attributes:
        nodes: logical node ids, sorted.
        edges: logical edge id -> ``(s, t)``; iteration order is by id.
        node_map: injective map from logical to physical node ids.
        augmented: ids of edges added by augmentation; only these may be
            parallel to another edge.
    """

    nodes: tuple[int, ...]
    edges: MappingABC[int, tuple[int, int]]
    node_map: MappingABC[int, int]
    augmented: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        if len(set(nodes)) != len(nodes):
            raise DomainError("duplicate logical node id")
        edges = {int(k): (int(s), int(t)) for k, (s, t) in sorted(self.edges.items())}
        node_map = {int(k): int(v) for k, v in sorted(self.node_map.items())}
        augmented = frozenset(self.augmented)
        if set(node_map) != set(nodes):
            raise DomainError("node_map must be defined on exactly the logical nodes")
        if len(set(node_map.values())) != len(node_map):
            raise DomainError("node_map must be injective")
        if not augmented <= set(edges):
            raise DomainError("augmented ids must be logical edge ids")
        _check_simple_edges(nodes, edges.items(), augmented)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "node_map", node_map)
        object.__setattr__(self, "augmented", augmented)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_items(self) -> Iterator[tuple[int, tuple[int, int]]]:
        return iter(self.edges.items())

    def check_against(self, phys: PhysicalNetwork) -> None:
        """Raise unless every mapped node exists in ``phys``."""
        missing = [s for s, p in self.node_map.items() if p not in set(phys.nodes)]
        if missing:
            raise DomainError(f"logical nodes {missing} map to unknown physical nodes")

    def degree(self, node: int) -> int:
        return sum(node in uv for uv in self.edges.values())

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    def with_edge(self, edge_id: int, s: int, t: int, augmented: bool = False) -> LogicalNetwork:
        if edge_id in self.edges:
            raise DomainError(f"logical edge id {edge_id} already in use")
        edges = dict(self.edges)
        edges[edge_id] = (s, t)
        aug = self.augmented | {edge_id} if augmented else self.augmented
        return LogicalNetwork(self.nodes, edges, self.node_map, aug)

    def subgraph(self, edge_ids: Iterable[int]) -> LogicalNetwork:
        keep = set(edge_ids)
        edges = {e: uv for e, uv in self.edges.items() if e in keep}
        return LogicalNetwork(self.nodes, edges, self.node_map, self.augmented & keep)


def walk_route(phys: PhysicalNetwork, start: int, route: Iterable[int]) -> list[int]:
    """Return the node sequence of ``route`` from ``start``, or raise."""
    current = start
    visited = [start]
    for eid in route:
        u, v = phys.endpoints(eid)
        if current == u:
            current = v
        elif current == v:
            current = u
        else:
            raise DomainError(f"physical edge {eid} does not continue the path at node {current}")
        if current in visited:
            raise DomainError(f"route revisits physical node {current}")
        visited.append(current)
    return visited


@dataclass(frozen=True)
class Mapping:
    """Per-logical-edge physical routes over a fixed pair of networks.

    A route for logical edge ``(s, t)`` is a tuple of physical edge ids forming
    a simple path from ``node_map[s]`` to ``node_map[t]``. Partial mappings are
    allowed; :meth:`is_complete` tells whether every logical edge is routed.
    """

    phys: PhysicalNetwork
    logical: LogicalNetwork
    routes: MappingABC[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        routes = {int(k): tuple(int(e) for e in v) for k, v in sorted(self.routes.items())}
        self.logical.check_against(self.phys)
        for lid, route in routes.items():
            if lid not in self.logical.edges:
                raise DomainError(f"route given for unknown logical edge {lid}")
            if not route:
                raise DomainError(f"route for logical edge {lid} is empty")
            s, t = self.logical.edges[lid]
            try:
                path = walk_route(self.phys, self.logical.node_map[s], route)
            except DomainError as exc:
                raise DomainError(f"route of logical edge {lid}: {exc}") from None
            if path[-1] != self.logical.node_map[t]:
                raise DomainError(
                    f"route of logical edge {lid} ends at {path[-1]}, "
                    f"expected {self.logical.node_map[t]}"
                )
        object.__setattr__(self, "routes", routes)

    def is_complete(self, logical: LogicalNetwork | None = None) -> bool:
        logical = logical or self.logical
        return all(lid in self.routes for lid in logical.edges)

    def require_complete(self, logical: LogicalNetwork | None = None) -> None:
        logical = logical or self.logical
        missing = [lid for lid in logical.edges if lid not in self.routes]
        if missing:
            raise DomainError(f"mapping is incomplete: no route for logical edges {missing}")

    @cached_property
    def lambda_index(self) -> dict[int, frozenset[int]]:
        """Physical edge id -> logical edges routed through it."""
        index: dict[int, set[int]] = {}
        for lid, route in self.routes.items():
            for e in route:
                index.setdefault(e, set()).add(lid)
        return {e: frozenset(s) for e, s in index.items()}

    def hit_by(self, failed: Iterable[int]) -> frozenset[int]:
        """Logical edges whose route crosses any edge in ``failed``."""
        out: set[int] = set()
        for e in failed:
            self.phys.check_edge(e)
            out |= self.lambda_index.get(e, frozenset())
        return frozenset(out)

    def with_routes(self, routes: MappingABC[int, Iterable[int]], logical: LogicalNetwork | None = None) -> Mapping:
        merged = dict(self.routes)
        merged.update({k: tuple(v) for k, v in routes.items()})
        return Mapping(self.phys, logical or self.logical, merged)


@dataclass(frozen=True)
class SpanningTree:
    edge_ids: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", frozenset(self.edge_ids))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edge_ids))

    def __len__(self) -> int:
        return len(self.edge_ids)

    def is_valid_for(self, logical: LogicalNetwork) -> bool:
        """True iff this is a spanning tree of ``logical``."""
        if len(self.edge_ids) != logical.num_nodes - 1:
            return False
        if not self.edge_ids <= set(logical.edges):
            return False
        uf = _UnionFind(logical.nodes)
        return all(uf.union(*logical.edges[e]) for e in self.edge_ids)


@dataclass(frozen=True)
class Cutset:
    side_a: frozenset[int]
    edge_ids: frozenset[int]


@dataclass(frozen=True)
class CostVector:
    """Positive costs on physical edges (by id) and logical edges (by id)."""

    physical_costs: tuple[float, ...]
    logical_costs: MappingABC[int, float] = field(default_factory=dict)

    def __post_init__(self):
        phys = tuple(float(c) for c in self.physical_costs)
        log = {int(k): float(v) for k, v in self.logical_costs.items()}
        for c in itertools.chain(phys, log.values()):
            if not (math.isfinite(c) and c > 0):
                raise DomainError(f"costs must be positive and finite, got {c}")
        object.__setattr__(self, "physical_costs", phys)
        object.__setattr__(self, "logical_costs", log)

    @classmethod
    def unit(cls, phys: PhysicalNetwork, logical: LogicalNetwork | None = None) -> CostVector:
        log = {lid: 1.0 for lid in logical.edges} if logical is not None else {}
        return cls((1.0,) * phys.num_edges, log)

    def path_cost(self, route: Iterable[int]) -> float:
        return math.fsum(self.physical_costs[e] for e in route)


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def components(graph: Graph) -> list[frozenset[int]]:
    """Connected components, each a frozenset, ordered by smallest node."""
    uf = _UnionFind(graph.nodes)
    for _, (u, v) in graph.edge_items():
        uf.union(u, v)
    groups: dict[int, set[int]] = {}
    for n in graph.nodes:
        groups.setdefault(uf.find(n), set()).add(n)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def is_connected(graph: Graph) -> bool:
    """True iff the graph has exactly one component over its full node set."""
    nodes = graph.nodes
    if not nodes:
        return True
    adj: dict[int, list[int]] = {n: [] for n in nodes}
    for _, (u, v) in graph.edge_items():
        adj[u].append(v)
        adj[v].append(u)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(nodes)


class _EdgeList:
    """Lightweight Graph view over explicit nodes and edge items."""

    def __init__(self, nodes: tuple[int, ...], items: list[tuple[int, tuple[int, int]]]):
        self.nodes = nodes
        self._items = items

    def edge_items(self):
        return iter(self._items)


def physical_survives(phys: PhysicalNetwork, removed: Iterable[int]) -> bool:
    """True iff ``phys`` stays connected with ``removed`` edges deleted."""
    return is_connected(_EdgeList(phys.nodes, phys.without_edges(removed)))


def lambda_set(mapping: Mapping, phys_edge: int) -> frozenset[int]:
    """Logical edges whose route traverses ``phys_edge``."""
    mapping.phys.check_edge(phys_edge)
    return mapping.lambda_index.get(phys_edge, frozenset())


def residual_logical(logical: LogicalNetwork, mapping: Mapping, failed: Iterable[int]) -> LogicalNetwork:
    """Logical network left after the physical edges in ``failed`` go down."""
    mapping.require_complete(logical)
    hit = mapping.hit_by(failed)
    return logical.subgraph(e for e in logical.edges if e not in hit)


def shortest_path(phys: PhysicalNetwork, costs: CostVector, a: int, b: int) -> tuple[int, ...]:
    """Minimum-cost simple path from ``a`` to ``b`` as physical edge ids.

    Among paths of equal cost the lexicographically smallest edge-id sequence
    wins. Labels are compared as ``(cost, path)`` tuples, which is consistent
    with path extension because costs are strictly positive.
    """
    if len(costs.physical_costs) != phys.num_edges:
        raise DomainError("cost vector length does not match physical edge count")
    if a == b:
        raise DomainError("shortest_path needs distinct endpoints")
    inc = phys.incidence
    if a not in inc or b not in inc:
        raise DomainError(f"unknown physical node {a if a not in inc else b}")
    w = costs.physical_costs
    best: dict[int, tuple[float, tuple[int, ...]]] = {a: (0.0, ())}
    heap: list[tuple[float, tuple[int, ...], int]] = [(0.0, (), a)]
    done: set[int] = set()
    while heap:
        dist, path, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == b:
            return path
        for eid, nxt in inc[node]:
            if nxt in done:
                continue
            label = (dist + w[eid], path + (eid,))
            if nxt not in best or label < best[nxt]:
                best[nxt] = label
                heapq.heappush(heap, (label[0], label[1], nxt))
    raise NoPathError(f"no physical path between {a} and {b}")


def minimum_spanning_tree(logical: LogicalNetwork, costs: CostVector) -> SpanningTree:
    """Kruskal over ``logical_costs``; equal costs prefer smaller edge ids."""
    missing = [e for e in logical.edges if e not in costs.logical_costs]
    if missing:
        raise DomainError(f"no logical cost for edges {missing}")
    uf = _UnionFind(logical.nodes)
    chosen = []
    for eid in sorted(logical.edges, key=lambda e: (costs.logical_costs[e], e)):
        if uf.union(*logical.edges[eid]):
            chosen.append(eid)
    if len(chosen) != logical.num_nodes - 1:
        raise DomainError("logical network is disconnected; no spanning tree exists")
    return SpanningTree(frozenset(chosen))


def enumerate_spanning_trees(
    logical: LogicalNetwork, bound: int = DEFAULT_TREE_ENUMERATION_BOUND
) -> Iterator[SpanningTree]:
    """Every spanning tree, by brute force over ``|V|-1``-edge subsets."""
    ids = list(logical.edges)
    k = logical.num_nodes - 1
    if math.comb(len(ids), k) > bound:
        raise CapacityError(f"C({len(ids)}, {k}) edge subsets exceed bound {bound}")
    for combo in itertools.combinations(ids, k):
        uf = _UnionFind(logical.nodes)
        if all(uf.union(*logical.edges[e]) for e in combo):
            yield SpanningTree(frozenset(combo))


def enumerate_cutsets(logical: LogicalNetwork, max_nodes: int = DEFAULT_CUTSET_NODE_BOUND) -> list[Cutset]:
    """One cutset per unordered vertex bipartition with a nonempty crossing set.

    ``side_a`` always holds the lowest node id, so each bipartition appears
    once. Bipartitions are ordered by the bitmask of the remaining nodes.
    """
    n = logical.num_nodes
    if n > max_nodes:
        raise CapacityError(
            f"{n} logical nodes exceed cutset bound {max_nodes} "
            f"({2 ** (n - 1) - 1} bipartitions); raise max_nodes to opt in"
        )
    if n < 2:
        return []
    first, rest = logical.nodes[0], logical.nodes[1:]
    out = []
    for mask in range(0, 2 ** (n - 1) - 1):
        side = frozenset([first] + [rest[i] for i in range(n - 1) if mask >> i & 1])
        crossing = frozenset(
            e for e, (s, t) in logical.edges.items() if (s in side) != (t in side)
        )
        if crossing:
            out.append(Cutset(side, crossing))
    return out


def spanning_tree_of(graph: Graph) -> frozenset[int] | None:
    """BFS tree from the lowest node, scanning incident edges by id."""
    nodes = graph.nodes
    if not nodes:
        return frozenset()
    adj: dict[int, list[tuple[int, int]]] = {n: [] for n in nodes}
    for eid, (u, v) in sorted(graph.edge_items()):
        adj[u].append((eid, v))
        adj[v].append((eid, u))
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    tree = []
    while queue:
        for eid, w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                tree.append(eid)
                queue.append(w)
    return frozenset(tree) if len(seen) == len(nodes) else None
