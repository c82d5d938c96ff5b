"""Failure scenarios: exhaustive k-link combinations and generated SRLG sets."""

from __future__ import annotations

import itertools
import math
import random
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from survmap.errors import DomainError, GenerationError
from survmap.net_model import PhysicalNetwork, physical_survives

_NAME_RE = re.compile(r"^[A-Za-z0-9_.]+$")

PROPERTY_SIZE = "size"
PROPERTY_SUBSET_FREE = "subset_free"
PROPERTY_NON_DISCONNECTING = "non_disconnecting"
PROPERTY_COVER = "cover"
PROPERTY_VALID_EDGES = "valid_edges"
SRLG_PROPERTIES = (PROPERTY_SIZE, PROPERTY_SUBSET_FREE, PROPERTY_NON_DISCONNECTING, PROPERTY_COVER)

DEFAULT_MAX_ROUNDS = 10_000


@dataclass(frozen=True)
class FailureScenario:
    """A named group of physical edges that fail together."""

    name: str
    edge_ids: frozenset[int]

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise DomainError(f"scenario name {self.name!r} must match [A-Za-z0-9_.]+")
        edges = frozenset(int(e) for e in self.edge_ids)
        if not edges:
            raise DomainError(f"scenario {self.name} has no edges")
        object.__setattr__(self, "edge_ids", edges)

    @property
    def size(self) -> int:
        return len(self.edge_ids)

    def check_against(self, phys: PhysicalNetwork) -> None:
        for e in self.edge_ids:
            phys.check_edge(e)


@dataclass(frozen=True)
class SrlgSet:
    """Ordered collection of scenarios with unique names.

    The generator's properties (size, subset-freeness, connectivity,
    coverage) are not enforced here so that partial sets and k-combination
    sets can share the type; :func:`validate_srlg_set` checks them.
    """

    scenarios: tuple[FailureScenario, ...] = field(default_factory=tuple)

    def __post_init__(self):
        scenarios = tuple(self.scenarios)
        names = [s.name for s in scenarios]
        dup = [n for n, c in Counter(names).items() if c > 1]
        if dup:
            raise DomainError(f"duplicate scenario names: {dup}")
        object.__setattr__(self, "scenarios", scenarios)

    def __iter__(self) -> Iterator[FailureScenario]:
        return iter(self.scenarios)

    def __len__(self) -> int:
        return len(self.scenarios)

    def __getitem__(self, idx: int) -> FailureScenario:
        return self.scenarios[idx]

    def names(self) -> list[str]:
        return [s.name for s in self.scenarios]

    def prefix(self, n: int) -> SrlgSet:
        if not 0 <= n <= len(self.scenarios):
            raise DomainError(f"cannot take {n} of {len(self.scenarios)} scenarios")
        return SrlgSet(self.scenarios[:n])

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]], prefix: str = "r") -> SrlgSet:
        return cls(tuple(FailureScenario(f"{prefix}{i + 1}", frozenset(g)) for i, g in enumerate(groups)))


def k_failure_count(phys: PhysicalNetwork, k: int) -> int:
    return math.comb(phys.num_edges, k)


def gen_k_failures(phys: PhysicalNetwork, k: int) -> Iterator[FailureScenario]:
    """Yield every k-subset of physical edges once, in lexicographic id order.

    Scenario names are ``f`` followed by the edge ids joined with ``_``.
    """
    if not isinstance(k, int) or not 1 <= k <= phys.num_edges:
        raise DomainError(f"k must be in 1..{phys.num_edges}, got {k!r}")

    def stream():
        for combo in itertools.combinations(range(phys.num_edges), k):
            yield FailureScenario("f" + "_".join(map(str, combo)), frozenset(combo))

    return stream()


def k_failure_set(phys: PhysicalNetwork, k: int) -> SrlgSet:
    return SrlgSet(tuple(gen_k_failures(phys, k)))


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    counterexamples: tuple = ()


@dataclass(frozen=True)
class SrlgValidationReport:
    results: dict[str, PropertyResult]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failed(self) -> list[str]:
        return [name for name, r in self.results.items() if not r.passed]

    def __str__(self) -> str:
        lines = []
        for name, r in self.results.items():
            status = "pass" if r.passed else "FAIL"
            extra = f"  e.g. {list(r.counterexamples[:3])}" if r.counterexamples else ""
            lines.append(f"{name:<18} {status}{extra}")
        return "\n".join(lines)


def validate_srlg_set(phys: PhysicalNetwork, srlgs: SrlgSet, max_size: int = 3) -> SrlgValidationReport:
    """Check the four SRLG-set properties independently.

    Counterexamples: oversize scenario names; ``(sub, super)`` name pairs;
    disconnecting scenario names; uncovered physical edge ids.
    """
    valid = {e for e in range(phys.num_edges)}
    bad_ids = tuple(s.name for s in srlgs if not s.edge_ids <= valid)
    oversize = tuple(s.name for s in srlgs if s.size > max_size)
    subset_pairs = tuple(
        (a.name, b.name)
        for a, b in itertools.permutations(srlgs.scenarios, 2)
        if a.edge_ids <= b.edge_ids
    )
    disconnecting = tuple(
        s.name for s in srlgs if s.edge_ids <= valid and not physical_survives(phys, s.edge_ids)
    )
    covered = set().union(*(s.edge_ids for s in srlgs)) if len(srlgs) else set()
    uncovered = tuple(sorted(valid - covered))
    return SrlgValidationReport(
        {
            PROPERTY_VALID_EDGES: PropertyResult(not bad_ids, bad_ids),
            PROPERTY_SIZE: PropertyResult(not oversize, oversize),
            PROPERTY_SUBSET_FREE: PropertyResult(not subset_pairs, subset_pairs),
            PROPERTY_NON_DISCONNECTING: PropertyResult(not disconnecting, disconnecting),
            PROPERTY_COVER: PropertyResult(not uncovered, uncovered),
        }
    )


def _group_sizes(rng: random.Random, count: int, num_edges: int, max_size: int) -> list[int]:
    # Sizes summing to |E| give a partition, which is subset-free for free.
    sizes = [max_size] * count
    floor = 1 if count <= num_edges else 2
    total = sum(sizes)
    while total > num_edges:
        shrinkable = [i for i, s in enumerate(sizes) if s > floor]
        if not shrinkable:
            break
        sizes[rng.choice(shrinkable)] -= 1
        total -= 1
    return sizes


def _propose_groups(
    phys: PhysicalNetwork, rng: random.Random, count: int, max_size: int, adjacency_bias: float
) -> tuple[list[set[int]] | None, str | None]:
    m = phys.num_edges
    if count * max_size < m:
        return None, PROPERTY_COVER
    edges = phys.edges
    uncovered = list(range(m))
    rng.shuffle(uncovered)
    groups: list[set[int]] = []

    def shares_node(group: set[int], e: int) -> bool:
        nodes = {x for g in group for x in edges[g]}
        return bool(nodes & set(edges[e]))

    def safe(group: set[int], e: int) -> bool:
        return physical_survives(phys, group | {e})

    for size in _group_sizes(rng, count, m, max_size):
        pool = uncovered if uncovered else rng.sample(range(m), m)
        seed = next((e for e in pool if safe(set(), e)), None)
        if seed is None:
            return None, PROPERTY_NON_DISCONNECTING
        group = {seed}
        if seed in uncovered:
            uncovered.remove(seed)
        while len(group) < size:
            source = uncovered if uncovered else [e for e in range(m) if e not in group]
            options = [e for e in source if e not in group and safe(group, e)]
            if not options:
                break
            near = [e for e in options if shares_node(group, e)]
            pick = rng.choice(near) if near and rng.random() < adjacency_bias else rng.choice(options)
            group.add(pick)
            if pick in uncovered:
                uncovered.remove(pick)
        groups.append(group)

    for e in list(uncovered):
        host = next((g for g in groups if len(g) < max_size and safe(g, e)), None)
        if host is None:
            return None, PROPERTY_COVER
        host.add(e)
        uncovered.remove(e)
    return groups, None


def gen_3srlg_set(
    phys: PhysicalNetwork,
    seed: int,
    target_count: int,
    *,
    max_size: int = 3,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    adjacency_bias: float = 0.75,
) -> SrlgSet:
    """Generate ``target_count`` SRLGs of at most ``max_size`` edges each.

    Each round grows groups from uncovered seed edges, preferring edges that
    share an endpoint with the group (co-routed fibres) and never adding an
    edge whose joint removal would disconnect ``phys``. Leftover uncovered
    edges are folded into groups with spare room. A round is accepted only if
    :func:`validate_srlg_set` passes; otherwise it is rejected and retried.

    Raises:
        DomainError: ``target_count`` is not positive.
        GenerationError: no round succeeded within ``max_rounds``; the error
            names the property that rejected the most rounds.
    """
    if target_count < 1:
        raise DomainError("target_count must be positive")
    rng = random.Random(seed)
    rejections: Counter[str] = Counter()
    for _ in range(max_rounds):
        groups, reason = _propose_groups(phys, rng, target_count, max_size, adjacency_bias)
        if groups is None:
            rejections[reason] += 1
            if reason == PROPERTY_COVER and target_count * max_size < phys.num_edges:
                break
            continue
        srlgs = SrlgSet.from_groups(sorted(g) for g in groups)
        report = validate_srlg_set(phys, srlgs, max_size)
        if report.ok:
            return srlgs
        rejections[report.failed()[0]] += 1
    blocking, _ = rejections.most_common(1)[0]
    raise GenerationError(
        f"could not generate {target_count} SRLGs after {sum(rejections.values())} rounds; "
        f"blocked by {blocking} ({dict(rejections)})",
        blocking,
    )

