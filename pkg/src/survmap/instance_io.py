"""Line-oriented instance files.

Records, one per line (``#`` starts a comment)::

    pnode <id>
    pedge <edge_id> <u> <v>
    lnode <id> maps <pid>
    ledge <edge_id> <s> <t> [augmented]
    srlg <name> <edge_id>...
    route <ledge_id> <pedge_id>...
    tree <idx> <ledge_id>...
    protects <srlg_name> <tree_idx>

``tree`` and ``protects`` records carry a protection plan. Every network
invariant is checked on read and reported with the offending line number;
whole-graph properties such as connectivity are reported against the last
line of the file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

from survmap.errors import DomainError, InstanceFormatError
from survmap.failure_model import FailureScenario, SrlgSet
from survmap.net_model import (
    LogicalNetwork,
    Mapping,
    PhysicalNetwork,
    SpanningTree,
    is_connected,
)


@dataclass(frozen=True)
class Instance:
    phys: PhysicalNetwork
    logical: LogicalNetwork | None = None
    srlgs: SrlgSet | None = None
    mapping: Mapping | None = None
    trees: tuple[SpanningTree, ...] = ()
    protects: dict[str, int] = field(default_factory=dict)

    def require_logical(self) -> LogicalNetwork:
        if self.logical is None:
            raise DomainError("instance has no logical network")
        return self.logical


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_instance(text: str) -> Instance:
    """Parse instance text; raise :class:`InstanceFormatError` on any violation."""
    pnodes: dict[int, int] = {}
    pedges: dict[int, tuple[int, int, int]] = {}
    lnodes: dict[int, tuple[int, int]] = {}
    ledges: dict[int, tuple[int, int, int, bool]] = {}
    srlgs: dict[str, tuple[list[int], int]] = {}
    routes: dict[int, tuple[list[int], int]] = {}
    trees: dict[int, tuple[list[int], int]] = {}
    protects: dict[str, tuple[int, int]] = {}

    lines = text.splitlines()
    last = max(len(lines), 1)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *rest = line.split()
        if kind == "pnode":
            if len(rest) != 1:
                raise InstanceFormatError(lineno, "pnode expects exactly one id")
            (nid,) = _ints(rest, lineno)
            if nid in pnodes:
                raise InstanceFormatError(lineno, f"duplicate physical node {nid}")
            pnodes[nid] = lineno
        elif kind == "pedge":
            if len(rest) != 3:
                raise InstanceFormatError(lineno, "pedge expects <edge_id> <u> <v>")
            eid, u, v = _ints(rest, lineno)
            if eid in pedges:
                raise InstanceFormatError(lineno, f"duplicate physical edge id {eid}")
            pedges[eid] = (u, v, lineno)
        elif kind == "lnode":
            if len(rest) != 3 or rest[1] != "maps":
                raise InstanceFormatError(lineno, "lnode expects <id> maps <pid>")
            nid, pid = _ints([rest[0], rest[2]], lineno)
            if nid in lnodes:
                raise InstanceFormatError(lineno, f"duplicate logical node {nid}")
            lnodes[nid] = (pid, lineno)
        elif kind == "ledge":
            flag = False
            if len(rest) == 4 and rest[3] == "augmented":
                rest, flag = rest[:3], True
            if len(rest) != 3:
                raise InstanceFormatError(lineno, "ledge expects <edge_id> <s> <t> [augmented]")
            eid, s, t = _ints(rest, lineno)
            if eid in ledges:
                raise InstanceFormatError(lineno, f"duplicate logical edge id {eid}")
            ledges[eid] = (s, t, lineno, flag)
        elif kind == "srlg":
            if len(rest) < 2:
                raise InstanceFormatError(lineno, "srlg expects <name> <edge_id>...")
            if rest[0] in srlgs:
                raise InstanceFormatError(lineno, f"duplicate srlg name {rest[0]}")
            srlgs[rest[0]] = (_ints(rest[1:], lineno), lineno)
        elif kind == "route":
            if len(rest) < 2:
                raise InstanceFormatError(lineno, "route expects <ledge_id> <pedge_id>...")
            lid, *path = _ints(rest, lineno)
            if lid in routes:
                raise InstanceFormatError(lineno, f"second route for logical edge {lid}")
            routes[lid] = (path, lineno)
        elif kind == "tree":
            if len(rest) < 1:
                raise InstanceFormatError(lineno, "tree expects <idx> <ledge_id>...")
            idx, *members = _ints(rest, lineno)
            if idx in trees:
                raise InstanceFormatError(lineno, f"duplicate tree index {idx}")
            trees[idx] = (members, lineno)
        elif kind == "protects":
            if len(rest) != 2:
                raise InstanceFormatError(lineno, "protects expects <srlg_name> <tree_idx>")
            (tidx,) = _ints(rest[1:], lineno)
            if rest[0] in protects:
                raise InstanceFormatError(lineno, f"duplicate protects record for {rest[0]}")
            protects[rest[0]] = (tidx, lineno)
        else:
            raise InstanceFormatError(lineno, f"unknown record type {kind!r}")

    # physical layer
    if not pnodes:
        raise InstanceFormatError(last, "no physical nodes")
    for eid, (u, v, lineno) in pedges.items():
        if not 0 <= eid < len(pedges):
            raise InstanceFormatError(lineno, f"physical edge ids must be dense 0..{len(pedges) - 1}")
        if u == v:
            raise InstanceFormatError(lineno, f"self-loop on physical node {u}")
        for n in (u, v):
            if n not in pnodes:
                raise InstanceFormatError(lineno, f"unknown physical node {n}")
    seen_pairs: dict[frozenset[int], int] = {}
    for eid in sorted(pedges):
        u, v, lineno = pedges[eid]
        key = frozenset((u, v))
        if key in seen_pairs:
            raise InstanceFormatError(lineno, f"physical edge duplicates edge {seen_pairs[key]}")
        seen_pairs[key] = eid
    phys = PhysicalNetwork(tuple(pnodes), tuple(pedges[e][:2] for e in range(len(pedges))))
    if not is_connected(phys):
        raise InstanceFormatError(last, "physical network is disconnected")

    # logical layer
    logical = None
    if lnodes or ledges:
        used: dict[int, int] = {}
        for nid, (pid, lineno) in lnodes.items():
            if pid not in pnodes:
                raise InstanceFormatError(lineno, f"logical node {nid} maps to unknown physical node {pid}")
            if pid in used:
                raise InstanceFormatError(lineno, f"node map not injective: {used[pid]} and {nid} share {pid}")
            used[pid] = nid
        lpairs: dict[frozenset[int], tuple[int, bool]] = {}
        for eid in sorted(ledges):
            s, t, lineno, flag = ledges[eid]
            if s == t:
                raise InstanceFormatError(lineno, f"self-loop on logical node {s}")
            for n in (s, t):
                if n not in lnodes:
                    raise InstanceFormatError(lineno, f"unknown logical node {n}")
            key = frozenset((s, t))
            if key in lpairs and not (flag or lpairs[key][1]):
                raise InstanceFormatError(
                    lineno, f"parallel logical edge to {lpairs[key][0]} without augmented flag"
                )
            lpairs.setdefault(key, (eid, flag))
        logical = LogicalNetwork(
            tuple(lnodes),
            {e: (s, t) for e, (s, t, _, _) in ledges.items()},
            {n: pid for n, (pid, _) in lnodes.items()},
            frozenset(e for e, rec in ledges.items() if rec[3]),
        )
        if not is_connected(logical):
            raise InstanceFormatError(last, "logical network is disconnected")

    # srlgs
    srlg_set = None
    if srlgs:
        scenarios = []
        for name, (edge_ids, lineno) in srlgs.items():
            for e in edge_ids:
                if e not in pedges:
                    raise InstanceFormatError(lineno, f"srlg {name} references unknown physical edge {e}")
            if len(set(edge_ids)) != len(edge_ids):
                raise InstanceFormatError(lineno, f"srlg {name} repeats an edge")
            try:
                scenarios.append(FailureScenario(name, frozenset(edge_ids)))
            except DomainError as exc:
                raise InstanceFormatError(lineno, str(exc)) from None
        srlg_set = SrlgSet(tuple(scenarios))

    # routes
    mapping = None
    if routes:
        if logical is None:
            raise InstanceFormatError(min(ln for _, ln in routes.values()), "route without logical network")
        for lid, (path, lineno) in routes.items():
            if lid not in ledges:
                raise InstanceFormatError(lineno, f"route for unknown logical edge {lid}")
            try:
                Mapping(phys, logical, {lid: path})
            except DomainError as exc:
                raise InstanceFormatError(lineno, str(exc)) from None
        mapping = Mapping(phys, logical, {lid: path for lid, (path, _) in routes.items()})

    # plan records
    tree_list: list[SpanningTree] = []
    if trees:
        if logical is None:
            raise InstanceFormatError(min(ln for _, ln in trees.values()), "tree without logical network")
        for idx in sorted(trees):
            members, lineno = trees[idx]
            if idx != len(tree_list):
                raise InstanceFormatError(lineno, f"tree indices must be dense 0..{len(trees) - 1}")
            tree = SpanningTree(frozenset(members))
            if len(set(members)) != len(members) or not tree.is_valid_for(logical):
                raise InstanceFormatError(lineno, f"tree {idx} is not a spanning tree of the logical network")
            tree_list.append(tree)
    prot: dict[str, int] = {}
    for name, (tidx, lineno) in protects.items():
        if name not in srlgs:
            raise InstanceFormatError(lineno, f"protects references unknown srlg {name}")
        if not 0 <= tidx < len(tree_list):
            raise InstanceFormatError(lineno, f"protects references unknown tree {tidx}")
        prot[name] = tidx

    return Instance(phys, logical, srlg_set, mapping, tuple(tree_list), prot)


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def format_instance(
    phys: PhysicalNetwork,
    logical: LogicalNetwork | None = None,
    srlgs: SrlgSet | None = None,
    mapping: Mapping | None = None,
    trees: tuple[SpanningTree, ...] | list[SpanningTree] = (),
    protects: dict[str, int] | None = None,
    header: str | None = None,
) -> str:
    """Serialize to the record format; output is deterministic."""
    out: list[str] = []
    if header:
        out.extend(f"# {line}" for line in header.splitlines())
    out.extend(f"pnode {n}" for n in phys.nodes)
    out.extend(f"pedge {e} {u} {v}" for e, (u, v) in phys.edge_items())
    if logical is not None:
        out.extend(f"lnode {n} maps {logical.node_map[n]}" for n in logical.nodes)
        for e, (s, t) in logical.edge_items():
            flag = " augmented" if e in logical.augmented else ""
            out.append(f"ledge {e} {s} {t}{flag}")
    if srlgs is not None:
        out.extend(f"srlg {r.name} {' '.join(map(str, sorted(r.edge_ids)))}" for r in srlgs)
    if mapping is not None:
        out.extend(f"route {lid} {' '.join(map(str, route))}" for lid, route in mapping.routes.items())
    for idx, tree in enumerate(trees):
        out.append(f"tree {idx} {' '.join(map(str, tree))}".rstrip())
    for name, tidx in (protects or {}).items():
        out.append(f"protects {name} {tidx}")
    return "\n".join(out) + "\n"


def write_instance(path: str | Path | IO[str], text: str) -> None:
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
