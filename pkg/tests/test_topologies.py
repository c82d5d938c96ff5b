import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survmap.errors import DomainError
from survmap.topologies import (
    CLN1_EDGES,
    CLN2_EXTRA,
    CLN3_EDGES,
    CLN4_EXTRA,
    CLN_A_NODES,
    CLN_A_SEED,
    CLN_B_NODES,
    CLN_B_SEED,
    all_simple_routes,
    check_route,
    cln,
    degree_profile,
    fig2_instance,
    generate_cln,
    logical_by_name,
    nsf,
    nsf1,
    physical_by_name,
    random_instance,
)


def _graph(net_edges):
    return nx.Graph(list(net_edges))


def test_nsf_shape():
    p = nsf()
    assert (p.num_nodes, p.num_edges) == (14, 21)
    assert nx.is_connected(_graph(p.edges))
    assert nx.edge_connectivity(_graph(p.edges)) == 2


def test_nsf1_adds_one_link_and_min_degree_three():
    p, q = nsf(), nsf1()
    assert q.num_edges == 22 and q.edges[:21] == p.edges
    g = _graph(q.edges)
    assert min(d for _, d in g.degree()) == 3
    assert nx.edge_connectivity(g) == 3


@pytest.mark.parametrize("i, edges, conn, avg", [(1, 11, 3, 3.14), (2, 14, 4, 4.0), (3, 11, 3, 3.14), (4, 14, 4, 4.0)])
def test_cln_profiles(i, edges, conn, avg):
    net = cln(i)
    prof = degree_profile(net.edges.values(), net.nodes)
    assert prof["nodes"] == 7 and prof["edges"] == edges
    assert prof["conn"] == conn and prof["avg_deg"] == avg
    if edges == 14:
        assert prof["min_deg"] == prof["max_deg"] == 4
    assert all(net.node_map[v] == v for v in net.nodes)


def test_cln_nesting_and_disjoint_node_sets():
    assert set(cln(1).edges.values()) < set(cln(2).edges.values())
    assert set(cln(3).edges.values()) < set(cln(4).edges.values())
    assert sorted(cln(2).edges)[11:] == [11, 12, 13]
    assert not set(CLN_A_NODES) & set(CLN_B_NODES)
    assert set(CLN_A_NODES) | set(CLN_B_NODES) == set(range(14))


def test_generator_reproduces_frozen_fixtures():
    assert generate_cln(CLN_A_NODES, CLN_A_SEED) == (CLN1_EDGES, CLN2_EXTRA)
    assert generate_cln(CLN_B_NODES, CLN_B_SEED) == (CLN3_EDGES, CLN4_EXTRA)


def test_catalog_lookup():
    assert physical_by_name("nsf(1)") == nsf1()
    assert logical_by_name("CLN3") == cln(3)
    assert physical_by_name("FIG2").num_edges == 7
    with pytest.raises(DomainError):
        physical_by_name("ARPA")
    with pytest.raises(DomainError):
        cln(5)


def test_fig2_instance():
    inst = fig2_instance()
    assert inst.phys.nodes == (1, 2, 3, 4, 5, 6)
    assert inst.logical.edges == {0: (1, 2), 1: (2, 3), 2: (3, 4), 3: (4, 1)}
    assert [sorted(s.edge_ids) for s in inst.srlgs] == [[0, 3], [1, 4], [5, 6]]
    for lid, (s, t) in inst.logical.edge_items():
        assert check_route(inst.phys, s, t, inst.mapping.routes[lid])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_instances_are_well_formed(seed):
    inst = random_instance(seed)
    assert nx.is_connected(_graph(inst.phys.edges))
    assert nx.is_connected(_graph(inst.logical.edges.values()))
    for lid, (s, t) in inst.logical.edge_items():
        a, b = inst.logical.node_map[s], inst.logical.node_map[t]
        route = inst.mapping.routes[lid]
        assert check_route(inst.phys, a, b, route)
        assert route in all_simple_routes(inst.phys, a, b)
    assert random_instance(seed) == random_instance(seed)
