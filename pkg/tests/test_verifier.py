import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from survmap.errors import CapacityError, DomainError
from survmap.failure_model import FailureScenario, SrlgSet, gen_k_failures
from survmap.net_model import LogicalNetwork, Mapping, PhysicalNetwork
from survmap.topologies import fig2_instance, random_instance
from survmap.verifier import (
    SurvivabilityReport,
    format_csv,
    format_reports,
    phys_utilization,
    survives_by_cutsets,
    survives_by_trees,
    verify_k,
    verify_scenario,
    verify_srlg,
    witness_tree,
)


def test_fig2_is_srlg_survivable():
    inst = fig2_instance()
    report = verify_srlg(inst.logical, inst.mapping, inst.srlgs)
    assert report.survivable and report.protected_count == 3 and report.total_count == 3
    assert report.failed_scenarios == () and report.phys_utilization == 6


def test_fig2_witness_trees():
    inst = fig2_instance()
    trees = [witness_tree(inst.logical, inst.mapping, s).edge_ids for s in inst.srlgs]
    # a, b, c, d = 0, 1, 2, 3
    assert trees == [{1, 2, 3}, {0, 1, 3}, {0, 1, 2}]


def test_fig2_single_failures():
    inst = fig2_instance()
    report = verify_k(inst.logical, inst.mapping, 1)
    assert report.total_count == 7 and report.survivable


def test_fig2_double_failures_name_the_disconnecting_pairs():
    inst = fig2_instance()
    report = verify_k(inst.logical, inst.mapping, 2)
    assert report.total_count == 21
    expected = [
        s.name
        for s in gen_k_failures(inst.phys, 2)
        if not oracles.residual_connected(inst.logical, inst.mapping, s.edge_ids)
    ]
    assert list(report.failed_scenarios) == expected
    assert report.protected_count == 21 - len(expected)


def test_disconnecting_scenario_is_reported():
    inst = fig2_instance()
    cut = SrlgSet.from_groups([[0, 2]])  # kills a and b, isolating logical node 2
    report = verify_srlg(inst.logical, inst.mapping, cut)
    assert not report.survivable and report.failed_scenarios == ("r1",)
    assert witness_tree(inst.logical, inst.mapping, cut[0]) is None


def test_k_budget():
    inst = fig2_instance()
    with pytest.raises(CapacityError):
        verify_k(inst.logical, inst.mapping, 2, budget=20)


def test_incomplete_mapping_rejected():
    inst = fig2_instance()
    partial = Mapping(inst.phys, inst.logical, {0: (0,)})
    with pytest.raises(DomainError):
        verify_srlg(inst.logical, partial, inst.srlgs)


def test_report_invariants_and_merge():
    with pytest.raises(DomainError):
        SurvivabilityReport("srlg", True, 1, 2, ("x",), 0)
    with pytest.raises(DomainError):
        SurvivabilityReport("srlg", False, 1, 2, (), 0)
    a = SurvivabilityReport("k", False, 1, 2, ("f9",), 5)
    b = SurvivabilityReport("k", False, 2, 3, ("f1",), 5)
    merged = a.merge(b)
    assert merged == b.merge(a)
    assert (merged.protected_count, merged.total_count, merged.failed_scenarios) == (3, 5, ("f1", "f9"))
    with pytest.raises(DomainError):
        a.merge(SurvivabilityReport("srlg", True, 1, 1, (), 5))


def test_report_formatting():
    inst = fig2_instance()
    report = verify_srlg(inst.logical, inst.mapping, inst.srlgs)
    text = format_reports([("fig2", report)])
    assert text.splitlines()[0].split() == ["instance", "Surv", "MaxS", "Total", "PhyS"]
    assert text.splitlines()[2].split() == ["fig2", "Yes", "3", "3", "6"]
    assert format_csv([{"a": "1"}], ["a"]) == "a\n1\n"
    with pytest.raises(DomainError):
        format_reports([("x", report), ("y", verify_k(inst.logical, inst.mapping, 1))])


def test_phys_utilization_counts_hops():
    inst = fig2_instance()
    assert phys_utilization(inst.mapping) == sum(len(r) for r in inst.mapping.routes.values())


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_three_criteria_agree(seed):
    inst = random_instance(seed)
    for s in list(inst.srlgs) + list(gen_k_failures(inst.phys, 1)):
        direct = verify_scenario(inst.logical, inst.mapping, s)
        assert direct == oracles.residual_connected(inst.logical, inst.mapping, s.edge_ids)
        assert survives_by_trees(inst.logical, inst.mapping, s.edge_ids) == direct
        assert survives_by_cutsets(inst.logical, inst.mapping, s.edge_ids) == direct


def test_protected_count_is_monotone_under_extra_links():
    # A second, differently routed logical link can only help.
    phys = PhysicalNetwork((0, 1, 2), ((0, 1), (1, 2), (0, 2)))
    logical = LogicalNetwork((0, 1), {0: (0, 1)}, {0: 0, 1: 1})
    m = Mapping(phys, logical, {0: (0,)})
    base = verify_k(logical, m, 1).protected_count
    bigger = logical.with_edge(1, 0, 1, augmented=True)
    m2 = Mapping(phys, bigger, {0: (0,), 1: (2, 1)})
    assert verify_k(bigger, m2, 1).protected_count >= base
    assert verify_k(bigger, m2, 1).survivable
    assert math.comb(3, 1) == verify_k(bigger, m2, 1).total_count


def test_scenario_on_unknown_edge_is_rejected():
    inst = fig2_instance()
    with pytest.raises(DomainError):
        verify_scenario(inst.logical, inst.mapping, FailureScenario("x", frozenset({42})))
