import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from survmap.errors import AugmentationError, CapacityError, DomainError
from survmap.failure_model import FailureScenario, SrlgSet
from survmap.heuristic import HeuristicConfig, augment, run_k_heuristic, run_srlg_heuristic
from survmap.net_model import LogicalNetwork, PhysicalNetwork, SpanningTree
from survmap.topologies import cln, fig2_instance, nsf, random_instance
from survmap.verifier import verify_k, verify_srlg


def _check_plan(phys, srlgs, plan):
    assert plan.tree_count <= len(srlgs)
    for tree in plan.trees:
        assert tree.is_valid_for(plan.logical)
        assert tree.edge_ids <= plan.committed
    for scenario, idx in zip(srlgs, plan.protected):
        if idx is None:
            continue
        for lid in plan.trees[idx]:
            assert scenario.edge_ids.isdisjoint(plan.mapping.routes[lid])
        assert oracles.residual_connected(plan.logical, plan.mapping, scenario.edge_ids)
    report = verify_srlg(plan.logical, plan.mapping, srlgs)
    assert report.protected_count >= plan.protected_count


def test_fig2_builds_the_three_trees():
    inst = fig2_instance()
    plan = run_srlg_heuristic(inst.phys, inst.logical, inst.srlgs)
    assert [t.edge_ids for t in plan.trees] == [{1, 2, 3}, {0, 1, 3}, {0, 1, 2}]
    assert plan.protected == (0, 1, 2)
    assert plan.mapping.routes == inst.mapping.routes
    assert plan.augmented_edges == () and plan.logical_edges_used == 4
    _check_plan(inst.phys, inst.srlgs, plan)


def test_empty_srlg_set_gives_min_hop_mapping():
    inst = fig2_instance()
    plan = run_srlg_heuristic(inst.phys, inst.logical, SrlgSet(()))
    assert plan.trees == () and plan.mapping.is_complete()
    for lid, (s, t) in inst.logical.edge_items():
        assert len(plan.mapping.routes[lid]) == oracles.min_hops(inst.phys, s, t)
    assert set(plan.completed_edges) == set(inst.logical.edges)


def test_single_avoidable_srlg_needs_one_tree():
    inst = fig2_instance()
    one = SrlgSet((inst.srlgs[0],))
    plan = run_srlg_heuristic(inst.phys, inst.logical, one)
    assert plan.tree_count == 1 and plan.protected == (0,)


def test_k1_on_fig2_is_fully_survivable():
    inst = fig2_instance()
    plan = run_k_heuristic(inst.phys, inst.logical, 1)
    assert verify_k(plan.logical, plan.mapping, 1).survivable


def test_k_all_links_protects_nothing():
    inst = fig2_instance()
    plan = run_k_heuristic(inst.phys, inst.logical, inst.phys.num_edges)
    assert plan.protected_count == 0


def test_k_budget():
    with pytest.raises(CapacityError):
        run_k_heuristic(nsf(), cln(1), 3, budget=100)


def test_k2_nsf_cln4_fraction():
    plan = run_k_heuristic(nsf(), cln(4), 2)
    report = verify_k(plan.logical, plan.mapping, 2)
    assert report.total_count == 210
    assert report.protected_count / 210 >= 0.98


def test_rejects_bad_inputs():
    inst = fig2_instance()
    with pytest.raises(DomainError):
        HeuristicConfig(big_m=1.0)
    with pytest.raises(DomainError):
        HeuristicConfig(order="random")
    split = LogicalNetwork((1, 2, 3), {0: (1, 2)}, {1: 1, 2: 2, 3: 3})
    with pytest.raises(DomainError):
        run_srlg_heuristic(inst.phys, split, inst.srlgs)


def _needs_augment():
    # Logical path 0-1-2 on a physical ring. r1 commits link (1, 2) to the
    # direct physical link 1, so r2 = {1} cuts the logical bridge.
    phys = PhysicalNetwork((0, 1, 2, 3), ((0, 1), (1, 2), (2, 3), (3, 0)))
    logical = LogicalNetwork((0, 1, 2), {0: (0, 1), 1: (1, 2)}, {0: 0, 1: 1, 2: 2})
    return phys, logical, SrlgSet.from_groups([[2], [1]])


def test_augmentation_adds_a_link():
    phys, logical, srlgs = _needs_augment()
    plan = run_srlg_heuristic(phys, logical, srlgs)
    assert plan.protected == (0, 1)
    assert plan.augmented_edges == (2,)
    assert plan.logical.edges[2] == (0, 2) and plan.logical.augmented == {2}
    assert plan.mapping.routes[2] == (3, 2)
    _check_plan(phys, srlgs, plan)


def test_augmentation_disabled_leaves_scenario_unprotected():
    phys, logical, srlgs = _needs_augment()
    plan = run_srlg_heuristic(phys, logical, srlgs, HeuristicConfig(max_augment=0))
    assert plan.protected == (0, None) and plan.augmented_edges == ()
    assert verify_srlg(plan.logical, plan.mapping, srlgs).protected_count < len(srlgs)


def test_augment_operation_on_finished_plan():
    phys, logical, srlgs = _needs_augment()
    plan = run_srlg_heuristic(phys, logical, srlgs.prefix(1))
    new_logical, new_plan = augment(phys, logical, plan, srlgs[1])
    assert new_logical.num_edges == logical.num_edges + 1
    assert new_plan.protects() == {"r1": 0, "r2": 1}
    assert verify_srlg(new_logical, new_plan.mapping, srlgs).survivable
    with pytest.raises(AugmentationError):
        augment(phys, logical, plan, srlgs[1], HeuristicConfig(max_augment=0))


def test_plan_is_deterministic_and_order_is_seeded():
    inst = fig2_instance()
    a = run_srlg_heuristic(inst.phys, inst.logical, inst.srlgs, HeuristicConfig(order="shuffled:3"))
    b = run_srlg_heuristic(inst.phys, inst.logical, inst.srlgs, HeuristicConfig(order="shuffled:3"))
    assert a == b
    assert sorted(a.processing_order) == [0, 1, 2]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([None, 0, 1]))
def test_soundness_on_random_instances(seed, max_augment):
    inst = random_instance(seed, n_scenarios=4)
    plan = run_srlg_heuristic(inst.phys, inst.logical, inst.srlgs, HeuristicConfig(max_augment=max_augment))
    _check_plan(inst.phys, inst.srlgs, plan)
    if max_augment == 0:
        assert plan.augmented_edges == ()


def test_spanning_tree_type_used_in_plan():
    inst = fig2_instance()
    plan = run_srlg_heuristic(inst.phys, inst.logical, inst.srlgs)
    assert all(isinstance(t, SpanningTree) for t in plan.trees)
    assert plan.protects() == {"r1": 0, "r2": 1, "r3": 2}
