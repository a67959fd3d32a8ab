import random
from itertools import product

import pytest

from efxo import Instance, one_forest, verify_efx
from efxo.preprocess import preprocess_full
from efxo.rooting import (
    RootingError,
    enumerate_states,
    roots_of,
    rooting_feasible,
    rooting_to_orientation,
)
from efxo.solvers import solve_bruteforce_orientations, solve_bruteforce_rootings
from helpers import random_forest_instance


def inst(n, *edges):
    return Instance(n, tuple(edges))


def path(n):
    return inst(n, *[(k, k + 1, 1) for k in range(n - 1)])


def crossed_p2s():
    # u1=0, u2=1, v1=2, v2=3, one crossing 0-edge u2v2
    return inst(4, (0, 1, 1), (2, 3, 1), (1, 3, 0))


# --- states ---------------------------------------------------------------------


def test_p2_has_two_states():
    assert enumerate_states(path(2)).counts() == [2]


def test_p4_states_are_leaves():
    (t,) = enumerate_states(path(4)).trees
    assert t.states == (0, 3)


def test_p5_states():
    (t,) = enumerate_states(path(5)).trees
    assert t.states == (0, 1, 3, 4)
    assert t.dominated_by == {2: 0}
    assert t.neighborhoods[1] == frozenset({0, 2})


def test_equal_neighborhoods_keep_smallest_id():
    # star: leaves 1,2,3 share the neighborhood {0}; the center is not dominated
    (t,) = enumerate_states(inst(4, (0, 1, 1), (0, 2, 1), (0, 3, 1))).trees
    assert t.states == (0, 1)
    assert t.dominated_by == {2: 1, 3: 1}


def brute_dominance(adj, v):
    """Smallest u != v with N(u) a subset of N(v) (proper, or equal and u < v)."""
    for u in sorted(adj):
        if u == v:
            continue
        if adj[u] < adj[v] or (adj[u] == adj[v] and u < v):
            return u
    return None


def test_states_match_brute_force_dominance():
    rng = random.Random(3)
    for _ in range(300):
        i = random_forest_instance(rng, 10)
        if one_forest(i).cyclic:
            continue
        table = enumerate_states(i)
        for t in table.trees:
            adj = {v: frozenset(i.one_neighbors(v)) for v in t.vertices}
            expected = tuple(v for v in t.vertices if brute_dominance(adj, v) is None)
            assert t.states == expected
            # every dominated vertex is certified by a candidate-or-dominated vertex
            for v, u in t.dominated_by.items():
                assert adj[u] <= adj[v]
            # no candidate dominates another candidate
            for a in t.states:
                for b in t.states:
                    assert a == b or not adj[a] <= adj[b]


def test_cyclic_rejected():
    with pytest.raises(RootingError):
        enumerate_states(inst(3, (0, 1, 1), (1, 2, 1), (0, 2, 1)))


# --- feasibility --------------------------------------------------------------------


def test_no_zero_edges_always_feasible():
    i = inst(5, (0, 1, 1), (1, 2, 1), (3, 4, 1))
    for a in range(3):
        for b in (3, 4):
            assert rooting_feasible(i, {0: a, 1: b}) == (True, None)


def test_crossed_rooting_witness():
    i = crossed_p2s()
    ok, bad = rooting_feasible(i, {0: 0, 1: 2})
    assert not ok and i.edges[bad][:2] == (1, 3)
    assert rooting_feasible(i, {0: 0, 1: 3}) == (True, None)


def test_root_outside_tree_rejected():
    with pytest.raises(RootingError):
        rooting_feasible(path(3), {0: 7})
    with pytest.raises(RootingError):
        rooting_feasible(path(3), {})


# --- orientation synthesis --------------------------------------------------------------


def test_single_edge_rooted():
    i = path(2)
    o = rooting_to_orientation(i, {0: 0})
    assert o.heads == (1,)


def test_p3_rooted_at_end():
    i = path(3)
    o = rooting_to_orientation(i, {0: 0})
    assert o.heads == (1, 2) and verify_efx(i, o).ok


def test_infeasible_rooting_rejected():
    with pytest.raises(RootingError):
        rooting_to_orientation(crossed_p2s(), {0: 0, 1: 2})


def test_feasible_rootings_give_nice_efx_orientations():
    rng = random.Random(17)
    checked = 0
    while checked < 300:
        red, _ = preprocess_full(random_forest_instance(rng, 10))
        trees = one_forest(red).trees
        if not trees:
            continue
        for choice in product(*[c.vertices for c in trees]):
            r = dict(enumerate(choice))
            if rooting_feasible(red, r)[0]:
                o = rooting_to_orientation(red, r)
                assert verify_efx(red, o).ok
                # exactly one vertex per tree receives no 1-edge: the root
                got = roots_of(red, o)
                assert {tid: tuple(v) for tid, v in got.items()} == {
                    tid: (root,) for tid, root in r.items()
                }
                checked += 1
                break


def test_dominance_and_nice_completeness():
    rng = random.Random(23)
    for _ in range(300):
        red, _ = preprocess_full(random_forest_instance(rng, 8))
        if red.m > 20:
            continue
        full = solve_bruteforce_rootings(red, all_vertices=True) is not None
        pruned = solve_bruteforce_rootings(red) is not None
        orient = solve_bruteforce_orientations(red) is not None
        assert full == pruned == orient
