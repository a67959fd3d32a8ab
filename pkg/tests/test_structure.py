import random
from itertools import combinations, permutations

import networkx as nx
import pytest

from efxo import Instance
from efxo.rooting import enumerate_states, rooting_feasible
from efxo.solvers import classify_trees, solve_bruteforce_rootings
from efxo.structure import (
    Graph,
    SplitOrientation,
    StructureError,
    Tree,
    gadgetize_core,
    is_core,
    is_induced_matching,
    is_leafed,
    is_split,
    leafed_mim_dp,
    matching_to_split_orientation,
    max_induced_matching_bf,
    max_leafed_split_orientation,
    max_split_orientation_bf,
    pendant_path,
    product_with_edge,
    random_tree_core,
    split_orientation_to_matching,
    subdivided_star,
)
from helpers import tree_distance_matrix

P5 = Tree.path(5)


def random_tree(rng, n):
    return Tree.from_edges([(i, rng.randrange(i)) for i in range(1, n)], range(n))


def mim_oracle(g: Graph) -> int:
    """Independent induced-matching maximum via networkx line-graph squares."""
    best = 0
    edges = list(g.edges)
    adj = g.adj()
    for k in range(len(edges), 0, -1):
        if k <= best:
            break
        for pick in combinations(edges, k):
            ends = [x for e in pick for x in e]
            if len(set(ends)) != 2 * k:
                continue
            if all(b not in adj[a] for e, f in combinations(pick, 2) for a in e for b in f):
                return k
    return best


def feasible_roots(core: Tree, zero_edges) -> set:
    """Vertices r such that N(r) has no 0-edge inside it."""
    adj = core.adj()
    zs = {frozenset(e) for e in zero_edges}
    return {
        r for r in core.vertices
        if not any(frozenset((a, b)) in zs for a, b in combinations(adj[r], 2))
    }


# --- induced matchings ----------------------------------------------------------


@pytest.mark.parametrize("n, size", [(2, 1), (3, 1), (4, 1), (5, 2)])
def test_mim_paths(n, size):
    assert max_induced_matching_bf(Tree.path(n))[0] == size


def test_mim_tie_break_and_validity():
    size, m = max_induced_matching_bf(P5)
    assert size == 2 and m == ((0, 1), (3, 4))
    assert is_induced_matching(P5, m)
    assert not is_induced_matching(P5, ((0, 1), (2, 3)))


def test_mim_cap():
    with pytest.raises(StructureError):
        max_induced_matching_bf(Tree.path(30), cap=10)


def test_mim_matches_independent_oracle():
    rng = random.Random(1)
    for _ in range(80):
        t = random_tree(rng, rng.randint(2, 11))
        assert max_induced_matching_bf(t)[0] == mim_oracle(t)


# --- leafed DP -----------------------------------------------------------------------


def test_dp_p5_both_leaves():
    assert leafed_mim_dp(P5, [0, 4]) == (2, ((0, 1), (3, 4)))


def test_dp_p3_guard():
    with pytest.raises(StructureError):
        leafed_mim_dp(Tree.path(3), [0, 2])


def test_dp_non_leaf_rejected():
    with pytest.raises(StructureError):
        leafed_mim_dp(P5, [2])


def leafed_mim_oracle(t: Tree, required):
    best = None
    edges = list(t.edges)
    for k in range(len(edges) + 1):
        for pick in combinations(edges, k):
            if not is_induced_matching(t, pick):
                continue
            covered = {x for e in pick for x in e}
            if all(r in covered for r in required):
                best = k
                break
    return best


def test_dp_matches_brute_force_on_random_cores():
    rng = random.Random(2)
    for _ in range(150):
        core = random_tree_core(rng, rng.choice([2, 4, 5, 6, 7, 8, 9, 10, 12, 14]))
        leaves = core.leaves()
        dist = tree_distance_matrix(core.vertices, core.edges)
        root = core.vertices[0]
        for parity in (0, 1):
            req = [x for x in leaves if dist[root][x] % 2 == parity]
            if any(dist[a][b] < 4 for a, b in combinations(req, 2)):
                with pytest.raises(StructureError):
                    leafed_mim_dp(core, req)
                continue
            got = leafed_mim_dp(core, req)
            ref = leafed_mim_oracle(core, req)
            if ref is None:
                assert got is None
            else:
                assert got[0] == ref
                assert is_induced_matching(core, got[1])
                assert set(req) <= {x for e in got[1] for x in e}


# --- product and bijection ------------------------------------------------------------


def test_product_p2():
    g = product_with_edge(Tree.path(2))
    assert g.edges == (((0, 0), (1, 1)), ((0, 1), (1, 0)))


def test_product_p3_two_copies():
    g = product_with_edge(Tree.path(3))
    h = nx.Graph(list(g.edges))
    comps = [sorted(c) for c in nx.connected_components(h)]
    assert len(comps) == 2 and all(len(c) == 3 for c in comps)
    assert all(nx.is_isomorphic(h.subgraph(c), nx.path_graph(3)) for c in comps)


def test_product_edge_count():
    rng = random.Random(3)
    for _ in range(30):
        t = random_tree(rng, rng.randint(1, 12))
        assert len(product_with_edge(t).edges) == 2 * len(t.edges)


def test_bijection_small_cases():
    t = Tree.path(2)
    assert matching_to_split_orientation(t, ()).arcs == ()
    g = product_with_edge(t)
    so = matching_to_split_orientation(t, g.edges)
    assert so.arcs == ((0, 1), (1, 0)) and is_split(t, so.arcs)
    with pytest.raises(StructureError):
        matching_to_split_orientation(Tree.path(3), (((0, 0), (1, 1)), ((1, 1), (2, 0))))


def all_induced_matchings(g: Graph):
    out = []
    edges = list(g.edges)
    for k in range(len(edges) + 1):
        for pick in combinations(edges, k):
            if is_induced_matching(g, pick):
                out.append(pick)
    return out


def all_split_orientations(g: Graph):
    arcs = [(a, b) for a, b in g.edges] + [(b, a) for a, b in g.edges]
    out = []
    for k in range(len(arcs) + 1):
        for pick in combinations(sorted(arcs), k):
            if is_split(g, pick):
                out.append(tuple(sorted(pick)))
    return out


def test_bijection_is_onto_and_injective():
    rng = random.Random(4)
    graphs = [random_tree(rng, rng.randint(1, 6)) for _ in range(15)]
    graphs.append(Graph.from_edges([(0, 1), (1, 2), (2, 0)]))
    graphs.append(Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]))
    for g in graphs:
        prod = product_with_edge(g)
        images = set()
        for m in all_induced_matchings(prod):
            so = matching_to_split_orientation(g, m)
            assert is_split(g, so.arcs)
            assert {frozenset(e) for e in split_orientation_to_matching(g, so)} == {
                frozenset(e) for e in m
            }
            back = matching_to_split_orientation(g, split_orientation_to_matching(g, so))
            assert back.arcs == so.arcs
            images.add(so.arcs)
        assert images == set(all_split_orientations(g))


def test_max_split_via_product_equals_direct():
    rng = random.Random(5)
    for _ in range(60):
        t = random_tree(rng, rng.randint(2, 12))
        size, m = max_induced_matching_bf(product_with_edge(t))
        so = matching_to_split_orientation(t, m)
        assert len(so) == size == len(max_split_orientation_bf(t))


# --- leafed split orientations ----------------------------------------------------------


def test_leafed_p2():
    assert len(max_leafed_split_orientation(Tree.path(2))) == 2


def test_leafed_p5():
    so = max_leafed_split_orientation(P5)
    assert so.leafed and len(so) == 4
    assert len(max_split_orientation_bf(P5, leafed=True)) == 4


def test_leafed_requires_core():
    with pytest.raises(StructureError):
        max_leafed_split_orientation(Tree.from_edges([(0, 1), (0, 2), (0, 3)]))


def test_leafed_matches_brute_force_on_random_cores():
    rng = random.Random(6)
    for _ in range(150):
        core = random_tree_core(rng, rng.choice([2, 4, 5, 6, 7, 8, 9, 10, 11, 12]))
        so = max_leafed_split_orientation(core)
        assert is_split(core, so.arcs) and is_leafed(core, so.arcs)
        assert len(so) == len(max_split_orientation_bf(core, leafed=True))
        n = len(core.vertices)
        if len(so) >= 3:
            assert len(so) + 1 <= n <= 5 * len(so) - 1


def test_leafed_smaller_than_unleafed_exists():
    found = []
    for n in range(2, 9):
        for g in nx.nonisomorphic_trees(n):
            t = Tree.from_edges(g.edges(), g.nodes())
            if not is_core(t):
                continue
            if len(max_leafed_split_orientation(t)) < len(max_split_orientation_bf(t)):
                found.append(t)
    assert found


def test_non_core_has_no_leafed_orientation():
    t = Tree.from_edges([(0, 1), (0, 2), (0, 3), (3, 4)])
    assert not is_core(t)
    assert max_split_orientation_bf(t, leafed=True) is None


# --- gadget ------------------------------------------------------------------------------


def test_gadget_p5_k3():
    gad = gadgetize_core(P5, 3)
    assert gad.arcs == ((0, 1), (4, 3), (1, 0))
    assert set(gad.roots) == {0, 1, 4}
    assert gad.zero_edges == ((1, 3), (2, 4))
    assert feasible_roots(P5, gad.zero_edges) == {0, 1, 4}


def test_gadget_leaf_arcs_only_blocks_internal():
    gad = gadgetize_core(P5, 2)
    assert set(gad.roots) == {0, 4}
    assert feasible_roots(P5, gad.zero_edges) == {0, 4}


def test_gadget_errors():
    with pytest.raises(StructureError):
        gadgetize_core(P5, 5)
    with pytest.raises(StructureError):
        gadgetize_core(P5, 1)


def test_gadget_feasible_roots_by_rooting_search():
    rng = random.Random(7)
    for _ in range(120):
        core = random_tree_core(rng, rng.choice([2, 4, 5, 6, 7, 8, 9, 10, 11, 12]))
        total = len(max_leafed_split_orientation(core))
        for k in range(len(core.leaves()), total + 1):
            gad = gadgetize_core(core, k)
            inst, pos = gad.instance()
            feasible = set()
            for v in core.vertices:
                if rooting_feasible(inst, {0: pos[v]})[0]:
                    feasible.add(v)
            assert feasible == set(gad.roots)
            # each private is adjacent to its own root only
            adj = core.adj()
            for r, s in gad.arcs:
                assert [x for x in adj[s] if x in gad.roots] == [r]


# --- generators and size bounds -----------------------------------------------------------


def test_random_core_predicate():
    rng = random.Random(8)
    for size in (2, 4, 5, 6, 9, 15, 25):
        t = random_tree_core(rng, size)
        assert len(t.vertices) == size and is_core(t)
    for bad in (1, 3):
        with pytest.raises(StructureError):
            random_tree_core(rng, bad)


def test_mim_size_bounds():
    rng = random.Random(9)
    checked = 0
    while checked < 60:
        t = random_tree_core(rng, rng.randint(4, 16))
        m = max_induced_matching_bf(t)[0]
        if m < 2:
            continue
        checked += 1
        assert 2 * m + 1 <= len(t.vertices) <= 5 * m - 1


def test_subdivided_star_extremal():
    t = subdivided_star(5)
    assert len(t.vertices) == 11 and is_core(t)
    assert max_induced_matching_bf(t)[0] == 5


def test_pendant_path_extremal():
    t = pendant_path(5)
    assert len(t.vertices) == 24 and is_core(t)
    assert max_induced_matching_bf(t)[0] == 5
    assert len(pendant_path(2).vertices) == 9


def test_dp_inequality_r1_r2_vs_m():
    rng = random.Random(10)
    for _ in range(80):
        core = random_tree_core(rng, rng.choice([4, 5, 6, 8, 10, 12]))
        so = max_leafed_split_orientation(core)
        m = max_induced_matching_bf(core)[0]
        assert len(so) >= m


def test_tree_validation():
    with pytest.raises(StructureError):
        Tree.from_edges([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(StructureError):
        Tree.from_edges([(0, 1), (2, 3)])
    assert Tree.path(1).leaves() == []


def test_split_orientation_dataclass():
    so = SplitOrientation(((0, 1), (4, 3)), True)
    assert so.roots == (0, 4) and so.privates == (1, 3) and len(so) == 2


def test_rooting_search_on_gadget_instance():
    gad = gadgetize_core(P5, 3)
    inst, _ = gad.instance()
    assert enumerate_states(inst).trees[0].states == (0, 1, 3, 4)
    assert solve_bruteforce_rootings(inst) is not None


def test_core_diameter_three_iff_p5_free():
    for n in range(2, 10):
        for g in nx.nonisomorphic_trees(n):
            t = Tree.from_edges(g.edges(), g.nodes())
            if not is_core(t):
                continue
            adj = {v: set(g[v]) for v in g}
            has_p5 = any(
                all(p[i + 1] in adj[p[i]] for i in range(4))
                and all(p[j] not in adj[p[i]] for i in range(5) for j in range(i + 2, 5))
                for p in permutations(g.nodes(), 5)
            )
            (kind,) = classify_trees(Instance(n, tuple((a, b, 1) for a, b in t.edges)), tau=12)
            assert (kind == "small") == (not has_p5)
