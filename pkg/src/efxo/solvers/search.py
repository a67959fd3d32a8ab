"""Rooting-based solvers and brute-force oracles."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import product
from math import prod

from ..model import Instance, Orientation, one_forest, verify_efx
from ..rooting import (
    StateTable,
    enumerate_states,
    rooting_feasible,
    rooting_to_orientation,
)
from .twosat import TwoSatFormula, twosat_solve

DEFAULT_ORIENTATION_CAP = 20
DEFAULT_ROOTING_CAP = 10**6
DEFAULT_TAU = 12


class CapExceeded(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


# --- tree helpers -----------------------------------------------------------


def tree_diameter(inst: Instance, vertices) -> int:
    def far(s):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in inst.one_neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        best = max(dist, key=lambda v: (dist[v], -v))
        return best, dist[best]

    a, _ = far(min(vertices))
    return far(a)[1]


def classify_trees(inst: Instance, tau: int = DEFAULT_TAU) -> list[str]:
    """Per 1-tree: 'small' (diameter at most 3), 'tau' (4..tau vertices) or 'big'."""
    out = []
    for comp in one_forest(inst).trees:
        if tree_diameter(inst, comp.vertices) <= 3:
            out.append("small")
        elif len(comp.vertices) <= tau:
            out.append("tau")
        else:
            out.append("big")
    return out


def _self_consistent(inst: Instance, nb) -> bool:
    """No 0-edge inside one root neighborhood."""
    nb = sorted(nb)
    for i, a in enumerate(nb):
        for b in nb[i + 1 :]:
            if inst.has_edge(a, b) and inst.value(a, b) == 0:
                return False
    return True


def _pruned_states(inst: Instance, table: StateTable) -> list[list[int]]:
    return [
        [s for s in t.states if _self_consistent(inst, t.neighborhoods[s])] for t in table.trees
    ]


def _blocked_by(inst: Instance, covered: set[int]) -> set[int]:
    out = set()
    for x in covered:
        out.update(inst.zero_neighbors(x))
    return out


# --- 2-SAT on small trees ---------------------------------------------------


def build_twosat(
    inst: Instance,
    states: StateTable,
    options: dict[int, list[int]] | None = None,
) -> TwoSatFormula:
    """One variable per tree choosing between at most two states.

    ``options`` restricts the candidate list per tree (default: states after
    removing those with a 0-edge inside their own neighborhood); trees absent
    from ``options`` are ignored.
    """
    if options is None:
        options = dict(enumerate(_pruned_states(inst, states)))
    tids = sorted(options)
    var = {tid: i for i, tid in enumerate(tids)}
    clauses = set()
    meaning = {}
    lits: dict[int, list[tuple[int, tuple[int, bool]]]] = {}
    for tid in tids:
        opts = options[tid]
        x = var[tid]
        if len(opts) > 2:
            raise PreconditionError(f"tree {tid} has {len(opts)} states; 2-SAT needs at most 2")
        if not opts:
            clauses.add(((x, True), (x, True)))
            clauses.add(((x, False), (x, False)))
            meaning[x] = (tid, None, None)
            continue
        if len(opts) == 1:
            clauses.add(((x, True), (x, True)))
            meaning[x] = (tid, opts[0], None)
        else:
            meaning[x] = (tid, opts[0], opts[1])
        for s, pol in zip(opts, (True, False)):
            for v in states.trees[tid].neighborhoods[s]:
                lits.setdefault(v, []).append((tid, (x, pol)))
    for a, b in inst.zero_edges():
        for ta, la in lits.get(a, ()):
            for tb, lb in lits.get(b, ()):
                if ta == tb:
                    continue
                c = ((la[0], not la[1]), (lb[0], not lb[1]))
                clauses.add(min(c, c[::-1]))
    return TwoSatFormula(len(tids), tuple(sorted(clauses)), meaning)


def _require_forest(inst: Instance) -> None:
    if not inst.is_binary:
        raise PreconditionError("binary instance required")
    if one_forest(inst).cyclic:
        raise PreconditionError("1-graph must be a forest; preprocess first")


def solve_small_cores(inst: Instance) -> Orientation | None:
    _require_forest(inst)
    if any(c != "small" for c in classify_trees(inst)):
        raise PreconditionError("some 1-tree has diameter above 3")
    table = enumerate_states(inst)
    f = build_twosat(inst, table)
    sol = twosat_solve(f)
    if sol is None:
        return None
    return rooting_to_orientation(inst, _assignment_rooting(f, sol))


def _assignment_rooting(f: TwoSatFormula, sol) -> dict[int, int]:
    rooting = {}
    for x, value in enumerate(sol):
        tid, s_true, s_false = f.meaning[x]
        rooting[tid] = s_true if value else s_false
    return rooting


def solve_parameterized(
    inst: Instance,
    tau: int = DEFAULT_TAU,
    cap: int = DEFAULT_ROOTING_CAP,
    counter: dict | None = None,
) -> Orientation | None:
    """Enumerate states of the non-small trees, 2-SAT over the small ones.

    Outer trees (diameter above 3) are assigned in tree order, states in table
    order.  Every partial assignment removes the states it conflicts with from
    all other trees and runs 2-SAT on the small trees; both checks only drop
    branches without a solution, so the first hit equals the first hit of the
    plain lexicographic enumeration.  ``cap`` bounds the number of search nodes.
    """
    if tau < 1:
        raise ValueError("tau must be positive")
    _require_forest(inst)
    table = enumerate_states(inst)
    kinds = classify_trees(inst, tau)
    pruned = _pruned_states(inst, table)
    outer = [tid for tid, k in enumerate(kinds) if k != "small"]
    inner = [tid for tid, k in enumerate(kinds) if k == "small"]

    # which (tree, state) pairs put each vertex into R
    holders: dict[int, list[tuple[int, int]]] = {}
    for tid, opts in enumerate(pruned):
        for s in opts:
            for v in table.trees[tid].neighborhoods[s]:
                holders.setdefault(v, []).append((tid, s))

    def conflicts(tid: int, s: int) -> set[tuple[int, int]]:
        out = set()
        for v in _blocked_by(inst, table.trees[tid].neighborhoods[s]):
            for other in holders.get(v, ()):
                if other[0] != tid:
                    out.add(other)
        return out

    stats = {"nodes": 0, "outer_iterations": 0}

    def inner_formula(domains):
        return build_twosat(inst, table, {t: domains[t] for t in inner})

    def search(idx: int, domains: dict[int, list[int]]):
        stats["nodes"] += 1
        if stats["nodes"] > cap:
            raise CapExceeded(f"parameterized search exceeded {cap} nodes")
        f = inner_formula(domains)
        sol = twosat_solve(f)
        if sol is None:
            return None
        if idx == len(outer):
            stats["outer_iterations"] += 1
            rooting = {t: domains[t][0] for t in outer}
            rooting.update(_assignment_rooting(f, sol))
            return rooting
        tid = outer[idx]
        for s in domains[tid]:
            bad = conflicts(tid, s)
            nxt = {}
            for t, opts in domains.items():
                if t == tid:
                    nxt[t] = [s]
                else:
                    nxt[t] = [x for x in opts if (t, x) not in bad]
                    if not nxt[t]:
                        break
            else:
                found = search(idx + 1, nxt)
                if found is not None:
                    return found
        return None

    domains = {t: list(pruned[t]) for t in range(len(pruned))}
    rooting = None if any(not d for d in domains.values()) else search(0, domains)
    if counter is not None:
        counter.update(stats)
    if rooting is None:
        return None
    return rooting_to_orientation(inst, rooting)


def solve_bruteforce_rootings(
    inst: Instance, cap: int = DEFAULT_ROOTING_CAP, all_vertices: bool = False
) -> Orientation | None:
    """Try state combinations (or every vertex when ``all_vertices``) in order."""
    _require_forest(inst)
    trees = one_forest(inst).trees
    if all_vertices:
        options = [list(c.vertices) for c in trees]
    else:
        options = [list(t.states) for t in enumerate_states(inst).trees]
    total = prod(len(o) for o in options)
    if total > cap:
        raise CapExceeded(f"{total} rootings exceed cap {cap}")
    for choice in product(*options):
        rooting = dict(enumerate(choice))
        if rooting_feasible(inst, rooting)[0]:
            return rooting_to_orientation(inst, rooting)
    return None


# --- brute force over orientations ------------------------------------------


def solve_bruteforce_orientations(
    inst: Instance, cap: int = DEFAULT_ORIENTATION_CAP, method: str = "pruned"
) -> Orientation | None:
    """First EFX orientation in lexicographic order, or ``None``.

    Edge ``i`` is tried toward its smaller endpoint first; earlier edges vary
    slowest.  ``method="naive"`` walks all ``2^m`` vectors; the default prunes
    branches that already contain a strong envy no later choice can undo.
    """
    if inst.m > cap:
        raise CapExceeded(f"{inst.m} edges exceed orientation cap {cap}")
    if method == "naive":
        for bits in product((0, 1), repeat=inst.m):
            o = Orientation(tuple(e[b] for e, b in zip(inst.edges, bits)))
            if verify_efx(inst, o, method="general").ok:
                return o
        return None
    if method != "pruned":
        raise ValueError(f"unknown method {method!r}")
    return _dfs(inst)


def _dfs(inst: Instance) -> Orientation | None:
    m = inst.m
    w = [e[2] for e in inst.edges]
    val = [Fraction(0)] * inst.n
    rem = [Fraction(0)] * inst.n
    cnt = [0] * inst.n
    for u, v, x in inst.edges:
        rem[u] += x
        rem[v] += x
    heads = [-1] * m
    inc = [inst.incident(v) for v in range(inst.n)]

    def bad(eid: int) -> bool:
        h = heads[eid]
        u, v, _ = inst.edges[eid]
        t = u if h == v else v
        return cnt[h] >= 2 and w[eid] > val[t] + rem[t]

    def consistent(t: int, h: int) -> bool:
        # t lost potential; h gained an item
        for _, eid in inc[t]:
            if heads[eid] != -1 and heads[eid] != t and bad(eid):
                return False
        for _, eid in inc[h]:
            if heads[eid] == h and bad(eid):
                return False
        return True

    # iterative DFS: stack of (edge index, next option)
    i = 0
    option = [0] * (m + 1)
    while True:
        if i == m:
            o = Orientation(tuple(heads))
            if verify_efx(inst, o, method="general").ok:
                return o
            i -= 1  # pragma: no cover - pruning is exact at the leaves
        if i < 0:
            return None
        if heads[i] != -1:
            # undo the current choice
            u, v, _ = inst.edges[i]
            h = heads[i]
            val[h] -= w[i]
            rem[u] += w[i]
            rem[v] += w[i]
            cnt[h] -= 1
            heads[i] = -1
        if option[i] == 2:
            option[i] = 0
            i -= 1
            if i < 0:
                return None
            continue
        u, v, _ = inst.edges[i]
        h = (u, v)[option[i]]
        t = v if h == u else u
        option[i] += 1
        heads[i] = h
        val[h] += w[i]
        rem[u] -= w[i]
        rem[v] -= w[i]
        cnt[h] += 1
        if consistent(t, h):
            i += 1
