"""Tree states, dominance pruning and nice orientations built from rootings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .model import Instance, Orientation, OrientationError, one_forest, verify_efx


class RootingError(ValueError):
    pass


@dataclass(frozen=True)
class TreeStates:
    tree_id: int
    vertices: tuple[int, ...]
    states: tuple[int, ...]
    neighborhoods: dict[int, frozenset[int]] = field(compare=False)
    # dominated vertex -> the candidate certifying it
    dominated_by: dict[int, int] = field(compare=False)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class StateTable:
    trees: tuple[TreeStates, ...]

    def counts(self) -> list[int]:
        return [len(t) for t in self.trees]

    def tree_of(self) -> dict[int, int]:
        return {v: t.tree_id for t in self.trees for v in t.vertices}


Rooting = dict  # tree id -> root vertex


def _trees(inst: Instance):
    forest = one_forest(inst)
    if forest.cyclic:
        raise RootingError("1-graph contains a cycle; preprocess first")
    return forest.trees


def enumerate_states(inst: Instance) -> StateTable:
    """Non-dominated root candidates per 1-tree.

    In a tree two distinct vertices share at most one neighbor, so
    ``N1(u) <= N1(v)`` for ``u != v`` forces ``u`` to be a leaf.  Hence ``v`` is
    dominated exactly when a leaf other than ``v`` hangs off a neighbor of ``v``
    (for a leaf ``v`` only smaller-id twins count).
    """
    out = []
    for tid, comp in enumerate(_trees(inst)):
        nb = {v: frozenset(inst.one_neighbors(v)) for v in comp.vertices}
        # smallest leaf hanging off each vertex
        first_leaf: dict[int, int] = {}
        for v in comp.vertices:
            if len(nb[v]) == 1:
                (x,) = nb[v]
                if x not in first_leaf or v < first_leaf[x]:
                    first_leaf[x] = v
        states, dominated = [], {}
        for v in comp.vertices:
            best = None
            for x in nb[v]:
                u = first_leaf.get(x)
                if u is None or u == v:
                    continue
                if len(nb[v]) == 1 and u > v:
                    continue
                if best is None or u < best:
                    best = u
            if best is None:
                states.append(v)
            else:
                dominated[v] = best
        out.append(
            TreeStates(
                tid, comp.vertices, tuple(states), {s: nb[s] for s in states}, dominated
            )
        )
    return StateTable(tuple(out))


def rooting_feasible(inst: Instance, r: Rooting) -> tuple[bool, int | None]:
    """(ok, smallest violating 0-edge id or None)."""
    trees = _trees(inst)
    covered = set()
    for tid, comp in enumerate(trees):
        if tid not in r:
            raise RootingError(f"tree {tid} has no root")
        if r[tid] not in comp.vertices:
            raise RootingError(f"root {r[tid]} not in tree {tid}")
        covered.update(inst.one_neighbors(r[tid]))
    if set(r) - set(range(len(trees))):
        raise RootingError("rooting names unknown trees")
    for i, (u, v, w) in enumerate(inst.edges):
        if w == 0 and u in covered and v in covered:
            return False, i
    return True, None


def rooting_to_orientation(inst: Instance, r: Rooting, check: bool = True) -> Orientation:
    ok, bad = rooting_feasible(inst, r)
    if not ok:
        raise RootingError(f"rooting infeasible: 0-edge {inst.edges[bad][:2]} inside R")
    heads = [-1] * inst.m
    R = set()
    for tid, root in sorted(r.items()):
        R.update(inst.one_neighbors(root))
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, eid in inst.incident(x):
                if inst.edges[eid][2] == 1 and y not in seen:
                    seen.add(y)
                    heads[eid] = y
                    queue.append(y)
    for i, (u, v, w) in enumerate(inst.edges):
        if heads[i] != -1:
            continue
        if w != 0:
            raise RootingError("1-edge outside every rooted tree")
        if u in R:
            heads[i] = v
        elif v in R:
            heads[i] = u
        else:
            heads[i] = v
    o = Orientation(tuple(heads))
    if check and not verify_efx(inst, o).ok:  # pragma: no cover - guarded by feasibility
        raise OrientationError("feasible rooting produced a non-EFX orientation")
    return o


def roots_of(inst: Instance, o: Orientation) -> dict[int, list[int]]:
    """Per tree, the vertices receiving no 1-edge under ``o``."""
    trees = _trees(inst)
    got = set()
    for i, (u, v, w) in enumerate(inst.edges):
        if w == 1:
            got.add(o.heads[i])
    return {tid: [x for x in comp.vertices if x not in got] for tid, comp in enumerate(trees)}
