"""Min-uncut classification and the near-bipartite constructor."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from ..model import Instance, Orientation, OrientationError, verify_efx


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Bipartite:
    coloring: tuple[int, ...]


@dataclass(frozen=True)
class OneEdge:
    edge: int
    coloring: tuple[int, ...]  # a proper 2-coloring of G - edge


@dataclass(frozen=True)
class MoreThanOne:
    pass


UncutClassification = Union[Bipartite, OneEdge, MoreThanOne]


def two_color(inst: Instance, skip: int | None = None):
    """(coloring, None) or (None, edge ids of an odd cycle)."""
    color = [-1] * inst.n
    via = [-1] * inst.n  # edge to BFS parent
    parent = [-1] * inst.n
    for s in range(inst.n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, eid in inst.incident(x):
                if eid == skip:
                    continue
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    parent[y], via[y] = x, eid
                    queue.append(y)
                elif color[y] == color[x]:
                    return None, _odd_cycle(x, y, eid, parent, via)
    return tuple(color), None


def _odd_cycle(x, y, eid, parent, via) -> list[int]:
    def chain(v):
        out = [v]
        while parent[v] != -1:
            v = parent[v]
            out.append(v)
        return out

    px, py = chain(x), chain(y)
    common = set(px) & set(py)
    cycle = [eid]
    for path in (px, py):
        for v in path:
            if v in common:
                break
            cycle.append(via[v])
    return sorted(cycle)


def detect_min_uncut_le1(inst: Instance) -> UncutClassification:
    coloring, cycle = two_color(inst)
    if coloring is not None:
        return Bipartite(coloring)
    # an edge whose removal fixes every odd cycle lies on the one we found
    for eid in cycle:
        coloring, _ = two_color(inst, skip=eid)
        if coloring is not None:
            return OneEdge(eid, coloring)
    return MoreThanOne()


def derive_ab_partition(inst: Instance, e: int) -> tuple[frozenset[int], frozenset[int]]:
    if not inst.is_binary:
        raise PartitionError("binary instance required")
    coloring, _ = two_color(inst, skip=e)
    if coloring is None:
        raise PartitionError(f"removing edge {e} does not make the graph bipartite")
    u, v, w = inst.edges[e]
    if coloring[u] != coloring[v]:
        raise PartitionError("edge endpoints on opposite sides; graph already bipartite")
    side = coloring[u]
    X = frozenset(x for x in range(inst.n) if coloring[x] == side)
    Y = frozenset(range(inst.n)) - X
    return (X, Y) if w == 1 else (Y, X)


def bipartite_partition(coloring) -> tuple[frozenset[int], frozenset[int]]:
    A = frozenset(x for x, c in enumerate(coloring) if c == 0)
    return A, frozenset(range(len(coloring))) - A


def check_ab(inst: Instance, A, B) -> None:
    if not inst.is_binary:
        raise PartitionError("binary instance required")
    A, B = set(A), set(B)
    if A & B or A | B != set(range(inst.n)):
        raise PartitionError("A and B must partition the vertices")
    for u, v, w in inst.edges:
        if u in A and v in A and w != 1:
            raise PartitionError(f"edge ({u}, {v}) inside A is not a 1-edge")
        if u in B and v in B and w != 0:
            raise PartitionError(f"edge ({u}, {v}) inside B is not a 0-edge")
    seen = set()
    for s in sorted(A):
        if s in seen:
            continue
        comp, nedges = _component(inst, A, s)
        seen |= comp
        if nedges > len(comp):
            raise PartitionError("a component of G[A] has more than one cycle")


def _component(inst, A, s):
    comp = {s}
    queue = deque([s])
    nedges = 0
    while queue:
        x = queue.popleft()
        for y, _ in inst.incident(x):
            if y in A:
                nedges += 1
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
    return comp, nedges // 2


def _cycle_in(inst, A, comp):
    """Vertices of the unique cycle of a unicyclic component, in cyclic order."""
    deg = {x: sum(1 for y, _ in inst.incident(x) if y in A) for x in comp}
    alive = set(comp)
    queue = deque(sorted(x for x in comp if deg[x] == 1))
    while queue:
        x = queue.popleft()
        alive.discard(x)
        for y, _ in inst.incident(x):
            if y in alive:
                deg[y] -= 1
                if deg[y] == 1:
                    queue.append(y)
    start = min(alive)
    order = [start]
    prev = None
    while True:
        x = order[-1]
        nxt = min(y for y, _ in inst.incident(x) if y in alive and y != prev)
        if nxt == start:
            break
        prev = x
        order.append(nxt)
        if len(order) > len(alive):  # pragma: no cover
            raise AssertionError("cycle walk failed")
    return order


def solve_near_bipartite(inst: Instance, A, B, check: bool = True) -> Orientation:
    """Construct an EFX orientation from a partition (A, B).

    G[A] may only hold 1-edges with at most one cycle per component and G[B]
    only 0-edges; then an EFX orientation always exists.
    """
    check_ab(inst, A, B)
    A, B = set(A), set(B)
    heads = [-1] * inst.m
    roots = []
    seen: set[int] = set()
    for s in sorted(A):
        if s in seen:
            continue
        comp, nedges = _component(inst, A, s)
        seen |= comp
        if nedges == len(comp):
            cyc = _cycle_in(inst, A, comp)
            for i, x in enumerate(cyc):
                y = cyc[(i + 1) % len(cyc)]
                heads[inst.edge_id(x, y)] = y
            start = cyc
        else:
            start = [min(comp)]
            roots.append(start[0])
        reached = set(start)
        queue = deque(start)
        while queue:
            x = queue.popleft()
            for y, eid in inst.incident(x):
                if y in A and y not in reached:
                    reached.add(y)
                    heads[eid] = y
                    queue.append(y)
    for r in roots:
        for y, eid in inst.incident(r):
            if y in B and inst.edges[eid][2] == 1:
                heads[eid] = r
                break
    for i, (u, v, _) in enumerate(inst.edges):
        if heads[i] != -1:
            continue
        if u in B and v in B:
            heads[i] = v
        elif u in B:
            heads[i] = u
        elif v in B:
            heads[i] = v
        else:  # pragma: no cover - every A-edge is reached
            raise AssertionError("unoriented edge inside A")
    o = Orientation(tuple(heads))
    if check and not verify_efx(inst, o).ok:  # pragma: no cover
        raise OrientationError("near-bipartite construction failed verification")
    return o


def solve_min_uncut_le1(inst: Instance) -> Orientation | None:
    """Orientation when the min-uncut number is at most one, else ``None``."""
    if not inst.is_binary:
        return None
    cls = detect_min_uncut_le1(inst)
    if isinstance(cls, Bipartite):
        A, B = bipartite_partition(cls.coloring)
    elif isinstance(cls, OneEdge):
        A, B = derive_ab_partition(inst, cls.edge)
    else:
        return None
    return solve_near_bipartite(inst, A, B)
