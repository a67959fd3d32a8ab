"""Induced matchings, the product with an edge, split orientations, core gadgets."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .model import Instance, OneComponent

DEFAULT_MIM_CAP = 24
DEFAULT_ARC_CAP = 26

Arc = tuple[int, int]


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Small simple graph over hashable vertex labels."""

    vertices: tuple
    edges: tuple  # sorted pairs (a, b) with a < b

    @classmethod
    def from_edges(cls, edges, vertices=()) -> "Graph":
        es = set()
        vs = set(vertices)
        for a, b in edges:
            if a == b:
                raise StructureError(f"self-loop at {a}")
            es.add((a, b) if a < b else (b, a))
            vs.update((a, b))
        return cls(tuple(sorted(vs)), tuple(sorted(es)))

    def adj(self) -> dict:
        out = {v: [] for v in self.vertices}
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return {v: sorted(nb) for v, nb in out.items()}

    def has_edge(self, a, b) -> bool:
        return ((a, b) if a < b else (b, a)) in set(self.edges)


@dataclass(frozen=True)
class Tree(Graph):
    def __post_init__(self):
        if not self.vertices:
            raise StructureError("empty tree")
        if len(self.edges) != len(self.vertices) - 1 or not _connected(self):
            raise StructureError("not a tree")

    @classmethod
    def from_edges(cls, edges, vertices=()) -> "Tree":
        g = Graph.from_edges(edges, vertices)
        return cls(g.vertices, g.edges)

    @classmethod
    def path(cls, n: int) -> "Tree":
        return cls.from_edges([(i, i + 1) for i in range(n - 1)], range(n))

    @classmethod
    def from_component(cls, comp: OneComponent) -> "Tree":
        return cls.from_edges(comp.edges, comp.vertices)

    def leaves(self) -> list:
        if len(self.vertices) == 1:
            return []
        return [v for v, nb in self.adj().items() if len(nb) == 1]

    def distances(self, s) -> dict:
        adj = self.adj()
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def relabeled(self) -> "Tree":
        pos = {v: i for i, v in enumerate(self.vertices)}
        return Tree.from_edges([(pos[a], pos[b]) for a, b in self.edges], range(len(pos)))


def _connected(g: Graph) -> bool:
    if not g.vertices:
        return True
    adj = g.adj()
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(g.vertices)


def is_core(tree: Tree) -> bool:
    """No vertex is adjacent to two leaves."""
    adj = tree.adj()
    leaves = set(tree.leaves())
    return all(sum(1 for y in nb if y in leaves) < 2 for nb in adj.values())


# --- induced matchings ------------------------------------------------------


def is_induced_matching(g: Graph, matching) -> bool:
    ends = [v for e in matching for v in e]
    if len(ends) != len(set(ends)):
        return False
    owner = {}
    for i, (a, b) in enumerate(matching):
        owner[a] = owner[b] = i
    for a, b in g.edges:
        if a in owner and b in owner and owner[a] != owner[b]:
            return False
    return all(g.has_edge(a, b) for a, b in matching)


def max_induced_matching_bf(g: Graph, cap: int = DEFAULT_MIM_CAP) -> tuple[int, tuple]:
    """Exhaustive maximum induced matching, lexicographically smallest edge set."""
    if len(g.edges) > cap:
        raise StructureError(f"{len(g.edges)} edges exceed brute-force cap {cap}")
    edges = list(g.edges)
    adj = g.adj()
    # edges i, j conflict when they share or are joined by an edge
    near = []
    for a, b in edges:
        zone = {a, b, *adj[a], *adj[b]}
        near.append(zone)
    conflict = [
        {j for j, (c, d) in enumerate(edges) if j != i and (c in near[i] or d in near[i])}
        for i in range(len(edges))
    ]
    best: list[int] = []
    chosen: list[int] = []

    def go(i: int, banned: frozenset):
        nonlocal best
        free = sum(1 for j in range(i, len(edges)) if j not in banned)
        if len(chosen) + free <= len(best):
            return
        if i == len(edges):
            best = list(chosen)
            return
        if i not in banned:
            chosen.append(i)
            go(i + 1, banned | conflict[i])
            chosen.pop()
        go(i + 1, banned)

    go(0, frozenset())
    return len(best), tuple(edges[i] for i in best)


NEG = None  # minus infinity


def _add(*xs):
    if any(x is NEG for x in xs):
        return NEG
    return sum(xs)


def _gt(a, b) -> bool:
    if a is NEG:
        return False
    return b is NEG or a > b


@dataclass(frozen=True)
class LeafedMatchingDP:
    root: object
    # vertex -> (no, bot, top); bot = matched to parent, top = matched to a child
    table: dict
    top_child: dict  # vertex -> child used by the top state

    @property
    def value(self):
        no, _, top = self.table[self.root]
        return top if _gt(top, no) else no


def _rooted(tree: Tree, root):
    adj = tree.adj()
    parent = {root: None}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y != parent[x]:
                parent[y] = x
                order.append(y)
    children = {x: [y for y in adj[x] if y != parent[x]] for x in order}
    return order, children


def leafed_mim_dp(tree: Tree, required=()) -> tuple[int, tuple] | None:
    """Maximum induced matching covering every leaf in ``required``.

    Required leaves must be pairwise at distance at least 4.  Returns ``None``
    when no such matching exists.
    """
    required = set(required)
    leaves = set(tree.leaves())
    if not required <= leaves:
        raise StructureError("required set contains a non-leaf")
    for a, b in combinations(sorted(required), 2):
        if tree.distances(a)[b] < 4:
            raise StructureError(f"required leaves {a} and {b} are closer than 4")
    if len(tree.vertices) == 1:
        return (0, ())
    if len(tree.vertices) == 2:
        return (1, (tree.edges[0],))
    dp = _run_dp(tree, required)
    if dp.value is NEG:
        return None
    matching = _reconstruct(tree, dp)
    return dp.value, matching


def _run_dp(tree: Tree, required) -> LeafedMatchingDP:
    root = min(v for v, nb in tree.adj().items() if len(nb) > 1)
    order, children = _rooted(tree, root)
    table = {}
    top_child = {}
    for x in reversed(order):
        cs = children[x]
        if not cs:
            table[x] = (NEG if x in required else 0, 1, NEG)
            continue
        no = _add(*[(table[c][0] if not _gt(table[c][2], table[c][0]) else table[c][2]) for c in cs])
        nos = [table[c][0] for c in cs]
        bot = _add(1, *nos)
        top, arg = NEG, None
        for j, c in enumerate(cs):
            cand = _add(table[c][1], *(nos[:j] + nos[j + 1 :]))
            if _gt(cand, top):
                top, arg = cand, c
        table[x] = (no, bot, top)
        top_child[x] = arg
    return LeafedMatchingDP(root, table, top_child)


def _reconstruct(tree: Tree, dp: LeafedMatchingDP) -> tuple:
    _, children = _rooted(tree, dp.root)
    out = []
    no, _, top = dp.table[dp.root]
    stack = [(dp.root, "top" if _gt(top, no) else "no")]
    while stack:
        x, state = stack.pop()
        if state == "no":
            for c in children[x]:
                cno, _, ctop = dp.table[c]
                stack.append((c, "top" if _gt(ctop, cno) else "no"))
        elif state == "bot":
            for c in children[x]:
                stack.append((c, "no"))
        else:
            j = dp.top_child[x]
            out.append((x, j) if x < j else (j, x))
            for c in children[x]:
                stack.append((c, "bot" if c == j else "no"))
    # a "bot" child contributes its parent edge, already recorded above
    return tuple(sorted(out))


# --- product with an edge and split orientations ----------------------------


def product_with_edge(g: Graph) -> Graph:
    edges = []
    for u, v in g.edges:
        edges.append(((u, 0), (v, 1)))
        edges.append(((u, 1), (v, 0)))
    verts = [(v, b) for v in g.vertices for b in (0, 1)]
    return Graph.from_edges(edges, verts)


@dataclass(frozen=True)
class SplitOrientation:
    arcs: tuple[Arc, ...]  # sorted (tail, head) pairs
    leafed: bool = False

    def __len__(self) -> int:
        return len(self.arcs)

    @property
    def roots(self) -> tuple:
        return tuple(a for a, _ in self.arcs)

    @property
    def privates(self) -> tuple:
        return tuple(b for _, b in self.arcs)


def is_split(g: Graph, arcs) -> bool:
    es = set(g.edges)

    def edge(a, b):
        return ((a, b) if a < b else (b, a)) in es

    arcs = list(arcs)
    if len(set(arcs)) != len(arcs) or not all(edge(a, b) for a, b in arcs):
        return False
    for (u, v), (x, y) in combinations(arcs, 2):
        if u == x or v == y or edge(u, y) or edge(x, v):
            return False
    return True


def is_leafed(tree: Tree, arcs) -> bool:
    adj = tree.adj()
    arcs = set(arcs)
    return all((u, adj[u][0]) in arcs for u in tree.leaves())


def matching_to_split_orientation(g: Graph, matching) -> SplitOrientation:
    if not is_induced_matching(product_with_edge(g), matching):
        raise StructureError("not an induced matching of the product graph")
    arcs = []
    for p, q in matching:
        if p[1] == 1:
            p, q = q, p
        arcs.append((p[0], q[0]))
    arcs.sort()
    assert is_split(g, arcs)
    return SplitOrientation(tuple(arcs), isinstance(g, Tree) and is_leafed(g, arcs))


def split_orientation_to_matching(g: Graph, so: SplitOrientation | list) -> tuple:
    arcs = so.arcs if isinstance(so, SplitOrientation) else tuple(so)
    if not is_split(g, arcs):
        raise StructureError("arcs do not form a split orientation")
    return tuple(sorted(((u, 0), (v, 1)) for u, v in arcs))


def max_split_orientation_bf(
    g: Graph, leafed: bool = False, cap: int = DEFAULT_ARC_CAP
) -> SplitOrientation | None:
    """Direct search over arc sets (independent of the product graph)."""
    arcs = sorted([(a, b) for a, b in g.edges] + [(b, a) for a, b in g.edges])
    if len(arcs) > cap:
        raise StructureError(f"{len(arcs)} arcs exceed brute-force cap {cap}")
    forced = []
    if leafed:
        if not isinstance(g, Tree):
            raise StructureError("leafed search needs a tree")
        adj = g.adj()
        forced = sorted((u, adj[u][0]) for u in g.leaves())
        if not is_split(g, forced):
            return None
    es = set(g.edges)

    def edge(a, b):
        return ((a, b) if a < b else (b, a)) in es

    def fits(arc, chosen):
        u, v = arc
        return all(
            not (u == x or v == y or edge(u, y) or edge(x, v)) for x, y in chosen
        )

    rest = [a for a in arcs if a not in set(forced)]
    best = list(forced)
    chosen = list(forced)

    def go(i):
        nonlocal best
        if len(chosen) + len(rest) - i <= len(best):
            return
        if i == len(rest):
            best = list(chosen)
            return
        if fits(rest[i], chosen):
            chosen.append(rest[i])
            go(i + 1)
            chosen.pop()
        go(i + 1)

    go(0)
    out = tuple(sorted(best))
    return SplitOrientation(out, isinstance(g, Tree) and is_leafed(g, out))


def max_leafed_split_orientation(core: Tree) -> SplitOrientation:
    """Maximum leafed split orientation of a core, via two leafed matchings.

    The product of a tree with an edge is two copies of the tree; copy 0 maps
    ``v`` to ``(v, parity)`` so its matched edges become arcs from the even
    endpoint, copy 1 gives arcs from the odd endpoint.  Leaves whose outgoing
    arc must exist are split by parity accordingly.
    """
    if not is_core(core):
        raise StructureError("input is not a core")
    if len(core.vertices) == 1:
        return SplitOrientation((), True)
    r = core.vertices[0]
    dist = core.distances(r)
    even = [x for x in core.leaves() if dist[x] % 2 == 0]
    odd = [x for x in core.leaves() if dist[x] % 2 == 1]
    arcs = []
    for required, parity in ((even, 0), (odd, 1)):
        res = leafed_mim_dp(core, required)
        if res is None:  # pragma: no cover - cores always admit one
            raise StructureError("no leafed matching")
        for a, b in res[1]:
            tail, head = (a, b) if dist[a] % 2 == parity else (b, a)
            arcs.append((tail, head))
    arcs.sort()
    assert is_split(core, arcs) and is_leafed(core, arcs)
    return SplitOrientation(tuple(arcs), True)


def canonical_arc_order(core: Tree, arcs) -> list[Arc]:
    leaves = set(core.leaves())
    first = sorted((a for a in arcs if a[0] in leaves), key=lambda a: a[0])
    rest = sorted(a for a in arcs if a[0] not in leaves)
    return first + rest


@dataclass(frozen=True)
class CoreGadget:
    core: Tree
    arcs: tuple[Arc, ...]
    zero_edges: tuple[tuple[int, int], ...]

    @property
    def roots(self) -> tuple:
        return tuple(a for a, _ in self.arcs)

    @property
    def privates(self) -> tuple:
        return tuple(b for _, b in self.arcs)

    def instance(self) -> tuple[Instance, dict]:
        """The augmented core as a standalone instance (plus label map)."""
        pos = {v: i for i, v in enumerate(self.core.vertices)}
        edges = [(pos[a], pos[b], 1) for a, b in self.core.edges]
        edges += [(pos[a], pos[b], 0) for a, b in self.zero_edges]
        return Instance(len(pos), tuple(edges)), pos


def gadgetize_core(core: Tree, k: int) -> CoreGadget:
    """Fix exactly ``k`` feasible roots by blocking every other vertex."""
    so = max_leafed_split_orientation(core)
    nleaf = len(core.leaves())
    if k > len(so):
        raise StructureError(f"core supports only {len(so)} roots, {k} requested")
    if k < nleaf:
        raise StructureError(f"k={k} is below the number of leaves ({nleaf})")
    arcs = tuple(canonical_arc_order(core, so.arcs)[:k])
    roots = {a for a, _ in arcs}
    adj = core.adj()
    zero = []
    for v in core.vertices:
        if v in roots:
            continue
        if len(adj[v]) < 2:
            raise AssertionError("non-root leaf")
        a, b = adj[v][:2]
        zero.append((a, b))
    return CoreGadget(core, arcs, tuple(sorted(zero)))


# --- generators -------------------------------------------------------------


def random_tree_core(rng: random.Random, size: int) -> Tree:
    """Random core on ``size`` vertices: random tree, then twin leaves re-hung."""
    if size == 1 or size == 3 or size < 1:
        raise StructureError(f"no tree core has {size} vertices")
    parent = {v: rng.randrange(v) for v in range(1, size)}
    adj = {v: set() for v in range(size)}
    for v, p in parent.items():
        adj[v].add(p)
        adj[p].add(v)
    while True:
        leaves = {v for v in adj if len(adj[v]) == 1}
        bad = sorted(p for p in adj if sum(1 for y in adj[p] if y in leaves) >= 2)
        if not bad:
            break
        p = bad[0]
        twins = sorted(y for y in adj[p] if y in leaves)
        moved, host = twins[-1], rng.choice(twins[:-1])
        adj[p].discard(moved)
        adj[moved] = {host}
        adj[host].add(moved)
    perm = list(range(size))
    rng.shuffle(perm)
    edges = {(min(perm[a], perm[b]), max(perm[a], perm[b])) for a in adj for b in adj[a]}
    return Tree.from_edges(sorted(edges), range(size))


def subdivided_star(k: int) -> Tree:
    """Center 0, spokes 0-(2i-1)-(2i)."""
    edges = []
    for i in range(1, k + 1):
        edges += [(0, 2 * i - 1), (2 * i - 1, 2 * i)]
    return Tree.from_edges(edges, range(2 * k + 1))


def pendant_path(m: int) -> Tree:
    """Path on 3m-1 vertices with a pendant leaf on the 1st and 2nd of every triple."""
    if m < 1:
        raise StructureError("m must be positive")
    n = 3 * m - 1
    edges = [(i, i + 1) for i in range(n - 1)]
    nxt = n
    for i in range(m):
        for j in (3 * i, 3 * i + 1):
            edges.append((j, nxt))
            nxt += 1
    return Tree.from_edges(edges, range(nxt))
