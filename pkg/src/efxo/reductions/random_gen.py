"""Seeded random instance generators."""

from __future__ import annotations

import random
from itertools import combinations

from ..model import Instance
from ..structure import StructureError, random_tree_core

KINDS = ("uniform", "bipartite_plus_edges", "tree_core")


class GeneratorError(ValueError):
    pass


def _values(rng: random.Random, count: int, p_one: float) -> list[int]:
    return [1 if rng.random() < p_one else 0 for _ in range(count)]


def random_uniform(rng: random.Random, n: int, m: int, p_one: float = 0.5) -> Instance:
    pairs = list(combinations(range(n), 2))
    if m > len(pairs):
        raise GeneratorError(f"{m} edges do not fit on {n} vertices")
    chosen = rng.sample(pairs, m)
    vals = _values(rng, m, p_one)
    return Instance(n, tuple((u, v, w) for (u, v), w in zip(chosen, vals)))


def random_bipartite_plus_edges(
    rng: random.Random, n: int, count: int, density: float = 0.4, p_one: float = 0.5
) -> Instance:
    """Connected-ish bipartite graph plus ``count`` edge-disjoint triangles.

    Each extra edge joins two same-side vertices and gets a fresh vertex on
    the other side adjacent to both, so exactly ``count`` deletions are needed
    to make the graph bipartite.
    """
    if n < 2:
        raise GeneratorError("need at least 2 base vertices")
    side = [i % 2 for i in range(n)]
    rng.shuffle(side)
    if len(set(side)) < 2:
        side[0] = 1 - side[0]
    pairs = set()
    for v in range(1, n):
        # a spanning structure where possible: attach to an earlier opposite vertex
        opp = [u for u in range(v) if side[u] != side[v]]
        if opp:
            u = rng.choice(opp)
            pairs.add((u, v))
    for u, v in combinations(range(n), 2):
        if side[u] != side[v] and rng.random() < density:
            pairs.add((u, v))
    same = [(u, v) for u, v in combinations(range(n), 2) if side[u] == side[v]]
    if count > len(same):
        raise GeneratorError(f"cannot add {count} odd edges on {n} base vertices")
    extra = rng.sample(same, count)
    nxt = n
    for u, v in extra:
        pairs.add((u, v))
        pairs.add((u, nxt))
        pairs.add((v, nxt))
        nxt += 1
    pairs = sorted(pairs)
    vals = _values(rng, len(pairs), p_one)
    return Instance(nxt, tuple((u, v, w) for (u, v), w in zip(pairs, vals)))


def random_tree_core_instance(
    rng: random.Random, size: int, zeros: int = 0
) -> Instance:
    """A single 1-tree core plus ``zeros`` random 0-edges between non-adjacent vertices."""
    try:
        tree = random_tree_core(rng, size)
    except StructureError as exc:
        raise GeneratorError(str(exc)) from None
    edges = {e: 1 for e in tree.edges}
    free = [p for p in combinations(range(size), 2) if p not in edges]
    if zeros > len(free):
        raise GeneratorError(f"{zeros} 0-edges do not fit")
    for p in rng.sample(free, zeros):
        edges[p] = 0
    return Instance(size, tuple((u, v, w) for (u, v), w in sorted(edges.items())))


def gen_random(kind: str, seed: int, **params) -> Instance:
    """Reproducible instance from ``seed``; the generator state is local."""
    rng = random.Random(seed)
    if kind == "uniform":
        return random_uniform(rng, params.get("n", 6), params.get("m", 8), params.get("p_one", 0.5))
    if kind == "bipartite_plus_edges":
        return random_bipartite_plus_edges(
            rng,
            params.get("n", 8),
            params.get("count", 1),
            params.get("density", 0.4),
            params.get("p_one", 0.5),
        )
    if kind == "tree_core":
        return random_tree_core_instance(rng, params.get("size", 9), params.get("zeros", 0))
    raise GeneratorError(f"unknown kind {kind!r} (choose from {', '.join(KINDS)})")
