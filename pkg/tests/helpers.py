"""Test-only oracles and instance suites, written independently of the package."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from efxo import Instance

# criterion number -> summary line, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def definitional_efx(n: int, edges, heads) -> bool:
    """EFX straight from the definition: no agent prefers another bundle minus any item."""
    bundles = [[] for _ in range(n)]
    for i, h in enumerate(heads):
        bundles[h].append(i)

    def val(agent, items):
        total = Fraction(0)
        for i in items:
            u, v, w = edges[i]
            if agent in (u, v):
                total += Fraction(w)
        return total

    for a in range(n):
        mine = val(a, bundles[a])
        for b in range(n):
            if a == b:
                continue
            for g in bundles[b]:
                if val(a, [x for x in bundles[b] if x != g]) > mine:
                    return False
    return True


def oracle_decide(inst: Instance) -> bool:
    """Exhaustive search over all orientations using ``definitional_efx``."""
    edges = list(inst.edges)
    for bits in product((0, 1), repeat=len(edges)):
        heads = [e[b] for e, b in zip(edges, bits)]
        if definitional_efx(inst.n, edges, heads):
            return True
    return False


def random_binary(rng: random.Random, n_max: int = 7, m_max: int = 12) -> Instance:
    n = rng.randint(1, n_max)
    pairs = list(combinations(range(n), 2))
    m = rng.randint(0, min(m_max, len(pairs)))
    chosen = rng.sample(pairs, m)
    p = rng.choice((0.3, 0.5, 0.7))
    return Instance(n, tuple((u, v, 1 if rng.random() < p else 0) for u, v in chosen))


def random_suite(seed: int, count: int, n_max: int = 7, m_max: int = 12) -> list[Instance]:
    rng = random.Random(seed)
    return [random_binary(rng, n_max, m_max) for _ in range(count)]


def all_binary_graphs(n_max: int = 4):
    """Every graph on 1..n_max vertices with every edge labelled absent, 0 or 1."""
    for n in range(1, n_max + 1):
        pairs = list(combinations(range(n), 2))
        for labels in product((None, 0, 1), repeat=len(pairs)):
            yield Instance(n, tuple((u, v, w) for (u, v), w in zip(pairs, labels) if w is not None))


def random_forest_instance(rng: random.Random, n_max: int = 9, zero_p: float = 0.25) -> Instance:
    """A 1-forest (random trees) plus random 0-edges between non-adjacent pairs."""
    n = rng.randint(2, n_max)
    edges = {}
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        if rng.random() < 0.8:
            parent = order[rng.randrange(i)]
            a, b = sorted((order[i], parent))
            edges[(a, b)] = 1
    for a, b in combinations(range(n), 2):
        if (a, b) not in edges and rng.random() < zero_p:
            edges[(a, b)] = 0
    return Instance(n, tuple((a, b, w) for (a, b), w in edges.items()))


def truth_table_cnf(nvars: int, clauses) -> bool:
    return any(
        all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses)
        for bits in product((False, True), repeat=nvars)
    )


def random_monotone_cnf(rng: random.Random, max_vars: int = 6, max_clauses: int = 6):
    nv = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        sign = rng.choice((1, -1))
        clauses.append(tuple(sign * rng.randint(1, nv) for _ in range(rng.randint(1, 3))))
    return nv, tuple(clauses)


def mis_oracle(n: int, edges, colors) -> bool:
    es = {frozenset(e) for e in edges}
    return any(
        all(frozenset((a, b)) not in es for a, b in combinations(pick, 2))
        for pick in product(*colors)
    )


def tree_distance_matrix(vertices, edges):
    adj = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    out = {}
    for s in vertices:
        dist = {s: 0}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    stack.append(y)
        out[s] = dist
    return out
