"""Multicolored independent set to EFX orientation (path and core constructions)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Union

from ..model import FormatError, Instance, Orientation
from ..structure import Tree, gadgetize_core, max_leafed_split_orientation

DEFAULT_MIS_CAP = 10**6


class MisError(ValueError):
    pass


@dataclass(frozen=True)
class MisInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = set()
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise MisError(f"bad edge ({u}, {v})")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "colors", tuple(tuple(c) for c in self.colors))
        seen = [x for c in self.colors for x in c]
        if sorted(seen) != list(range(self.n)):
            raise MisError("colors must partition the vertices")
        if any(not c for c in self.colors):
            raise MisError("empty color class")

    @property
    def k(self) -> int:
        return len(self.colors)

    def color_of(self) -> dict[int, int]:
        return {u: i for i, c in enumerate(self.colors) for u in c}

    def is_solution(self, chosen) -> bool:
        chosen = list(chosen)
        if len(chosen) != self.k:
            return False
        if any(u not in c for u, c in zip(chosen, self.colors)):
            return False
        es = set(self.edges)
        return all(
            (min(a, b), max(a, b)) not in es for i, a in enumerate(chosen) for b in chosen[i + 1 :]
        )


@dataclass(frozen=True)
class TwoOneEdges:
    pass


@dataclass(frozen=True)
class CrossedOneEdgesWithZeros:
    pass


@dataclass(frozen=True)
class FractionalEdge:
    value: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if not 0 < self.value < 1:
            raise MisError("fractional gadget value must lie strictly between 0 and 1")


GadgetChoice = Union[TwoOneEdges, CrossedOneEdgesWithZeros, FractionalEdge]


def parse_gadget(text: str) -> GadgetChoice:
    if text == "1":
        return TwoOneEdges()
    if text == "2":
        return CrossedOneEdgesWithZeros()
    if text.startswith("frac"):
        val = text.split(":", 1)[1] if ":" in text else "1/2"
        try:
            return FractionalEdge(Fraction(val))
        except (ValueError, ZeroDivisionError):
            raise MisError(f"bad fractional value {val!r}") from None
    raise MisError(f"unknown gadget {text!r} (use 1, 2 or frac:p/q)")


def mis_bruteforce(mis: MisInstance, cap: int = DEFAULT_MIS_CAP) -> tuple[int, ...] | None:
    """Lexicographically first multicolored independent set, or ``None``."""
    total = prod(len(c) for c in mis.colors)
    if total > cap:
        raise MisError(f"{total} combinations exceed cap {cap}")
    adj = {u: set() for u in range(mis.n)}
    for u, v in mis.edges:
        adj[u].add(v)
        adj[v].add(u)
    chosen: list[int] = []

    def go(i):
        if i == mis.k:
            return tuple(chosen)
        for u in mis.colors[i]:
            if not adj[u] & set(chosen):
                chosen.append(u)
                res = go(i + 1)
                if res is not None:
                    return res
                chosen.pop()
        return None

    return go(0)


@dataclass(frozen=True)
class MisMapping:
    """How to read a chosen vertex per color off an orientation.

    ``trees[i]`` holds the 1-edges of the tree encoding color ``i``;
    ``choices[i]`` maps root vertices of that tree to MIS vertices.
    """

    kind: str  # "path" or "cores"
    trees: tuple[tuple[tuple[int, int], ...], ...]
    choices: tuple[dict, ...] = field(compare=False)


def from_mis(mis: MisInstance, gadget: GadgetChoice = TwoOneEdges()) -> tuple[Instance, MisMapping]:
    """Path construction: 9 vertices per MIS vertex plus a1, a2, b1, b2.

    Layout: the color paths first (u1..u4 per vertex, colors in order), then
    the auxiliary paths x_{u,1..5} in the same vertex order, then a1, a2, b1, b2.
    """
    order = [u for c in mis.colors for u in c]
    N = len(order)
    path = {}
    for idx, u in enumerate(order):
        path[u] = tuple(range(4 * idx, 4 * idx + 4))
    aux = {u: tuple(range(4 * N + 5 * idx, 4 * N + 5 * idx + 5)) for idx, u in enumerate(order)}
    a1, a2, b1, b2 = range(9 * N, 9 * N + 4)
    edges: dict[tuple[int, int], Fraction] = {}

    def add(a, b, w):
        key = (min(a, b), max(a, b))
        if key in edges:
            raise AssertionError(f"edge {key} added twice")
        edges[key] = Fraction(w)

    trees, choices = [], []
    for color in mis.colors:
        verts = [x for u in color for x in path[u]]
        tedges = tuple((verts[i], verts[i + 1]) for i in range(len(verts) - 1))
        for a, b in tedges:
            add(a, b, 1)
        trees.append(tedges)
        choices.append({path[u][q]: u for u in color for q in (1, 3)})
    for u in order:
        xs = aux[u]
        for i in range(4):
            add(xs[i], xs[i + 1], 1)
    nbrs = {u: [] for u in order}
    for u, v in mis.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for u in order:
        u1, u2, u3, u4 = path[u]
        x1, x2, x3, x4, x5 = aux[u]
        add(u2, a1, 0)
        add(u2, a2, 0)
        add(x3, b1, 0)
        add(x3, b2, 0)
        add(u3, x2, 0)
        for v in sorted(nbrs[u]):
            add(x4, path[v][2], 0)
    if isinstance(gadget, TwoOneEdges):
        add(a1, a2, 1)
        add(b1, b2, 1)
    elif isinstance(gadget, CrossedOneEdgesWithZeros):
        add(a1, b1, 1)
        add(a2, b2, 1)
        add(a1, a2, 0)
        add(b1, b2, 0)
    elif isinstance(gadget, FractionalEdge):
        add(a1, b1, 1)
        add(b2, a2, 1)
        add(b1, b2, gadget.value)
    else:
        raise MisError(f"unknown gadget {gadget!r}")
    inst = Instance(9 * N + 4, tuple((a, b, w) for (a, b), w in edges.items()))
    return inst, MisMapping("path", tuple(trees), tuple(choices))


def gadget_vertices(mis: MisInstance) -> tuple[int, int, int, int]:
    N = mis.n
    return (9 * N, 9 * N + 1, 9 * N + 2, 9 * N + 3)


def from_mis_big_cores(mis: MisInstance, cores: list[Tree]) -> tuple[Instance, MisMapping]:
    """One gadgetized core per color; privates joined along MIS edges.

    Core ``i`` uses all arcs of its maximum leafed split orientation; arc ``j``
    stands for the ``j``-th vertex of the color, and arcs past the color size
    copy the last vertex.
    """
    if len(cores) != mis.k:
        raise MisError(f"need {mis.k} cores, got {len(cores)}")
    offset = 0
    edges: dict[tuple[int, int], int] = {}
    trees, choices = [], []
    reps: list[dict[int, list[int]]] = []  # per color: MIS vertex -> private vertices
    for i, (core, color) in enumerate(zip(cores, mis.colors)):
        core = core.relabeled()
        size = len(max_leafed_split_orientation(core))
        if size < len(color):
            raise MisError(f"core {i} supports {size} roots, color {i} has {len(color)} vertices")
        gad = gadgetize_core(core, size)
        shift = lambda x: x + offset  # noqa: E731
        tedges = tuple((shift(a), shift(b)) for a, b in core.edges)
        for a, b in tedges:
            edges[(a, b)] = 1
        for a, b in gad.zero_edges:
            edges[(shift(a), shift(b))] = 0
        rep: dict[int, list[int]] = {u: [] for u in color}
        choice = {}
        for j, (r, s) in enumerate(gad.arcs):
            u = color[min(j, len(color) - 1)]
            rep[u].append(shift(s))
            choice[shift(r)] = u
        trees.append(tedges)
        choices.append(choice)
        reps.append(rep)
        offset += len(core.vertices)
    col = mis.color_of()
    for u, v in mis.edges:
        i, j = col[u], col[v]
        if i == j:
            continue
        for s in reps[i][u]:
            for t in reps[j][v]:
                key = (min(s, t), max(s, t))
                if key in edges and edges[key] != 0:  # pragma: no cover - privates lie in different cores
                    raise AssertionError("0-edge collides with a 1-edge")
                edges[key] = 0
    inst = Instance(offset, tuple((a, b, w) for (a, b), w in edges.items()))
    return inst, MisMapping("cores", tuple(trees), tuple(choices))


def _roots(tree_edges, toward) -> list[int]:
    verts = sorted({x for e in tree_edges for x in e})
    got = {toward[(min(a, b), max(a, b))] for a, b in tree_edges}
    return [v for v in verts if v not in got]


def extract_mis(mis: MisInstance | None, mapping: MisMapping, solution) -> tuple[int, ...]:
    """Chosen vertex per color from an EFX orientation (or direction map).

    Candidates per color are the MIS vertices whose encoding vertex is a root
    of the color's tree.  With ``mis`` given, the first independent
    combination is returned; otherwise the first candidates.
    """
    if isinstance(solution, tuple) and len(solution) == 2 and isinstance(solution[1], Orientation):
        inst, o = solution
        toward = {(u, v): h for (u, v, _), h in zip(inst.edges, o.heads)}
    else:
        toward = dict(solution)
    cands = []
    for tedges, choice in zip(mapping.trees, mapping.choices):
        c = sorted({choice[r] for r in _roots(tedges, toward) if r in choice})
        if not c:
            raise MisError("orientation does not select a vertex for some color")
        cands.append(c)
    if mis is None:
        return tuple(c[0] for c in cands)
    for combo in product(*cands):
        if mis.is_solution(combo):
            return combo
    raise MisError("orientation does not encode a multicolored independent set")


# --- text formats ---------------------------------------------------------------


def parse_mis(graph_text: str, colors_text: str) -> MisInstance:
    """Graph: ``p mis <n> <m>`` then ``u v`` lines.  Colors: one class per line."""
    n = None
    edges = []
    for lineno, raw in enumerate(graph_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                n, m = int(parts[2]), int(parts[3])
                continue
            if len(parts) != 2:
                raise ValueError
            edges.append((int(parts[0]), int(parts[1])))
        except (ValueError, IndexError):
            raise FormatError(f"bad line {line!r}", lineno) from None
    if n is None:
        raise FormatError("missing 'p mis <n> <m>' header")
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    colors = []
    for lineno, raw in enumerate(colors_text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            try:
                colors.append(tuple(int(x) for x in line.split()))
            except ValueError:
                raise FormatError(f"bad color line {line!r}", lineno) from None
    try:
        return MisInstance(n, tuple(edges), tuple(colors))
    except MisError as exc:
        raise FormatError(str(exc)) from None


def serialize_mis_mapping(mapping: MisMapping, mis: MisInstance) -> str:
    lines = [f"mapping mis {mapping.kind} {len(mapping.trees)} {mis.n}"]
    for u, v in mis.edges:
        lines.append(f"edge {u} {v}")
    for i, color in enumerate(mis.colors):
        lines.append(f"color {i} " + " ".join(map(str, color)))
    for i, (tedges, choice) in enumerate(zip(mapping.trees, mapping.choices)):
        lines.append(f"tree {i} " + " ".join(f"{a}-{b}" for a, b in tedges))
        for r in sorted(choice):
            lines.append(f"choice {i} {r} {choice[r]}")
    return "\n".join(lines) + "\n"


def parse_mis_mapping(text: str) -> tuple[MisInstance, MisMapping]:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][:2] != ["mapping", "mis"]:
        raise FormatError("not an MIS mapping", 1)
    kind, k, n = lines[0][2], int(lines[0][3]), int(lines[0][4])
    edges, colors = [], []
    trees: list[list] = [[] for _ in range(k)]
    choices: list[dict] = [{} for _ in range(k)]
    for lineno, parts in enumerate(lines[1:], start=2):
        try:
            if parts[0] == "edge":
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "color":
                colors.append(tuple(int(x) for x in parts[2:]))
            elif parts[0] == "tree":
                trees[int(parts[1])] = [tuple(int(x) for x in e.split("-")) for e in parts[2:]]
            elif parts[0] == "choice":
                choices[int(parts[1])][int(parts[2])] = int(parts[3])
            else:
                raise FormatError(f"unexpected line {parts[0]!r}", lineno)
        except (ValueError, IndexError):
            raise FormatError("malformed mapping line", lineno) from None
    mis = MisInstance(n, tuple(edges), tuple(colors))
    return mis, MisMapping(kind, tuple(tuple(t) for t in trees), tuple(choices))
