"""Instances, orientations, text formats and the EFX verifier.

An instance is a simple undirected graph whose vertices are agents and whose
edges are items.  Each edge carries one exact nonnegative rational value that
both endpoints share; nobody else cares about it.  Edges are kept in canonical
order (``u < v``, sorted), and an edge's id is its index in that order.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Edge = tuple[int, int, Fraction]


class FormatError(ValueError):
    """Malformed instance or orientation text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InstanceError(ValueError):
    """Structural violation of the instance invariants."""


class OrientationError(ValueError):
    """Orientation does not match its instance."""


def parse_value(token: str) -> Fraction:
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", token):
        raise ValueError(f"bad value {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {token!r}") from None


def format_value(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise InstanceError("negative vertex count")
        canon = []
        for e in self.edges:
            u, v, w = e
            u, v, w = int(u), int(v), Fraction(w)
            if u == v:
                raise InstanceError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u}, {v}) out of range for n={self.n}")
            if w < 0:
                raise InstanceError(f"negative value on edge ({u}, {v})")
            if u > v:
                u, v = v, u
            canon.append((u, v, w))
        canon.sort(key=lambda e: (e[0], e[1]))
        index = {}
        for i, (u, v, _) in enumerate(canon):
            if (u, v) in index:
                raise InstanceError(f"duplicate edge ({u}, {v})")
            index[(u, v)] = i
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v, _) in enumerate(canon):
            adj[u].append((v, i))
            adj[v].append((u, i))
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_binary(self) -> bool:
        return all(w in (0, 1) for _, _, w in self.edges)

    def edge_id(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        try:
            return self._index[(u, v)]
        except KeyError:
            raise KeyError(f"no edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def value(self, u: int, v: int) -> Fraction:
        return self.edges[self.edge_id(u, v)][2]

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor, edge id) pairs of ``v``, by ascending neighbor."""
        return self._adj[v]

    def neighbors(self, v: int, value: int | Fraction | None = None) -> list[int]:
        if value is None:
            return [x for x, _ in self._adj[v]]
        return [x for x, i in self._adj[v] if self.edges[i][2] == value]

    def one_neighbors(self, v: int) -> list[int]:
        return self.neighbors(v, 1)

    def zero_neighbors(self, v: int) -> list[int]:
        return self.neighbors(v, 0)

    def one_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, w in self.edges if w == 1]

    def zero_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, w in self.edges if w == 0]


@dataclass(frozen=True)
class Orientation:
    """``heads[i]`` is the endpoint that receives edge ``i``."""

    heads: tuple[int, ...]

    @classmethod
    def from_map(cls, inst: Instance, toward: dict) -> "Orientation":
        """Build from ``{(u, v): head}`` keyed by either endpoint order."""
        heads = []
        for u, v, _ in inst.edges:
            h = toward.get((u, v), toward.get((v, u)))
            if h is None:
                raise OrientationError(f"edge ({u}, {v}) left unoriented")
            heads.append(h)
        return cls(tuple(heads))

    def check(self, inst: Instance) -> None:
        if len(self.heads) != inst.m:
            raise OrientationError(
                f"orientation has {len(self.heads)} edges, instance has {inst.m}"
            )
        for (u, v, _), h in zip(inst.edges, self.heads):
            if h not in (u, v):
                raise OrientationError(f"edge ({u}, {v}) directed to non-endpoint {h}")

    def bundles(self, inst: Instance) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(inst.n)]
        for i, h in enumerate(self.heads):
            out[h].append(i)
        return out

    def tail(self, inst: Instance, i: int) -> int:
        u, v, _ = inst.edges[i]
        return v if self.heads[i] == u else u


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    witnesses: tuple[tuple[int, int, int], ...]

    def __bool__(self) -> bool:
        return self.ok


# --- text formats -----------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_instance(text: str) -> Instance:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("missing header 'p efx <n> <m>'") from None
    parts = header.split()
    if len(parts) != 4 or parts[:2] != ["p", "efx"]:
        raise FormatError("expected header 'p efx <n> <m>'", lineno)
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise FormatError("non-integer n or m in header", lineno) from None
    if n < 0 or m < 0:
        raise FormatError("negative n or m in header", lineno)
    edges: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError("expected '<u> <v> <w>'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("non-integer vertex id", lineno) from None
        try:
            w = parse_value(parts[2])
        except ValueError:
            raise FormatError(f"bad value {parts[2]!r}", lineno) from None
        if u == v:
            raise FormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"vertex out of range 0..{n - 1}", lineno)
        if w < 0:
            raise FormatError("negative value", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append((u, v, w))
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    return Instance(n, tuple(edges))


def serialize_instance(inst: Instance) -> str:
    out = [f"p efx {inst.n} {inst.m}"]
    out += [f"{u} {v} {format_value(w)}" for u, v, w in inst.edges]
    return "\n".join(out) + "\n"


def parse_orientation(text: str, inst: Instance) -> Orientation:
    heads: list[int | None] = [None] * inst.m
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise FormatError("expected '<u> <v> -> <head>'", lineno)
        try:
            u, v, h = int(parts[0]), int(parts[1]), int(parts[3])
        except ValueError:
            raise FormatError("non-integer vertex id", lineno) from None
        if not inst.has_edge(u, v):
            raise FormatError(f"edge ({u}, {v}) not in instance", lineno)
        if h not in (u, v):
            raise FormatError(f"head {h} is not an endpoint", lineno)
        i = inst.edge_id(u, v)
        if heads[i] is not None:
            raise FormatError(f"edge ({u}, {v}) oriented twice", lineno)
        heads[i] = h
    missing = [inst.edges[i][:2] for i, h in enumerate(heads) if h is None]
    if missing:
        raise FormatError(f"{len(missing)} edges unoriented, first {missing[0]}")
    return Orientation(tuple(heads))  # type: ignore[arg-type]


def parse_directions(text: str) -> dict[tuple[int, int], int]:
    """Orientation lines as ``{(u, v): head}`` with ``u < v``, no instance needed."""
    out: dict[tuple[int, int], int] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise FormatError("expected '<u> <v> -> <head>'", lineno)
        try:
            u, v, h = int(parts[0]), int(parts[1]), int(parts[3])
        except ValueError:
            raise FormatError("non-integer vertex id", lineno) from None
        if h not in (u, v):
            raise FormatError(f"head {h} is not an endpoint", lineno)
        key = (min(u, v), max(u, v))
        if key in out:
            raise FormatError(f"edge {key} oriented twice", lineno)
        out[key] = h
    return out


def serialize_orientation(inst: Instance, o: Orientation) -> str:
    o.check(inst)
    return "".join(f"{u} {v} -> {h}\n" for (u, v, _), h in zip(inst.edges, o.heads))


# --- EFX verification ---------------------------------------------------------


def _witnesses_from_envy(inst: Instance, o: Orientation, bundles, envies) -> list:
    out = []
    for u, v, i in envies:
        out.extend((u, v, g) for g in bundles[v] if g != i)
    out.sort()
    return out


def _binary_envy_pairs(inst: Instance, o: Orientation, bundles):
    # u strongly envies v iff (u, v) is a 1-edge given to v, u holds no 1-item
    # and v holds something else as well.
    has_one = [False] * inst.n
    for i, h in enumerate(o.heads):
        if inst.edges[i][2] == 1:
            has_one[h] = True
    for i, (a, b, w) in enumerate(inst.edges):
        if w != 1:
            continue
        v = o.heads[i]
        u = a if v == b else b
        if not has_one[u] and len(bundles[v]) >= 2:
            yield u, v, i


def _general_envy_pairs(inst: Instance, o: Orientation, bundles):
    own = [Fraction(0)] * inst.n
    for i, h in enumerate(o.heads):
        own[h] += inst.edges[i][2]
    for i, (a, b, w) in enumerate(inst.edges):
        v = o.heads[i]
        u = a if v == b else b
        # u only values the single edge it shares with v
        if len(bundles[v]) >= 2 and w > own[u]:
            yield u, v, i


def strong_envy_by_definition(inst: Instance, o: Orientation) -> list[tuple[int, int, int]]:
    """All (envier, envied, dropped item) triples, straight from the definition.

    Quadratic in n and cubic-ish overall; only meant as an oracle.
    """
    bundles = o.bundles(inst)

    def value(agent: int, items: Iterable[int]) -> Fraction:
        total = Fraction(0)
        for g in items:
            a, b, w = inst.edges[g]
            if agent in (a, b):
                total += w
        return total

    out = []
    for i in range(inst.n):
        mine = value(i, bundles[i])
        for j in range(inst.n):
            if i == j:
                continue
            for g in bundles[j]:
                rest = [x for x in bundles[j] if x != g]
                if value(i, rest) > mine:
                    out.append((i, j, g))
    out.sort()
    return out


def verify_efx(inst: Instance, o: Orientation, method: str = "auto") -> VerifyReport:
    """Check that no agent strongly envies another.

    ``method`` is ``"auto"`` (three-condition test on binary instances, exact
    neighbor test otherwise), ``"binary"``, ``"general"`` or ``"definition"``.
    """
    o.check(inst)
    if method == "definition":
        wit = strong_envy_by_definition(inst, o)
        return VerifyReport(not wit, tuple(wit))
    if method == "auto":
        method = "binary" if inst.is_binary else "general"
    bundles = o.bundles(inst)
    if method == "binary":
        if not inst.is_binary:
            raise ValueError("binary verifier on a non-binary instance")
        pairs = _binary_envy_pairs(inst, o, bundles)
    elif method == "general":
        pairs = _general_envy_pairs(inst, o, bundles)
    else:
        raise ValueError(f"unknown method {method!r}")
    wit = _witnesses_from_envy(inst, o, bundles, pairs)
    return VerifyReport(not wit, tuple(wit))


# --- 1-forest -----------------------------------------------------------------


@dataclass(frozen=True)
class OneComponent:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    is_tree: bool


@dataclass(frozen=True)
class OneForest:
    components: tuple[OneComponent, ...]
    isolated: tuple[int, ...]

    @property
    def trees(self) -> tuple[OneComponent, ...]:
        return tuple(c for c in self.components if c.is_tree)

    @property
    def cyclic(self) -> tuple[OneComponent, ...]:
        return tuple(c for c in self.components if not c.is_tree)


def one_forest(inst: Instance) -> OneForest:
    """Connected components of the 1-edge subgraph, ordered by smallest vertex."""
    seen = [False] * inst.n
    comps = []
    isolated = []
    for s in range(inst.n):
        if seen[s]:
            continue
        if not inst.one_neighbors(s):
            seen[s] = True
            isolated.append(s)
            continue
        verts = []
        edges = set()
        seen[s] = True
        queue = deque([s])
        while queue:
            x = queue.popleft()
            verts.append(x)
            for y in inst.one_neighbors(x):
                edges.add((min(x, y), max(x, y)))
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        verts.sort()
        comps.append(
            OneComponent(tuple(verts), tuple(sorted(edges)), len(edges) == len(verts) - 1)
        )
    return OneForest(tuple(comps), tuple(isolated))


def relabel(inst: Instance, keep: Sequence[int]) -> Instance:
    """Induced sub-instance on ``keep`` with vertices renumbered by position."""
    pos = {v: i for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v], w) for u, v, w in inst.edges if u in pos and v in pos]
    return Instance(len(keep), tuple(edges))
