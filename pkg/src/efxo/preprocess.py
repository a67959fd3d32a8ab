"""Equivalence-preserving reductions with a replayable, liftable trace.

Reductions run on a mutable working graph whose vertex labels are the input
ids plus fresh ids (``>= n``) for gadget vertices.  The reduced ``Instance``
renumbers the surviving labels in ascending order; ``ReductionTrace.labels``
keeps the map back.  Lifting undoes the steps in reverse order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .model import (
    FormatError,
    Instance,
    Orientation,
    format_value,
    one_forest,
    parse_value,
    verify_efx,
)

WEdge = tuple[int, int, Fraction]


@dataclass(frozen=True)
class DropIsolated:
    vertex: int
    edges: tuple[WEdge, ...]


@dataclass(frozen=True)
class DropCyclicComponent:
    vertices: tuple[int, ...]
    cycle: tuple[int, ...]
    edges: tuple[WEdge, ...]


@dataclass(frozen=True)
class ZeroDegreeTree:
    center: int
    apex: int
    leaves: tuple[int, ...]
    internal: tuple[int, ...]
    # (parent in the binary tree, new middle vertex, child in the binary tree)
    gadget: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class LeafMerge:
    keep: int
    drop: int
    parent: int
    sibling: int
    removed: tuple[WEdge, ...]
    added: tuple[WEdge, ...]


Step = Union[DropIsolated, DropCyclicComponent, ZeroDegreeTree, LeafMerge]


@dataclass(frozen=True)
class ReductionTrace:
    n_input: int
    steps: tuple[Step, ...]
    labels: tuple[int, ...]

    @property
    def n_output(self) -> int:
        return len(self.labels)


class PreconditionError(ValueError):
    pass


class LiftError(ValueError):
    pass


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class _Work:
    def __init__(self, inst: Instance):
        self.vertices: set[int] = set(range(inst.n))
        self.w: dict[tuple[int, int], Fraction] = {}
        self.adj: dict[int, set[int]] = {v: set() for v in range(inst.n)}
        self.next_id = inst.n
        for u, v, w in inst.edges:
            self.add_edge(u, v, w)

    def add_vertex(self, x: int) -> None:
        if x in self.vertices:
            raise AssertionError(f"vertex {x} already present")
        self.vertices.add(x)
        self.adj[x] = set()
        self.next_id = max(self.next_id, x + 1)

    def fresh(self) -> int:
        x = self.next_id
        self.add_vertex(x)
        return x

    def add_edge(self, a: int, b: int, w: Fraction) -> None:
        k = _key(a, b)
        if k in self.w:
            raise AssertionError(f"edge {k} already present")
        self.w[k] = Fraction(w)
        self.adj[a].add(b)
        self.adj[b].add(a)

    def remove_edge(self, a: int, b: int) -> Fraction:
        w = self.w.pop(_key(a, b))
        self.adj[a].discard(b)
        self.adj[b].discard(a)
        return w

    def remove_vertex(self, x: int) -> None:
        for y in list(self.adj[x]):
            self.remove_edge(x, y)
        del self.adj[x]
        self.vertices.remove(x)

    def value(self, a: int, b: int) -> Fraction:
        return self.w[_key(a, b)]

    def has(self, a: int, b: int) -> bool:
        return _key(a, b) in self.w

    def nbrs(self, x: int, value=None) -> list[int]:
        if value is None:
            return sorted(self.adj[x])
        return sorted(y for y in self.adj[x] if self.w[_key(x, y)] == value)

    def incident(self, xs) -> tuple[WEdge, ...]:
        xs = set(xs)
        out = {(_key(x, y)) for x in xs for y in self.adj[x]}
        return tuple(sorted((a, b, self.w[(a, b)]) for a, b in out))

    def freeze(self) -> tuple[Instance, tuple[int, ...]]:
        labels = tuple(sorted(self.vertices))
        pos = {v: i for i, v in enumerate(labels)}
        edges = tuple((pos[a], pos[b], w) for (a, b), w in self.w.items())
        return Instance(len(labels), edges), labels


# --- applying steps -------------------------------------------------------------


def _apply(work: _Work, step: Step) -> None:
    if isinstance(step, DropIsolated):
        if work.incident([step.vertex]) != step.edges:
            raise AssertionError("trace out of sync with graph (drop-isolated)")
        work.remove_vertex(step.vertex)
    elif isinstance(step, DropCyclicComponent):
        if work.incident(step.vertices) != step.edges:
            raise AssertionError("trace out of sync with graph (drop-cyclic)")
        for x in step.vertices:
            work.remove_vertex(x)
    elif isinstance(step, ZeroDegreeTree):
        u = step.center
        for v in step.leaves:
            if work.value(u, v) != 0:
                raise AssertionError("trace out of sync with graph (zero-tree)")
            work.remove_edge(u, v)
        for x in step.internal:
            work.add_vertex(x)
        for a, mid, b in step.gadget:
            work.add_vertex(mid)
            work.add_edge(a, mid, Fraction(1))
            work.add_edge(mid, b, Fraction(0))
        work.add_edge(u, step.apex, Fraction(0))
    elif isinstance(step, LeafMerge):
        if work.incident([step.drop]) != step.removed:
            raise AssertionError("trace out of sync with graph (leaf-merge)")
        work.remove_vertex(step.drop)
        for a, b, w in step.added:
            work.add_edge(a, b, w)
    else:  # pragma: no cover
        raise TypeError(step)


def replay(inst: Instance, trace: ReductionTrace) -> Instance:
    """Re-run ``trace`` on ``inst``; returns the reduced instance."""
    if inst.n != trace.n_input:
        raise ValueError("trace belongs to an instance of different size")
    work = _Work(inst)
    for step in trace.steps:
        _apply(work, step)
    out, labels = work.freeze()
    if labels != trace.labels:
        raise AssertionError("replay produced different labels")
    return out


# --- the reductions -------------------------------------------------------------


def _require_binary(inst: Instance) -> None:
    if not inst.is_binary:
        raise PreconditionError("reductions need a binary (0/1) instance")


def _find_cycle(work: _Work, verts: set[int]) -> tuple[int, ...]:
    """Some cycle of 1-edges inside ``verts``; deterministic."""
    start = min(verts)
    parent = {start: None}
    depth = {start: 0}
    stack = [(start, iter(work.nbrs(start, 1)))]
    while stack:
        x, it = stack[-1]
        for y in it:
            if y == parent[x]:
                continue
            if y in parent:
                # back edge x -> ancestor y
                path = [x]
                while path[-1] != y:
                    path.append(parent[path[-1]])
                path.reverse()
                return tuple(path)
            parent[y] = x
            depth[y] = depth[x] + 1
            stack.append((y, iter(work.nbrs(y, 1))))
            break
        else:
            stack.pop()
    raise AssertionError("component has no cycle")


def _basic_steps(work: _Work) -> list[Step]:
    steps: list[Step] = []
    inst, labels = work.freeze()
    forest = one_forest(inst)
    for comp in forest.cyclic:
        verts = {labels[x] for x in comp.vertices}
        cycle = _find_cycle(work, verts)
        step = DropCyclicComponent(tuple(sorted(verts)), cycle, work.incident(verts))
        _apply(work, step)
        steps.append(step)
    for x in forest.isolated:
        v = labels[x]
        step = DropIsolated(v, work.incident([v]))
        _apply(work, step)
        steps.append(step)
    return steps


def _merge_steps(work: _Work) -> list[Step]:
    steps: list[Step] = []
    inst, labels = work.freeze()
    for comp in one_forest(inst).components:
        if not comp.is_tree:
            raise PreconditionError("make_cores needs every 1-component to be a tree")
        if len(comp.vertices) < 4:
            continue
        verts = [labels[x] for x in comp.vertices]
        deg = {v: len(work.nbrs(v, 1)) for v in verts}
        for p in verts:
            if deg[p] == 1:
                continue
            nb = work.nbrs(p, 1)
            leaves = [x for x in nb if deg[x] == 1]
            if len(leaves) < 2:
                continue
            others = [x for x in nb if deg[x] > 1]
            if others:
                q = others[0]
                victims = leaves[1:]
            else:
                # star: the largest leaf survives as the sibling
                q = leaves[-1]
                victims = leaves[1:-1]
            u = leaves[0]
            for v in victims:
                removed = work.incident([v])
                added = []
                planned = set()
                for y in work.nbrs(v, 0):
                    target = q if y == u else y
                    if not work.has(u, target) and target not in planned:
                        planned.add(target)
                        added.append((*_key(u, target), Fraction(0)))
                step = LeafMerge(u, v, p, q, removed, tuple(sorted(added)))
                _apply(work, step)
                steps.append(step)
            deg[p] = len(work.nbrs(p, 1))
    return steps


def _zero_tree_step(work: _Work, u: int) -> ZeroDegreeTree:
    leaves = tuple(work.nbrs(u, 0))
    base = work.next_id
    counter = [base]
    internal: list[int] = []
    links: list[tuple[int, int]] = []

    def build(part):
        if len(part) == 1:
            return part[0]
        node = counter[0]
        counter[0] += 1
        internal.append(node)
        half = (len(part) + 1) // 2
        left, right = build(part[:half]), build(part[half:])
        links.append((node, left))
        links.append((node, right))
        return node

    apex = build(list(leaves))
    gadget = []
    for a, b in sorted(links, key=lambda ab: (internal.index(ab[0]), ab[1] in internal, ab[1])):
        gadget.append((a, counter[0], b))
        counter[0] += 1
    return ZeroDegreeTree(u, apex, leaves, tuple(internal), tuple(gadget))


def _finish(inst: Instance, work: _Work, steps: list[Step]):
    out, labels = work.freeze()
    return out, ReductionTrace(inst.n, tuple(steps), labels)


def preprocess_basic(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """Drop vertices without 1-edges and 1-components containing a cycle."""
    _require_binary(inst)
    work = _Work(inst)
    steps = _basic_steps(work)
    return _finish(inst, work, steps)


def make_cores(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """Merge twin leaves until every 1-tree on at least 4 vertices is a core."""
    _require_binary(inst)
    work = _Work(inst)
    steps = _merge_steps(work)
    return _finish(inst, work, steps)


def reduce_zero_degrees(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """Replace every vertex of 0-degree above one by a binary-tree gadget."""
    _require_binary(inst)
    work = _Work(inst)
    steps: list[Step] = []
    for u in range(inst.n):
        if len(work.nbrs(u, 0)) > 1:
            step = _zero_tree_step(work, u)
            _apply(work, step)
            steps.append(step)
    return _finish(inst, work, steps)


def preprocess_full(inst: Instance) -> tuple[Instance, ReductionTrace]:
    """``preprocess_basic`` then ``make_cores``, repeated to a joint fixed point."""
    _require_binary(inst)
    work = _Work(inst)
    steps: list[Step] = []
    while True:
        new = _basic_steps(work)
        new += _merge_steps(work)
        if not new:
            break
        steps += new
    return _finish(inst, work, steps)


def is_core(adj: dict[int, list[int]]) -> bool:
    """No vertex adjacent to two leaves."""
    for x, nb in adj.items():
        if sum(1 for y in nb if len(adj[y]) == 1) >= 2:
            return False
    return True


# --- lifting ----------------------------------------------------------------------


def _undo(step: Step, toward: dict[tuple[int, int], int]) -> None:
    if isinstance(step, DropIsolated):
        for a, b, _ in step.edges:
            toward[(a, b)] = step.vertex
    elif isinstance(step, DropCyclicComponent):
        inside = set(step.vertices)
        cyc = step.cycle
        done: set[tuple[int, int]] = set()
        for i, x in enumerate(cyc):
            y = cyc[(i + 1) % len(cyc)]
            toward[_key(x, y)] = y
            done.add(_key(x, y))
        ones = {}
        for a, b, w in step.edges:
            if a in inside and b in inside and w == 1:
                ones.setdefault(a, []).append(b)
                ones.setdefault(b, []).append(a)
        seen = set(cyc)
        queue = deque(cyc)
        while queue:
            x = queue.popleft()
            for y in sorted(ones.get(x, ())):
                if y not in seen:
                    seen.add(y)
                    toward[_key(x, y)] = y
                    done.add(_key(x, y))
                    queue.append(y)
        for a, b, _ in step.edges:
            if (a, b) in done:
                continue
            if a in inside and b in inside:
                toward[(a, b)] = b
            else:
                toward[(a, b)] = a if a in inside else b
    elif isinstance(step, ZeroDegreeTree):
        u = step.center
        h = toward.pop(_key(u, step.apex))
        for a, mid, b in step.gadget:
            toward.pop(_key(a, mid))
            toward.pop(_key(mid, b))
        for v in step.leaves:
            toward[_key(u, v)] = u if h == u else v
    elif isinstance(step, LeafMerge):
        u, v, p = step.keep, step.drop, step.parent
        merged = {}
        for a, b, _ in step.removed:
            y = b if a == v else a
            if y not in (p, u):
                merged[y] = toward[_key(u, y)]
        for a, b, _ in step.added:
            toward.pop((a, b))
        p_holds_u = toward[_key(p, u)] == p
        toward[_key(p, v)] = v
        for a, b, _ in step.removed:
            y = b if a == v else a
            if y == p:
                continue
            if y == u:
                toward[_key(u, v)] = v
            elif p_holds_u:
                toward[_key(v, y)] = v
            else:
                toward[_key(v, y)] = v if merged[y] == u else y
    else:  # pragma: no cover
        raise TypeError(step)


def lift_orientation(
    trace: ReductionTrace, o: Orientation, reduced: Instance | None = None, check: bool = True
) -> Orientation:
    """Turn an orientation of the reduced instance into one of the input.

    With ``reduced`` given and ``check`` set, ``o`` must verify on it first.
    """
    if len(o.heads) and reduced is None:
        raise ValueError("reduced instance required to read a non-empty orientation")
    toward: dict[tuple[int, int], int] = {}
    if reduced is not None:
        if reduced.n != trace.n_output:
            raise LiftError("reduced instance does not match the trace")
        if check and not verify_efx(reduced, o).ok:
            raise LiftError("orientation is not EFX on the reduced instance")
        lab = trace.labels
        for (a, b, _), h in zip(reduced.edges, o.heads):
            toward[_key(lab[a], lab[b])] = lab[h]
    return Orientation(tuple(h for _, h in sorted(lift_map(trace, toward).items())))


def lift_map(trace: ReductionTrace, toward: dict[tuple[int, int], int]) -> dict[tuple[int, int], int]:
    """Lift a direction map keyed by working labels; returns a new map."""
    toward = dict(toward)
    for step in reversed(trace.steps):
        _undo(step, toward)
    for a, b in toward:
        if b >= trace.n_input:
            raise AssertionError("gadget edge survived lifting")
    return toward


# --- trace text format ----------------------------------------------------------


def _fmt_edges(edges) -> str:
    return ",".join(f"{a}:{b}:{format_value(w)}" for a, b, w in edges) or "-"


def _fmt_ints(xs) -> str:
    return ",".join(str(x) for x in xs) or "-"


def _parse_edges(s: str) -> tuple[WEdge, ...]:
    if s == "-":
        return ()
    out = []
    for tok in s.split(","):
        a, b, w = tok.split(":")
        out.append((int(a), int(b), parse_value(w)))
    return tuple(out)


def _parse_ints(s: str) -> tuple[int, ...]:
    return () if s == "-" else tuple(int(x) for x in s.split(","))


def serialize_trace(trace: ReductionTrace) -> str:
    lines = [f"trace {trace.n_input} {len(trace.steps)}"]
    for s in trace.steps:
        if isinstance(s, DropIsolated):
            lines.append(f"drop-isolated vertex={s.vertex} edges={_fmt_edges(s.edges)}")
        elif isinstance(s, DropCyclicComponent):
            lines.append(
                f"drop-cyclic vertices={_fmt_ints(s.vertices)} cycle={_fmt_ints(s.cycle)}"
                f" edges={_fmt_edges(s.edges)}"
            )
        elif isinstance(s, ZeroDegreeTree):
            gadget = ",".join(f"{a}:{m}:{b}" for a, m, b in s.gadget)
            lines.append(
                f"zero-tree center={s.center} apex={s.apex} leaves={_fmt_ints(s.leaves)}"
                f" internal={_fmt_ints(s.internal)} gadget={gadget or '-'}"
            )
        else:
            lines.append(
                f"leaf-merge keep={s.keep} drop={s.drop} parent={s.parent} sibling={s.sibling}"
                f" removed={_fmt_edges(s.removed)} added={_fmt_edges(s.added)}"
            )
    lines.append(f"labels {_fmt_ints(trace.labels)}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> ReductionTrace:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("trace "):
        raise FormatError("missing 'trace' header", 1)
    try:
        _, n_in, count = lines[0].split()
        n_input, count = int(n_in), int(count)
    except ValueError:
        raise FormatError("bad trace header", 1) from None
    steps: list[Step] = []
    labels = None
    for lineno, line in enumerate(lines[1:], start=2):
        tag, *rest = line.split()
        try:
            if tag == "labels":
                labels = _parse_ints(rest[0])
                continue
            f = dict(tok.split("=", 1) for tok in rest)
            if tag == "drop-isolated":
                steps.append(DropIsolated(int(f["vertex"]), _parse_edges(f["edges"])))
            elif tag == "drop-cyclic":
                steps.append(
                    DropCyclicComponent(
                        _parse_ints(f["vertices"]), _parse_ints(f["cycle"]), _parse_edges(f["edges"])
                    )
                )
            elif tag == "zero-tree":
                gadget = () if f["gadget"] == "-" else tuple(
                    tuple(int(x) for x in tok.split(":")) for tok in f["gadget"].split(",")
                )
                steps.append(
                    ZeroDegreeTree(
                        int(f["center"]), int(f["apex"]), _parse_ints(f["leaves"]),
                        _parse_ints(f["internal"]), gadget,  # type: ignore[arg-type]
                    )
                )
            elif tag == "leaf-merge":
                steps.append(
                    LeafMerge(
                        int(f["keep"]), int(f["drop"]), int(f["parent"]), int(f["sibling"]),
                        _parse_edges(f["removed"]), _parse_edges(f["added"]),
                    )
                )
            else:
                raise FormatError(f"unknown step {tag!r}", lineno)
        except (KeyError, ValueError, IndexError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed {tag} step", lineno) from None
    if labels is None:
        raise FormatError("missing 'labels' line")
    if len(steps) != count:
        raise FormatError(f"header announces {count} steps, found {len(steps)}")
    return ReductionTrace(n_input, tuple(steps), labels)
