"""3-SAT to EFX orientation: variable P2s, clause P5s, literal 0-edges."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..model import FormatError, Instance, Orientation
from ..preprocess import (
    ReductionTrace,
    lift_map,
    parse_trace,
    reduce_zero_degrees,
    serialize_trace,
)


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class MonotoneCnf:
    """CNF over variables 1..nvars; literals are signed ints as in DIMACS.

    Each clause has 1 to 3 literals and, unless ``allow_mixed``, a single
    polarity.
    """

    nvars: int
    clauses: tuple[tuple[int, ...], ...]
    allow_mixed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.nvars < 0:
            raise CnfError("negative variable count")
        for j, clause in enumerate(self.clauses):
            if not 1 <= len(clause) <= 3:
                raise CnfError(f"clause {j} has {len(clause)} literals (need 1..3)")
            for lit in clause:
                if lit == 0 or abs(lit) > self.nvars:
                    raise CnfError(f"clause {j}: literal {lit} out of range")
            if not self.allow_mixed and len({lit > 0 for lit in clause}) > 1:
                raise CnfError(f"clause {j} mixes polarities")

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(
            any(assignment[abs(l) - 1] == (l > 0) for l in clause) for clause in self.clauses
        )


def truth_table(f: MonotoneCnf) -> list[bool] | None:
    for bits in product((False, True), repeat=f.nvars):
        if f.satisfied_by(bits):
            return list(bits)
    return None


def parse_cnf(text: str, allow_mixed: bool = False) -> MonotoneCnf:
    """DIMACS-like: ``p cnf <vars> <clauses>``, clauses end with 0, ``c`` comments."""
    header = None
    tokens: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError("non-integer header field", lineno) from None
            continue
        if header is None:
            raise FormatError("clause before header", lineno)
        for tok in line.split():
            try:
                tokens.append((int(tok), lineno))
            except ValueError:
                raise FormatError(f"bad literal {tok!r}", lineno) from None
    if header is None:
        raise FormatError("missing header")
    clauses, cur = [], []
    for lit, lineno in tokens:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if cur:
        raise FormatError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise FormatError(f"header announces {header[1]} clauses, found {len(clauses)}")
    try:
        return MonotoneCnf(header[0], tuple(clauses), allow_mixed)
    except CnfError as exc:
        raise FormatError(str(exc)) from None


def serialize_cnf(f: MonotoneCnf) -> str:
    lines = [f"p cnf {f.nvars} {len(f.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SatMapping:
    nvars: int
    # per variable (x_i, not-x_i) vertex ids
    variables: tuple[tuple[int, int], ...]
    # per clause (c1, c2, g3, g2, c3) vertex ids
    clauses: tuple[tuple[int, int, int, int, int], ...]
    # per clause the three literals after padding
    literals: tuple[tuple[int, int, int], ...]
    trace: ReductionTrace | None = None

    def formula(self) -> MonotoneCnf:
        return MonotoneCnf(self.nvars, self.literals, allow_mixed=True)

    def literal_vertex(self, lit: int) -> int:
        x, nx = self.variables[abs(lit) - 1]
        return x if lit > 0 else nx


def alpha(gadget: tuple[int, int, int, int, int], q: int) -> int:
    """Clause-side endpoint of the 0-edge for literal position ``q`` (0-based)."""
    c1, c2, g3, g2, c3 = gadget
    return (c2, c1, g2)[q]


def _pad(clause) -> tuple[int, int, int]:
    c = list(clause)
    while len(c) < 3:
        c.append(c[-1])
    return tuple(c)


def from_monotone_3sat(f: MonotoneCnf) -> tuple[Instance, SatMapping]:
    """Variables 0..2n-1 as (x_i, not-x_i) pairs, then five vertices per clause."""
    n = f.nvars
    variables = tuple((2 * i, 2 * i + 1) for i in range(n))
    edges = {}
    for x, nx in variables:
        edges[(x, nx)] = 1
    gadgets, lits = [], []
    for j, clause in enumerate(f.clauses):
        base = 2 * n + 5 * j
        g = tuple(range(base, base + 5))
        c1, c2, g3, g2, c3 = g
        for a, b in ((c1, c2), (c2, g3), (g3, g2), (g2, c3)):
            edges[(a, b)] = 1
        edges[(c2, g2)] = 0
        edges[(g3, c3)] = 0
        padded = _pad(clause)
        for q, lit in enumerate(padded):
            x, nx = variables[abs(lit) - 1]
            target = x if lit > 0 else nx
            a = alpha(g, q)
            edges[(min(a, target), max(a, target))] = 0
        gadgets.append(g)
        lits.append(padded)
    inst = Instance(2 * n + 5 * len(f.clauses), tuple((a, b, w) for (a, b), w in edges.items()))
    return inst, SatMapping(n, variables, tuple(gadgets), tuple(lits))


def reduce_3sat_low_degree(f: MonotoneCnf) -> tuple[Instance, SatMapping]:
    """``from_monotone_3sat`` followed by the zero-degree gadget; G0 becomes a matching.

    The returned mapping carries the trace so orientations can be pulled back.
    """
    base, mapping = from_monotone_3sat(f)
    inst, trace = reduce_zero_degrees(base)
    return inst, SatMapping(mapping.nvars, mapping.variables, mapping.clauses, mapping.literals, trace)


def _toward(inst_or_edges, o) -> dict:
    if isinstance(o, dict):
        return o
    return {(u, v): h for (u, v, _), h in zip(inst_or_edges.edges, o.heads)}


def map_solution_sat(mapping: SatMapping, solution, inst: Instance | None = None) -> list[bool]:
    """Assignment read off the variable gadgets.

    ``solution`` is a rooting (tree id -> root, or a set of roots), an ``Orientation``
    of ``inst`` (the instance built from ``mapping``), or a direction map
    ``{(u, v): head}`` over that instance's edges.  With a trace in the
    mapping the orientation refers to the low-degree instance.  Raises when the result
    does not satisfy the formula.
    """
    if isinstance(solution, dict) and solution and all(isinstance(k, int) for k in solution):
        solution = set(solution.values())  # a rooting: tree id -> root
    if isinstance(solution, (set, frozenset)):
        roots = solution
        assignment = [x in roots for x, _ in mapping.variables]
    else:
        if isinstance(solution, Orientation):
            if inst is None:
                raise ValueError("instance needed to read an orientation")
            toward = _toward(inst, solution)
        else:
            toward = dict(solution)
        if mapping.trace is not None:
            # the solution belongs to the low-degree instance
            lab = mapping.trace.labels
            toward = lift_map(
                mapping.trace,
                {(min(lab[a], lab[b]), max(lab[a], lab[b])): lab[h] for (a, b), h in toward.items()},
            )
        # x_i is true when the variable edge points at not-x_i (x_i is the root)
        assignment = [toward[(x, nx)] == nx for x, nx in mapping.variables]
    if not mapping.formula().satisfied_by(assignment):
        raise ValueError("solution does not encode a satisfying assignment")
    return assignment


def assignment_to_rooting(mapping: SatMapping, assignment) -> dict[int, int]:
    """Tree id -> root; variable gadgets are trees 0..n-1, clause j is tree n+j."""
    f = mapping.formula()
    if not f.satisfied_by(assignment):
        raise ValueError("assignment does not satisfy the formula")
    rooting = {}
    for i, (x, nx) in enumerate(mapping.variables):
        rooting[i] = x if assignment[i] else nx
    for j, (g, lits) in enumerate(zip(mapping.clauses, mapping.literals)):
        q = next(q for q, l in enumerate(lits) if assignment[abs(l) - 1] == (l > 0))
        c1, c2, _, _, c3 = g
        rooting[mapping.nvars + j] = (c1, c2, c3)[q]
    return rooting


def serialize_sat_mapping(m: SatMapping) -> str:
    lines = [f"mapping sat {m.nvars} {len(m.clauses)}"]
    for i, (x, nx) in enumerate(m.variables):
        lines.append(f"var {i + 1} {x} {nx}")
    for j, (g, lits) in enumerate(zip(m.clauses, m.literals)):
        lines.append(f"clause {j} " + " ".join(map(str, g)) + " lits " + " ".join(map(str, lits)))
    out = "\n".join(lines) + "\n"
    if m.trace is not None:
        out += serialize_trace(m.trace)
    return out


def parse_sat_mapping(text: str) -> SatMapping:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("mapping sat "):
        raise FormatError("not a SAT mapping", 1)
    _, _, nv, nc = lines[0].split()
    variables, clauses, lits = [], [], []
    rest = 1
    for rest in range(1, len(lines)):
        parts = lines[rest].split()
        if not parts:
            continue
        if parts[0] == "var":
            variables.append((int(parts[2]), int(parts[3])))
        elif parts[0] == "clause":
            clauses.append(tuple(int(x) for x in parts[2:7]))
            lits.append(tuple(int(x) for x in parts[8:11]))
        elif parts[0] == "trace":
            break
        else:
            raise FormatError(f"unexpected line {parts[0]!r}", rest + 1)
    else:
        rest = len(lines)
    trace = parse_trace("\n".join(lines[rest:])) if rest < len(lines) else None
    if len(variables) != int(nv) or len(clauses) != int(nc):
        raise FormatError("mapping counts do not match header")
    return SatMapping(int(nv), tuple(variables), tuple(clauses), tuple(lits), trace)
