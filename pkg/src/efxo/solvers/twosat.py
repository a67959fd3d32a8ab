"""2-SAT via strongly connected components of the implication graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

Literal = tuple[int, bool]  # (variable, polarity)
Clause = tuple[Literal, Literal]


@dataclass(frozen=True)
class TwoSatFormula:
    nvars: int
    clauses: tuple[Clause, ...]
    # variable -> (meaning when true, meaning when false); free-form payload
    meaning: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for clause in self.clauses:
            for var, _ in clause:
                if not 0 <= var < self.nvars:
                    raise ValueError(f"clause {clause} uses undeclared variable {var}")

    def satisfied_by(self, assignment) -> bool:
        return all(
            any(assignment[v] == pol for v, pol in clause) for clause in self.clauses
        )


def _node(lit: Literal) -> int:
    var, pol = lit
    return 2 * var + (0 if pol else 1)


def _scc(nnodes: int, graph: list[list[int]]) -> list[int]:
    """Iterative Tarjan; component ids come out in reverse topological order."""
    index = [-1] * nnodes
    low = [0] * nnodes
    on_stack = [False] * nnodes
    comp = [-1] * nnodes
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(nnodes):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            x, i = work[-1]
            if i < len(graph[x]):
                work[-1] = (x, i + 1)
                y = graph[x][i]
                if index[y] == -1:
                    index[y] = low[y] = counter
                    counter += 1
                    stack.append(y)
                    on_stack[y] = True
                    work.append((y, 0))
                elif on_stack[y]:
                    low[x] = min(low[x], index[y])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[x])
            if low[x] == index[x]:
                while True:
                    y = stack.pop()
                    on_stack[y] = False
                    comp[y] = ncomp
                    if y == x:
                        break
                ncomp += 1
    return comp


def twosat_solve(f: TwoSatFormula) -> list[bool] | None:
    """A satisfying assignment, or ``None`` when unsatisfiable."""
    nn = 2 * f.nvars
    graph: list[list[int]] = [[] for _ in range(nn)]
    for a, b in f.clauses:
        na, nb = _node(a), _node(b)
        graph[na ^ 1].append(nb)
        graph[nb ^ 1].append(na)
    comp = _scc(nn, graph)
    out = []
    for v in range(f.nvars):
        if comp[2 * v] == comp[2 * v + 1]:
            return None
        # the literal whose component is later in topological order is true
        out.append(comp[2 * v] < comp[2 * v + 1])
    return out


def truth_table_solve(f: TwoSatFormula) -> list[bool] | None:
    """Reference oracle: first satisfying assignment in lexicographic order."""
    for bits in product((False, True), repeat=f.nvars):
        if f.satisfied_by(bits):
            return list(bits)
    return None
