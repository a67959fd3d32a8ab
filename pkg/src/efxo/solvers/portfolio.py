"""Portfolio dispatcher: cheapest applicable algorithm first, answers lifted and re-verified."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import Instance, Orientation, OrientationError, verify_efx
from ..preprocess import lift_orientation, preprocess_full
from .bipartite import solve_min_uncut_le1
from .search import (
    DEFAULT_ORIENTATION_CAP,
    DEFAULT_ROOTING_CAP,
    DEFAULT_TAU,
    CapExceeded,
    PreconditionError,
    classify_trees,
    solve_bruteforce_orientations,
    solve_bruteforce_rootings,
    solve_parameterized,
    solve_small_cores,
)

STRATEGIES = ("auto", "2sat", "param", "bforce")


@dataclass(frozen=True)
class SolveResult:
    decision: str  # "yes" | "no" | "indeterminate"
    orientation: Orientation | None
    strategy: str
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.decision == "yes"


@dataclass(frozen=True)
class Caps:
    tau: int = DEFAULT_TAU
    orientation_edges: int = DEFAULT_ORIENTATION_CAP
    rootings: int = DEFAULT_ROOTING_CAP

    def __post_init__(self):
        if min(self.tau, self.orientation_edges, self.rootings) < 1:
            raise ValueError("caps must be positive")


def _finish(inst: Instance, o: Orientation | None, strategy: str) -> SolveResult:
    if o is None:
        return SolveResult("no", None, strategy)
    if not verify_efx(inst, o).ok:  # pragma: no cover - defensive
        raise OrientationError(f"strategy {strategy} returned an orientation that fails verification")
    return SolveResult("yes", o, strategy)


def _bforce(inst: Instance, caps: Caps, why: str = "") -> SolveResult:
    try:
        return _finish(inst, solve_bruteforce_orientations(inst, caps.orientation_edges), "bforce")
    except CapExceeded as exc:
        return SolveResult("indeterminate", None, "indeterminate", why or str(exc))


def solve(inst: Instance, strategy: str = "auto", caps: Caps | None = None) -> SolveResult:
    caps = caps or Caps()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "bforce" or not inst.is_binary:
        return _bforce(inst, caps)

    if strategy == "auto":
        o = solve_min_uncut_le1(inst)
        if o is not None:
            return _finish(inst, o, "near-bipartite")

    reduced, trace = preprocess_full(inst)

    def lifted(o: Orientation | None, label: str) -> SolveResult:
        if o is None:
            return SolveResult("no", None, label)
        return _finish(inst, lift_orientation(trace, o, reduced), label)

    if strategy == "2sat":
        try:
            return lifted(solve_small_cores(reduced), "2-SAT")
        except PreconditionError as exc:
            return SolveResult("indeterminate", None, "indeterminate", str(exc))
    if strategy == "param":
        try:
            return lifted(solve_parameterized(reduced, caps.tau, caps.rootings), "param")
        except CapExceeded as exc:
            return SolveResult("indeterminate", None, "indeterminate", str(exc))

    if reduced.n == 0:
        return lifted(Orientation(()), "trivial")
    o = solve_min_uncut_le1(reduced)
    if o is not None:
        return lifted(o, "near-bipartite")
    if all(k == "small" for k in classify_trees(reduced, caps.tau)):
        return lifted(solve_small_cores(reduced), "2-SAT")
    try:
        return lifted(solve_parameterized(reduced, caps.tau, caps.rootings), "param")
    except CapExceeded:
        pass
    try:
        return lifted(solve_bruteforce_rootings(reduced, caps.rootings), "bforce-rootings")
    except CapExceeded:
        pass
    return _bforce(inst, caps, "all strategies exceeded their caps")
