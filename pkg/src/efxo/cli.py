"""Command-line front end.

Exit codes: 0 yes/ok, 1 no, 2 indeterminate, 10 usage error, 11 input error,
12 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    FormatError,
    Instance,
    InstanceError,
    Orientation,
    OrientationError,
    format_value,
    one_forest,
    parse_directions,
    parse_instance,
    parse_orientation,
    serialize_instance,
    serialize_orientation,
    verify_efx,
)
from .preprocess import PreconditionError, preprocess_full, reduce_zero_degrees, serialize_trace
from .reductions import mis as mis_mod
from .reductions import random_gen, sat
from .rooting import enumerate_states
from .solvers import STRATEGIES, Bipartite, Caps, OneEdge, detect_min_uncut_le1, solve
from .structure import (
    DEFAULT_MIM_CAP,
    StructureError,
    Tree,
    is_core,
    max_induced_matching_bf,
    max_leafed_split_orientation,
    pendant_path,
    subdivided_star,
)

EXIT_YES, EXIT_NO, EXIT_INDETERMINATE = 0, 1, 2
EXIT_USAGE, EXIT_INPUT, EXIT_VERIFY = 10, 11, 12
CODES = {"yes": EXIT_YES, "no": EXIT_NO, "indeterminate": EXIT_INDETERMINATE}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    strategy: str = "auto"
    tau: int = 12
    orientation_cap: int = 20
    rooting_cap: int = 10**6
    seed: int | None = None
    outputs: dict = field(default_factory=dict)
    verbose: bool = False
    jobs: int = 1
    timing: bool = True

    def __post_init__(self):
        if min(self.tau, self.orientation_cap, self.rooting_cap, self.jobs) < 1:
            raise UsageError("caps, tau and jobs must be positive")
        if self.strategy not in STRATEGIES:
            raise UsageError(f"strategy must be one of {', '.join(STRATEGIES)}")

    @property
    def caps(self) -> Caps:
        return Caps(self.tau, self.orientation_cap, self.rooting_cap)


# --- io helpers -----------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except (FormatError, InstanceError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def _instance_files(path: str) -> list[Path]:
    p = Path(path)
    if p.is_dir():
        return sorted(x for x in p.iterdir() if x.suffix == ".efx")
    return [p]


# --- dot export -----------------------------------------------------------------


def export_dot(inst: Instance, o: Orientation | None = None) -> str:
    """Graphviz text: 1-edges bold, 0-edges thin and dashed, orientation as arrows."""
    if o is not None:
        o.check(inst)
    kind, arrow = ("digraph", "->") if o is not None else ("graph", "--")
    lines = [f"{kind} efx {{", "  node [shape=circle];"]
    lines += [f"  {v};" for v in range(inst.n)]
    for i, (u, v, w) in enumerate(inst.edges):
        if w == 1:
            style = "penwidth=3"
        elif w == 0:
            style = "penwidth=1, style=dashed"
        else:
            style = f'penwidth=2, label="{format_value(w)}"'
        a, b = (u, v)
        if o is not None:
            b = o.heads[i]
            a = u if b == v else v
        lines.append(f"  {a} {arrow} {b} [{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- commands -------------------------------------------------------------------


def _solve_one(args: tuple[str, RunConfig]) -> tuple[str, str, str | None]:
    path, cfg = args
    inst = _load_instance(path)
    t0 = time.perf_counter()
    res = solve(inst, cfg.strategy, cfg.caps)
    ms = int((time.perf_counter() - t0) * 1000) if cfg.timing else 0
    line = f"RESULT {res.decision} strategy={res.strategy} time_ms={ms}"
    orient = serialize_orientation(inst, res.orientation) if res.orientation is not None else None
    return res.decision, line, orient


def cmd_solve(cfg: RunConfig, out) -> int:
    files = _instance_files(cfg.inputs[0])
    if not files:
        raise InputError(f"no .efx files in {cfg.inputs[0]}")
    batch = len(files) > 1 or Path(cfg.inputs[0]).is_dir()
    work = [(str(f), cfg) for f in files]
    if cfg.jobs > 1 and batch:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_solve_one, work))
    else:
        results = [_solve_one(w) for w in work]
    emit = cfg.outputs.get("orientation")
    if batch:
        for f, (decision, line, orient) in zip(files, results):
            out.write(f"{line} file={f.name}\n")
            if emit and orient is not None:
                Path(emit).mkdir(parents=True, exist_ok=True)
                (Path(emit) / (f.stem + ".orient")).write_text(orient)
        decisions = {d for d, _, _ in results}
        if "indeterminate" in decisions:
            return EXIT_INDETERMINATE
        return EXIT_NO if "no" in decisions else EXIT_YES
    decision, line, orient = results[0]
    out.write(line + "\n")
    if emit and orient is not None:
        _write(emit, orient, out)
    return CODES[decision]


def cmd_verify(cfg: RunConfig, out) -> int:
    inst = _load_instance(cfg.inputs[0])
    try:
        o = parse_orientation(_read(cfg.inputs[1]), inst)
    except FormatError as exc:
        raise InputError(f"{cfg.inputs[1]}: {exc}") from None
    rep = verify_efx(inst, o)
    if rep.ok:
        out.write("OK\n")
        return EXIT_YES
    out.write(f"FAIL {len(rep.witnesses)} witnesses\n")
    for envier, envied, item in rep.witnesses:
        a, b, _ = inst.edges[item]
        out.write(f"envy {envier} {envied} drop {a} {b}\n")
    return EXIT_VERIFY


def cmd_preprocess(cfg: RunConfig, out) -> int:
    inst = _load_instance(cfg.inputs[0])
    try:
        if cfg.outputs.get("zero_degrees"):
            reduced, trace = reduce_zero_degrees(inst)
        else:
            reduced, trace = preprocess_full(inst)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    _write(cfg.outputs.get("out"), serialize_instance(reduced), out)
    if cfg.outputs.get("trace"):
        _write(cfg.outputs["trace"], serialize_trace(trace), out)
    return EXIT_YES


def _core_spec(spec: str) -> Tree:
    kind, _, arg = spec.partition(":")
    try:
        val = int(arg)
        if kind == "path":
            return Tree.path(val)
        if kind == "star":
            return subdivided_star(val)
        if kind == "pendant":
            return pendant_path(val)
    except (ValueError, StructureError):
        pass
    raise UsageError(f"bad core spec {spec!r} (use path:N, star:K or pendant:M)")


def cmd_gen(cfg: RunConfig, args, out) -> int:
    mapping_text = None
    try:
        if args.kind == "sat":
            f = sat.parse_cnf(_read(args.cnf), allow_mixed=args.allow_mixed)
            if args.low_degree:
                inst, mapping = sat.reduce_3sat_low_degree(f)
            else:
                inst, mapping = sat.from_monotone_3sat(f)
            mapping_text = sat.serialize_sat_mapping(mapping)
        elif args.kind == "mis":
            mis = mis_mod.parse_mis(_read(args.graph), _read(args.colors))
            if args.cores:
                inst, mapping = mis_mod.from_mis_big_cores(mis, [_core_spec(args.cores)] * mis.k)
            else:
                inst, mapping = mis_mod.from_mis(mis, mis_mod.parse_gadget(args.gadget))
            mapping_text = mis_mod.serialize_mis_mapping(mapping, mis)
        else:
            params = {
                k: v
                for k, v in dict(
                    n=args.n, m=args.m, count=args.count, size=args.size,
                    zeros=args.zeros, p_one=args.p_one, density=args.density,
                ).items()
                if v is not None
            }
            inst = random_gen.gen_random(args.random_kind, args.seed, **params)
    except (FormatError, sat.CnfError, mis_mod.MisError, random_gen.GeneratorError) as exc:
        raise InputError(str(exc)) from None
    _write(cfg.outputs.get("out"), serialize_instance(inst), out)
    if mapping_text is not None and args.mapping:
        _write(args.mapping, mapping_text, out)
    return EXIT_YES


def cmd_extract(cfg: RunConfig, args, out) -> int:
    text = _read(args.mapping)
    try:
        toward = parse_directions(_read(args.orientation))
        if text.startswith("mapping sat"):
            mapping = sat.parse_sat_mapping(text)
            assignment = sat.map_solution_sat(mapping, toward)
            out.write(" ".join(f"x{i + 1}={int(b)}" for i, b in enumerate(assignment)) + "\n")
        elif text.startswith("mapping mis"):
            mis, mapping = mis_mod.parse_mis_mapping(text)
            chosen = mis_mod.extract_mis(mis, mapping, toward)
            out.write("MIS " + " ".join(map(str, chosen)) + "\n")
        else:
            raise InputError(f"{args.mapping}: unknown mapping kind")
    except (FormatError, ValueError, KeyError) as exc:
        raise InputError(f"extraction failed: {exc}") from None
    return EXIT_YES


def _stats_one(args: tuple[str, bool]) -> str:
    path, structure = args
    inst = _load_instance(path)
    forest = one_forest(inst)
    cls = detect_min_uncut_le1(inst)
    uncut = "bipartite" if isinstance(cls, Bipartite) else "one-edge" if isinstance(cls, OneEdge) else "more-than-one"
    info: dict = {
        "n": inst.n,
        "m": inst.m,
        "ones": len(inst.one_edges()),
        "zeros": len(inst.zero_edges()),
        "components": len(forest.components),
        "core_sizes": None,
        "states_per_tree": None,
        "uncut_class": uncut,
    }
    if inst.is_binary:
        reduced, _ = preprocess_full(inst)
        trees = one_forest(reduced).trees
        info["core_sizes"] = [len(t.vertices) for t in trees]
        info["states_per_tree"] = enumerate_states(reduced).counts()
        if structure:
            cores = []
            for comp in trees:
                tree = Tree.from_component(comp)
                entry: dict = {"size": len(tree.vertices)}
                entry["mim"] = (
                    max_induced_matching_bf(tree)[0] if len(tree.edges) <= DEFAULT_MIM_CAP else None
                )
                if is_core(tree):
                    a = len(max_leafed_split_orientation(tree))
                    entry["max_leafed_split"] = a
                    n_t = len(tree.vertices)
                    mim = entry["mim"]
                    entry["mim_bounds_ok"] = (
                        None if mim is None or mim < 2 else 2 * mim + 1 <= n_t <= 5 * mim - 1
                    )
                    entry["split_bounds_ok"] = None if a < 3 else a + 1 <= n_t <= 5 * a - 1
                else:
                    entry["max_leafed_split"] = None
                cores.append(entry)
            info["cores"] = cores
    info["file"] = Path(path).name
    return json.dumps(info, sort_keys=True)


def cmd_stats(cfg: RunConfig, args, out) -> int:
    files = _instance_files(cfg.inputs[0])
    work = [(str(f), args.structure) for f in files]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            lines = list(pool.map(_stats_one, work))
    else:
        lines = [_stats_one(w) for w in work]
    out.write("".join(line + "\n" for line in lines))
    return EXIT_YES


def cmd_export_dot(cfg: RunConfig, args, out) -> int:
    inst = _load_instance(cfg.inputs[0])
    o = None
    if args.orientation:
        try:
            o = parse_orientation(_read(args.orientation), inst)
        except FormatError as exc:
            raise InputError(f"{args.orientation}: {exc}") from None
    _write(cfg.outputs.get("out"), export_dot(inst, o), out)
    return EXIT_YES


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="efxo", description="EFX orientation solver and instance generators")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance (or every .efx file in a directory)")
    s.add_argument("input")
    s.add_argument("--tau", type=int, default=12)
    s.add_argument("--strategy", default="auto", choices=STRATEGIES)
    s.add_argument("--emit-orientation", dest="emit_orientation")
    s.add_argument("--orientation-cap", type=int, default=20)
    s.add_argument("--rooting-cap", type=int, default=10**6)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timing", action="store_true", help="report time_ms=0 for reproducible output")

    v = sub.add_parser("verify", help="check an orientation for EFX")
    v.add_argument("instance")
    v.add_argument("orientation")

    pp = sub.add_parser("preprocess", help="apply the reductions and print the reduced instance")
    pp.add_argument("input")
    pp.add_argument("--out")
    pp.add_argument("--emit-trace", dest="emit_trace")
    pp.add_argument("--zero-degrees", action="store_true", help="apply the 0-degree gadget instead")

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="kind", parser_class=_Parser)
    gs = gsub.add_parser("sat")
    gs.add_argument("--cnf", required=True)
    gs.add_argument("--low-degree", action="store_true")
    gs.add_argument("--allow-mixed", action="store_true")
    gm = gsub.add_parser("mis")
    gm.add_argument("--graph", required=True)
    gm.add_argument("--colors", required=True)
    gm.add_argument("--gadget", default="1")
    gm.add_argument("--cores", help="use gadgetized cores instead: path:N, star:K or pendant:M")
    gr = gsub.add_parser("random")
    gr.add_argument("--kind", dest="random_kind", required=True, choices=random_gen.KINDS)
    gr.add_argument("--seed", type=int, required=True)
    for name in ("n", "m", "count", "size", "zeros"):
        gr.add_argument(f"--{name}", type=int)
    gr.add_argument("--p-one", dest="p_one", type=float)
    gr.add_argument("--density", type=float)
    for sp in (gs, gm, gr):
        sp.add_argument("--out")
        if sp is not gr:
            sp.add_argument("--mapping")

    e = sub.add_parser("extract", help="read a SAT assignment or MIS solution off an orientation")
    e.add_argument("--mapping", required=True)
    e.add_argument("--orientation", required=True)

    st = sub.add_parser("stats", help="one JSON object per instance")
    st.add_argument("input")
    st.add_argument("--structure", action="store_true")
    st.add_argument("--jobs", type=int, default=1)

    d = sub.add_parser("export-dot", help="Graphviz rendering")
    d.add_argument("input")
    d.add_argument("--orientation")
    d.add_argument("--out")
    return p


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        if args.command == "gen" and args.kind is None:
            raise UsageError("gen needs one of: sat, mis, random")
        cfg = RunConfig(
            command=args.command,
            inputs=[x for x in (getattr(args, "input", None), getattr(args, "instance", None),
                                 getattr(args, "orientation", None) if args.command == "verify" else None) if x],
            strategy=getattr(args, "strategy", "auto"),
            tau=getattr(args, "tau", 12),
            orientation_cap=getattr(args, "orientation_cap", 20),
            rooting_cap=getattr(args, "rooting_cap", 10**6),
            seed=getattr(args, "seed", None),
            outputs={
                "orientation": getattr(args, "emit_orientation", None),
                "trace": getattr(args, "emit_trace", None),
                "out": getattr(args, "out", None),
                "zero_degrees": getattr(args, "zero_degrees", False),
            },
            jobs=getattr(args, "jobs", 1),
            timing=not getattr(args, "no_timing", False),
        )
        if args.command == "solve":
            return cmd_solve(cfg, out)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        if args.command == "preprocess":
            return cmd_preprocess(cfg, out)
        if args.command == "gen":
            return cmd_gen(cfg, args, out)
        if args.command == "extract":
            return cmd_extract(cfg, args, out)
        if args.command == "stats":
            return cmd_stats(cfg, args, out)
        return cmd_export_dot(cfg, args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (InputError, OrientationError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main(argv=None) -> int:
    code = run(sys.argv[1:] if argv is None else argv)
    sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
