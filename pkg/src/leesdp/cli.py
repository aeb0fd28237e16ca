"""leesdp command line: generate, bound, oracle, selfcheck, table, dump-orbits."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .lee import Metric
from .oracle import DEFAULT_CAP, OracleCapExceeded, brute_force_optimum
from .program import EmptyRoute, Variant, build_program
from .sdpa import SOLVER_ENV, SolverFailure, emit_sdpa, resolve_solver, run_solver
from .symmetry import orbit_table

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3

# q for which the cosine blocks have rational entries
RATIONAL_COSINE = (2, 3, 4, 6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    q: int
    n: int
    d: int
    metric: Metric = Metric.LEE
    bound: Variant = Variant.B3
    route: EmptyRoute = EmptyRoute.INTEGER
    solver_path: str | None = None
    output_path: str | None = None
    scale_T: bool = False
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.q < 2:
            raise UsageError("q must be at least 2")
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if self.d < 1:
            raise UsageError("d must be at least 1")

    @classmethod
    def from_args(cls, a) -> "RunConfig":
        try:
            metric = Metric.parse(a.metric)
            bound = Variant.parse(getattr(a, "bound", "b3"))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        route = choose_route(a.q, bound, getattr(a, "route", None), getattr(a, "force_cosine", False))
        return cls(a.q, a.n, a.d, metric, bound, route,
                   resolve_solver(getattr(a, "solver", None)), getattr(a, "output", None),
                   getattr(a, "scale", False), getattr(a, "cap", DEFAULT_CAP))


def choose_route(q: int, bound: Variant, route: str | None, force_cosine: bool = False) -> EmptyRoute:
    """Integer route unless cosine is rational for this q (or explicitly forced)."""
    if route is None:
        if force_cosine or (bound is Variant.B2 and q in RATIONAL_COSINE):
            return EmptyRoute.COSINE
        return EmptyRoute.INTEGER
    r = EmptyRoute.parse(route)
    if r is EmptyRoute.COSINE and q not in RATIONAL_COSINE and not force_cosine:
        raise UsageError(f"the cosine route has irrational entries for q={q}; "
                         "use --route integer or pass --force-cosine")
    return r


def _program(cfg: RunConfig):
    return build_program(cfg.q, cfg.n, cfg.d, cfg.metric, cfg.bound, cfg.route)


def _stem(cfg: RunConfig) -> str:
    return f"leesdp_{cfg.bound.value}_q{cfg.q}_n{cfg.n}_d{cfg.d}_{cfg.metric.value}"


def cmd_generate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    p = _program(cfg)
    stem = cfg.output_path or _stem(cfg)
    if stem.endswith(".dat-s"):
        stem = stem[: -len(".dat-s")]
    with open(stem + ".dat-s", "w") as fh:
        fh.write(emit_sdpa(p, cfg.scale_T))
    summary = p.summary(cfg.scale_T)
    with open(stem + ".json", "w") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    dims = [b["dim"] for b in summary["blocks"]]
    print(f"variables: {summary['num_vars']}", file=out)
    print(f"blocks: {len(dims)} (largest {max(dims)}, 1x1: {dims.count(1)})", file=out)
    for b in summary["blocks"]:
        if b["dim"] > 1:
            print(f"  {b['label']}: {b['dim']}", file=out)
    print(f"objective scale: {summary['objective_scale']}", file=out)
    print(f"wrote {stem}.dat-s and {stem}.json", file=out)
    return EXIT_OK


def cmd_bound(cfg: RunConfig, timeout: float | None = None, flavor: str = "sdpa", out=None) -> int:
    out = out or sys.stdout
    if not cfg.solver_path:
        print(f"no solver configured: pass --solver or set {SOLVER_ENV}", file=sys.stderr)
        return EXIT_SOLVER
    p = _program(cfg)
    t0 = time.time()
    try:
        res = run_solver(p, cfg.solver_path, cfg.scale_T, timeout=timeout, flavor=flavor)
    except SolverFailure as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        if exc.output:
            print(exc.output, file=sys.stderr)
        return EXIT_SOLVER
    print(f"{cfg.bound.value}(q={cfg.q}, n={cfg.n}, d={cfg.d}, {cfg.metric.value}) "
          f"{res.describe(6)} time={time.time() - t0:.1f}s", file=out)
    print(res.bound, file=out)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    t0 = time.time()
    try:
        value, code = brute_force_optimum(cfg.q, cfg.n, cfg.d, cfg.metric, cfg.cap)
    except OracleCapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(f"optimum: {value}", file=out)
    print("witness: " + " ".join("".join(map(str, w)) for w in code), file=out)
    print(f"time: {time.time() - t0:.2f}s", file=out)
    return EXIT_OK


def cmd_selfcheck(q: int, n: int, trials: int = 50, seed: int = 0, out=None) -> int:
    from .verify import CapExceeded, report_text, selfcheck

    out = out or sys.stdout
    try:
        reports = selfcheck(q, n, trials, seed)
    except CapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(report_text(reports), file=out)
    bad = [r for r in reports if not r.ok]
    print(f"selfcheck q={q} n={n}: {len(reports) - len(bad)}/{len(reports)} passed", file=out)
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_table(which: str, solver_path: str | None = None, max_n: int | None = None, jobs: int = 1,
              kinds=None, timeout: float | None = None, out=None) -> int:
    from .tables import report, run_table

    out = out or sys.stdout
    results = run_table(which, resolve_solver(solver_path), max_n, jobs, kinds, timeout)
    print(report(results), file=out)
    return EXIT_VERIFY if any(r.status == "mismatch" for r in results) else EXIT_OK


def cmd_dump_orbits(q: int, n: int, k: int = 3, output: str | None = None, out=None) -> int:
    out = out or sys.stdout
    text = orbit_table(q, n, k).dump()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _instance_args(p, with_bound=True):
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--metric", default="lee", choices=[m.value for m in Metric])
    if with_bound:
        p.add_argument("--bound", default="b3", choices=[v.value for v in Variant])
        p.add_argument("--route", choices=[r.value for r in EmptyRoute], default=None,
                       help="blocks for the pair part (default: integer, or cosine for b2 when rational)")
        p.add_argument("--force-cosine", action="store_true",
                       help="allow the cosine route with floating-point entries")
        p.add_argument("--scale", action="store_true",
                       help="divide the T block's second row/column and the objective by q^n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="leesdp", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write the program as .dat-s plus a JSON summary")
    _instance_args(g)
    g.add_argument("-o", "--output", help="output stem (default derived from the instance)")

    b = sub.add_parser("bound", help="solve with an external SDPA-compatible solver")
    _instance_args(b)
    b.add_argument("--solver", help=f"solver command (default ${SOLVER_ENV})")
    b.add_argument("--flavor", default="sdpa", choices=["sdpa", "csdp"])
    b.add_argument("--timeout", type=float, default=None)

    o = sub.add_parser("oracle", help="exact maximum code by exhaustive search")
    _instance_args(o, with_bound=False)
    o.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest q^n searched")

    s = sub.add_parser("selfcheck", help="brute-force checks of the reduction")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("table", help="reproduce a published table")
    t.add_argument("which", choices=["table1", "table2"])
    t.add_argument("--solver", help=f"solver command (default ${SOLVER_ENV})")
    t.add_argument("--max-n", type=int, default=None)
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--kinds", nargs="+", choices=["vars", "b2", "b3", "floor"])
    t.add_argument("--timeout", type=float, default=None)

    u = sub.add_parser("dump-orbits", help="tab-separated orbit table")
    u.add_argument("--q", type=int, required=True)
    u.add_argument("--n", type=int, required=True)
    u.add_argument("--k", type=int, default=3, choices=[1, 2, 3])
    u.add_argument("-o", "--output")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "generate":
            return cmd_generate(RunConfig.from_args(args))
        if args.cmd == "bound":
            return cmd_bound(RunConfig.from_args(args), args.timeout, args.flavor)
        if args.cmd == "oracle":
            return cmd_oracle(RunConfig.from_args(args))
        if args.cmd == "selfcheck":
            if args.q < 2 or args.n < 1:
                raise UsageError("need q >= 2 and n >= 1")
            return cmd_selfcheck(args.q, args.n, args.trials, args.seed)
        if args.cmd == "table":
            return cmd_table(args.which, args.solver, args.max_n, args.jobs, args.kinds, args.timeout)
        if args.cmd == "dump-orbits":
            if args.q < 2 or args.n < 1:
                raise UsageError("need q >= 2 and n >= 1")
            return cmd_dump_orbits(args.q, args.n, args.k, args.output)
    except UsageError as exc:
        print(f"leesdp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
