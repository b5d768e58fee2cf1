"""Command-line interface: generate, solve, bench, fit, validate.

Exit codes: 0 success (distances), 2 negative-cycle verdict, 1 any error.
Set ``NWSSSP_TRACE=1`` to print per-level solver traces to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import bench as B
from .baselines import bellman_ford, goldberg_radzik, is_restricted
from .generators import InstanceSpec
from .graph import Graph, INF, is_valid_potential, load_dimacs, save_dimacs
from .solver import SolverConfig, SsspResult, solve

EXIT_OK, EXIT_ERROR, EXIT_NEG_CYCLE = 0, 1, 2

_INNER = {"lazy": "lazy_dijkstra", "gor": "goldberg_radzik"}


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _k_factor(text: str):
    if text == "inf":
        return math.inf
    return int(text)


def _add_cfg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the solver's decomposition randomness")
    p.add_argument("--k-factor", type=_k_factor, default=40, metavar="K",
                   help="sampling reduction factor (int or 'inf'; default 40)")
    p.add_argument("--no-diam-bound", action="store_true",
                   help="start recursion at kappa = n instead of the "
                        "diameter bound")
    p.add_argument("--base-case", type=int, default=300, metavar="N",
                   help="recursion base-case threshold on n + kappa")
    p.add_argument("--inner", choices=sorted(_INNER), default="lazy",
                   help="inner solver for base cases and repair passes")


def _cfg_from(args) -> SolverConfig:
    return SolverConfig(k_factor=args.k_factor,
                        base_case_threshold=args.base_case,
                        use_diameter_bound=not args.no_diam_bound,
                        inner_solver=_INNER[args.inner],
                        rng_seed=args.seed)


def _run_algorithm(g: Graph, algorithm: str, source: int,
                   cfg: SolverConfig) -> SsspResult:
    if algorithm == "our":
        return solve(g, source, cfg)
    if algorithm == "gor":
        return goldberg_radzik(g, source)
    if algorithm == "bf":
        return bellman_ford(g, source)
    raise _CliError(f"unknown algorithm {algorithm!r}")


def _write_distances(dist: np.ndarray, out) -> None:
    own = isinstance(out, str)
    fh = open(out, "w") if own else out
    try:
        for v, d in enumerate(dist):
            fh.write(f"{v} {'inf' if d >= INF else int(d)}\n")
    finally:
        if own:
            fh.close()


def cmd_generate(args) -> int:
    spec = InstanceSpec.parse(args.spec)
    g = spec.build()
    save_dimacs(g, args.out)
    print(f"{spec.text} n={g.n} m={g.m} -> {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    g = load_dimacs(args.graph)
    res = _run_algorithm(g, args.algorithm, args.source, _cfg_from(args))
    if res.negative_cycle:
        print("NEGATIVE CYCLE")
        return EXIT_NEG_CYCLE
    _write_distances(res.distances, args.out if args.out else sys.stdout)
    return EXIT_OK


def cmd_run(args) -> int:
    """Hidden bench worker: time one solve, emit a JSON line."""
    g = load_dimacs(args.graph)
    g.out, g.inc  # adjacency built outside the clock
    cfg = _cfg_from(args)
    warm = Graph(3, np.array([0, 1, 2]), np.array([1, 2, 0]),
                 np.array([1, -1, 3]))
    _run_algorithm(warm, args.algorithm, 0, cfg)   # JIT cache warm-up
    t0 = time.perf_counter()
    res = _run_algorithm(g, args.algorithm, args.source, cfg)
    elapsed = time.perf_counter() - t0
    outcome = "negative_cycle" if res.negative_cycle else "distances"
    valid = ""
    if args.validate and outcome == "distances":
        ok = True
        if res.potential is not None:
            ok = is_valid_potential(g, res.potential)
        oracle = bellman_ford(g, args.source)
        ok = ok and np.array_equal(oracle.distances, res.distances)
        valid = "true" if ok else "false"
    print(json.dumps({"wall_time_s": elapsed, "outcome": outcome,
                      "valid": valid}))
    return EXIT_OK


def cmd_bench(args) -> int:
    instances = list(args.instances)
    if args.instances_file:
        with open(args.instances_file) as fh:
            instances += [ln.strip() for ln in fh
                          if ln.strip() and not ln.startswith("#")]
    if not instances:
        raise _CliError("no instances given")
    algorithms = args.algorithm.split(",")
    cfg_flags = {"seed": args.seed, "k-factor": args.k_factor,
                 "base-case": args.base_case, "inner": args.inner,
                 "no-diam-bound": args.no_diam_bound}
    records = B.run_bench(instances, algorithms, args.reps,
                          args.timeout if args.timeout > 0 else None,
                          cfg_flags, jobs=args.jobs, source=args.source,
                          super_source=args.super_source,
                          validate=args.validate)
    B.write_csv(records, args.csv if args.csv else sys.stdout)
    if args.dat:
        for path in B.write_dat(records, args.dat):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_fit(args) -> int:
    records = B.read_csv_records(args.csv)
    fit = B.fit_from_records(records, args.algorithm, args.instance_prefix)
    print(f"a={fit.a:.6g} b={fit.b:.4f} b_ci95={fit.b_ci95:.4f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    g = load_dimacs(args.graph)
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        failures += not ok
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{'pass' if ok else 'fail'}: {name}{suffix}")

    checked = False
    if args.distances:
        checked = True
        got = _read_distances(args.distances, g.n)
        oracle = bellman_ford(g, args.source)
        if oracle.negative_cycle:
            report("distances", False, "graph contains a negative cycle")
        else:
            exp = np.where(oracle.distances >= INF, INF, oracle.distances)
            bad = np.nonzero(got != exp)[0]
            report("distances", len(bad) == 0,
                   f"first mismatch at vertex {bad[0]}" if len(bad) else "")
    if args.potential:
        checked = True
        phi = _read_distances(args.potential, g.n)
        report("potential", is_valid_potential(g, phi))
    if args.restricted:
        checked = True
        ok, reason = is_restricted(g)
        report("restricted", ok, reason)
    if not checked:
        raise _CliError("nothing to validate: pass --distances, "
                        "--potential, and/or --restricted")
    return EXIT_OK if failures == 0 else EXIT_ERROR


def _read_distances(path: str, n: int) -> np.ndarray:
    vals = np.full(n, INF, np.int64)
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            v = int(parts[0])
            if not 0 <= v < n:
                raise _CliError(f"vertex {v} out of range in {path}")
            vals[v] = INF if parts[1] == "inf" else int(parts[1])
    return vals


def build_parser() -> _Parser:
    parser = _Parser(prog="nwsssp",
                     description="Negative-weight SSSP toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a benchmark instance")
    p.add_argument("spec", help="descriptor family:param[:extra]:seed")
    p.add_argument("out", help="output DIMACS .gr path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve one DIMACS graph")
    p.add_argument("graph")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--algorithm", choices=["our", "gor", "bf"],
                   default="our")
    p.add_argument("--out", help="distance file (default: stdout)")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("_run")                       # hidden bench worker
    p.add_argument("graph")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--algorithm", choices=["our", "gor", "bf"],
                   default="our")
    p.add_argument("--validate", action="store_true")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="timed sweep over instances")
    p.add_argument("instances", nargs="*",
                   help="instance descriptors or DIMACS paths")
    p.add_argument("--instances-file", help="file with one descriptor "
                                            "per line")
    p.add_argument("--algorithm", default="our",
                   help="comma-separated subset of our,gor,bf")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--timeout", type=float, default=B.DEFAULT_TIMEOUT_S,
                   help="per-run timeout in seconds (0 disables)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel (instance, algorithm) groups")
    p.add_argument("--csv", help="output CSV path (default: stdout)")
    p.add_argument("--dat", metavar="PREFIX",
                   help="also write gnuplot .dat series files")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--super-source",
                   action="store_true",
                   help="prepend an explicit zero-weight super source")
    p.add_argument("--validate", action="store_true",
                   help="check each result against the Bellman-Ford oracle")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit t = a*m^b to bench CSV rows")
    p.add_argument("--csv", required=True)
    p.add_argument("--algorithm", default="our")
    p.add_argument("--instance-prefix", default="",
                   help="restrict to instances starting with this prefix")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("validate", help="check distances/potential/"
                                        "restrictedness")
    p.add_argument("graph")
    p.add_argument("--distances", help="vertex-distance file to verify")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--potential", help="potential file to verify")
    p.add_argument("--restricted", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, RuntimeError, OverflowError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
