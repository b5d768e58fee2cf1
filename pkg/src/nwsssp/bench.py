"""Benchmark harness: timed runs, CSV records, and power-law fits.

Each timed run executes in a child process so that a timeout can kill it
cleanly (compiled kernels do not respond to in-process signals).  The
child times the solve call only — graph loading, adjacency construction,
and validation stay outside the clock.  Runs within one (instance,
algorithm) group are sequential for timing fidelity; distinct groups may
run in parallel workers.
"""

from __future__ import annotations

import csv
import json
import math
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.stats

from .graph import Graph, save_dimacs
from .generators import InstanceSpec

__all__ = ["BenchRecord", "FitResult", "CSV_HEADER", "run_group",
           "run_bench", "write_csv", "write_dat", "fit_power_law",
           "read_csv_records"]

CSV_HEADER = ["instance", "n", "m", "algorithm", "seed", "rep",
              "wall_time_s", "outcome", "valid"]

DEFAULT_TIMEOUT_S = 1800.0


@dataclass(frozen=True)
class BenchRecord:
    """One timed run (or a mean/sem summary row when rep is textual)."""

    instance: str
    n: int
    m: int
    algorithm: str
    seed: int
    rep: int | str
    wall_time_s: float
    outcome: str          # distances | negative_cycle | timeout | error
    valid: str            # "true" / "false" / "" when not checked

    def row(self) -> list[str]:
        return [self.instance, str(self.n), str(self.m), self.algorithm,
                str(self.seed), str(self.rep), f"{self.wall_time_s:.6f}",
                self.outcome, self.valid]


@dataclass(frozen=True)
class FitResult:
    """OLS fit of t = a * m^b on log-log axes."""

    a: float
    b: float
    b_ci95: float


def _cfg_args(cfg_flags: dict | None) -> list[str]:
    args = []
    for key, val in (cfg_flags or {}).items():
        flag = "--" + key.replace("_", "-")
        if val is True:
            args.append(flag)
        elif val is not False and val is not None:
            args += [flag, str(val)]
    return args


def run_child(graph_path: str, algorithm: str, source: int,
              timeout_s: float | None, cfg_flags: dict | None = None,
              validate: bool = False) -> tuple[float, str, str]:
    """One timed solve in a child process: (wall_time_s, outcome, valid)."""
    cmd = [sys.executable, "-m", "nwsssp.cli", "_run", graph_path,
           "--algorithm", algorithm, "--source", str(source)]
    cmd += _cfg_args(cfg_flags)
    if validate:
        cmd.append("--validate")
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True,
                              timeout=timeout_s)
    except subprocess.TimeoutExpired:
        return float(timeout_s), "timeout", ""
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return 0.0, "error", ""
    payload = json.loads(proc.stdout.strip().splitlines()[-1])
    return payload["wall_time_s"], payload["outcome"], payload.get("valid", "")


def _materialize(instance: str, workdir: Path, super_source: bool) -> tuple[str, int, int]:
    """Instance text or DIMACS path -> (graph file, n, m)."""
    if instance.endswith(".gr") or "/" in instance:
        from .graph import load_dimacs
        g = load_dimacs(instance)
        path = instance
    else:
        g = InstanceSpec.parse(instance).build()
        path = None
    if super_source:
        g = prepend_super_source(g)
        path = None
    if path is None:
        safe = instance.replace(":", "_").replace("/", "_")
        path = str(workdir / f"{safe}{'_ss' if super_source else ''}.gr")
        save_dimacs(g, path)
    return path, g.n, g.m


def prepend_super_source(g: Graph) -> Graph:
    """New vertex 0 with a zero-weight edge to every original vertex."""
    t = np.concatenate([np.zeros(g.n, np.int64), g.tail + 1])
    h = np.concatenate([np.arange(1, g.n + 1, dtype=np.int64), g.head + 1])
    w = np.concatenate([np.zeros(g.n, np.int64), g.weight])
    return Graph(g.n + 1, t, h, w)


def run_group(instance: str, algorithm: str, reps: int, workdir: Path,
              timeout_s: float | None = DEFAULT_TIMEOUT_S,
              cfg_flags: dict | None = None, source: int = 0,
              super_source: bool = False,
              validate: bool = False) -> list[BenchRecord]:
    """All reps of one (instance, algorithm) group plus mean/sem rows."""
    seed = (cfg_flags or {}).get("seed", 0)
    try:
        path, n, m = _materialize(instance, workdir, super_source)
    except Exception as e:                        # record, never abort sweep
        sys.stderr.write(f"generation failed for {instance}: {e}\n")
        return [BenchRecord(instance, 0, 0, algorithm, seed, r, 0.0,
                            "error", "") for r in range(1, reps + 1)]
    records = []
    for rep in range(1, reps + 1):
        t, outcome, valid = run_child(path, algorithm, source, timeout_s,
                                      cfg_flags, validate)
        records.append(BenchRecord(instance, n, m, algorithm, seed, rep,
                                   t, outcome, valid))
    times = [r.wall_time_s for r in records if r.outcome == "distances"]
    if times:
        mean = float(np.mean(times))
        sem = (float(np.std(times, ddof=1) / math.sqrt(len(times)))
               if len(times) > 1 else 0.0)
        records.append(BenchRecord(instance, n, m, algorithm, seed, "mean",
                                   mean, "distances", ""))
        records.append(BenchRecord(instance, n, m, algorithm, seed, "sem",
                                   sem, "distances", ""))
    return records


def run_bench(instances: list[str], algorithms: list[str], reps: int,
              timeout_s: float | None = DEFAULT_TIMEOUT_S,
              cfg_flags: dict | None = None, jobs: int = 1,
              source: int = 0, super_source: bool = False,
              validate: bool = False) -> list[BenchRecord]:
    """The full sweep; group order in the output is deterministic."""
    groups = [(inst, alg) for inst in instances for alg in algorithms]
    with tempfile.TemporaryDirectory(prefix="nwsssp-bench-") as tmp:
        workdir = Path(tmp)
        if jobs <= 1:
            results = [run_group(i, a, reps, workdir, timeout_s, cfg_flags,
                                 source, super_source, validate)
                       for i, a in groups]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(
                    lambda ga: run_group(*ga, reps, workdir, timeout_s,
                                         cfg_flags, source, super_source,
                                         validate), groups))
    return [rec for group in results for rec in group]


def write_csv(records: list[BenchRecord], out) -> None:
    own = isinstance(out, (str, Path))
    fh = open(out, "w", newline="") if own else out
    try:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.row())
    finally:
        if own:
            fh.close()


def read_csv_records(path) -> list[BenchRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        rep = r["rep"]
        out.append(BenchRecord(r["instance"], int(r["n"]), int(r["m"]),
                               r["algorithm"], int(r["seed"]),
                               int(rep) if rep.isdigit() else rep,
                               float(r["wall_time_s"]), r["outcome"],
                               r["valid"]))
    return out


def write_dat(records: list[BenchRecord], prefix) -> list[Path]:
    """One gnuplot-style ``<prefix>-<algorithm>.dat`` per series.

    Columns: m, mean wall time, standard error (summary rows only).
    """
    series: dict[str, list[tuple[int, float, float]]] = {}
    by_key = {(r.instance, r.algorithm, r.rep): r for r in records}
    for r in records:
        if r.rep != "mean":
            continue
        sem_row = by_key.get((r.instance, r.algorithm, "sem"))
        sem = sem_row.wall_time_s if sem_row else 0.0
        series.setdefault(r.algorithm, []).append((r.m, r.wall_time_s, sem))
    written = []
    for alg, points in series.items():
        path = Path(f"{prefix}-{alg}.dat")
        with open(path, "w") as fh:
            fh.write("# m  mean_time_s  sem_s\n")
            for m, mean, sem in sorted(points):
                fh.write(f"{m} {mean:.6f} {sem:.6f}\n")
        written.append(path)
    return written


def fit_power_law(ms, ts) -> FitResult:
    """OLS of ln t against ln m; 95% CI half-width from the t-quantile."""
    ms = np.asarray(ms, float)
    ts = np.asarray(ts, float)
    if len(ms) < 3:
        raise ValueError("need at least 3 points to fit")
    if (ms <= 0).any() or (ts <= 0).any():
        raise ValueError("fit requires positive sizes and times")
    x, y = np.log(ms), np.log(ts)
    res = scipy.stats.linregress(x, y)
    dof = len(ms) - 2
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    ci = stderr * float(scipy.stats.t.ppf(0.975, dof)) if dof > 0 else 0.0
    return FitResult(a=float(np.exp(res.intercept)), b=float(res.slope),
                     b_ci95=ci)


def fit_from_records(records: list[BenchRecord], algorithm: str,
                     instance_prefix: str = "") -> FitResult:
    """Fit the mean-summary rows of one algorithm's series."""
    pts = [(r.m, r.wall_time_s) for r in records
           if r.rep == "mean" and r.algorithm == algorithm
           and r.instance.startswith(instance_prefix) and r.wall_time_s > 0]
    if len(pts) < 3:
        raise ValueError(f"not enough mean rows for {algorithm!r} "
                         f"(prefix {instance_prefix!r})")
    ms, ts = zip(*pts)
    return fit_power_law(ms, ts)
