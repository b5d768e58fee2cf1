"""Acceptance gate: nine criteria, one printed pass/fail line each.

Run with ``pytest -v``; each criterion prints its verdict directly to the
terminal (bypassing capture) so the gate is readable at a glance.
"""

import itertools
import time

import numpy as np
import pytest

import nwsssp as nw
from nwsssp import Graph, INF, SolverConfig
from nwsssp.baselines import (bellman_ford, goldberg_radzik, is_restricted,
                              karp_min_cycle_mean)
from nwsssp.bench import fit_power_law
from nwsssp.cli import main as cli_main
from nwsssp.generators import (InstanceSpec, augment, gen_bad_bfct,
                               gen_bad_dfs, gen_bad_gor, gen_bad_rd1,
                               gen_bad_rd2, gen_grid, gen_random_restricted,
                               usa_shift)

import oracles


@pytest.fixture
def report(capsys):
    def _report(number, label, ok, detail=""):
        with capsys.disabled():
            verdict = "PASS" if ok else "FAIL"
            suffix = f"  [{detail}]" if detail else ""
            print(f"ACCEPTANCE {number} ({label}): {verdict}{suffix}")
        assert ok, f"criterion {number} ({label}) failed: {detail}"
    return _report


def _warm():
    g = Graph(3, np.array([0, 1, 2]), np.array([1, 2, 0]),
              np.array([1, -1, 3]))
    nw.solve(g, 0)
    goldberg_radzik(g, 0)
    bellman_ford(g, 0)


_warm()


# ---------------------------------------------------------------------------
# shared suites

def _family_instances():
    """Every generated family at sizes n <= 2000."""
    texts = []
    for fam, ks in (("bad_bfct", (4, 120, 490)), ("bad_gor", (7, 200, 990)),
                    ("bad_rd1", (5, 300, 990)), ("bad_rd2", (5, 200, 660)),
                    ("bad_dfs", (5, 300, 990))):
        texts += [f"{fam}:{k}:0" for k in ks]
        # small k are too dense to take 5x extra edges; start at 30
        texts += [f"aug_{fam[4:]}:{k}:5:{k}" for k in (30,) + ks[1:]]
    texts += ["shift_gor:120:1", "shift_gor:240:2",
              "random_restricted:500:1", "random_restricted:2000:2",
              "usa_shift:40:1:3", "usa_shift:40:100:4"]
    return texts


_RANDOM_SUITE = None


def _random_suite():
    """500 seeded mixed-sign random graphs without negative cycles."""
    global _RANDOM_SUITE
    if _RANDOM_SUITE is None:
        rng = np.random.default_rng(2024)
        graphs = []
        while len(graphs) < 500:
            n = int(rng.integers(2, 60))
            m = int(rng.integers(1, 4 * n))
            g = Graph(n, rng.integers(0, n, m), rng.integers(0, n, m),
                      rng.integers(-3, 12, m))
            if not bellman_ford(g).negative_cycle:
                graphs.append(g)
        _RANDOM_SUITE = graphs
    return _RANDOM_SUITE


def _three_way(g, source=0):
    our = nw.solve(g, source)
    gor = goldberg_radzik(g, source)
    bf = bellman_ford(g, source)
    return our, gor, bf


# ---------------------------------------------------------------------------
# criteria

def test_criterion_1_correctness(report):
    t0 = time.monotonic()
    bad = []
    for text in _family_instances():
        g = InstanceSpec.parse(text).build()
        if g.n > 2000:
            bad.append(f"{text} exceeds n=2000 ({g.n})")
            continue
        our, gor, bf = _three_way(g)
        if our.negative_cycle or gor.negative_cycle or bf.negative_cycle:
            bad.append(f"{text}: unexpected verdict")
            continue
        if not (np.array_equal(our.distances, gor.distances)
                and np.array_equal(our.distances, bf.distances)):
            bad.append(f"{text}: distance mismatch")
        if not nw.is_valid_potential(g, our.potential):
            bad.append(f"{text}: invalid final potential")
    for i, g in enumerate(_random_suite()):
        our, gor, bf = _three_way(g)
        if our.negative_cycle or gor.negative_cycle or bf.negative_cycle:
            bad.append(f"random[{i}]: false verdict")
            continue
        if not (np.array_equal(our.distances, gor.distances)
                and np.array_equal(our.distances, bf.distances)):
            bad.append(f"random[{i}]: distance mismatch")
        if not nw.is_valid_potential(g, our.potential):
            bad.append(f"random[{i}]: invalid potential")
    elapsed = time.monotonic() - t0
    if elapsed >= 300:
        bad.append(f"suite took {elapsed:.0f}s (budget 300s)")
    report(1, "correctness", not bad,
           bad[0] if bad else f"{len(_family_instances())} family instances"
                              f" + 500 randoms in {elapsed:.0f}s")


def _planted_cycle_graph(rng):
    n = int(rng.integers(8, 50))
    m = int(rng.integers(n, 4 * n))
    perm = rng.permutation(n)
    # forward edges under a hidden order: cycle-free base
    u = rng.integers(0, n - 1, m)
    v = u + 1 + rng.integers(0, n - 1 - u)
    t, h = perm[u], perm[v]
    w = rng.integers(0, 8, m)
    # plant one cycle of total weight -1, reachable from vertex 0
    length = int(rng.integers(2, 6))
    cyc = rng.choice(n, size=length, replace=False)
    cw = np.full(length, 1, np.int64)
    cw[0] = -length
    assert cw.sum() == -1
    t = np.concatenate([t, cyc, [0]])
    h = np.concatenate([h, np.roll(cyc, -1), [int(cyc[0])]])
    w = np.concatenate([w, cw, [0]])
    return Graph(n, t, h, w)


def test_criterion_2_negative_cycles(report):
    rng = np.random.default_rng(99)
    missed = 0
    for _ in range(100):
        g = _planted_cycle_graph(rng)
        our, gor, bf = _three_way(g)
        if not (our.negative_cycle and gor.negative_cycle
                and bf.negative_cycle):
            missed += 1
    false_verdicts = 0
    for g in _random_suite():
        our, gor, bf = _three_way(g)
        false_verdicts += (our.negative_cycle or gor.negative_cycle
                           or bf.negative_cycle)
    ok = missed == 0 and false_verdicts == 0
    report(2, "negative-cycle detection", ok,
           f"missed={missed}/100 false={false_verdicts}/500")


def test_criterion_3_generator_fidelity(report):
    forms = {gen_bad_bfct: (lambda k: 4 * k - 1, lambda k: 5 * k - 3),
             gen_bad_gor: (lambda k: 2 * k + 1, lambda k: 3 * k - 1),
             gen_bad_rd1: (lambda k: 2 * k, lambda k: 3 * k - 2),
             gen_bad_rd2: (lambda k: 3 * k + 1, lambda k: 5 * k - 2),
             gen_bad_dfs: (lambda k: 2 * k, lambda k: 4 * k - 3)}
    bad = []
    for gen, (fn, fm) in forms.items():
        for k in range(2, 201):
            g = gen(k)
            if (g.n, g.m) != (fn(k), fm(k)):
                bad.append(f"{gen.__name__}(k={k}) -> ({g.n},{g.m})")
    spots = [(gen_bad_bfct, 4, 15, 17), (gen_bad_gor, 7, 15, 20),
             (gen_bad_rd1, 5, 10, 13), (gen_bad_rd2, 5, 16, 23),
             (gen_bad_dfs, 5, 10, 17)]
    for gen, k, n, m in spots:
        g = gen(k)
        if (g.n, g.m) != (n, m):
            bad.append(f"spot {gen.__name__}(k={k})")
    report(3, "generator fidelity", not bad, bad[0] if bad else
           "closed forms for k in 2..200, all five families")


def test_criterion_4_restrictedness(report):
    bad = []
    fams = [("aug_bfct", gen_bad_bfct, 24, False),
            ("aug_gor", gen_bad_gor, 60, True),
            ("aug_rd1", gen_bad_rd1, 40, False),
            ("aug_rd2", gen_bad_rd2, 40, False),
            ("aug_dfs", gen_bad_dfs, 60, False)]
    for name, gen, k, weight_fails in fams:
        for seed in range(20):
            g = augment(gen(k), 5, seed)
            assert g.n <= 500
            r = karp_min_cycle_mean(g)
            if r is None or r.min_mean < 1:
                bad.append(f"{name} seed={seed}: mean {r and r.min_mean}")
            wmin = int(g.weight.min())
            if weight_fails:
                ok, reason = is_restricted(g)
                if ok or not reason.startswith("weight"):
                    bad.append(f"{name} seed={seed}: expected weight "
                               f"failure, got {reason!r}")
            elif wmin < -1:
                bad.append(f"{name} seed={seed}: min weight {wmin}")
    for seed in range(20):
        g = gen_random_restricted(300, seed)
        r = karp_min_cycle_mean(g)
        if r is None or r.min_mean < 1 or int(g.weight.min()) < -1:
            bad.append(f"random_restricted seed={seed}")
    report(4, "restrictedness", not bad, bad[0] if bad else
           "6 families x 20 seeds under the exact-rational cycle-mean "
           "oracle")


def _all_paths_and_cycles_k4():
    """Simple paths (s != t) and simple cycles of the complete 4-digraph,
    as incidence rows over the 12 possible edges."""
    edge_id = {}
    for u, v in itertools.permutations(range(4), 2):
        edge_id[(u, v)] = len(edge_id)
    paths, cycles = [], []
    for length in (2, 3, 4):
        for seq in itertools.permutations(range(4), length):
            row = np.zeros(12, np.int8)
            for a, b in zip(seq, seq[1:]):
                row[edge_id[(a, b)]] = 1
            paths.append((seq[0], seq[-1], row))
            if seq[0] == min(seq):        # canonical cycle representative
                crow = row.copy()
                crow[edge_id[(seq[-1], seq[0])]] = 1
                cycles.append((length, crow))
    return edge_id, paths, cycles


def _scc_check_subset(mask, edge_list):
    reach = np.eye(4, dtype=bool)
    for i, (u, v) in enumerate(edge_list):
        if mask >> i & 1:
            reach[u, v] = True
    for _ in range(4):
        reach = reach | (reach @ reach)
    return bool(reach.all())


def test_criterion_5_kappa_diameter_bound(report):
    edge_id, paths, cycles = _all_paths_and_cycles_k4()
    edge_list = list(edge_id)
    violations = 0
    graphs_checked = 0
    path_bits = [int(sum(1 << i for i in np.nonzero(row)[0]))
                 for _, _, row in paths]
    cycle_bits = [int(sum(1 << i for i in np.nonzero(row)[0]))
                  for _, row in cycles]
    for mask in range(1, 1 << 12):
        if not _scc_check_subset(mask, edge_list):
            continue
        cols = [i for i in range(12) if mask >> i & 1]
        m = len(cols)
        pr = [(s, t, row[cols]) for (s, t, row), bits in zip(paths,
              path_bits) if bits & ~mask == 0]
        cr = [(ln, row[cols]) for (ln, row), bits in zip(cycles,
              cycle_bits) if bits & ~mask == 0]
        pmat = np.array([r for _, _, r in pr], np.float32)
        cmat = np.array([r for _, r in cr], np.float32)
        clen = np.array([ln for ln, _ in cr], np.float32)
        pairs = np.array([s * 4 + t for s, t, _ in pr])
        total = 4 ** m
        chunk = 1 << 20
        for lo in range(0, total, chunk):
            idx = np.arange(lo, min(lo + chunk, total))
            w = np.empty((m, len(idx)), np.float32)
            for j in range(m):
                w[j] = (idx >> (2 * j)) % 4 - 1
            # restricted filter: every simple cycle has weight >= length
            ok = (cmat @ w >= clen[:, None]).all(axis=0)
            if not ok.any():
                continue
            w = w[:, ok]
            graphs_checked += w.shape[1]
            cost = pmat @ w
            neg = pmat @ (w < 0)
            neg_eligible = np.where(cost <= 0, neg, -1.0)
            kappa = neg_eligible.max(axis=0)
            clcost = pmat @ np.maximum(w, 0)
            diam = np.zeros(w.shape[1], np.float32)
            for p in np.unique(pairs):
                diam = np.maximum(diam,
                                  clcost[pairs == p].min(axis=0))
            violations += int((kappa > diam).sum())
    # 200 seeded random restricted SCCs with n <= 12
    rng = np.random.default_rng(77)
    checked_rand = 0
    while checked_rand < 200:
        n = int(rng.integers(4, 13))
        m = int(rng.integers(n, 3 * n))
        g = Graph(n, rng.integers(0, n, m), rng.integers(0, n, m),
                  rng.integers(-1, 3, m))
        if len(nw.kosaraju_scc(g)) != 1 or not is_restricted(g)[0]:
            continue
        checked_rand += 1
        if oracles.exact_kappa(g) > oracles.exact_diameter_clamped(g):
            violations += 1
    report(5, "kappa <= diameter", violations == 0,
           f"{graphs_checked} exhaustive 4-vertex graphs + "
           f"{checked_rand} random SCCs, {violations} violations")


def _best_time(fn, reps):
    ts = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return ts


def test_criterion_6_pathological_gor(report):
    g1, g2 = gen_bad_gor(20000), gen_bad_gor(40000)
    t_gor1 = min(_best_time(lambda: goldberg_radzik(g1, 0), 2))
    t_gor2 = min(_best_time(lambda: goldberg_radzik(g2, 0), 2))
    t_our1 = min(_best_time(lambda: nw.solve(g1, 0), 3))
    t_our2 = min(_best_time(lambda: nw.solve(g2, 0), 3))
    gor_ratio = t_gor2 / t_gor1
    our_ratio = t_our2 / t_our1
    speedup = t_gor2 / t_our2          # largest size inside the 60 s budget
    ok = gor_ratio >= 3 and our_ratio <= 2.5 and speedup >= 10 \
        and t_gor2 < 60
    report(6, "pathological baseline", ok,
           f"gor x{gor_ratio:.1f}, our x{our_ratio:.2f}, "
           f"speedup {speedup:.0f}x at m={g2.m}")


def test_criterion_7_near_linear_scaling(report):
    per_edge = {"aug_bfct": 5, "aug_dfs": 4, "aug_rd1": 3, "aug_rd2": 5}
    targets = np.exp(np.linspace(np.log(1e5), np.log(2e6), 5))
    bad = []
    details = []
    for fam, slope in per_edge.items():
        ms, ts = [], []
        for tgt in targets:
            k = max(2, int(round(tgt / (6 * slope))))
            g = InstanceSpec.parse(f"{fam}:{k}:5:1").build()
            ts.append(float(np.mean(_best_time(lambda: nw.solve(g, 0), 3))))
            ms.append(g.m)
        fit = fit_power_law(ms, ts)
        details.append(f"{fam} b={fit.b:.2f}")
        if fit.b > 1.45:
            bad.append(f"{fam}: b={fit.b:.3f}")
    x = np.exp(np.linspace(np.log(5e5), np.log(2e7), 20))
    ref = fit_power_law(x, x * np.log(x) ** 3)
    if abs(ref.b - 1.20) > 0.01:
        bad.append(f"reference fit b={ref.b:.4f}")
    report(7, "near-linear scaling", not bad,
           bad[0] if bad else ", ".join(details) +
           f", ref b={ref.b:.3f}")


def test_criterion_8_k_factor(report):
    k = 41668                      # m = 6*(4k-3) ~ 1e6
    g = InstanceSpec.parse(f"aug_dfs:{k}:5:1").build()
    t40 = float(np.mean(_best_time(
        lambda: nw.solve(g, 0, SolverConfig(k_factor=40)), 5)))
    t1 = float(np.mean(_best_time(
        lambda: nw.solve(g, 0, SolverConfig(k_factor=1)), 5)))
    ok = t1 >= 1.5 * t40
    report(8, "K-factor direction", ok,
           f"K=40: {t40:.2f}s, K=1: {t1:.2f}s ({t1 / t40:.1f}x) at m={g.m}")


def test_criterion_9_determinism(report, tmp_path):
    import csv as _csv
    bad = []
    a, b = tmp_path / "a.gr", tmp_path / "b.gr"
    cli_main(["generate", "random_restricted:400:7", str(a)])
    cli_main(["generate", "random_restricted:400:7", str(b)])
    if a.read_bytes() != b.read_bytes():
        bad.append("generate not byte-identical")
    da, db = tmp_path / "da.txt", tmp_path / "db.txt"
    cli_main(["solve", str(a), "--out", str(da), "--seed", "3"])
    cli_main(["solve", str(b), "--out", str(db), "--seed", "3"])
    if da.read_bytes() != db.read_bytes():
        bad.append("solve not byte-identical")
    ca, cb = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (ca, cb):
        cli_main(["bench", "aug_rd2:60:5:2", "--algorithm", "our,gor",
                  "--reps", "2", "--csv", str(path), "--timeout", "120"])
    strip = lambda p: [[c for i, c in enumerate(r) if i != 6]
                       for r in _csv.reader(open(p, newline=""))]
    if strip(ca) != strip(cb):
        bad.append("bench CSV rows differ beyond wall-time column")
    report(9, "determinism", not bad, bad[0] if bad else
           "generate/solve/bench reproduce byte-identical artifacts")
