"""Seeded generators for the benchmark instance families.

Five hand-crafted "BAD" families (pathological for classic label-correcting
codes), the AUG random augmentation that turns them into restricted
instances, the SHIFT-GOR potential extraction, uniformly random restricted
graphs, a potential-shift transform for nonnegative road-style networks,
and a synthetic grid stand-in for such networks.

Every generator is a deterministic function of its parameters and seed.
Randomness flows through one :class:`~nwsssp.rng.SplitMix64` stream per
call, split once per stage, so adding a stage never perturbs the draws of
earlier stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, INF, induced_subgraph
from .rng import SplitMix64
from .solver import (SolverConfig, _CaptureDone, diameter_upper_bound,
                     kosaraju_scc, restricted_sssp)
from . import _kernels as K

__all__ = [
    "GeneratorError", "InstanceSpec",
    "gen_bad_bfct", "gen_bad_gor", "gen_bad_rd1", "gen_bad_rd2",
    "gen_bad_dfs", "augment", "extract_shift_gor", "gen_random_restricted",
    "usa_shift", "gen_grid",
]


class GeneratorError(ValueError):
    """Invalid generator parameters or an unsatisfiable construction."""


def _np_rng(stream: SplitMix64) -> np.random.Generator:
    """A fast numpy generator seeded from one splittable stream."""
    return np.random.Generator(np.random.PCG64(stream.next_u64()))


def _require_k(k: int, minimum: int = 2) -> int:
    k = int(k)
    if k < minimum:
        raise GeneratorError(f"size parameter must be >= {minimum}, got {k}")
    return k


# ---------------------------------------------------------------------------
# Hand-crafted worst-case families (all DAGs; vertex ids 0-based)

def gen_bad_bfct(k: int) -> Graph:
    """Worst case for Bellman-Ford with the parent-pruning heuristic.

    n = 4k-1, m = 5k-3, all weights -1: a long downward path, k taps from
    the path into a collector vertex, and k leaves hanging off it.
    """
    k = _require_k(k)
    tails, heads = [], []
    for i in range(1, 3 * k - 2):          # path edges (i+1, i)
        tails.append(i + 1)
        heads.append(i)
    c = 3 * k - 1                          # collector vertex
    for i in range(1, k + 1):              # taps (3(i-1)+1, c)
        tails.append(3 * (i - 1) + 1)
        heads.append(c)
    for v in range(3 * k, 4 * k):          # leaves fed by the collector
        tails.append(c)
        heads.append(v)
    t = np.array(tails, np.int64) - 1
    h = np.array(heads, np.int64) - 1
    return Graph(4 * k - 1, t, h, np.full(len(t), -1, np.int64))


def gen_bad_gor(k: int) -> Graph:
    """Worst case for Goldberg-Radzik; n = 2k+1, m = 3k-1.

    One hub (vertex k+1 in 1-based terms) feeds k sinks with weight -1
    while a chain keeps re-entering it with decreasing slack, and a single
    very negative edge w(1,2) = -3k makes the instance non-restricted.
    """
    k = _require_k(k)
    edges = [(1, 2, -3 * k), (1, k + 1, -1)]
    edges += [(i, i + 1, 1) for i in range(2, k)]
    edges += [(k + 1, k + 1 + i, -1) for i in range(1, k + 1)]
    edges += [(i, k + 1, 2 * (k - i)) for i in range(2, k + 1)]
    t, h, w = (np.array(a, np.int64) for a in zip(*edges))
    return Graph(2 * k + 1, t - 1, h - 1, w)


def _rd1_edges(k: int):
    """Two-row ladder of BAD-RD1: x_i = 2i-1, y_i = 2i (1-based)."""
    edges = [(2 * i - 1, 2 * i, 0) for i in range(1, k + 1)]
    edges += [(2 * i - 1, 2 * i + 1, -1) for i in range(1, k)]
    edges += [(2 * i, 2 * i + 1, -2) for i in range(1, k)]
    return edges


def gen_bad_rd1(k: int) -> Graph:
    """Worst case for RD heuristics; n = 2k, m = 3k-2, weights in {0,-1,-2}."""
    k = _require_k(k)
    t, h, w = (np.array(a, np.int64) for a in zip(*_rd1_edges(k)))
    return Graph(2 * k, t - 1, h - 1, w)


def gen_bad_rd2(k: int) -> Graph:
    """BAD-RD1 plus a hub collecting every y_i and feeding k new leaves.

    n = 3k+1, m = 5k-2; all new edges have weight -1.
    """
    k = _require_k(k)
    edges = _rd1_edges(k)
    hub = 2 * k + 1
    edges += [(2 * i, hub, -1) for i in range(1, k + 1)]
    edges += [(hub, hub + i, -1) for i in range(1, k + 1)]
    t, h, w = (np.array(a, np.int64) for a in zip(*edges))
    return Graph(3 * k + 1, t - 1, h - 1, w)


def gen_bad_dfs(k: int) -> Graph:
    """Worst case for DFS-ordered scanning; n = 2k, m = 4k-3.

    BAD-RD1 topology plus the (y_i, y_{i+1}) rungs, every weight -1, and
    the rows relabeled so the lower row takes the smaller indices.
    """
    k = _require_k(k)
    # lower row x_i -> i-1, upper row y_i -> k+i-1 (0-based)
    x = lambda i: i - 1
    y = lambda i: k + i - 1
    tails, heads = [], []
    for i in range(1, k + 1):
        tails.append(x(i)); heads.append(y(i))
    for i in range(1, k):
        tails.append(x(i)); heads.append(x(i + 1))
        tails.append(y(i)); heads.append(x(i + 1))
        tails.append(y(i)); heads.append(y(i + 1))
    t = np.array(tails, np.int64)
    h = np.array(heads, np.int64)
    return Graph(2 * k, t, h, np.full(len(t), -1, np.int64))


# ---------------------------------------------------------------------------
# AUG: random augmentation into a restricted instance

def _sample_distinct_edges(n: int, count: int, existing: np.ndarray,
                           nprng: np.random.Generator) -> np.ndarray:
    """``count`` fresh (tail, head) codes: no self-loops, no duplicates.

    ``existing`` is a sorted array of forbidden ``tail * n + head`` codes.
    Raises :class:`GeneratorError` when the graph is too dense or the
    rejection budget (100 draws per requested edge) runs out.
    """
    free = n * (n - 1) - len(existing)
    if count > free:
        raise GeneratorError(
            f"cannot place {count} distinct new edges: only {free} "
            f"non-loop vertex pairs remain")
    forbidden = existing
    picked = np.empty(0, np.int64)
    attempts, budget = 0, 100 * max(count, 1)
    while len(picked) < count:
        need = count - len(picked)
        batch = need + need // 2 + 16
        attempts += batch
        if attempts > budget:
            raise GeneratorError("edge rejection sampling budget exhausted")
        u = nprng.integers(0, n, batch, dtype=np.int64)
        v = nprng.integers(0, n, batch, dtype=np.int64)
        codes = (u * n + v)[u != v]
        codes = np.unique(codes)
        codes = codes[~np.isin(codes, forbidden, assume_unique=True)]
        picked = np.concatenate([picked, codes[:need]])
        forbidden = np.union1d(forbidden, codes[:need])
    return picked


def _is_dag(g: Graph) -> bool:
    return len(kosaraju_scc(g)) == g.n


def augment(g: Graph, factor: int = 5, seed: int = 0) -> Graph:
    """Augment a DAG with heavy random edges, preserving its distances.

    Stages: randomly permute the vertex labels; raise any -2 weight to -1;
    add ``factor * m`` distinct random non-loop edges, each of one safe
    weight W = n + (n-1) * max(|w_min|, 1) that exceeds every original
    weight and the negated weight of any simple path, so no shortest path
    uses a new edge and the minimum cycle mean lands at >= 1.
    """
    factor = int(factor)
    if factor < 0:
        raise GeneratorError("augmentation factor must be >= 0")
    if not _is_dag(g):
        raise GeneratorError("augment requires an acyclic input graph")
    rng = SplitMix64(seed)
    perm = _np_rng(rng.split("permute")).permutation(g.n).astype(np.int64)
    tail = perm[g.tail]
    head = perm[g.head]
    w = g.weight.copy()
    w[w == -2] = -1
    w_min = int(w.min()) if g.m else 0
    w_aug = g.n + (g.n - 1) * max(abs(w_min), 1)
    extra = factor * g.m
    if extra == 0:
        return Graph(g.n, tail, head, w)
    existing = np.unique(tail * g.n + head)
    codes = _sample_distinct_edges(g.n, extra, existing,
                                   _np_rng(rng.split("edges")))
    t2 = np.concatenate([tail, codes // g.n])
    h2 = np.concatenate([head, codes % g.n])
    w2 = np.concatenate([w, np.full(extra, w_aug, np.int64)])
    return Graph(g.n, t2, h2, w2)


# ---------------------------------------------------------------------------
# SHIFT-GOR: capture a mid-recursion potential and re-weight

def extract_shift_gor(aug_gor: Graph, cfg: SolverConfig | None = None,
                      seed: int = 0) -> Graph:
    """Re-weight the largest SCC of an augmented instance by a potential
    captured at the end of the first decomposition level, just before its
    closing inner pass, and attach an explicit super source (vertex 0)
    with zero-weight edges to every other vertex.

    The intermediate potential leaves many strongly negative edges, which
    is the point: the output exercises solvers on non-restricted inputs.
    """
    if cfg is None:
        cfg = SolverConfig()
    comps = kosaraju_scc(aug_gor)
    big = max(comps, key=len)
    if len(big) < 2:
        raise GeneratorError("input has no non-trivial SCC")
    sub, _ = induced_subgraph(aug_gor, np.sort(big))
    if cfg.use_diameter_bound:
        kappa = min(sub.n, diameter_upper_bound(sub))
    else:
        kappa = sub.n
    captured: dict[str, np.ndarray] = {}
    try:
        restricted_sssp(sub, np.zeros(sub.n, np.int64), max(1, kappa), cfg,
                        SplitMix64(seed), capture=lambda p: captured.
                        __setitem__("phi", np.asarray(p, np.int64).copy()))
        # Base case reached without decomposing: the potential just before
        # the single inner pass is the all-zero input.
        phi = np.zeros(sub.n, np.int64)
    except _CaptureDone:
        phi = captured["phi"]
    t = np.concatenate([np.zeros(sub.n, np.int64), sub.tail + 1])
    h = np.concatenate([np.arange(1, sub.n + 1), sub.head + 1])
    w = np.concatenate([np.zeros(sub.n, np.int64),
                        sub.weight + phi[sub.tail] - phi[sub.head]])
    return Graph(sub.n + 1, t, h, w)


# ---------------------------------------------------------------------------
# RANDOM RESTRICTED: uniform edges, tree-potential shift

def gen_random_restricted(n: int, seed: int = 0) -> Graph:
    """A uniformly random graph with 6n edges, re-weighted to be restricted.

    All edges start at weight 2.  Dijkstra runs from random sources over
    the still-unvisited vertices partition the graph into shortest-path
    trees; shifting by the tree distances makes every within-tree edge
    nonnegative with tree paths of weight 2 per hop.  Edges between trees
    always lead from a later tree to an earlier one (otherwise the head
    would have joined the earlier tree), so zeroing them creates no cycle.
    A final global -1 leaves minimum weight -1 and minimum cycle mean 1.
    """
    n = int(n)
    if n < 7:
        raise GeneratorError(
            "n must be >= 7 so that 6n distinct non-loop edges exist")
    rng = SplitMix64(seed)
    codes = _sample_distinct_edges(n, 6 * n, np.empty(0, np.int64),
                                   _np_rng(rng.split("edges")))
    tail = codes // n
    head = codes % n
    g = Graph(n, tail, head, np.full(6 * n, 2, np.int64))
    out = g.out
    alive = np.ones(n, np.bool_)
    dist = np.zeros(n, np.int64)
    tree = np.full(n, -1, np.int64)
    order = _np_rng(rng.split("sources")).permutation(n)
    next_tree = 0
    for s in order:
        if not alive[s]:
            continue
        d = K.dijkstra_csr(n, out.start, out.vert, out.weight,
                           np.array([s], np.int64), np.zeros(1, np.int64),
                           INF, alive)
        reached = alive & (d < INF)
        dist[reached] = d[reached]
        tree[reached] = next_tree
        alive[reached] = False
        next_tree += 1
    w = g.weight + dist[tail] - dist[head]
    cross = tree[tail] != tree[head]
    if np.any(tree[tail][cross] < tree[head][cross]):
        raise AssertionError(
            "edge from an earlier to a later tree (generator defect)")
    w[cross] = 0
    return Graph(n, tail, head, w - 1)


# ---------------------------------------------------------------------------
# USA-style potential shift and a synthetic nonnegative stand-in

def usa_shift(g: Graph, W: int, seed: int = 0) -> Graph:
    """Shift a nonnegative graph by jittered shortest-path potentials.

    Runs Dijkstra from vertex 0, adds an independent uniform integer from
    [0, W] per vertex, and applies the sum as a potential.  Tree edges end
    up in [-W, W]; with W = 0 every tree edge becomes exactly 0.
    Unreachable vertices keep a zero base potential.
    """
    W = int(W)
    if W < 0:
        raise GeneratorError("W must be >= 0")
    if g.m and int(g.weight.min()) < 0:
        raise GeneratorError("usa_shift requires nonnegative weights")
    out = g.out
    alive = np.ones(g.n, np.bool_)
    d = K.dijkstra_csr(g.n, out.start, out.vert, out.weight,
                       np.zeros(1, np.int64), np.zeros(1, np.int64),
                       INF, alive)
    base = np.where(d < INF, d, 0)
    jitter = _np_rng(SplitMix64(seed).split("jitter")).integers(
        0, W + 1, g.n).astype(np.int64)
    phi = base + jitter
    return Graph(g.n, g.tail, g.head,
                 g.weight + phi[g.tail] - phi[g.head])


def gen_grid(side: int, seed: int = 0) -> Graph:
    """Bidirected side x side grid with uniform weights in [0, 100].

    A synthetic stand-in for road networks when no DIMACS file is at hand;
    strongly connected, nonnegative, suitable as :func:`usa_shift` input.
    """
    side = int(side)
    if side < 2:
        raise GeneratorError("grid side must be >= 2")
    n = side * side
    idx = np.arange(n).reshape(side, side)
    right = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    down = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    fwd = np.concatenate([right, down], axis=1)
    tail = np.concatenate([fwd[0], fwd[1]])
    head = np.concatenate([fwd[1], fwd[0]])
    w = _np_rng(SplitMix64(seed).split("weights")).integers(
        0, 101, len(tail)).astype(np.int64)
    return Graph(n, tail, head, w)


# ---------------------------------------------------------------------------
# Instance descriptors

_BAD = {"bad_bfct": gen_bad_bfct, "bad_gor": gen_bad_gor,
        "bad_rd1": gen_bad_rd1, "bad_rd2": gen_bad_rd2,
        "bad_dfs": gen_bad_dfs}

FAMILIES = tuple(_BAD) + tuple(f"aug_{f[4:]}" for f in _BAD) + (
    "shift_gor", "random_restricted", "usa_shift", "grid")

_DEFAULT_AUG_FACTOR = 5
_DEFAULT_USA_W = 1


@dataclass(frozen=True)
class InstanceSpec:
    """One benchmark instance: ``family:param[:extra]:seed`` in text form.

    ``param`` is the family-specific size knob (k for the BAD and AUG
    families, n for random_restricted, the grid side for usa_shift/grid).
    ``extra`` is the augmentation factor for AUG families and the shift
    width W for usa_shift; other families take none.
    """

    family: str
    param: int
    seed: int = 0
    extra: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GeneratorError(f"unknown family {self.family!r}")
        if self.param < 1:
            raise GeneratorError("size parameter must be >= 1")
        if self.extra is not None and self.extra < 0:
            raise GeneratorError("extra parameter must be >= 0")

    @property
    def text(self) -> str:
        mid = "" if self.extra is None else f":{self.extra}"
        return f"{self.family}:{self.param}{mid}:{self.seed}"

    @classmethod
    def parse(cls, s: str) -> "InstanceSpec":
        parts = s.strip().split(":")
        if len(parts) == 3:
            fam, param, seed = parts
            extra = None
        elif len(parts) == 4:
            fam, param, extra, seed = parts
            extra = int(extra)
        else:
            raise GeneratorError(
                f"descriptor {s!r} is not family:param[:extra]:seed")
        try:
            return cls(fam, int(param), int(seed), extra)
        except ValueError as e:
            raise GeneratorError(f"bad descriptor {s!r}: {e}") from None

    def build(self) -> Graph:
        fam = self.family
        if fam in _BAD:
            return _BAD[fam](self.param)
        if fam.startswith("aug_"):
            factor = _DEFAULT_AUG_FACTOR if self.extra is None else self.extra
            return augment(_BAD["bad_" + fam[4:]](self.param), factor,
                           self.seed)
        if fam == "shift_gor":
            rng = SplitMix64(self.seed)
            aug = augment(gen_bad_gor(self.param), _DEFAULT_AUG_FACTOR
                          if self.extra is None else self.extra,
                          rng.split("aug").next_u64())
            return extract_shift_gor(aug, SolverConfig(),
                                     rng.split("extract").next_u64())
        if fam == "random_restricted":
            return gen_random_restricted(self.param, self.seed)
        if fam == "usa_shift":
            W = _DEFAULT_USA_W if self.extra is None else self.extra
            return usa_shift(gen_grid(self.param, self.seed), W, self.seed)
        return gen_grid(self.param, self.seed)
