"""Negative-weight SSSP solver.

The driver (:func:`solve`) follows Johnson's trick: find a valid potential,
then run one Dijkstra pass on the reduced weights.  The potential is built
per strongly connected component by a randomized decompose-and-recurse
scheme whose base case interleaves Dijkstra with Bellman-Ford rounds
(:func:`lazy_dijkstra`), with DAG edges between components repaired by
uniform potential shifts (:func:`fix_dag_edges`).
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .graph import Graph, INF, induced_subgraph, is_valid_potential, reduced_weights
from .rng import SplitMix64

__all__ = [
    "SolverConfig", "SsspResult", "Decomposition", "NegativeCycleError",
    "NegativeWeightError", "dijkstra", "lazy_dijkstra", "fix_dag_edges",
    "estimate_light_vertices", "decompose", "restricted_sssp", "kosaraju_scc",
    "diameter_upper_bound", "solve",
]


class NegativeCycleError(Exception):
    """Raised internally when a negative cycle is detected."""


class NegativeWeightError(ValueError):
    """A negative edge reached a nonnegative-only code path."""


class PotentialValidityError(AssertionError):
    """Internal defect: the computed potential failed the final edge scan."""


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs of the decomposition solver.

    ``k_factor`` divides the number of sampling rounds of the light-vertex
    estimate (``math.inf`` allowed, meaning a single round).  The remaining
    constants default to the engineered values: 50 sampling rounds per
    log |G|, geometric rate 20 log |G| / kappa, marking radius kappa/4,
    light threshold 3/5 of the rounds, and the 3/4 component fraction that
    triggers halving kappa.
    """

    k_factor: float = 40
    base_case_threshold: int = 300
    use_diameter_bound: bool = True
    inner_solver: str = "lazy_dijkstra"
    rng_seed: int = 0
    sample_factor: int = 50
    geom_factor: int = 20
    mark_radius_divisor: int = 4
    light_marked_num: int = 3
    light_marked_den: int = 5
    big_component_num: int = 3
    big_component_den: int = 4

    def __post_init__(self):
        if self.k_factor != math.inf and self.k_factor < 1:
            raise ValueError("k_factor must be >= 1 or infinite")
        if self.base_case_threshold < 3:
            raise ValueError("base_case_threshold must be >= 3")
        if self.inner_solver not in ("lazy_dijkstra", "goldberg_radzik"):
            raise ValueError(f"unknown inner solver {self.inner_solver!r}")


@dataclass
class SsspResult:
    """Distances from a source, or a negative-cycle verdict.

    ``distances`` uses the INF sentinel for unreachable vertices.  For the
    decomposition solver, ``potential`` carries the final valid potential.
    ``passes`` is filled by Goldberg-Radzik.
    """

    distances: np.ndarray | None = None
    negative_cycle: bool = False
    potential: np.ndarray | None = None
    passes: int | None = None

    @property
    def ok(self) -> bool:
        return not self.negative_cycle


@dataclass
class Decomposition:
    """Topologically ordered components plus the separator edge set."""

    components: list
    separator: np.ndarray


def _trace_enabled() -> bool:
    return os.environ.get("NWSSSP_TRACE", "") == "1"


def _debug_enabled() -> bool:
    return os.environ.get("NWSSSP_DEBUG", "") == "1"


# ---------------------------------------------------------------------------
# Dijkstra on a 4-ary heap

def dijkstra(g: Graph, sources, radius_cap=None) -> np.ndarray:
    """Multi-source Dijkstra on nonnegative weights.

    ``sources`` is a list of (vertex, initial distance) seeds.  With a
    ``radius_cap``, vertices farther than the cap stay at INF.
    """
    if g.m and int(g.weight.min()) < 0:
        raise NegativeWeightError("dijkstra requires nonnegative weights")
    seed_v = np.array([v for v, _ in sources], np.int64)
    seed_d = np.array([d for _, d in sources], np.int64)
    if len(seed_v) and (seed_v.min() < 0 or seed_v.max() >= g.n):
        raise ValueError("source vertex out of range")
    cap = INF if radius_cap is None else int(radius_cap)
    out = g.out
    alive = np.ones(g.n, np.bool_)
    return K.dijkstra_csr(g.n, out.start, out.vert, out.weight,
                          seed_v, seed_d, cap, alive)


# ---------------------------------------------------------------------------
# LazyDijkstra

def _csr_reduced(g: Graph, phi: np.ndarray) -> np.ndarray:
    out = g.out
    return reduced_weights(g, phi)[out.eid]


def lazy_dijkstra(g: Graph, phi) -> np.ndarray:
    """One LazyDijkstra fixpoint; returns a potential valid for ``g``.

    Every vertex is seeded at -phi(v) (implicit super source) and relaxed
    with the reduced weights: Dijkstra handles the nonnegative ones, one
    Bellman-Ford round per iteration the negative ones.  Raises
    :class:`NegativeCycleError` once any vertex sees more than n
    Bellman-Ford improvements.
    """
    phi = np.asarray(phi, np.int64)
    if len(phi) != g.n:
        raise ValueError("potential length must equal vertex count")
    out = g.out
    status, d = K.lazy_dijkstra_csr(g.n, out.start, out.vert,
                                    _csr_reduced(g, phi), -phi, g.n)
    if status == K.NEG_CYCLE:
        raise NegativeCycleError
    return phi + d


def _gor_potential(g: Graph, phi: np.ndarray) -> np.ndarray:
    """Goldberg-Radzik as the pluggable inner solver (potential in/out)."""
    out = g.out
    b0 = np.ones(g.n, np.bool_)
    status, d, _ = K.gor_csr(g.n, out.start, out.vert,
                             _csr_reduced(g, phi), -phi, b0)
    if status == K.NEG_CYCLE:
        raise NegativeCycleError
    return phi + d


def _inner_pass(g: Graph, phi: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    if cfg.inner_solver == "goldberg_radzik":
        return _gor_potential(g, phi)
    return lazy_dijkstra(g, phi)


# ---------------------------------------------------------------------------
# FixDAGEdges

def fix_dag_edges(g: Graph, comps, phi, exclude=None) -> np.ndarray:
    """Shift potentials per component so inter-component edges go nonnegative.

    ``comps`` must be in topological order with intra-component reduced
    weights already nonnegative; component i (1-based) is shifted by i*M
    where M is one less than the most negative reduced weight (at most -1).
    ``exclude`` removes separator edge ids from the computation.
    """
    phi = np.asarray(phi, np.int64)
    red = reduced_weights(g, phi)
    mask = np.ones(g.m, np.bool_)
    if exclude is not None and len(exclude):
        mask[np.asarray(exclude, np.int64)] = False
    min_red = int(red[mask].min()) if mask.any() else 0
    M = min(min_red, 0) - 1
    comp_index = np.full(g.n, -1, np.int64)
    for i, c in enumerate(comps):
        comp_index[np.asarray(c, np.int64)] = i
    if comp_index.min() < 0:
        raise ValueError("components must partition the vertex set")
    if _debug_enabled():
        same = mask & (comp_index[g.tail] == comp_index[g.head])
        if same.any() and int(red[same].min()) < 0:
            raise AssertionError("negative reduced weight inside a component")
    shift_extreme = (len(comps)) * abs(M)
    if shift_extreme + int(np.abs(phi).max(initial=0)) > (1 << 61):
        raise OverflowError("potential shift would overflow 64-bit range")
    return phi + (comp_index + 1) * M


# ---------------------------------------------------------------------------
# Light-vertex estimation and decomposition

def _sample_rounds(size: int, cfg: SolverConfig) -> int:
    k_theory = math.ceil(cfg.sample_factor * math.log(size)) if size > 1 else 1
    if cfg.k_factor == math.inf:
        return 1
    return max(1, int(k_theory // cfg.k_factor))


def _clamped(csr):
    return np.maximum(csr.weight, 0)


def estimate_light_vertices(g: Graph, kappa: int, direction: str,
                            cfg: SolverConfig, rng: SplitMix64) -> np.ndarray:
    """Sampled estimate of the light vertices for one direction.

    Runs s = max(1, ceil(50 log|G|) / K) rounds, each marking the
    opposite-direction ball of radius kappa/4 (clamped weights) around a
    uniformly random vertex; returns the vertices marked in fewer than 3/5
    of the rounds.
    """
    if g.n == 0:
        raise ValueError("graph must be nonempty")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    alive = np.ones(g.n, np.bool_)
    marks, s = _mark_phase(g, kappa, direction, cfg, rng, alive)
    light = marks * cfg.light_marked_den < cfg.light_marked_num * s
    return np.flatnonzero(light)


def _mark_phase(g, kappa, direction, cfg, rng, alive):
    bwd = g.inc if direction == "out" else g.out
    size = int(alive.sum())
    s = _sample_rounds(size, cfg)
    alive_ids = np.flatnonzero(alive)
    sources = np.array([alive_ids[rng.randint(size)] for _ in range(s)],
                       np.int64)
    radius = -(-kappa // cfg.mark_radius_divisor)
    marks = K.mark_rounds(g.n, bwd.start, bwd.vert, _clamped(bwd), alive,
                          sources, radius)
    return marks, s


def decompose(g: Graph, kappa: int, cfg: SolverConfig,
              rng: SplitMix64) -> Decomposition:
    """Cut the graph along sampled balls; return topo-sorted SCCs of G - S.

    For each direction the light-vertex estimate is computed on the current
    working graph, then balls of geometrically sampled radius (rate
    20 log|G| / kappa, clamped weights) are carved around the remaining
    light vertices; their boundary edges form the separator S.
    """
    if g.n == 0:
        raise ValueError("graph must be nonempty")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    alive = np.ones(g.n, np.bool_)
    sep_parts = []
    for direction in ("out", "in"):
        size = int(alive.sum())
        if size == 0:
            break
        marks, s = _mark_phase(g, kappa, direction, cfg, rng, alive)
        light = alive & (marks * cfg.light_marked_den
                         < cfg.light_marked_num * s)
        order = np.flatnonzero(light)
        if len(order) == 0:
            continue
        p = min(1.0, max(cfg.geom_factor * math.log(max(size, 2)) / kappa,
                         1e-12))
        radii = np.array([min(rng.geometric(p), g.n) for _ in order],
                         np.int64)
        fwd = g.out if direction == "out" else g.inc
        sep_buf = np.empty(g.m, np.int64)
        nsep = K.carve_balls(g.n, fwd.start, fwd.vert, _clamped(fwd), fwd.eid,
                             alive, light, order, radii, sep_buf)
        sep_parts.append(sep_buf[:nsep].copy())
    sep = (np.unique(np.concatenate(sep_parts)) if sep_parts
           else np.empty(0, np.int64))
    comps = kosaraju_scc(g, exclude=sep)
    return Decomposition(components=comps, separator=sep)


# ---------------------------------------------------------------------------
# Strongly connected components

def kosaraju_scc(g: Graph, exclude=None) -> list:
    """SCCs as vertex-id arrays, topologically ordered by condensation."""
    if g.n == 0:
        return []
    keep = np.ones(g.m, np.bool_)
    if exclude is not None and len(exclude):
        keep[np.asarray(exclude, np.int64)] = False
    out, inc = g.out, g.inc
    comp, ncomp = K.kosaraju_csr(g.n, out.start, out.vert, keep[out.eid],
                                 inc.start, inc.vert, keep[inc.eid])
    order = np.argsort(comp, kind="stable")
    bounds = np.searchsorted(comp[order], np.arange(ncomp + 1))
    return [order[bounds[i]:bounds[i + 1]] for i in range(ncomp)]


# ---------------------------------------------------------------------------
# Diameter-based kappa bound

def diameter_upper_bound(g: Graph) -> int:
    """2-approximate upper bound on the diameter of the clamped graph.

    One forward plus one backward Dijkstra from a probe vertex; the sum of
    the two eccentricities upper-bounds the true diameter.  Requires a
    strongly connected input.
    """
    if g.n <= 1:
        return 0
    alive = np.ones(g.n, np.bool_)
    probe = np.array([0], np.int64)
    zero = np.array([0], np.int64)
    out, inc = g.out, g.inc
    d_out = K.dijkstra_csr(g.n, out.start, out.vert, _clamped(out),
                           probe, zero, INF, alive)
    d_in = K.dijkstra_csr(g.n, inc.start, inc.vert, _clamped(inc),
                          probe, zero, INF, alive)
    ecc_out = int(d_out.max())
    ecc_in = int(d_in.max())
    if ecc_out >= INF or ecc_in >= INF:
        raise ValueError("graph is not strongly connected")
    return ecc_out + ecc_in


# ---------------------------------------------------------------------------
# Recursive solver for one strongly connected component

class _CaptureDone(Exception):
    """Unwinds the recursion once an instrumentation hook captured state."""


def restricted_sssp(g: Graph, phi, kappa: int, cfg: SolverConfig,
                    rng: SplitMix64, depth: int = 0, max_depth=None,
                    capture=None) -> np.ndarray:
    """Potential computation by recursive decomposition.

    Base case (n + kappa below the threshold) runs the configured inner
    solver directly; otherwise the graph is decomposed, components are
    solved recursively (kappa halves on components covering at least 3/4 of
    the vertices), DAG edges are fixed by shifting, and one final inner
    pass repairs the separator edges.  Correct on any negative-cycle-free
    input; raises :class:`NegativeCycleError` otherwise.
    """
    phi = np.asarray(phi, np.int64)
    n = g.n
    kappa = max(1, min(int(kappa), n))
    if max_depth is None:
        max_depth = _depth_bound(n, kappa)
    if depth > max_depth:
        raise RuntimeError(
            f"recursion depth {depth} exceeded bound {max_depth}")
    # kappa <= 2 cannot shrink further (ceil(2/2) = 1 stalls), so it is
    # always a base case regardless of the size threshold
    if n + kappa <= cfg.base_case_threshold or kappa <= 2:
        return _inner_pass(g, phi, cfg)
    dec = decompose(g, kappa, cfg, rng.split((depth, "decompose")))
    if _trace_enabled():
        sizes = sorted((len(c) for c in dec.components), reverse=True)[:5]
        print(f"nwsssp: depth={depth} n={n} kappa={kappa} "
              f"ncomp={len(dec.components)} sep={len(dec.separator)} "
              f"top_sizes={sizes}", file=sys.stderr)
    phi = phi.copy()
    for i, comp in enumerate(dec.components):
        if len(comp) <= 1:
            continue
        if len(comp) * cfg.big_component_den >= cfg.big_component_num * n:
            kappa_i = -(-kappa // 2)
        else:
            kappa_i = kappa
        sub, orig = induced_subgraph(g, comp)
        phi[orig] = restricted_sssp(sub, phi[orig], kappa_i, cfg,
                                    rng.split((depth, "comp", i)),
                                    depth + 1, max_depth)
    phi = fix_dag_edges(g, dec.components, phi, exclude=dec.separator)
    if capture is not None and depth == 0:
        capture(phi)
        raise _CaptureDone
    return _inner_pass(g, phi, cfg)


def _depth_bound(n: int, kappa: int) -> int:
    return int(math.log(max(n, 2)) / math.log(4 / 3)
               + math.log2(max(kappa, 2))) + 8


# ---------------------------------------------------------------------------
# Driver

def solve(g: Graph, source: int, cfg: SolverConfig | None = None) -> SsspResult:
    """Exact single-source shortest paths with negative integer weights.

    Decomposes into SCCs, builds a potential per component recursively,
    repairs the condensation DAG edges, asserts global potential validity,
    and finishes with one Dijkstra pass on the reduced weights.  Any
    negative cycle anywhere in the graph (reachable or not) yields a
    verdict, since no whole-graph potential can exist.
    """
    if cfg is None:
        cfg = SolverConfig()
    if g.n == 0:
        return SsspResult(distances=np.empty(0, np.int64),
                          potential=np.empty(0, np.int64))
    if not (0 <= source < g.n):
        raise ValueError(f"source {source} out of range for n={g.n}")
    loops = g.tail == g.head
    if loops.any() and int(g.weight[loops].min()) < 0:
        return SsspResult(negative_cycle=True)
    rng = SplitMix64(cfg.rng_seed)
    comps = kosaraju_scc(g)
    phi = np.zeros(g.n, np.int64)
    try:
        for i, comp in enumerate(comps):
            if len(comp) <= 1:
                continue
            sub, orig = induced_subgraph(g, comp)
            if cfg.use_diameter_bound:
                kappa = min(sub.n, diameter_upper_bound(sub))
            else:
                kappa = sub.n
            phi[orig] = restricted_sssp(sub, np.zeros(sub.n, np.int64),
                                        max(1, kappa), cfg,
                                        rng.split(("scc", i)))
        phi = fix_dag_edges(g, comps, phi)
    except NegativeCycleError:
        return SsspResult(negative_cycle=True)
    if not is_valid_potential(g, phi):
        raise PotentialValidityError(
            "final potential failed the validity scan (solver defect)")
    reduced = reduced_weights(g, phi)
    out = g.out
    alive = np.ones(g.n, np.bool_)
    d_red = K.dijkstra_csr(g.n, out.start, out.vert, reduced[out.eid],
                           np.array([source], np.int64),
                           np.array([0], np.int64), INF, alive)
    dist = np.where(d_red < INF, d_red - phi[source] + phi, INF)
    return SsspResult(distances=dist, potential=phi)
