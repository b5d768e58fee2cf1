"""Baseline and oracle algorithms.

Goldberg-Radzik is the comparison algorithm of the benchmark harness;
Bellman-Ford serves as the correctness oracle; Karp's minimum cycle mean
(exact rationals) checks the restricted-graph property: every weight at
least -1 and minimum cycle mean at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .graph import Graph, INF
from .solver import NegativeCycleError, SsspResult

KARP_MAX_N = 5000  # O(nm) oracle, not a production path


@dataclass
class CycleMeanResult:
    """Exact minimum cycle mean, optionally with a witness cycle.

    The witness is a list of edge ids forming a cycle whose mean equals
    ``min_mean`` exactly.
    """

    min_mean: Fraction
    witness_cycle: list | None = None


def goldberg_radzik(g: Graph, source_or_phi) -> SsspResult:
    """Topological-scan shortest paths (GOR).

    With an integer source, returns exact distances from it (or a
    negative-cycle verdict once the pass count exceeds n).  With a
    potential array, every vertex is seeded at -phi(v) against the reduced
    weights and the result carries the updated potential instead.
    ``passes`` records the number of scanning passes.
    """
    out = g.out
    if np.isscalar(source_or_phi) or isinstance(source_or_phi, int):
        source = int(source_or_phi)
        if not (0 <= source < g.n):
            raise ValueError(f"source {source} out of range")
        d0 = np.full(g.n, INF, np.int64)
        d0[source] = 0
        b0 = np.zeros(g.n, np.bool_)
        b0[source] = True
        status, d, passes = K.gor_csr(g.n, out.start, out.vert, out.weight,
                                      d0, b0)
        if status == K.NEG_CYCLE:
            return SsspResult(negative_cycle=True, passes=passes)
        return SsspResult(distances=d, passes=passes)
    phi = np.asarray(source_or_phi, np.int64)
    if len(phi) != g.n:
        raise ValueError("potential length must equal vertex count")
    red = (g.weight + phi[g.tail] - phi[g.head])[out.eid]
    status, d, passes = K.gor_csr(g.n, out.start, out.vert, red, -phi,
                                  np.ones(g.n, np.bool_))
    if status == K.NEG_CYCLE:
        return SsspResult(negative_cycle=True, passes=passes)
    return SsspResult(distances=d, potential=phi + d, passes=passes)


def bellman_ford(g: Graph, source=None) -> SsspResult:
    """Plain Bellman-Ford oracle.

    ``source=None`` means the implicit super source (every vertex seeded
    at 0); the resulting distance array is then a valid potential.  A
    verdict is returned if round n still improves some label.
    """
    if source is None:
        d0 = np.zeros(g.n, np.int64)
    else:
        source = int(source)
        if not (0 <= source < g.n):
            raise ValueError(f"source {source} out of range")
        d0 = np.full(g.n, INF, np.int64)
        d0[source] = 0
    status, d = K.bellman_ford_edges(g.n, g.tail, g.head, g.weight, d0)
    if status == K.NEG_CYCLE:
        return SsspResult(negative_cycle=True)
    if source is None:
        return SsspResult(distances=d, potential=d)
    return SsspResult(distances=d)


# ---------------------------------------------------------------------------
# Karp's minimum cycle mean

def _karp_table(g: Graph) -> np.ndarray:
    """d[k][v] = minimum weight of a walk with exactly k edges ending at v,
    over all start vertices (d[0] = 0 everywhere)."""
    n = g.n
    table = np.full((n + 1, n), INF, np.int64)
    table[0] = 0
    for k in range(1, n + 1):
        prev = table[k - 1]
        ok = prev[g.tail] < INF
        cand = prev[g.tail[ok]] + g.weight[ok]
        row = table[k]
        np.minimum.at(row, g.head[ok], cand)
    return table


def karp_min_cycle_mean(g: Graph, witness: bool = False):
    """Exact minimum cycle mean via Karp's recurrence.

    Returns ``None`` when the graph is acyclic, otherwise a
    :class:`CycleMeanResult` with the mean as an exact Fraction.
    """
    n = g.n
    if n == 0 or g.m == 0:
        return None
    if n > KARP_MAX_N:
        raise ValueError(f"karp oracle limited to n <= {KARP_MAX_N}")
    table = _karp_table(g)
    dn = table[n]
    best = None
    for v in np.flatnonzero(dn < INF):
        worst = None
        for k in range(n):
            dk = table[k][v]
            if dk >= INF:
                continue
            val = Fraction(int(dn[v]) - int(dk), n - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    if best is None:
        return None
    cycle = _tight_cycle(g, best) if witness else None
    return CycleMeanResult(min_mean=best, witness_cycle=cycle)


def _tight_cycle(g: Graph, mean: Fraction) -> list:
    """A cycle achieving the minimum mean exactly.

    Rescale weights to q*w - p (zero minimum cycle mean), take a valid
    potential from super-source Bellman-Ford, and find any cycle among the
    tight (zero reduced weight) edges: every min-mean cycle consists of
    tight edges only, and every cycle of tight edges has mean p/q.
    """
    p, q = mean.numerator, mean.denominator
    w2 = q * g.weight - p
    status, pot = K.bellman_ford_edges(g.n, g.tail, g.head, w2,
                                       np.zeros(g.n, np.int64))
    if status == K.NEG_CYCLE:
        raise AssertionError("rescaled graph has a negative cycle")
    tight = np.flatnonzero(w2 + pot[g.tail] - pot[g.head] == 0)
    # DFS for a cycle in the tight subgraph
    adj = {}
    for e in tight.tolist():
        adj.setdefault(int(g.tail[e]), []).append(e)
    color = {}
    for root in adj:
        if color.get(root):
            continue
        color[root] = 1
        stack = [(root, iter(adj.get(root, ())))]
        path_edges = []
        while stack:
            u, it = stack[-1]
            e = next(it, None)
            if e is None:
                color[u] = 2
                stack.pop()
                if path_edges:
                    path_edges.pop()
                continue
            v = int(g.head[e])
            c = color.get(v, 0)
            if c == 1:
                if int(g.tail[e]) == v:
                    return [e]
                cyc = [e]
                for pe in reversed(path_edges):
                    cyc.insert(0, pe)
                    if int(g.tail[pe]) == v:
                        break
                return cyc
            if c == 0:
                color[v] = 1
                path_edges.append(e)
                stack.append((v, iter(adj.get(v, ()))))
    raise AssertionError("no cycle found in tight subgraph")


def is_restricted(g: Graph):
    """Check w(e) >= -1 for all edges and minimum cycle mean >= 1.

    Returns (flag, reason); reason is '' when restricted, otherwise starts
    with 'weight' or 'mean'.
    """
    if g.m and int(g.weight.min()) < -1:
        return False, f"weight: minimum edge weight {int(g.weight.min())} < -1"
    res = karp_min_cycle_mean(g)
    if res is not None and res.min_mean < 1:
        return False, f"mean: minimum cycle mean {res.min_mean} < 1"
    return True, ""
