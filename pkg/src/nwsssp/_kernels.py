"""JIT-compiled hot loops shared by the solver and the baselines.

Everything here operates on flat CSR arrays (see ``graph.Csr``) with int64
weights; ``INF`` marks unreachable.  The priority queue is a 4-ary heap with
lazy decrease-key (stale entries are skipped on pop).
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = 1 << 62

OK = 0
NEG_CYCLE = 1


# ---------------------------------------------------------------------------
# 4-ary heap primitives

@njit(cache=True, inline="always")
def _hpush(hd, hv, hs, key, v):
    i = hs
    while i > 0:
        p = (i - 1) >> 2
        if hd[p] <= key:
            break
        hd[i] = hd[p]
        hv[i] = hv[p]
        i = p
    hd[i] = key
    hv[i] = v
    return hs + 1


@njit(cache=True, inline="always")
def _hpop(hd, hv, hs):
    top_d = hd[0]
    top_v = hv[0]
    hs -= 1
    key = hd[hs]
    v = hv[hs]
    i = 0
    while True:
        c = (i << 2) + 1
        if c >= hs:
            break
        end = c + 4
        if end > hs:
            end = hs
        best = c
        for j in range(c + 1, end):
            if hd[j] < hd[best]:
                best = j
        if hd[best] >= key:
            break
        hd[i] = hd[best]
        hv[i] = hv[best]
        i = best
    hd[i] = key
    hv[i] = v
    return top_d, top_v, hs


# ---------------------------------------------------------------------------
# Dijkstra (multi-source, optional radius cap and vertex mask)

@njit(cache=True)
def dijkstra_csr(n, start, vert, w, seed_v, seed_d, cap, alive):
    """Nonnegative-weight shortest distances from a seeded vertex set.

    Vertices whose distance would exceed ``cap`` stay at INF.  Vertices with
    ``alive[v] == False`` are ignored entirely.
    """
    dist = np.full(n, INF, np.int64)
    m = len(w)
    hd = np.empty(m + n + 1, np.int64)
    hv = np.empty(m + n + 1, np.int64)
    hs = 0
    for i in range(len(seed_v)):
        v = seed_v[i]
        d0 = seed_d[i]
        if alive[v] and d0 <= cap and d0 < dist[v]:
            dist[v] = d0
            hs = _hpush(hd, hv, hs, d0, v)
    while hs > 0:
        d, u, hs = _hpop(hd, hv, hs)
        if d > dist[u]:
            continue
        for e in range(start[u], start[u + 1]):
            v = vert[e]
            if not alive[v]:
                continue
            nd = d + w[e]
            if nd <= cap and nd < dist[v]:
                dist[v] = nd
                hs = _hpush(hd, hv, hs, nd, v)
    return dist


@njit(cache=True)
def _ball_grow(v0, cap, start, vert, w, alive, dist, hd, hv, ball):
    """Capped Dijkstra from one vertex; returns the ball size.

    ``dist`` must be INF at every alive vertex on entry and is restored
    before returning.  The settled vertices (distance <= cap) are written
    into ``ball``.
    """
    hs = 0
    dist[v0] = 0
    hs = _hpush(hd, hv, hs, 0, v0)
    nball = 0
    while hs > 0:
        d, u, hs = _hpop(hd, hv, hs)
        if d > dist[u]:
            continue
        ball[nball] = u
        nball += 1
        for e in range(start[u], start[u + 1]):
            v = vert[e]
            if not alive[v]:
                continue
            nd = d + w[e]
            if nd <= cap and nd < dist[v]:
                dist[v] = nd
                hs = _hpush(hd, hv, hs, nd, v)
    for i in range(nball):
        dist[ball[i]] = INF
    return nball


@njit(cache=True)
def mark_rounds(n, start, vert, w, alive, sources, radius):
    """Ball-marking rounds of the light-vertex estimate.

    Grows one ball of ``radius`` per source (over the given adjacency
    direction, clamped weights) and counts per vertex how many balls
    contained it.
    """
    marks = np.zeros(n, np.int64)
    dist = np.full(n, INF, np.int64)
    m = len(w)
    hd = np.empty(m + n + 1, np.int64)
    hv = np.empty(m + n + 1, np.int64)
    ball = np.empty(n, np.int64)
    for i in range(len(sources)):
        nball = _ball_grow(sources[i], radius, start, vert, w, alive, dist,
                           hd, hv, ball)
        for j in range(nball):
            marks[ball[j]] += 1
    return marks


@njit(cache=True)
def carve_balls(n, start, vert, w, eid, alive, light, order, radii, sep_out):
    """Ball-carving loop of the decomposition, one direction.

    Processes candidate centers in ``order``; the i-th candidate, if still
    alive and light, grows a ball of radius ``radii[i]`` over the remaining
    graph.  Ball vertices are removed from ``alive``; boundary edge ids
    (from inside the ball to surviving outside vertices) are appended to
    ``sep_out``.  Returns the number of separator edges written.
    """
    dist = np.full(n, INF, np.int64)
    m = len(w)
    hd = np.empty(m + n + 1, np.int64)
    hv = np.empty(m + n + 1, np.int64)
    ball = np.empty(n, np.int64)
    in_ball = np.zeros(n, np.bool_)
    nsep = 0
    for i in range(len(order)):
        v0 = order[i]
        if not alive[v0] or not light[v0]:
            continue
        nball = _ball_grow(v0, radii[i], start, vert, w, alive, dist,
                           hd, hv, ball)
        for j in range(nball):
            in_ball[ball[j]] = True
        for j in range(nball):
            u = ball[j]
            for e in range(start[u], start[u + 1]):
                x = vert[e]
                if alive[x] and not in_ball[x]:
                    sep_out[nsep] = eid[e]
                    nsep += 1
        for j in range(nball):
            u = ball[j]
            in_ball[u] = False
            alive[u] = False
            light[u] = False
    return nsep


# ---------------------------------------------------------------------------
# LazyDijkstra: Dijkstra on nonnegative reduced edges interleaved with
# Bellman-Ford rounds over the negative reduced edges.

@njit(cache=True)
def lazy_dijkstra_csr(n, start, vert, wred, d_init, max_improve):
    """Shortest-distance fixpoint of the seeded super source.

    ``wred`` are reduced weights; ``d_init`` the per-vertex seed values.
    Improvement counts are tracked per vertex over the Bellman-Ford rounds
    only; exceeding ``max_improve`` reports a negative cycle.
    """
    d = d_init.copy()
    m = len(wred)
    hd = np.empty(m + n + 1, np.int64)
    hv = np.empty(m + n + 1, np.int64)
    q = np.empty(n, np.int64)
    a_buf = np.empty(n, np.int64)
    in_a = np.zeros(n, np.bool_)
    in_q = np.zeros(n, np.bool_)
    counts = np.zeros(n, np.int64)
    qn = n
    for v in range(n):
        q[v] = v
    while qn > 0:
        # Dijkstra phase over edges with nonnegative reduced weight
        hs = 0
        for i in range(qn):
            v = q[i]
            in_q[v] = False
            hs = _hpush(hd, hv, hs, d[v], v)
        an = 0
        while hs > 0:
            du, u, hs = _hpop(hd, hv, hs)
            if du > d[u]:
                continue
            if not in_a[u]:
                in_a[u] = True
                a_buf[an] = u
                an += 1
            for e in range(start[u], start[u + 1]):
                if wred[e] >= 0:
                    v = vert[e]
                    nd = du + wred[e]
                    if nd < d[v]:
                        d[v] = nd
                        hs = _hpush(hd, hv, hs, nd, v)
        # one Bellman-Ford round over the negative edges out of A
        qn = 0
        for i in range(an):
            u = a_buf[i]
            in_a[u] = False
            for e in range(start[u], start[u + 1]):
                if wred[e] < 0:
                    v = vert[e]
                    nd = d[u] + wred[e]
                    if nd < d[v]:
                        d[v] = nd
                        counts[v] += 1
                        if counts[v] > max_improve:
                            return NEG_CYCLE, d
                        if not in_q[v]:
                            in_q[v] = True
                            q[qn] = v
                            qn += 1
    return OK, d


# ---------------------------------------------------------------------------
# Goldberg-Radzik topological-scan algorithm

@njit(cache=True)
def gor_csr(n, start, vert, w, d_init, b_init):
    """Two-phase topological-scan label correcting.

    Per pass: depth-first order the admissible subgraph reachable from the
    set of vertices needing scans, then scan in that order.  An edge is
    followed during the ordering phase iff its tail is labeled and
    d(u) + w <= d(v); unlabeled (INF) vertices enter the order but are
    never expanded, so new labels spread one scan layer per pass — the
    behavior that makes the classic pathological families quadratic.
    Reports a negative cycle once the pass count exceeds n.

    Returns (status, distances, passes).
    """
    d = d_init.copy()
    b = np.empty(n, np.int64)
    in_b = np.zeros(n, np.bool_)
    bn = 0
    for v in range(n):
        if b_init[v]:
            b[bn] = v
            bn += 1
            in_b[v] = True
    order = np.empty(n, np.int64)
    visited = np.zeros(n, np.bool_)
    stack_v = np.empty(n, np.int64)
    stack_e = np.empty(n, np.int64)
    passes = 0
    while bn > 0:
        passes += 1
        if passes > n:
            return NEG_CYCLE, d, passes
        # phase 1: DFS postorder of the admissible subgraph
        on = 0
        for i in range(bn):
            root = b[i]
            in_b[root] = False
            if visited[root] or d[root] == INF:
                continue
            eligible = False
            for e in range(start[root], start[root + 1]):
                if d[root] + w[e] < d[vert[e]]:
                    eligible = True
                    break
            if not eligible:
                continue
            sp = 0
            stack_v[sp] = root
            stack_e[sp] = start[root]
            visited[root] = True
            while sp >= 0:
                u = stack_v[sp]
                e = stack_e[sp]
                if e >= start[u + 1]:
                    order[on] = u
                    on += 1
                    sp -= 1
                    continue
                stack_e[sp] = e + 1
                v = vert[e]
                if visited[v]:
                    continue
                if d[u] != INF and d[u] + w[e] <= d[v]:
                    visited[v] = True
                    sp += 1
                    stack_v[sp] = v
                    stack_e[sp] = start[v]
        # phase 2: scan in reverse postorder
        bn = 0
        for i in range(on - 1, -1, -1):
            u = order[i]
            visited[u] = False
            if d[u] == INF:
                continue
            for e in range(start[u], start[u + 1]):
                v = vert[e]
                nd = d[u] + w[e]
                if nd < d[v]:
                    d[v] = nd
                    if not in_b[v]:
                        in_b[v] = True
                        b[bn] = v
                        bn += 1
    return OK, d, passes


# ---------------------------------------------------------------------------
# Bellman-Ford (edge-list relaxation; test oracle)

@njit(cache=True)
def bellman_ford_edges(n, tail, head, w, d_init):
    """Plain Bellman-Ford; verdict if round n still improves."""
    d = d_init.copy()
    m = len(w)
    for _ in range(n - 1):
        changed = False
        for e in range(m):
            u = tail[e]
            if d[u] == INF:
                continue
            nd = d[u] + w[e]
            if nd < d[head[e]]:
                d[head[e]] = nd
                changed = True
        if not changed:
            return OK, d
    for e in range(m):
        u = tail[e]
        if d[u] == INF:
            continue
        if d[u] + w[e] < d[head[e]]:
            return NEG_CYCLE, d
    return OK, d


# ---------------------------------------------------------------------------
# Kosaraju-Sharir strongly connected components

@njit(cache=True)
def kosaraju_csr(n, out_start, out_vert, out_keep, in_start, in_vert, in_keep):
    """SCC ids numbered in topological order of the condensation.

    Pass 1 computes a DFS finish order on the forward graph; pass 2 runs
    DFS on the reverse graph in decreasing finish time.  Edges with a False
    ``keep`` flag are ignored (used to exclude separator edges).
    """
    comp = np.full(n, -1, np.int64)
    finish = np.empty(n, np.int64)
    nf = 0
    stack_v = np.empty(n, np.int64)
    stack_e = np.empty(n, np.int64)
    visited = np.zeros(n, np.bool_)
    for s in range(n):
        if visited[s]:
            continue
        sp = 0
        stack_v[sp] = s
        stack_e[sp] = out_start[s]
        visited[s] = True
        while sp >= 0:
            u = stack_v[sp]
            e = stack_e[sp]
            if e >= out_start[u + 1]:
                finish[nf] = u
                nf += 1
                sp -= 1
                continue
            stack_e[sp] = e + 1
            if not out_keep[e]:
                continue
            v = out_vert[e]
            if not visited[v]:
                visited[v] = True
                sp += 1
                stack_v[sp] = v
                stack_e[sp] = out_start[v]
    ncomp = 0
    for i in range(n - 1, -1, -1):
        s = finish[i]
        if comp[s] >= 0:
            continue
        sp = 0
        stack_v[sp] = s
        stack_e[sp] = in_start[s]
        comp[s] = ncomp
        while sp >= 0:
            u = stack_v[sp]
            e = stack_e[sp]
            if e >= in_start[u + 1]:
                sp -= 1
                continue
            stack_e[sp] = e + 1
            if not in_keep[e]:
                continue
            v = in_vert[e]
            if comp[v] < 0:
                comp[v] = ncomp
                sp += 1
                stack_v[sp] = v
                stack_e[sp] = in_start[v]
        ncomp += 1
    return comp, ncomp
