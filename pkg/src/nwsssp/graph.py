"""Directed weighted graph core: representation, views and DIMACS I/O.

Vertices are dense 0-based integers.  Weights, potentials and distances are
64-bit signed integers; ``INF`` is the unreachable sentinel.  Graphs are
immutable after construction; the CSR adjacency indexes (both directions)
are built lazily and cached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INF = 1 << 62

# Checked input bounds: 64-bit arithmetic on potentials/distances is safe
# for |w| <= 2^31 and n <= 2^26.
MAX_ABS_WEIGHT = 1 << 31
MAX_VERTICES = 1 << 26


class DimacsError(ValueError):
    """Malformed DIMACS shortest-path input."""


@dataclass(frozen=True)
class Csr:
    """Compressed adjacency for one direction.

    ``start[v]:start[v+1]`` slices the neighbor arrays of vertex v.
    ``vert`` holds the other endpoint, ``weight`` the edge weight and
    ``eid`` the edge id in the owning graph's edge list.
    """

    start: np.ndarray
    vert: np.ndarray
    weight: np.ndarray
    eid: np.ndarray


class Graph:
    """Immutable directed multigraph with integer weights."""

    __slots__ = ("n", "m", "tail", "head", "weight", "_out", "_in")

    def __init__(self, n, tail, head, weight, check=True):
        self.n = int(n)
        self.tail = np.ascontiguousarray(tail, dtype=np.int64)
        self.head = np.ascontiguousarray(head, dtype=np.int64)
        self.weight = np.ascontiguousarray(weight, dtype=np.int64)
        self.m = len(self.tail)
        self._out = None
        self._in = None
        if check:
            self._validate()

    def _validate(self):
        if self.n < 0 or self.n > MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} out of supported range")
        if len(self.head) != self.m or len(self.weight) != self.m:
            raise ValueError("edge arrays must have equal length")
        if self.m:
            lo = min(self.tail.min(), self.head.min())
            hi = max(self.tail.max(), self.head.max())
            if lo < 0 or hi >= self.n:
                raise ValueError("edge endpoint out of range")
            if np.abs(self.weight).max() > MAX_ABS_WEIGHT:
                raise ValueError(f"|weight| above supported bound 2^31")

    @classmethod
    def from_edges(cls, n, edges, check=True):
        """Build from an iterable of (tail, head, weight) triples."""
        edges = list(edges)
        if edges:
            t, h, w = zip(*edges)
        else:
            t = h = w = ()
        return cls(n, np.array(t, np.int64), np.array(h, np.int64),
                   np.array(w, np.int64), check=check)

    def edges(self):
        """Edge list as (tail, head, weight) int triples."""
        return list(zip(self.tail.tolist(), self.head.tolist(), self.weight.tolist()))

    def _build_csr(self, tails, heads):
        order = np.argsort(tails, kind="stable")
        start = np.zeros(self.n + 1, np.int64)
        np.cumsum(np.bincount(tails, minlength=self.n), out=start[1:])
        return Csr(start=start, vert=heads[order], weight=self.weight[order],
                   eid=order.astype(np.int64))

    @property
    def out(self) -> Csr:
        if self._out is None:
            self._out = self._build_csr(self.tail, self.head)
        return self._out

    @property
    def inc(self) -> Csr:
        if self._in is None:
            self._in = self._build_csr(self.head, self.tail)
        return self._in

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out.start)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.inc.start)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def graphs_equal(a: Graph, b: Graph) -> bool:
    """Equality up to edge order."""
    if a.n != b.n or a.m != b.m:
        return False
    return sorted(a.edges()) == sorted(b.edges())


# ---------------------------------------------------------------------------
# DIMACS shortest-path format I/O

def load_dimacs(path) -> Graph:
    """Parse a DIMACS sp file.  Vertex ids are shifted to 0-based."""
    n = m = None
    tails = heads = weights = None
    count = 0
    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "p":
                if n is not None:
                    raise DimacsError(f"{path}:{lineno}: duplicate problem line")
                if len(parts) != 4 or parts[1] != "sp":
                    raise DimacsError(f"{path}:{lineno}: expected 'p sp <n> <m>'")
                try:
                    n, m = int(parts[2]), int(parts[3])
                except ValueError:
                    raise DimacsError(f"{path}:{lineno}: bad problem line") from None
                tails = np.empty(m, np.int64)
                heads = np.empty(m, np.int64)
                weights = np.empty(m, np.int64)
            elif parts[0] == "a":
                if n is None:
                    raise DimacsError(f"{path}:{lineno}: arc before problem line")
                if len(parts) != 4:
                    raise DimacsError(f"{path}:{lineno}: expected 'a <u> <v> <w>'")
                if count >= m:
                    raise DimacsError(
                        f"{path}:{lineno}: more arcs than declared ({m})")
                try:
                    u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
                except ValueError:
                    raise DimacsError(f"{path}:{lineno}: bad arc line") from None
                if not (1 <= u <= n and 1 <= v <= n):
                    raise DimacsError(f"{path}:{lineno}: vertex id out of range")
                tails[count] = u - 1
                heads[count] = v - 1
                weights[count] = w
                count += 1
            else:
                raise DimacsError(f"{path}:{lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsError(f"{path}: missing problem line")
    if count != m:
        raise DimacsError(f"{path}: declared {m} arcs, found {count}")
    return Graph(n, tails, heads, weights)


def save_dimacs(g: Graph, path) -> None:
    """Write ``g`` in DIMACS sp format (1-based vertex ids)."""
    with open(path, "w") as fh:
        fh.write(f"p sp {g.n} {g.m}\n")
        if g.m:
            chunks = [
                f"a {t + 1} {h + 1} {w}"
                for t, h, w in zip(g.tail.tolist(), g.head.tolist(),
                                   g.weight.tolist())
            ]
            fh.write("\n".join(chunks))
            fh.write("\n")


# ---------------------------------------------------------------------------
# Views / transforms

def reversed_graph(g: Graph) -> Graph:
    """Flip the orientation of every edge."""
    return Graph(g.n, g.head, g.tail, g.weight, check=False)


def clamp_nonnegative(g: Graph) -> Graph:
    """Same topology with weights max(w, 0)."""
    return Graph(g.n, g.tail, g.head, np.maximum(g.weight, 0), check=False)


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by ``vertices`` with compacted 0-based ids.

    Returns ``(sub, orig_ids)`` where ``orig_ids[new] = old``; the old->new
    direction is recovered by inverting that array.  Keeps exactly the edges
    with both endpoints inside the set.
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    if len(vertices) == 0:
        raise ValueError("induced_subgraph requires a nonempty vertex set")
    new_of_old = np.full(g.n, -1, np.int64)
    new_of_old[vertices] = np.arange(len(vertices), dtype=np.int64)
    keep = (new_of_old[g.tail] >= 0) & (new_of_old[g.head] >= 0)
    sub = Graph(len(vertices), new_of_old[g.tail[keep]], new_of_old[g.head[keep]],
                g.weight[keep], check=False)
    return sub, vertices


def reduced_weights(g: Graph, phi) -> np.ndarray:
    """Per-edge reduced weights w(u,v) + phi(u) - phi(v)."""
    phi = np.asarray(phi, dtype=np.int64)
    if len(phi) != g.n:
        raise ValueError("potential length must equal vertex count")
    return g.weight + phi[g.tail] - phi[g.head]


def apply_potential(g: Graph, phi) -> Graph:
    """Graph with reduced weights; cycle weights are preserved exactly."""
    phi = np.asarray(phi, dtype=np.int64)
    if len(phi) != g.n:
        raise ValueError("potential length must equal vertex count")
    if len(phi) and int(np.abs(phi).max()) > (1 << 61):
        raise OverflowError("potential magnitude too large for safe reduction")
    return Graph(g.n, g.tail, g.head, reduced_weights(g, phi), check=False)


def is_valid_potential(g: Graph, phi) -> bool:
    """True iff every reduced weight under phi is nonnegative."""
    if g.m == 0:
        return len(phi) == g.n
    return bool(reduced_weights(g, phi).min() >= 0)
