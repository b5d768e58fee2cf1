"""Graph container, views, and DIMACS round-trips."""

import numpy as np
import pytest

from nwsssp import (DimacsError, Graph, INF, apply_potential,
                    clamp_nonnegative, graphs_equal, induced_subgraph,
                    is_valid_potential, load_dimacs, reduced_weights,
                    reversed_graph, save_dimacs)
from nwsssp.generators import gen_bad_bfct, gen_bad_rd1, gen_bad_rd2


def small_graph():
    return Graph(3, np.array([0, 1, 0]), np.array([1, 2, 2]),
                 np.array([-5, 3, 1]))


def test_edge_access_and_adjacency():
    g = small_graph()
    assert g.n == 3 and g.m == 3
    assert sorted(g.edges()) == [(0, 1, -5), (0, 2, 1), (1, 2, 3)]
    out = g.out
    assert list(out.vert[out.start[0]:out.start[1]]) in ([1, 2], [2, 1])
    inc = g.inc
    assert set(inc.vert[inc.start[2]:inc.start[3]]) == {0, 1}


def test_parallel_edges_and_self_loops_allowed():
    g = Graph(2, np.array([0, 0, 1]), np.array([1, 1, 1]),
              np.array([1, 2, 0]))
    assert g.m == 3
    assert g.out.start[1] - g.out.start[0] == 2


def test_dimacs_round_trip(tmp_path):
    g = gen_bad_bfct(4)
    path = tmp_path / "g.gr"
    save_dimacs(g, path)
    h = load_dimacs(path)
    assert (h.n, h.m) == (15, 17)
    assert graphs_equal(g, h)


def test_dimacs_round_trip_is_byte_identical(tmp_path):
    g = gen_bad_rd1(6)
    a, b = tmp_path / "a.gr", tmp_path / "b.gr"
    save_dimacs(g, a)
    save_dimacs(load_dimacs(a), b)
    assert a.read_bytes() == b.read_bytes()


def test_dimacs_errors_carry_line_numbers(tmp_path):
    bad = tmp_path / "bad.gr"
    bad.write_text("p sp 2 1\na 1 3 5\n")
    with pytest.raises(DimacsError, match=r":2: "):
        load_dimacs(bad)
    bad.write_text("p sp 2 2\na 1 2 5\n")
    with pytest.raises(DimacsError, match="arc"):
        load_dimacs(bad)
    bad.write_text("a 1 2 5\n")
    with pytest.raises(DimacsError):
        load_dimacs(bad)


def test_reversed_is_involution():
    g = gen_bad_rd1(5)
    assert graphs_equal(reversed_graph(reversed_graph(g)), g)
    r = reversed_graph(g)
    assert sorted(zip(r.tail, r.head)) == sorted(zip(g.head, g.tail))


def test_clamp_nonnegative():
    g = small_graph()
    c = clamp_nonnegative(g)
    assert list(c.weight) == [0, 3, 1]
    assert graphs_equal(Graph(c.n, c.tail, c.head, c.weight), c)


def test_induced_subgraph_rd2_lower_rows():
    # the two original ladder rows of the k=5 construction: vertices 0..9
    g = gen_bad_rd2(5)
    sub, orig = induced_subgraph(g, np.arange(10))
    assert sub.n == 10 and sub.m == 13
    assert list(orig) == list(range(10))


def test_potentials_and_reduced_weights():
    g = small_graph()
    phi = np.array([0, -5, -4])
    red = reduced_weights(g, phi)
    assert list(red) == [0, 2, 5]
    assert is_valid_potential(g, phi)
    assert not is_valid_potential(g, np.zeros(3, np.int64))
    shifted = apply_potential(g, phi)
    assert list(shifted.weight) == [0, 2, 5]


def test_uniform_potential_shift_is_identity():
    g = small_graph()
    red = reduced_weights(g, np.full(3, 17, np.int64))
    assert list(red) == list(g.weight)


def test_empty_and_single_vertex():
    g = Graph(1, np.empty(0, np.int64), np.empty(0, np.int64),
              np.empty(0, np.int64))
    assert g.m == 0 and list(g.out.start) == [0, 0]
