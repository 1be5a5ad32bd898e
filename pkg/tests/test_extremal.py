import pytest
from hypothesis import given, strategies as st

from oddflower.errors import InputError
from oddflower.extremal import (build_family_member, build_theorem1_extremal, chvatal_hanson_f,
                                complete_bipartite_block, ex_formula, g_of_k, lemma2_bound_holds,
                                lemma7_hypothesis_holds, normalize_variant, bounded_degree_block_edges,
                                three_triangles, turan_edge_count, turan_graph, turan_part_sizes,
                                two_cliques)
from oddflower.flower import parse_spec
from oddflower.graph import Graph, matching_number

from conftest import graphs


def test_g_of_k_values():
    assert [g_of_k(k) for k in range(1, 9)] == [0, 1, 6, 10, 20, 27, 42, 52]
    with pytest.raises(InputError):
        g_of_k(0)


def test_chvatal_hanson_values():
    assert chvatal_hanson_f(3, 2) == 9
    assert chvatal_hanson_f(1, 1) == 1
    assert chvatal_hanson_f(3, 3) == 10
    assert all(chvatal_hanson_f(a, b) <= a * (b + 1) for a in range(1, 51) for b in range(1, 51))


@given(st.integers(2, 40), st.integers(2, 6))
def test_turan_counts(n, r):
    if n < r:
        return
    g = turan_graph(n, r)
    assert g.edge_count == turan_edge_count(n, r)
    sizes = turan_part_sizes(n, r)
    assert max(sizes) - min(sizes) <= 1 and sum(sizes) == n


def test_turan_multipartite():
    g = turan_graph(9, 3)
    assert g.edge_count == 27 and g.degrees() == [6] * 9
    with pytest.raises(InputError):
        turan_graph(2, 3)


def test_family_member_edge_counts():
    assert build_family_member(20, parse_spec("1,1:5")).edge_count == 101
    assert build_family_member(20, parse_spec("3,1:5"), "3K3").edge_count == 109
    for text in ("0,1:5", "0,2:5,5", "2,1:7"):
        spec = parse_spec(text)
        for n in range(14, 25):
            assert build_family_member(n, spec).edge_count == ex_formula(n, spec)


def test_family_member_errors():
    with pytest.raises(InputError):
        build_family_member(20, parse_spec("1,1:5"), "3K3")
    with pytest.raises(InputError):
        build_family_member(5, parse_spec("3,1:5"), "3K3")
    with pytest.raises(InputError):
        normalize_variant("petersen")


@pytest.mark.parametrize("k", range(1, 9))
def test_bounded_degree_block_shape(k):
    edges, size = bounded_degree_block_edges(k)
    h = Graph(size, edges)
    assert h.edge_count == g_of_k(k)
    assert h.max_degree() == k - 1
    assert matching_number(h) == k - 1


def test_bounded_degree_extremal_counts():
    assert build_theorem1_extremal(30, 3).edge_count == 231
    assert build_theorem1_extremal(30, 2).edge_count == 226
    for k in range(1, 9):
        assert build_theorem1_extremal(40, k).edge_count == 400 + g_of_k(k)


def test_standalone_blocks():
    assert three_triangles().edge_count == 9
    assert complete_bipartite_block(3).edge_count == 9
    assert two_cliques(3).edge_count == 6


@given(graphs(max_n=8))
def test_sum_min_bound(g):
    for b in range(0, max(g.max_degree() - 1, 0)):
        assert lemma2_bound_holds(g, b)


def test_sum_min_bound_domain():
    with pytest.raises(InputError):
        lemma2_bound_holds(Graph(3, [(0, 1)]), 0)


def test_hypothesis_checker():
    assert lemma7_hypothesis_holds(complete_bipartite_block(3), 2, 2)
    assert lemma7_hypothesis_holds(three_triangles(), 3, 1)
    assert not lemma7_hypothesis_holds(three_triangles(), 2, 2)
    with pytest.raises(InputError):
        lemma7_hypothesis_holds(Graph(2), 1, 1)
