import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oddflower.errors import CapRefusal, InputError, ParseError
from oddflower.graph import (_n_encode, CutState, Graph, best_local_cut, bits, complete_bipartite, complete_graph,
                             component_count, cut_vertices, cycle_graph, disjoint_union, edgelist_decode,
                             edgelist_encode, exact_max_cut, graph6_decode, graph6_encode, improve_cut,
                             induced_subgraph, is_connected, is_matching, local_max_cut, matching_number,
                             matching_number_of_edgeset, maximum_matching, parity_cut, parse_graph,
                             path_graph, petersen_graph, random_graph, restricted_edge_set, sniff_format)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def brute_matching_number(g):
    def rec(free):
        for v in range(g.n):
            if free >> v & 1:
                rest = free & ~(1 << v)
                best = rec(rest)
                for u in bits(g.adj[v] & rest):
                    best = max(best, 1 + rec(rest & ~(1 << u)))
                return best
        return 0
    return rec(g.all_mask)


def brute_max_cut(g):
    best = 0
    for side in range(1 << max(g.n - 1, 0)):
        best = max(best, sum(1 for a, b in g.edges() if ((side >> a) ^ (side >> b)) & 1))
    return best


def test_basic_construction_and_errors():
    g = Graph(4, [(0, 1), (1, 2)])
    assert g.edge_count == 2 and g.degree(1) == 2 and g.has_edge(2, 1)
    with pytest.raises(InputError):
        g.add_edge(0, 0)
    with pytest.raises(InputError):
        g.add_edge(0, 1)
    with pytest.raises(InputError):
        g.add_edge(0, 7)
    with pytest.raises(InputError):
        Graph(-1)
    removed = g.isolate(1)
    assert sorted(removed) == [(0, 1), (1, 2)] and g.edge_count == 0


def test_named_graphs():
    assert complete_graph(6).edge_count == 15
    assert complete_bipartite(3, 4).edge_count == 12
    assert cycle_graph(7).degrees() == [2] * 7
    p = petersen_graph()
    assert p.edge_count == 15 and p.degrees() == [3] * 10
    assert matching_number(p) == 5


def test_graph6_known_strings():
    assert graph6_encode(complete_graph(4)) == "C~"
    assert graph6_encode(Graph(0)) == "?"
    assert graph6_decode(">>graph6<<C~") == complete_graph(4)


@pytest.mark.parametrize("n", [0, 1, 5, 62, 63, 64, 100])
def test_graph6_size_tiers(n):
    g = Graph(n, [(0, n - 1)] if n >= 2 else [])
    assert graph6_decode(graph6_encode(g)) == g


def test_graph6_order_prefix_tiers():
    # the three order encodings of the format description
    assert _n_encode(62) == "}"
    assert _n_encode(63) == "~??~"
    assert _n_encode(460175067) == "~~?ZZZZZ"
    assert _n_encode(258048) == "~~???~??"


def test_graph6_against_networkx():
    nx = pytest.importorskip("networkx")
    for seed in range(20):
        g = random_graph(12 + seed, 0.3, seed)
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges())
        theirs = nx.to_graph6_bytes(h, header=False).decode().strip()
        assert graph6_encode(g) == theirs


@given(graphs())
def test_graph6_roundtrip(g):
    assert graph6_decode(graph6_encode(g)) == g


@given(graphs())
def test_edgelist_roundtrip(g):
    assert edgelist_decode(edgelist_encode(g)) == g
    assert parse_graph(edgelist_encode(g)) == g
    assert parse_graph(graph6_encode(g)) == g


def test_parse_errors_report_offsets():
    with pytest.raises(ParseError) as exc:
        graph6_decode("D?")
    assert exc.value.offset is not None
    with pytest.raises(ParseError) as exc:
        graph6_decode("C\x01")
    assert exc.value.offset == 1
    with pytest.raises(ParseError) as exc:
        edgelist_decode("3 1\n0 x\n")
    assert exc.value.offset == 4
    with pytest.raises(ParseError):
        edgelist_decode("3 2\n0 1\n")
    with pytest.raises(ParseError):
        edgelist_decode("3 1\n0 0\n")


def test_sniff():
    assert sniff_format("# c\n3 1\n0 1\n") == "edgelist"
    assert sniff_format("C~\n") == "graph6"


@settings(max_examples=150)
@given(graphs(max_n=10))
def test_matching_matches_brute_force(g):
    m = maximum_matching(g)
    assert is_matching(g, m)
    assert len(m) == brute_matching_number(g)


def test_matching_against_networkx():
    nx = pytest.importorskip("networkx")
    for seed in range(30):
        g = random_graph(30, 0.15, seed)
        h = nx.Graph(g.edges())
        assert matching_number(g) == len(nx.max_weight_matching(h, maxcardinality=True))


def test_matching_on_vertex_subset_and_edgeset():
    g = complete_graph(6)
    assert matching_number(g, [0, 1, 2]) == 1
    assert matching_number_of_edgeset(g, [(0, 1), (1, 2), (3, 4)]) == 2
    with pytest.raises(InputError):
        matching_number_of_edgeset(path_graph(3), [(0, 2)])


def test_restricted_edge_set():
    g = complete_graph(5)
    es = restricted_edge_set(g, [1, 2, 4], 0)
    assert sorted(es) == [(1, 2), (1, 4), (2, 4)]


@given(graphs(max_n=10), st.integers(0, 50))
def test_local_max_cut_is_locally_maximal(g, seed):
    cut = local_max_cut(g, seed)
    assert cut.consistent_with(g)
    for v in range(g.n):
        assert cut.out_degree(g, v) >= cut.in_degree(g, v)


@given(graphs(max_n=9))
def test_exact_max_cut_matches_brute_force(g):
    assert exact_max_cut(g).e_cross == brute_max_cut(g)


def test_exact_cut_cap():
    with pytest.raises(CapRefusal):
        exact_max_cut(Graph(21))


def test_cut_state_and_parity():
    g = complete_bipartite(3, 3)
    cut = parity_cut(g)
    assert cut.e_in == (0, 0) and cut.e_cross == 9
    best = best_local_cut(g)
    assert best.e_cross == 9
    with pytest.raises(InputError):
        CutState.of(g, (0b11, 0b10))
    cut = CutState.from_sides(g, [0, 0, 0, 1, 1, 1])
    assert cut.side(4) == 1 and cut.sizes() == (3, 3)


def test_improve_cut_terminates_on_odd_cycle():
    g = cycle_graph(5)
    side = improve_cut(g, [0] * 5)
    assert sum(1 for a, b in g.edges() if side[a] != side[b]) == 4


@given(graphs(max_n=9))
def test_components_and_cut_vertices(g):
    base = component_count(g)
    cuts = cut_vertices(g)
    for v in range(g.n):
        h, _ = induced_subgraph(g, g.all_mask & ~(1 << v))
        # removing v changes the count by (pieces - 1) where an isolated v loses one component
        after = component_count(h)
        is_cut = after > base - (1 if g.degree(v) == 0 else 0)
        assert is_cut == bool(cuts >> v & 1)


def test_connectivity_helpers():
    assert is_connected(path_graph(5))
    assert not is_connected(disjoint_union(path_graph(2), path_graph(2)))
    assert list(bits(cut_vertices(path_graph(4)))) == [1, 2]


@given(graphs(max_n=10), st.integers(0, 20))
def test_cut_edge_accounting(g, seed):
    cut = local_max_cut(g, seed)
    assert cut.e_in[0] + cut.e_in[1] + cut.e_cross == g.edge_count
    assert cut.m == cut.e_in[0] + cut.e_in[1]
