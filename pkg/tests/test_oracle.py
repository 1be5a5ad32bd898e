import itertools

import pytest

from oddflower.canon import canonical_key
from oddflower.errors import BudgetExhausted, CapRefusal, InputError
from oddflower.extremal import build_family_member, turan_edge_count
from oddflower.flower import contains_flower, parse_spec, standalone_flower
from oddflower.graph import Graph, complete_graph, disjoint_union, graph6_encode, is_connected, matching_number
from oddflower.oracle import (EnumerationStream, connected_graphs, enumerate_graphs, enumerate_subtree,
                              ex_bruteforce, ex_descending, flower_copies_by_subsets, isolated_free_graphs,
                              iter_with_cursor, lemma7_exhaustive, matching_degree_table, max_packing,
                              min_partition_bruteforce, phi_bruteforce_graph, phi_n_bruteforce, split_tasks)

from test_canon import brute_isomorphic

H11 = parse_spec("1,1:5")
C5 = parse_spec("0,1:5")


def naive_classes(n):
    pairs = list(itertools.combinations(range(n), 2))
    reps = []
    for mask in range(1 << len(pairs)):
        g = Graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
        if not any(brute_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps


@pytest.mark.parametrize("n", range(0, 6))
def test_enumeration_matches_pairwise_filtering(n):
    ours = list(enumerate_graphs(EnumerationStream(n)))
    naive = naive_classes(n)
    assert len(ours) == len(naive)
    for g in naive:
        assert sum(brute_isomorphic(g, h) for h in ours) == 1


def test_enumeration_counts():
    assert [sum(1 for _ in enumerate_graphs(EnumerationStream(n))) for n in range(8)] == \
        [1, 1, 2, 4, 11, 34, 156, 1044]
    assert [sum(1 for _ in enumerate_graphs(EnumerationStream(n, connected=True))) for n in range(1, 8)] == \
        [1, 1, 2, 6, 21, 112, 853]


def test_filtered_enumeration():
    out = list(enumerate_graphs(EnumerationStream(5, max_degree=2, no_isolated=True)))
    assert out
    for g in out:
        assert g.max_degree() <= 2 and min(g.degrees()) >= 1
    assert len({canonical_key(g) for g in out}) == len(out)
    capped = list(enumerate_graphs(EnumerationStream(6, max_matching=1)))
    assert all(matching_number(g) <= 1 for g in capped)
    # matching number at most one: the stars K_{1,r} for r = 0..5 and the triangle
    assert len(capped) == 7


def test_enumeration_cap_and_cursor():
    with pytest.raises(CapRefusal):
        list(enumerate_graphs(EnumerationStream(11)))
    stream = EnumerationStream(5)
    full = [graph6_encode(g) for g in enumerate_graphs(stream)]
    it = iter_with_cursor(stream)
    head = [next(it) for _ in range(10)]
    cursor = head[-1][1]
    rest = [graph6_encode(g) for g in enumerate_graphs(EnumerationStream(5, cursor=cursor))]
    assert [graph6_encode(g) for g, _ in head] + rest == full
    with pytest.raises(InputError):
        list(enumerate_graphs(EnumerationStream(5, cursor="!!")))


@pytest.mark.parametrize("depth", [0, 2, 4, 6, 9])
def test_split_reproduces_sequential_order(depth):
    stream = EnumerationStream(6)
    seq = [graph6_encode(g) for g in enumerate_graphs(stream)]
    par = [graph6_encode(g) for root in split_tasks(stream, depth) for g in enumerate_subtree(stream, root)]
    assert seq == par


def test_component_generators():
    conn = connected_graphs(5)
    assert all(is_connected(g) for g in conn)
    assert len(conn) == 1 + 2 + 6 + 21
    free = list(isolated_free_graphs(6))
    # order n isolated-free classes number g(n) - g(n-1), with g the total class count
    by_n = {}
    for g in free:
        by_n[g.n] = by_n.get(g.n, 0) + 1
    assert by_n == {0: 1, 2: 1, 3: 2, 4: 7, 5: 23, 6: 122}


def test_isolated_free_agrees_with_direct_filter():
    for n in range(1, 7):
        direct = {canonical_key(g) for g in enumerate_graphs(EnumerationStream(n, no_isolated=True))}
        built = {canonical_key(g) for g in isolated_free_graphs(n) if g.n == n}
        assert direct == built


def test_ex_small_orders():
    assert ex_bruteforce(6, H11).value == 15
    cert = ex_bruteforce(7, H11)
    assert cert.value < 21
    for w in cert.witnesses:
        assert contains_flower(w, H11) is None and w.edge_count == cert.value
    assert cert.to_json()["witnesses"]


@pytest.mark.parametrize("n", range(4, 8))
def test_ex_two_strategies_agree(n):
    for spec in (C5, H11):
        a = ex_bruteforce(n, spec)
        b = ex_descending(n, spec)
        assert a.value == b.value
        assert {canonical_key(w) for w in a.witnesses} == {canonical_key(w) for w in b.witnesses}


def test_ex_frozen_values():
    # values established by both strategies above
    assert [ex_bruteforce(n, C5).value for n in range(4, 8)] == [6, 7, 9, 12]
    assert ex_bruteforce(7, H11).value == 16


def test_ex_single_pentagon_order_eight():
    a = ex_bruteforce(8, C5)
    b = ex_descending(8, C5)
    assert a.value == b.value == 16


def test_ex_budget_partial():
    with pytest.raises(BudgetExhausted) as exc:
        ex_bruteforce(7, H11, budget=50)
    assert exc.value.partial is not None and not exc.value.partial.complete


def test_ex_at_least_family_when_constructible():
    spec = parse_spec("0,1:5")
    for n in (4, 6, 7):
        try:
            fam = build_family_member(n, spec)
        except InputError:
            continue
        assert ex_bruteforce(n, spec).value >= fam.edge_count == turan_edge_count(n, 2)


def test_max_packing_examples():
    assert max_packing(build_family_member(14, H11), H11).value == 0
    f, _ = standalone_flower(H11)
    assert max_packing(f, H11).value == 1
    k7 = max_packing(complete_graph(7), H11)
    assert k7.exact and k7.value == 2
    fc, _ = standalone_flower(C5)
    for r in (1, 2, 3):
        g = disjoint_union(*([fc] * r))
        res = max_packing(g, C5)
        assert res.value == r == g.edge_count // C5.edge_count


def test_max_packing_budget_flag():
    res = max_packing(complete_graph(9), C5, budget=3)
    assert not res.exact and res.value <= 36 // 5


def test_phi_examples():
    f, _ = standalone_flower(H11)
    assert phi_bruteforce_graph(f, H11) == 1
    g = Graph(f.n + 1, f.edges() + [(0, f.n)])
    assert phi_bruteforce_graph(g, H11) == 2
    fam = build_family_member(14, H11)
    assert phi_bruteforce_graph(fam, H11) == fam.edge_count
    assert min_partition_bruteforce(g, H11) == 2


def test_phi_n():
    assert phi_n_bruteforce(5, H11).value == 10
    cert = phi_n_bruteforce(7, H11)
    assert cert.value == 16
    assert cert.value >= ex_bruteforce(7, H11).value


def test_subset_scan_counts_copies():
    fc, _ = standalone_flower(C5)
    assert len(flower_copies_by_subsets(complete_graph(5), C5)) == 12
    assert len(flower_copies_by_subsets(fc, C5)) == 1


def test_exhaustive_checks():
    assert lemma7_exhaustive(1, 1)["pass"]
    rep = lemma7_exhaustive(2, 2)
    assert rep["pass"] and len(rep["witnesses"]) == 1
    rep = lemma7_exhaustive(3, 1)
    assert rep["pass"] and len(rep["witnesses"]) == 2
    with pytest.raises(CapRefusal):
        lemma7_exhaustive(4, 1)
    assert matching_degree_table(2, 2, 7)["pass"]


def test_graph6_roundtrip_on_all_small_graphs():
    from oddflower.graph import graph6_decode
    for n in range(8):
        for g in enumerate_graphs(EnumerationStream(n)):
            assert graph6_decode(graph6_encode(g)) == g
