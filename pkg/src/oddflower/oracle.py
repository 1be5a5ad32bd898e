"""Exhaustive ground truth at small scale.

Graphs are generated one per isomorphism class by canonical augmentation:
a child is the parent plus one new vertex, and it is kept only when the new
vertex is (up to automorphism) the canonical vertex to delete.  Filters that
survive vertex deletion prune during generation.
"""

from __future__ import annotations

import base64
import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator

from .canon import canonical_key, canonical_labeling, invariant_partition
from .errors import BudgetExhausted, CapRefusal, InputError
from .extremal import (chvatal_hanson_f, complete_bipartite_block, degree_matching_hypothesis_holds,
                       sum_min_bound_holds, three_triangles)
from .flower import (DEFAULT_BUDGET, FlowerEmbedding, FlowerSpec, contains_flower, iter_flowers,
                     standalone_flower)
from .graph import (Graph, bits, complete_graph, component_masks, cut_vertices, disjoint_union,
                    graph6_decode, graph6_encode, induced_subgraph, is_connected, matching_number)

ENUM_CAP = 10
FILTERED_CAP = 18


@dataclass(frozen=True)
class EnumerationStream:
    """Parameters of an enumeration.  ``hereditary`` must be closed under vertex deletion."""

    n: int
    max_edges: int | None = None
    min_degree: int | None = None
    max_degree: int | None = None
    max_matching: int | None = None
    connected: bool = False
    no_isolated: bool = False
    hereditary: Callable[[Graph], bool] | None = None
    cursor: str | None = None

    @property
    def pruning(self) -> bool:
        return any(v is not None for v in (self.max_edges, self.max_degree, self.max_matching, self.hereditary))


def encode_cursor(data: dict) -> str:
    return base64.urlsafe_b64encode(json.dumps(data, sort_keys=True).encode()).decode()


def decode_cursor(token: str) -> dict:
    try:
        return json.loads(base64.urlsafe_b64decode(token.encode()))
    except Exception:
        raise InputError(f"malformed cursor {token!r}") from None


class _Generator:
    def __init__(self, stream: EnumerationStream, budget: int | None = None):
        cap = FILTERED_CAP if stream.pruning else ENUM_CAP
        if stream.n > cap:
            raise CapRefusal(f"enumeration refused for n={stream.n} > {cap}")
        if stream.n < 0:
            raise InputError("order must be nonnegative")
        self.st = stream
        self.budget = budget
        self.nodes = 0

    def _invariant(self, g: Graph):
        deg = g.degrees()
        nsum = [sum(deg[u] for u in bits(g.adj[v])) for v in range(g.n)]
        if self.st.connected:
            cuts = cut_vertices(g)
            return [(0 if cuts >> v & 1 else 1, deg[v], nsum[v]) for v in range(g.n)]
        return [(deg[v], nsum[v]) for v in range(g.n)]

    def _admissible(self, parent: Graph, s: int) -> bool:
        st = self.st
        if st.max_edges is not None and parent.edge_count + s.bit_count() > st.max_edges:
            return False
        if st.max_degree is not None:
            if s.bit_count() > st.max_degree:
                return False
            for u in bits(s):
                if parent.degree(u) >= st.max_degree:
                    return False
        return True

    def children(self, parent: Graph, parent_key) -> Iterator[Graph]:
        st = self.st
        p = parent.n
        allowed = [v for v in range(p) if st.max_degree is None or parent.degree(v) < st.max_degree]
        top = len(allowed)
        if st.max_degree is not None:
            top = min(top, st.max_degree)
        if st.max_edges is not None:
            top = min(top, st.max_edges - parent.edge_count)
        lo = 1 if st.connected and p >= 1 else 0
        seen = set()
        for size in range(lo, top + 1):
            for combo in combinations(allowed, size):
                s = 0
                for v in combo:
                    s |= 1 << v
                if not self._admissible(parent, s):
                    continue
                self.tick()
                child = Graph.from_adjacency([parent.adj[v] | ((s >> v & 1) << p) for v in range(p)] + [s])
                if st.max_matching is not None and matching_number(child) > st.max_matching:
                    continue
                if st.hereditary is not None and not st.hereditary(child):
                    continue
                key = self._accept(child, parent_key)
                if key is None or key in seen:
                    continue
                seen.add(key)
                yield child

    def _accept(self, child: Graph, parent_key):
        v = child.n - 1
        inv = self._invariant(child)
        top = max(inv)
        if inv[v] != top:
            return None
        groups: dict = {}
        for u in range(child.n):
            groups.setdefault(inv[u], []).append(u)
        part = [groups[k] for k in sorted(groups)]
        order, cert, gens = canonical_labeling(child, part)
        w = order[-1]
        if self.st.connected:
            key = canonical_key(child)
        else:
            key = (child.n, cert)
        if w == v:
            return key
        # orbit of v under the automorphisms found so far
        orbit = {v}
        frontier = [v]
        while frontier:
            a = frontier.pop()
            for perm in gens:
                b = perm[a]
                if b not in orbit:
                    orbit.add(b)
                    frontier.append(b)
        if w in orbit:
            return key
        rest, _ = induced_subgraph(child, child.all_mask & ~(1 << w))
        return key if canonical_key(rest) == parent_key else None

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExhausted(self.budget)

    def root(self) -> Graph:
        return Graph(1) if self.st.connected else Graph(0)

    def output_ok(self, g: Graph) -> bool:
        st = self.st
        if st.no_isolated and any(d == 0 for d in g.degrees()):
            return False
        if st.min_degree is not None and g.n and g.min_degree() < st.min_degree:
            return False
        if st.connected and not is_connected(g):
            return False
        return True

    def walk(self, g: Graph, target: int, all_levels: bool = False) -> Iterator[Graph]:
        if all_levels or g.n == target:
            if self.output_ok(g):
                yield g
        if g.n == target:
            return
        key = canonical_key(g)
        for child in self.children(g, key):
            yield from self.walk(child, target, all_levels)

    def nodes_at(self, g: Graph, depth: int) -> Iterator[Graph]:
        if g.n == depth:
            yield g
            return
        key = canonical_key(g)
        for child in self.children(g, key):
            yield from self.nodes_at(child, depth)


def _root_for(stream: EnumerationStream) -> Graph:
    return Graph(1) if stream.connected else Graph(0)


def enumerate_graphs(stream: EnumerationStream, budget: int | None = None) -> Iterator[Graph]:
    """One graph per isomorphism class of order ``stream.n`` passing the filters.

    A cursor (from ``iter_with_cursor``) resumes after the graphs already seen.
    """
    for g, _ in iter_with_cursor(stream, budget):
        yield g


def iter_with_cursor(stream: EnumerationStream, budget: int | None = None):
    gen = _Generator(stream, budget)
    skip = decode_cursor(stream.cursor)["skip"] if stream.cursor else 0
    if stream.connected and stream.n == 0:
        return
    count = 0
    for g in gen.walk(gen.root(), stream.n):
        count += 1
        if count <= skip:
            continue
        yield g, encode_cursor({"skip": count})


def split_tasks(stream: EnumerationStream, depth: int) -> list[str]:
    """Roots (graph6) of the subtrees at ``depth``, in generation order.

    Enumerating the subtrees in this order and concatenating reproduces the
    sequential output exactly.
    """
    gen = _Generator(stream)
    depth = min(depth, stream.n)
    return [graph6_encode(g) for g in gen.nodes_at(gen.root(), depth)]


def enumerate_subtree(stream: EnumerationStream, root_g6: str) -> Iterator[Graph]:
    gen = _Generator(stream)
    yield from gen.walk(graph6_decode(root_g6), stream.n)


def graphs_up_to(max_n: int, **filters) -> Iterator[Graph]:
    """All classes of every order 0..max_n (or 1..max_n when connected)."""
    stream = EnumerationStream(max_n, **filters)
    gen = _Generator(stream)
    yield from gen.walk(gen.root(), max_n, all_levels=True)


def connected_graphs(max_n: int, max_degree=None, max_matching=None, max_edges=None) -> list[Graph]:
    return [g for g in graphs_up_to(max_n, connected=True, max_degree=max_degree,
                                    max_matching=max_matching, max_edges=max_edges) if g.n >= 2]


def isolated_free_graphs(max_n: int, max_degree=None, max_matching=None, max_edges=None) -> Iterator[Graph]:
    """Isolated-free classes with at most ``max_n`` vertices, built from components.

    The matching number and edge count are additive over components, so the
    caps apply to the sum.
    """
    comps = connected_graphs(max_n, max_degree, max_matching, max_edges)
    info = [(c, c.n, matching_number(c), c.edge_count) for c in comps]
    nu_cap = math.inf if max_matching is None else max_matching
    e_cap = math.inf if max_edges is None else max_edges

    def rec(start: int, n_left: int, nu_left, e_left, chosen: list):
        if chosen:
            yield disjoint_union(*chosen)
        for i in range(start, len(info)):
            c, cn, cnu, ce = info[i]
            if cn <= n_left and cnu <= nu_left and ce <= e_left:
                chosen.append(c)
                yield from rec(i, n_left - cn, nu_left - cnu, e_left - ce, chosen)
                chosen.pop()

    yield Graph(0)
    yield from rec(0, max_n, nu_cap, e_cap, [])


# ---------------------------------------------------------------------------
# certificates


@dataclass
class ExtremalCertificate:
    n: int
    spec: FlowerSpec
    value: int
    witnesses: list[Graph]
    budget_used: int = 0
    kind: str = "ex"
    complete: bool = True

    def to_json(self) -> dict:
        return {"n": self.n, "spec": str(self.spec), "value": self.value, "kind": self.kind,
                "witnesses": [graph6_encode(w) for w in self.witnesses],
                "budget_used": self.budget_used, "complete": self.complete}


def _free_predicate(spec: FlowerSpec, budget: int):
    def free(g: Graph) -> bool:
        return g.n < spec.vertex_count or contains_flower(g, spec, budget) is None
    return free


def ex_bruteforce(n: int, spec: FlowerSpec, budget: int | None = None,
                  search_budget: int = DEFAULT_BUDGET) -> ExtremalCertificate:
    """Exact ex(n, H) by enumerating the flower-free graphs of order n."""
    if n < spec.vertex_count:
        return ExtremalCertificate(n, spec, n * (n - 1) // 2, [complete_graph(n)], 0)
    if n > ENUM_CAP:
        raise CapRefusal(f"ex enumeration refused for n={n} > {ENUM_CAP}")
    stream = EnumerationStream(n, hereditary=_free_predicate(spec, search_budget))
    gen = _Generator(stream, budget)
    best, wits = -1, []
    try:
        for g in gen.walk(gen.root(), n):
            if g.edge_count > best:
                best, wits = g.edge_count, [g]
            elif g.edge_count == best:
                wits.append(g)
    except BudgetExhausted as exc:
        exc.partial = ExtremalCertificate(n, spec, best, wits, gen.nodes, complete=False)
        raise
    return ExtremalCertificate(n, spec, best, wits, gen.nodes)


def ex_descending(n: int, spec: FlowerSpec, budget: int = 10 ** 6) -> ExtremalCertificate:
    """Exact ex(n, H) by breadth-first edge deletion from K_n.

    Every flower-free subgraph misses an edge of each copy, so branching on
    the edges of one copy per graph keeps some superset of every extremal
    graph alive; the first level containing a free graph gives the value.
    """
    level = {canonical_key(complete_graph(n)): complete_graph(n)}
    used = 0
    while True:
        free, nxt = [], {}
        for g in level.values():
            used += 1
            if used > budget:
                raise BudgetExhausted(budget)
            emb = contains_flower(g, spec) if g.n >= spec.vertex_count else None
            if emb is None:
                free.append(g)
                continue
            if free:
                continue
            for a, b in sorted(emb.edge_set()):
                h = g.copy()
                h.remove_edge(a, b)
                key = canonical_key(h)
                if key not in nxt:
                    nxt[key] = h
        if free:
            return ExtremalCertificate(n, spec, free[0].edge_count, free, used, kind="ex-descending")
        level = nxt


# ---------------------------------------------------------------------------
# packings and decompositions


@dataclass
class PackingResult:
    value: int
    witnesses: list[FlowerEmbedding]
    exact: bool
    nodes: int

    def to_json(self) -> dict:
        return {"value": self.value, "exact": self.exact, "nodes": self.nodes,
                "witnesses": [w.to_json() for w in self.witnesses]}


def max_packing(g: Graph, spec: FlowerSpec, budget: int = 10 ** 6) -> PackingResult:
    """Maximum number of edge-disjoint flower copies, by use/forbid branching."""
    eh = spec.edge_count
    best: list = [0, []]
    nodes = [0]

    def first_copy(rest: Graph, forbidden: set):
        for emb in iter_flowers(rest, spec):
            es = emb.edge_set()
            if es not in forbidden:
                return emb, es
        return None, None

    def rec(rest: Graph, chosen: list, forbidden: set) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExhausted(budget)
        if len(chosen) + rest.edge_count // eh <= best[0]:
            return
        emb, es = first_copy(rest, forbidden)
        if emb is None:
            if len(chosen) > best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        used = rest.copy()
        for a, b in es:
            used.remove_edge(a, b)
        rec(used, chosen + [emb], {f for f in forbidden if not f & es})
        rec(rest, chosen, forbidden | {es})

    try:
        rec(g.copy(), [], set())
        exact = True
    except BudgetExhausted:
        exact = False
    return PackingResult(best[0], best[1], exact, nodes[0])


def phi_bruteforce_graph(g: Graph, spec: FlowerSpec, budget: int = 10 ** 6) -> int:
    res = max_packing(g, spec, budget)
    if not res.exact:
        raise BudgetExhausted(budget, res)
    return g.edge_count - res.value * (spec.edge_count - 1)


def flower_copies_by_subsets(g: Graph, spec: FlowerSpec) -> list[frozenset]:
    """All flower copies as edge sets, found by testing every e(H)-subset of edges.

    Independent of the backtracking search: candidate subsets are screened by
    degree sequence and then compared to the standalone flower by canonical form.
    """
    eh = spec.edge_count
    edges = g.edges()
    target_deg = sorted([2] * (spec.vertex_count - 1) + [2 * spec.k])
    fg, _ = standalone_flower(spec)
    target_key = canonical_key(fg)
    out = []
    for sub in combinations(edges, eh):
        deg: dict[int, int] = {}
        for a, b in sub:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if sorted(deg.values()) != target_deg:
            continue
        verts = sorted(deg)
        idx = {v: i for i, v in enumerate(verts)}
        h = Graph(len(verts), [(idx[a], idx[b]) for a, b in sub])
        if canonical_key(h) == target_key:
            out.append(frozenset(sub))
    return out


def min_partition_bruteforce(g: Graph, spec: FlowerSpec, edge_limit: int = 16) -> int:
    """Fewest parts in a partition of E(g) into flower copies and single edges."""
    if g.edge_count > edge_limit:
        raise CapRefusal(f"partition search refused for {g.edge_count} > {edge_limit} edges")
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    copies = [sum(1 << index[e] for e in c) for c in flower_copies_by_subsets(g, spec)]
    # every copy is listed under each of its edges
    by_edge: dict[int, list[int]] = {}
    for c in copies:
        for i in bits(c):
            by_edge.setdefault(i, []).append(c)

    @lru_cache(maxsize=None)
    def best(rest: int) -> int:
        if not rest:
            return 0
        low = (rest & -rest).bit_length() - 1
        out = 1 + best(rest & ~(1 << low))
        for c in by_edge.get(low, []):
            if c & rest == c:
                out = min(out, 1 + best(rest & ~c))
        return out

    return best((1 << len(edges)) - 1)


def phi_n_bruteforce(n: int, spec: FlowerSpec, budget: int = 10 ** 6) -> ExtremalCertificate:
    """Exact max of phi over graphs of order n."""
    if n < spec.vertex_count:
        return ExtremalCertificate(n, spec, n * (n - 1) // 2, [complete_graph(n)], 0, kind="phi")
    if n > ENUM_CAP:
        raise CapRefusal(f"phi enumeration refused for n={n} > {ENUM_CAP}")
    best, wits, used = -1, [], 0
    for g in enumerate_graphs(EnumerationStream(n)):
        res = max_packing(g, spec, budget)
        used += res.nodes
        if not res.exact:
            raise BudgetExhausted(budget, ExtremalCertificate(n, spec, best, wits, used, "phi", False))
        val = g.edge_count - res.value * (spec.edge_count - 1)
        if val > best:
            best, wits = val, [g]
        elif val == best:
            wits.append(g)
    return ExtremalCertificate(n, spec, best, wits, used, kind="phi")


# ---------------------------------------------------------------------------
# exhaustive checks of the small-scale structural facts


def degree_matching_extremal(s: int, t: int) -> dict:
    """Largest graphs meeting the degree-plus-matching hypothesis, and who attains them."""
    k = s + t
    if k > 4:
        raise CapRefusal(f"k={k} > 4 is refused")
    if t < 1 or s < 0:
        raise InputError("need s >= 0 and t >= 1")
    h = k - 1
    best, wits, checked = 0, [Graph(0)], 0
    if h >= 1:
        best, wits = -1, []
        for g in isolated_free_graphs(2 * h * h, max_degree=h, max_matching=h):
            if g.n == 0:
                continue
            checked += 1
            if not degree_matching_hypothesis_holds(g, s, t):
                continue
            if g.edge_count > best:
                best, wits = g.edge_count, [g]
            elif g.edge_count == best:
                wits.append(g)
    expected = [complete_bipartite_block(h)]
    if (s, t) == (3, 1):
        expected.append(three_triangles())
    got = {canonical_key(w) for w in wits}
    want = {canonical_key(w) for w in expected}
    return {"s": s, "t": t, "k": k, "max_edges": best, "bound": h * h, "checked": checked,
            "witnesses": [graph6_encode(w) for w in wits],
            "expected": [graph6_encode(w) for w in expected],
            "pass": best == h * h and got == want}


def matching_degree_table(max_nu: int = 3, max_delta: int = 3, max_n: int = 9) -> dict:
    """Exhaustive max edge count for each exact (matching number, max degree)."""
    table: dict[tuple[int, int], int] = {}
    for g in isolated_free_graphs(max_n, max_degree=max_delta, max_matching=max_nu):
        if g.n == 0:
            continue
        key = (matching_number(g), g.max_degree())
        table[key] = max(table.get(key, 0), g.edge_count)
    rows = []
    ok = True
    for nu in range(1, max_nu + 1):
        for d in range(1, max_delta + 1):
            got = table.get((nu, d))
            f = chvatal_hanson_f(nu, d)
            rows.append({"nu": nu, "delta": d, "max_edges": got, "f": f})
            ok = ok and got == f
    return {"rows": rows, "pass": ok}


def path_cycle_matching_check(max_n: int = 9) -> dict:
    bad = []
    count = 0
    for n in range(1, max_n + 1):
        for g in enumerate_graphs(EnumerationStream(n, max_degree=2, no_isolated=True)):
            count += 1
            if 2 * matching_number(g) < g.n - len(component_masks(g)):
                bad.append(graph6_encode(g))
    return {"graphs": count, "counterexamples": bad, "pass": not bad}


def sum_min_check(max_n: int = 8) -> dict:
    bad, count, cases = [], 0, 0
    for n in range(1, max_n + 1):
        for g in enumerate_graphs(EnumerationStream(n)):
            count += 1
            for b in range(0, g.max_degree() - 1):
                cases += 1
                if not sum_min_bound_holds(g, b):
                    bad.append([graph6_encode(g), b])
    return {"graphs": count, "cases": cases, "counterexamples": bad, "pass": not bad}


lemma7_exhaustive = degree_matching_extremal
