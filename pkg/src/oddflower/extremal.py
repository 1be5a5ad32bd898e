"""Closed-form extremal numbers and the graphs that attain them."""

from __future__ import annotations

from .errors import InputError
from .graph import Graph, matching_number

BIPARTITE_BLOCK = "BipartiteBlock"
THREE_TRIANGLES = "ThreeTriangles"

_VARIANT_ALIASES = {
    "bipartiteblock": BIPARTITE_BLOCK, "block": BIPARTITE_BLOCK, "kk": BIPARTITE_BLOCK,
    "threetriangles": THREE_TRIANGLES, "3k3": THREE_TRIANGLES,
}


def normalize_variant(variant: str | None) -> str:
    if variant is None:
        return BIPARTITE_BLOCK
    try:
        return _VARIANT_ALIASES[variant.lower()]
    except KeyError:
        raise InputError(f"unknown family variant {variant!r}") from None


def turan_part_sizes(n: int, r: int) -> list[int]:
    if r < 2 or n < r:
        raise InputError(f"Turán graph needs n >= r >= 2, got n={n}, r={r}")
    return [n // r + (1 if i < n % r else 0) for i in range(r)]


def turan_parts(n: int, r: int) -> list[range]:
    out, start = [], 0
    for size in turan_part_sizes(n, r):
        out.append(range(start, start + size))
        start += size
    return out


def turan_graph(n: int, r: int) -> Graph:
    """Balanced complete r-partite graph; part 0 holds the lowest ids and is largest."""
    parts = turan_parts(n, r)
    g = Graph(n)
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            for u in a:
                for v in b:
                    g.add_edge(u, v)
    return g


def turan_edge_count(n: int, r: int) -> int:
    sizes = turan_part_sizes(n, r)
    return (n * n - sum(s * s for s in sizes)) // 2


def g_of_k(k: int) -> int:
    if k < 1:
        raise InputError("k must be at least 1")
    return k * k - k if k % 2 else k * k - 3 * k // 2


def chvatal_hanson_f(nu: int, delta: int) -> int:
    """Largest edge count of a graph with matching number nu and max degree delta."""
    if nu < 1 or delta < 1:
        raise InputError("nu and delta must be at least 1")
    half_up = (delta + 1) // 2
    return nu * delta + (delta // 2) * (nu // half_up)


def ex_formula(n: int, spec) -> int:
    return n * n // 4 + (spec.k - 1) ** 2


def _embed(n: int, extra: list[tuple[int, int]], need: int) -> Graph:
    host = (n + 1) // 2
    if n < 2 or host < need:
        raise InputError(f"hosting side of size {host} cannot hold {need} vertices")
    g = turan_graph(n, 2)
    for u, v in extra:
        g.add_edge(u, v)
    return g


def family_block_edges(spec, variant: str = BIPARTITE_BLOCK) -> tuple[list[tuple[int, int]], int]:
    """Edges of the embedded block (on the lowest ids) and its vertex count."""
    variant = normalize_variant(variant)
    k = spec.k
    if variant == THREE_TRIANGLES:
        if (spec.s, spec.t) != (3, 1):
            raise InputError("the three-triangle variant exists only for 3 triangles and 1 long cycle")
        return three_triangles().edges(), 9
    h = k - 1
    return [(i, h + j) for i in range(h) for j in range(h)], 2 * h


def build_family_member(n: int, spec, variant: str = BIPARTITE_BLOCK) -> Graph:
    """Balanced complete bipartite graph with the extremal block inside side 0."""
    edges, need = family_block_edges(spec, variant)
    return _embed(n, edges, need)


def bounded_degree_block_edges(k: int) -> tuple[list[tuple[int, int]], int]:
    if k < 1:
        raise InputError("k must be at least 1")
    if k % 2:
        edges = [(a + i, a + j) for a in (0, k) for i in range(k) for j in range(i + 1, k)]
        return edges, 2 * k
    # circulant on 2k-1 vertices with distances 1..(k-2)/2, degree k-2, plus
    # every other edge of the distance-(k-1) cycle as a perfect-minus-one matching
    size = 2 * k - 1
    edges = set()
    for v in range(size):
        for d in range(1, (k - 2) // 2 + 1):
            u = (v + d) % size
            edges.add((min(u, v), max(u, v)))
    for j in range(0, 2 * k - 3, 2):
        a, b = (j * (k - 1)) % size, ((j + 1) * (k - 1)) % size
        edges.add((min(a, b), max(a, b)))
    return sorted(edges), size


def build_bounded_degree_extremal(n: int, k: int) -> Graph:
    """Balanced complete bipartite graph plus the densest block with max degree and matching number k-1."""
    edges, need = bounded_degree_block_edges(k)
    return _embed(n, edges, need)


def sum_min_bound_holds(g: Graph, b: int) -> bool:
    """sum_v min(deg v, b) <= nu(G) * (Delta + b) for 0 <= b <= Delta - 2."""
    delta = g.max_degree()
    if not 0 <= b <= delta - 2:
        raise InputError(f"b={b} outside 0..{delta - 2}")
    lhs = sum(min(d, b) for d in g.degrees())
    return lhs <= matching_number(g) * (delta + b)


lemma2_bound_holds = sum_min_bound_holds


def degree_matching_hypothesis_holds(g: Graph, s: int, t: int) -> bool:
    """nu(G) <= k-1, and deg(x) + nu(G - N(x)) <= k-1 for every x of degree >= s."""
    if any(d == 0 for d in g.degrees()):
        raise InputError("graph has an isolated vertex")
    k = s + t
    if matching_number(g) > k - 1:
        return False
    full = g.all_mask
    for x in range(g.n):
        d = g.degree(x)
        if d >= s and d + matching_number(g, full & ~g.adj[x]) > k - 1:
            return False
    return True


lemma7_hypothesis_holds = degree_matching_hypothesis_holds

# names used by the public interface
build_theorem1_extremal = build_bounded_degree_extremal
theorem1_block_edges = bounded_degree_block_edges


def three_triangles() -> Graph:
    return Graph(9, [(a + i, a + j) for a in (0, 3, 6) for i, j in ((0, 1), (0, 2), (1, 2))])


def complete_bipartite_block(h: int) -> Graph:
    """K_{h,h} on ids 0..2h-1, sides {0..h-1} and {h..2h-1}."""
    return Graph(2 * h, [(i, h + j) for i in range(h) for j in range(h)])


def two_cliques(k: int) -> Graph:
    g = Graph(2 * k)
    for a in (0, k):
        for i in range(k):
            for j in range(i + 1, k):
                g.add_edge(a + i, a + j)
    return g

