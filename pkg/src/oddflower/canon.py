"""Canonical labeling by partition refinement and backtracking.

A labeling is a vertex order.  Its certificate is the tuple of adjacency rows
rewritten in that order; the canonical labeling is the one with the largest
certificate among the leaves of the search tree.  Leaves with equal
certificates give automorphisms, which prune sibling branches.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .graph import Graph, bits

Cert = tuple


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    Each cell is split by neighbor count into a splitter cell; the pieces take
    the cell's place, ordered by count.  The procedure only looks at the
    ordered partition and the counts, so it commutes with relabeling.
    """
    cells = [c[:] for c in cells]
    changed = True
    while changed:
        changed = False
        si = 0
        while si < len(cells):
            smask = 0
            for v in cells[si]:
                smask |= 1 << v
            out = []
            split_here = False
            for cell in cells:
                if len(cell) == 1:
                    out.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((adj[v] & smask).bit_count(), []).append(v)
                if len(groups) == 1:
                    out.append(cell)
                else:
                    for key in sorted(groups):
                        out.append(groups[key])
                    split_here = True
            if split_here:
                cells = out
                changed = True
            si += 1
    return cells


def _certificate(adj: Sequence[int], order: list[int]) -> Cert:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    cert = []
    for v in order:
        row = 0
        for u in bits(adj[v]):
            row |= 1 << pos[u]
        cert.append(row)
    return tuple(cert)


class _Orbits:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, a: int) -> int:
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def canonical_labeling(g: Graph, initial: list[list[int]] | None = None):
    """Return ``(order, certificate, generators)``.

    ``order[i]`` is the vertex placed at canonical position ``i``.
    ``initial`` is an ordered partition that the labeling must respect (cells
    must be listed in an isomorphism-invariant order).  ``generators`` are
    automorphisms (as lists ``perm[v]``) discovered during the search; they
    generate a subgroup of the automorphism group.
    """
    n = g.n
    adj = g.adj
    if n == 0:
        return [], (), []
    cells0 = initial if initial is not None else [list(range(n))]
    best: list = [None, None]  # certificate, order
    gens: list[list[int]] = []

    def search(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(adj, cells)
        target = -1
        size = n + 1
        for i, c in enumerate(cells):
            if 1 < len(c) < size:
                target, size = i, len(c)
        if target < 0:
            order = [c[0] for c in cells]
            cert = _certificate(adj, order)
            if best[0] is None or cert > best[0]:
                best[0], best[1] = cert, order
            elif cert == best[0]:
                perm = [0] * n
                for a, b in zip(best[1], order):
                    perm[a] = b
                if any(perm[v] != v for v in range(n)):
                    gens.append(perm)
            return
        tried: list[int] = []
        for v in cells[target]:
            if tried:
                orb = _Orbits(n)
                for p in gens:
                    if all(p[u] == u for u in prefix):
                        for u in range(n):
                            orb.union(u, p[u])
                r = orb.find(v)
                if any(orb.find(w) == r for w in tried):
                    continue
            rest = [u for u in cells[target] if u != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            search(child, prefix + [v])
            tried.append(v)

    search([c[:] for c in cells0 if c], [])
    return best[1], best[0], gens


def invariant_partition(g: Graph, key: Callable[[int], object] | None = None) -> list[list[int]]:
    """Ordered partition of vertices grouped by an invariant, ascending."""
    if key is None:
        deg = g.degrees()

        def key(v):
            return (deg[v], sum(deg[u] for u in bits(g.adj[v])))
    groups: dict = {}
    for v in range(g.n):
        groups.setdefault(key(v), []).append(v)
    return [groups[k] for k in sorted(groups)]


def canonical_key(g: Graph) -> tuple:
    """Hashable isomorphism-class key."""
    _, cert, _ = canonical_labeling(g, invariant_partition(g))
    return (g.n, cert)


def canonical_graph(g: Graph) -> Graph:
    order, _, _ = canonical_labeling(g, invariant_partition(g))
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return Graph(g.n, [(pos[u], pos[v]) for u, v in g.edges()])


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or a.edge_count != b.edge_count or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_key(a) == canonical_key(b)
