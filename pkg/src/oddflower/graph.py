"""Simple undirected graphs on vertices ``0..n-1`` and the primitives built on them.

Adjacency is stored as one Python int per vertex, used as a bitmask over the
vertex set.  Vertex sets passed around internally are bitmasks too; public
functions also accept any iterable of vertex ids.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapRefusal, InputError, ParseError

Edge = tuple[int, int]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """A simple undirected graph.

    Treat instances as values: the mutating methods (``add_edge``,
    ``remove_edge``, ``isolate``) are for code that owns a private copy.
    """

    __slots__ = ("n", "adj", "_m")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        self.n = n
        self.adj = [0] * n
        self._m = 0
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_adjacency(cls, adj: Sequence[int]) -> "Graph":
        g = cls(len(adj))
        g.adj = list(adj)
        g._m = sum(a.bit_count() for a in adj) // 2
        return g

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g.adj = self.adj[:]
        g._m = self._m
        return g

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} out of range 0..{self.n - 1}")

    def add_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise InputError(f"self-loop at {u}")
        if self.adj[u] >> v & 1:
            raise InputError(f"duplicate edge {u}-{v}")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u
        self._m += 1

    def remove_edge(self, u: int, v: int) -> None:
        if not self.adj[u] >> v & 1:
            raise InputError(f"edge {u}-{v} not present")
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)
        self._m -= 1

    def isolate(self, v: int) -> list[Edge]:
        """Delete every edge at ``v``; return the deleted edges."""
        gone = [_norm(v, u) for u in bits(self.adj[v])]
        for u in bits(self.adj[v]):
            self.adj[u] &= ~(1 << v)
        self._m -= self.adj[v].bit_count()
        self.adj[v] = 0
        return gone

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    @property
    def edge_count(self) -> int:
        return self._m

    def edges(self) -> list[Edge]:
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def edges_within(self, mask: int) -> list[Edge]:
        out = []
        for u in bits(mask):
            for v in bits(self.adj[u] & mask & ~((2 << u) - 1)):
                out.append((u, v))
        return out

    def count_within(self, mask: int) -> int:
        return sum((self.adj[u] & mask).bit_count() for u in bits(mask)) // 2

    def count_between(self, a: int, b: int) -> int:
        """Edges with one end in ``a`` and the other in ``b`` (disjoint masks)."""
        return sum((self.adj[u] & b).bit_count() for u in bits(a))

    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adj), default=0)

    def min_degree(self) -> int:
        return min((a.bit_count() for a in self.adj), default=0)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


# ---------------------------------------------------------------------------
# constructors


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph.from_adjacency([full & ~(1 << v) for v in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    out = Graph(sum(g.n for g in graphs))
    off = 0
    for g in graphs:
        for u, v in g.edges():
            out.add_edge(u + off, v + off)
        off += g.n
    return out


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_graph(n: int, p: float, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_graph_m(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform random graph with exactly ``m`` edges."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if m > len(pairs):
        raise InputError(f"{m} edges do not fit on {n} vertices")
    rng = random.Random(seed)
    return Graph(n, rng.sample(pairs, m))


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, list[int]]:
    """Return ``(h, old_of_new)``; vertex ``i`` of ``h`` is ``old_of_new[i]`` of ``g``."""
    keep = sorted(bits(to_mask(vertices)))
    new_of_old = {v: i for i, v in enumerate(keep)}
    h = Graph(len(keep))
    for i, v in enumerate(keep):
        row = 0
        for u in bits(g.adj[v]):
            j = new_of_old.get(u)
            if j is not None:
                row |= 1 << j
        h.adj[i] = row
    h._m = sum(a.bit_count() for a in h.adj) // 2
    return h, keep


def graph_from_edges(edges: Iterable[Edge]) -> tuple[Graph, list[int]]:
    """Graph spanned by ``edges``, relabeled onto the sorted endpoint list."""
    edges = list(edges)
    verts = sorted({v for e in edges for v in e})
    idx = {v: i for i, v in enumerate(verts)}
    return Graph(len(verts), [(idx[u], idx[v]) for u, v in edges]), verts


# ---------------------------------------------------------------------------
# components


def component_masks(g: Graph, within: int | None = None) -> list[int]:
    rest = g.all_mask if within is None else within
    comps = []
    while rest:
        frontier = rest & -rest
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & rest & ~comp
        comps.append(comp)
        rest &= ~comp
    return comps


def component_count(g: Graph) -> int:
    return len(component_masks(g))


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(component_masks(g)) == 1


def cut_vertices(g: Graph) -> int:
    """Bitmask of articulation points (vertices whose removal adds a component).

    Sized for the small graphs of the enumeration oracles.
    """
    base = len(component_masks(g))
    full = g.all_mask
    out = 0
    for v in range(g.n):
        if g.adj[v] and len(component_masks(g, full & ~(1 << v))) > base:
            out |= 1 << v
    return out


# ---------------------------------------------------------------------------
# matchings


def maximum_matching(g: Graph, vertices=None) -> list[Edge]:
    """A maximum matching of ``g[vertices]`` (all of ``g`` by default)."""
    mask = g.all_mask if vertices is None else to_mask(vertices)
    return _matching_on(g.adj, mask)


def _matching_on(adj: Sequence[int], mask: int) -> list[Edge]:
    verts = [v for v in bits(mask) if adj[v] & mask]
    if not verts:
        return []
    idx = {v: i for i, v in enumerate(verts)}
    nbrs = [[idx[u] for u in bits(adj[v] & mask)] for v in verts]
    mate = _max_matching_local(len(verts), nbrs)
    return [(verts[i], verts[j]) for i, j in enumerate(mate) if j > i]


def _max_matching_local(n: int, nbrs: list[list[int]]) -> list[int]:
    match = [-1] * n
    for v in range(n):
        if match[v] == -1:
            for u in nbrs[v]:
                if match[u] == -1:
                    match[v] = u
                    match[u] = v
                    break
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        for i in range(n):
            parent[i] = -1
            base[i] = i
        used[root] = True
        queue = [root]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for to in nbrs[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    for root in range(n):
        if match[root] != -1 or not nbrs[root]:
            continue
        v = find_path(root)
        while v != -1:
            pv = parent[v]
            nv = match[pv]
            match[v] = pv
            match[pv] = v
            v = nv
    return match


def matching_number(g: Graph, vertices=None) -> int:
    return len(maximum_matching(g, vertices))


def matching_number_of_edgeset(g: Graph, edges: Iterable[Edge]) -> int:
    """Matching number of the subgraph formed by ``edges`` (all must be in ``g``)."""
    edges = list(edges)
    for u, v in edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise InputError(f"edge {u}-{v} is not in the graph")
    h, _ = graph_from_edges(edges)
    return matching_number(h)


def is_matching(g: Graph, edges: Iterable[Edge]) -> bool:
    seen = 0
    for u, v in edges:
        if not g.has_edge(u, v) or (seen >> u & 1) or (seen >> v & 1):
            return False
        seen |= (1 << u) | (1 << v)
    return True


def restricted_edge_set(g: Graph, a, x: int) -> list[Edge]:
    """Edges of ``g[a]`` having at least one endpoint adjacent to ``x``."""
    g._check_vertex(x)
    a = to_mask(a)
    nx = g.adj[x]
    return [(u, v) for u, v in g.edges_within(a) if (nx >> u & 1) or (nx >> v & 1)]


# ---------------------------------------------------------------------------
# cuts


@dataclass(frozen=True)
class CutState:
    """A bipartition ``V_0, V_1`` with cached edge counts.

    ``parts`` are bitmasks.  Algorithms that delete vertices use cuts whose
    parts cover only the surviving vertices.
    """

    parts: tuple[int, int]
    e_in: tuple[int, int]
    e_cross: int

    @classmethod
    def of(cls, g: Graph, parts) -> "CutState":
        p0, p1 = to_mask(parts[0]), to_mask(parts[1])
        if p0 & p1:
            raise InputError("cut sides overlap")
        return cls((p0, p1), (g.count_within(p0), g.count_within(p1)), g.count_between(p0, p1))

    @classmethod
    def from_sides(cls, g: Graph, side: Sequence[int]) -> "CutState":
        p0 = sum(1 << v for v in range(g.n) if side[v] == 0)
        return cls.of(g, (p0, g.all_mask & ~p0))

    @property
    def m(self) -> int:
        """Edges inside the sides."""
        return self.e_in[0] + self.e_in[1]

    def side(self, v: int) -> int:
        if self.parts[0] >> v & 1:
            return 0
        if self.parts[1] >> v & 1:
            return 1
        raise InputError(f"vertex {v} is on neither side")

    def sizes(self) -> tuple[int, int]:
        return self.parts[0].bit_count(), self.parts[1].bit_count()

    def in_degree(self, g: Graph, v: int) -> int:
        return (g.adj[v] & self.parts[self.side(v)]).bit_count()

    def out_degree(self, g: Graph, v: int) -> int:
        return (g.adj[v] & self.parts[1 - self.side(v)]).bit_count()

    def consistent_with(self, g: Graph) -> bool:
        fresh = CutState.of(g, self.parts)
        return fresh == self

    def to_json(self) -> dict:
        return {"V0": list(bits(self.parts[0])), "V1": list(bits(self.parts[1])),
                "e_V0": self.e_in[0], "e_V1": self.e_in[1], "e_cross": self.e_cross}


def improve_cut(g: Graph, side: list[int]) -> list[int]:
    """Single-vertex-move local search to a fixpoint.

    Scans ascending ids, moves the first vertex with more neighbors on its
    own side than across, then rescans from the start.
    """
    side = side[:]
    p = [0, 0]
    for v in range(g.n):
        p[side[v]] |= 1 << v
    moved = True
    while moved:
        moved = False
        for v in range(g.n):
            s = side[v]
            inside = (g.adj[v] & p[s]).bit_count()
            across = (g.adj[v] & p[1 - s]).bit_count()
            if inside > across:
                p[s] &= ~(1 << v)
                p[1 - s] |= 1 << v
                side[v] = 1 - s
                moved = True
                break
    return side


def local_max_cut(g: Graph, seed: int = 0) -> CutState:
    """Locally maximal cut from a seeded random starting bipartition."""
    rng = random.Random(seed)
    side = [rng.randrange(2) for _ in range(g.n)]
    return CutState.from_sides(g, improve_cut(g, side))


def parity_cut(g: Graph) -> CutState:
    """Local search started from BFS-depth parity, rooted at max-degree vertices."""
    side = [0] * g.n
    seen = 0
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    for root in order:
        if seen >> root & 1:
            continue
        seen |= 1 << root
        frontier = 1 << root
        depth = 0
        while frontier:
            for v in bits(frontier):
                side[v] = depth & 1
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
            depth += 1
    return CutState.from_sides(g, improve_cut(g, side))


def best_local_cut(g: Graph, seed: int = 0, restarts: int = 4) -> CutState:
    """Largest of several locally maximal cuts (parity start plus seeded restarts)."""
    best = parity_cut(g)
    for r in range(restarts):
        c = local_max_cut(g, seed + r)
        if c.e_cross > best.e_cross:
            best = c
    return best


EXACT_CUT_LIMIT = 20


def exact_max_cut(g: Graph, limit: int = EXACT_CUT_LIMIT) -> CutState:
    """Globally maximum cut by Gray-code enumeration of bipartitions."""
    n = g.n
    if n > limit:
        raise CapRefusal(f"exact max cut refused for n={n} > {limit}")
    if n <= 1:
        return CutState.of(g, (g.all_mask, 0))
    # vertex n-1 stays on side 0; flip the others in Gray order
    side1 = 0
    cut = 0
    best, best_mask = 0, 0
    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length() - 1
        nb = g.adj[v]
        if side1 >> v & 1:
            # v moves 1 -> 0
            cut += (nb & side1).bit_count() - (nb & ~side1).bit_count()
            side1 &= ~(1 << v)
        else:
            cut += (nb & ~side1).bit_count() - (nb & side1).bit_count()
            side1 |= 1 << v
        if cut > best:
            best, best_mask = cut, side1
    return CutState.of(g, (g.all_mask & ~best_mask, best_mask))


# ---------------------------------------------------------------------------
# text formats


def _n_encode(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def graph6_encode(g: Graph) -> str:
    n = g.n
    out = [_n_encode(n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def graph6_decode(text: str) -> Graph:
    s = text.strip("\r\n")
    start = 0
    if s.startswith(">>graph6<<"):
        start = 10
    for i in range(start, len(s)):
        if not 63 <= ord(s[i]) <= 126:
            raise ParseError(f"invalid graph6 character {s[i]!r}", i)
    pos = start
    if pos >= len(s):
        raise ParseError("empty graph6 string", pos)
    if s[pos] != "~":
        n = ord(s[pos]) - 63
        pos += 1
    else:
        if pos + 1 < len(s) and s[pos + 1] == "~":
            width, pos = 6, pos + 2
        else:
            width, pos = 3, pos + 1
        if pos + width > len(s):
            raise ParseError("truncated vertex count", len(s))
        n = 0
        for c in s[pos:pos + width]:
            n = (n << 6) | (ord(c) - 63)
        pos += width
    need = (n * (n - 1) // 2 + 5) // 6
    body = s[pos:]
    if len(body) != need:
        raise ParseError(f"expected {need} adjacency bytes for n={n}, found {len(body)}",
                         pos + min(len(body), need))
    g = Graph(n)
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                g.adj[i] |= 1 << j
                g.adj[j] |= 1 << i
                g._m += 1
            k += 1
    if k % 6:
        tail = (ord(body[-1]) - 63) & ((1 << (6 - k % 6)) - 1)
        if tail:
            raise ParseError("nonzero padding bits", pos + len(body) - 1)
    return g


def edgelist_encode(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def edgelist_decode(text: str) -> Graph:
    offset = 0
    rows = []
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0].strip()
        if body:
            rows.append((offset, body))
        offset += len(line.encode())
    if not rows:
        raise ParseError("empty edge list", 0)
    off, head = rows[0]
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be 'n m'", off)
    n, m = int(parts[0]), int(parts[1])
    g = Graph(n)
    for off, body in rows[1:]:
        parts = body.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"bad edge line {body!r}", off)
        try:
            g.add_edge(int(parts[0]), int(parts[1]))
        except InputError as exc:
            raise ParseError(str(exc), off) from None
    if g.edge_count != m:
        raise ParseError(f"header says {m} edges, found {g.edge_count}", rows[0][0])
    return g


_EDGELIST_HEAD = re.compile(r"^\s*\d+\s+\d+\s*$")


def sniff_format(text: str) -> str:
    for line in text.splitlines():
        # '#' never starts a graph6 line, so comment lines mark an edge list
        if line.lstrip().startswith("#"):
            return "edgelist"
        if line.strip():
            return "edgelist" if _EDGELIST_HEAD.match(line) else "graph6"
    return "graph6"


def parse_graph(text: str, fmt: str | None = None) -> Graph:
    fmt = fmt or sniff_format(text)
    if fmt == "edgelist":
        return edgelist_decode(text)
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty input", 0)
        return graph6_decode(lines[0].strip())
    raise InputError(f"unknown graph format {fmt!r}")


def format_graph(g: Graph, fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return graph6_encode(g) + "\n"
    if fmt == "edgelist":
        return edgelist_encode(g)
    raise InputError(f"unknown graph format {fmt!r}")
