"""Flowers: odd cycles glued at a single common vertex.

A flower with ``s`` triangles and ``t`` longer odd cycles is described by a
``FlowerSpec``.  This module detects flowers in a host graph by backtracking
and builds them constructively around a prescribed center from a bipartition
of the host (``find_flower_centered``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExhausted, InputError, PreconditionError, StitchingError
from .graph import (CutState, Graph, _matching_on, bits, lowest,
                    maximum_matching, parity_cut, local_max_cut, restricted_edge_set, to_mask)
from .profile import Profile, get_profile

DEFAULT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class FlowerSpec:
    s: int
    t: int
    lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if self.s < 0:
            raise InputError("number of triangles must be nonnegative")
        if self.t < 1:
            raise InputError("at least one long cycle is required")
        if len(lengths) != self.t:
            raise InputError(f"expected {self.t} cycle lengths, got {len(lengths)}")
        for q in lengths:
            if q < 5 or q % 2 == 0:
                raise InputError(f"cycle length {q} must be odd and at least 5")
        if list(lengths) != sorted(lengths):
            raise InputError("cycle lengths must be sorted ascending")

    @property
    def k(self) -> int:
        return self.s + self.t

    @property
    def edge_count(self) -> int:
        return 3 * self.s + sum(self.lengths)

    @property
    def vertex_count(self) -> int:
        return 1 + 2 * self.s + sum(q - 1 for q in self.lengths)

    @property
    def circumference(self) -> int:
        return self.lengths[-1]

    @property
    def max_degree(self) -> int:
        return 2 * self.k

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        """All cycle lengths, triangles first, ascending."""
        return (3,) * self.s + self.lengths

    def __str__(self) -> str:
        return format_spec(self)

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "lengths": list(self.lengths), "text": str(self)}


def spec_new(s: int, t: int, lengths: Sequence[int]) -> FlowerSpec:
    return FlowerSpec(s, t, tuple(lengths))


_SPEC_RE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*:\s*(\d+(?:\s*,\s*\d+)*)\s*$")


def parse_spec(text: str) -> FlowerSpec:
    """Parse ``"s,t:q1,q2,..."``."""
    m = _SPEC_RE.match(text)
    if not m:
        raise InputError(f"bad flower spec {text!r}; expected 's,t:q1,q2,...'")
    lengths = [int(q) for q in m.group(3).split(",")]
    return FlowerSpec(int(m.group(1)), int(m.group(2)), tuple(lengths))


def format_spec(spec: FlowerSpec) -> str:
    return f"{spec.s},{spec.t}:" + ",".join(str(q) for q in spec.lengths)


@dataclass(frozen=True)
class FlowerConstants:
    sqrt_gamma: Fraction
    gamma: Fraction
    beta: Fraction
    c_bound: Fraction | None  # None when the formula's denominator is not positive

    def to_json(self) -> dict:
        return {"sqrt_gamma": str(self.sqrt_gamma), "gamma": str(self.gamma),
                "beta": str(self.beta),
                "c_bound": None if self.c_bound is None else str(self.c_bound)}


def constants_of(spec: FlowerSpec) -> FlowerConstants:
    k, e, c = spec.k, spec.edge_count, spec.circumference
    sqrt_gamma = Fraction(1, 400 * (c + 1) * k)
    beta = (c + 1) * sqrt_gamma
    denom = e - 2 * k - 1
    if k == 1:
        c_bound = Fraction(0)
    elif denom > 0:
        c_bound = Fraction(2 * k * (k - 1) * (2 * e - k - 1), denom)
    else:
        c_bound = None
    return FlowerConstants(sqrt_gamma, sqrt_gamma ** 2, beta, c_bound)


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class FlowerEmbedding:
    """A flower copy: each cycle is a closed vertex sequence ``(x, ..., x)``."""

    center: int
    cycles: tuple[tuple[int, ...], ...]

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for cyc in self.cycles:
            for a, b in zip(cyc, cyc[1:]):
                out.append((a, b) if a < b else (b, a))
        return out

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def vertices(self) -> list[int]:
        vs = {self.center}
        for cyc in self.cycles:
            vs.update(cyc)
        return sorted(vs)

    def relabel(self, mapping: Sequence[int]) -> "FlowerEmbedding":
        return FlowerEmbedding(mapping[self.center],
                               tuple(tuple(mapping[v] for v in cyc) for cyc in self.cycles))

    def to_json(self) -> dict:
        return {"center": self.center, "cycles": [list(c) for c in self.cycles]}

    @classmethod
    def from_json(cls, data: dict) -> "FlowerEmbedding":
        return cls(int(data["center"]), tuple(tuple(int(v) for v in c) for c in data["cycles"]))


def _ordered(center: int, cycles) -> FlowerEmbedding:
    return FlowerEmbedding(center, tuple(sorted((tuple(c) for c in cycles), key=lambda c: (len(c), c))))


def verify_embedding(g: Graph, spec: FlowerSpec, emb: FlowerEmbedding) -> bool:
    x = emb.center
    if not 0 <= x < g.n or len(emb.cycles) != spec.k:
        return False
    lens = []
    seen = {x}
    for cyc in emb.cycles:
        if len(cyc) < 4 or cyc[0] != x or cyc[-1] != x:
            return False
        inner = cyc[1:-1]
        if len(set(inner)) != len(inner) or x in inner:
            return False
        for v in inner:
            if not 0 <= v < g.n or v in seen:
                return False
            seen.add(v)
        for a, b in zip(cyc, cyc[1:]):
            if not g.has_edge(a, b):
                return False
        lens.append(len(cyc) - 1)
    return sorted(lens) == sorted(spec.cycle_lengths)


def standalone_flower(spec: FlowerSpec) -> tuple[Graph, FlowerEmbedding]:
    """The flower itself as a graph, center 0, cycles on consecutive ids."""
    g = Graph(spec.vertex_count)
    nxt = 1
    cycles = []
    for q in spec.cycle_lengths:
        cyc = [0] + list(range(nxt, nxt + q - 1)) + [0]
        nxt += q - 1
        for a, b in zip(cyc, cyc[1:]):
            g.add_edge(a, b)
        cycles.append(tuple(cyc))
    return g, FlowerEmbedding(0, tuple(cycles))


# ---------------------------------------------------------------------------
# detection


def _nu_with_pendants(adj: Sequence[int], side0: int, avail: int, x: int) -> int:
    """Matching number of the same-side edges on ``avail``, with a pendant
    edge hung on every same-side neighbor of ``x``.

    Every odd cycle through ``x`` uses an odd number of same-side edges, and
    picking one per cycle (a pendant standing in for an edge at ``x``) gives a
    matching here, so this bounds the number of cycles that can still be placed.
    """
    s0, s1 = side0 & avail, avail & ~side0
    n = len(adj)
    inner = list(adj) + []
    for v in bits(avail):
        inner[v] = adj[v] & (s0 if s0 >> v & 1 else s1)
    own = s0 if side0 >> x & 1 else s1
    ext = []
    mask = avail
    for j, y in enumerate(bits(adj[x] & own)):
        p = n + j
        inner[y] |= 1 << p
        ext.append(1 << y)
        mask |= 1 << p
    inner.extend(ext)
    return len(_matching_on(inner, mask))


class _Search:
    def __init__(self, g: Graph, spec: FlowerSpec, budget: int):
        self.g = g
        self.adj = g.adj
        self.spec = spec
        self.budget = budget
        self.nodes = 0
        self.lengths = sorted(spec.cycle_lengths, reverse=True)
        cuts = [parity_cut(g), local_max_cut(g, 0)]
        self.side0 = min(cuts, key=lambda c: c.m).parts[0]

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(self.budget)

    def centers(self) -> list[int]:
        need = 2 * self.spec.k
        order = sorted(range(self.g.n), key=lambda v: (-self.g.degree(v), v))
        return [v for v in order if self.g.degree(v) >= need]

    def from_center(self, x: int) -> Iterator[FlowerEmbedding]:
        yield from self._place(x, 0, 1 << x, [], -1)

    def _bounds_ok(self, x: int, ci: int, used: int) -> bool:
        adj = self.adj
        avail = self.g.all_mask & ~used
        nx = adj[x] & avail
        rem = len(self.lengths) - ci
        if nx.bit_count() < 2 * rem:
            return False
        tri = self.lengths[ci:].count(3)
        if tri and len(_matching_on(adj, nx)) < tri:
            return False
        if rem >= 1 and _nu_with_pendants(adj, self.side0, avail, x) < rem:
            return False
        return True

    def _place(self, x: int, ci: int, used: int, cycles: list, last_v1: int):
        if ci == len(self.lengths):
            yield _ordered(x, cycles)
            return
        self.tick()
        if not self._bounds_ok(x, ci, used):
            return
        adj = self.adj
        q = self.lengths[ci]
        avail = self.g.all_mask & ~used
        nx = adj[x] & avail
        floor = last_v1 + 1 if ci > 0 and self.lengths[ci - 1] == q else 0
        for v1 in bits(nx >> floor << floor):
            targets = nx & ~((2 << v1) - 1)
            if not targets:
                break
            if q == 3:
                for v2 in bits(adj[v1] & targets):
                    self.tick()
                    cyc = (x, v1, v2, x)
                    yield from self._place(x, ci + 1, used | (1 << v1) | (1 << v2),
                                           cycles + [cyc], v1)
                continue
            room = avail & ~(1 << v1)
            within = [targets]
            frontier = targets
            reach = targets
            for _ in range(q - 3):
                nxt = 0
                for v in bits(frontier):
                    nxt |= adj[v]
                frontier = nxt & room & ~reach
                reach |= frontier
                within.append(reach)
            for path in self._paths(v1, q - 2, room, within, targets):
                self.tick()
                cyc = (x, v1) + path + (x,)
                pm = 1 << v1
                for v in path:
                    pm |= 1 << v
                yield from self._place(x, ci + 1, used | pm, cycles + [cyc], v1)

    def _paths(self, start: int, steps: int, room: int, within: list, targets: int):
        """Simple paths of ``steps`` more vertices from ``start`` ending in ``targets``."""
        adj = self.adj
        path: list[int] = []

        def rec(cur: int, left: int, free: int):
            if left == 1:
                for v in bits(adj[cur] & free & targets):
                    path.append(v)
                    yield tuple(path)
                    path.pop()
                return
            for v in bits(adj[cur] & free & within[left - 1]):
                self.tick()
                path.append(v)
                yield from rec(v, left - 1, free & ~(1 << v))
                path.pop()

        yield from rec(start, steps, room)


def iter_flowers(g: Graph, spec: FlowerSpec, budget: int = DEFAULT_BUDGET) -> Iterator[FlowerEmbedding]:
    """Every flower copy in ``g`` once per (center, cycle set)."""
    search = _Search(g, spec, budget)
    for x in search.centers():
        yield from search.from_center(x)


def contains_flower(g: Graph, spec: FlowerSpec, budget: int = DEFAULT_BUDGET) -> FlowerEmbedding | None:
    """A flower copy in ``g`` or ``None`` when ``g`` is free of it.

    Raises ``BudgetExhausted`` when the search runs out of nodes first.
    """
    for emb in iter_flowers(g, spec, budget):
        return emb
    return None


def count_search_nodes(g: Graph, spec: FlowerSpec, budget: int = DEFAULT_BUDGET) -> tuple[bool, int]:
    search = _Search(g, spec, budget)
    for x in search.centers():
        for _ in search.from_center(x):
            return True, search.nodes
    return False, search.nodes


# ---------------------------------------------------------------------------
# the potential of a vertex with respect to a bipartition


@dataclass(frozen=True)
class Potential:
    side: int
    in_degree: int
    m_size: int
    nu_rest: int
    nu_edge: int
    matching: tuple              # maximum matching of the other-side neighborhood minus bad vertices
    rest_matching: tuple         # maximum matching of the own side minus the own-side neighborhood
    edge_matching: tuple         # (w, z) pairs with w adjacent to x

    @property
    def total(self) -> int:
        return self.in_degree + self.m_size + self.nu_rest + self.nu_edge

    def to_json(self) -> dict:
        return {"side": self.side, "in_degree": self.in_degree, "m_size": self.m_size,
                "nu_rest": self.nu_rest, "nu_edge": self.nu_edge, "total": self.total}


def flower_potential(g: Graph, cut: CutState, x: int, b_sets=(0, 0)) -> Potential:
    g._check_vertex(x)
    i = cut.side(x)
    own, other = cut.parts[i], cut.parts[1 - i]
    bad_other = to_mask(b_sets[1 - i])
    n_own = g.adj[x] & own
    n_other = g.adj[x] & other
    matching = maximum_matching(g, n_other & ~bad_other)
    rest = maximum_matching(g, own & ~n_own)
    covered = 0
    for a, b in matching:
        covered |= (1 << a) | (1 << b)
    edges = restricted_edge_set(g, other & ~covered, x)
    if edges:
        eg = Graph(g.n)
        for a, b in edges:
            eg.add_edge(a, b)
        em = maximum_matching(eg)
    else:
        em = []
    oriented = tuple((a, b) if g.has_edge(x, a) else (b, a) for a, b in em)
    return Potential(i, n_own.bit_count(), len(matching), len(rest), len(em),
                     tuple(matching), tuple(rest), oriented)


# ---------------------------------------------------------------------------
# the constructive finder


ROUTE_NODE_CAP = 20000


def check_centered_preconditions(g: Graph, cut: CutState, b_sets, u_sets, x: int,
                                 spec: FlowerSpec, profile: Profile) -> Potential:
    """Raise ``PreconditionError`` naming the first failed hypothesis."""
    p0, p1 = cut.parts
    live = p0 | p1
    n = live.bit_count()
    sg = profile.sqrt_gamma
    b = (to_mask(b_sets[0]), to_mask(b_sets[1]))
    u = (to_mask(u_sets[0]), to_mask(u_sets[1]))
    if not live >> x & 1:
        raise PreconditionError("center", f"vertex {x} is on neither side")
    for i in (0, 1):
        if b[i] & ~cut.parts[i] or u[i] & ~cut.parts[i]:
            raise PreconditionError("subsets", f"B_{i} and U_{i} must lie inside V_{i}")
    if max(p0.bit_count(), p1.bit_count()) > (Fraction(1, 2) + sg) * n:
        raise PreconditionError("side_size", f"sides {p0.bit_count()},{p1.bit_count()} with n={n}")
    for i in (0, 1):
        if g.count_within(b[i]):
            raise PreconditionError("bad_independent", f"B_{i} spans an edge")
    if (b[0] | b[1]).bit_count() >= sg * n:
        raise PreconditionError("bad_small", f"|B|={(b[0] | b[1]).bit_count()} with n={n}")
    for i in (0, 1):
        other = cut.parts[1 - i]
        for v in bits(cut.parts[i]):
            out = (g.adj[v] & other).bit_count()
            floor = profile.bad_out_floor if b[i] >> v & 1 else profile.out_floor
            if not out > floor * n:
                raise PreconditionError("out_degree", f"vertex {v} has out-degree {out}, needs > {floor}*{n}")
        if (cut.parts[i] & ~u[i]).bit_count() >= sg * n:
            raise PreconditionError("u_sets", f"|V_{i} \\ U_{i}| too large")
    pot = flower_potential(g, cut, x, b)
    i = pot.side
    k = spec.k
    if b[i] >> x & 1:
        if pot.in_degree < k:
            raise PreconditionError("center", f"bad center {x} has in-degree {pot.in_degree} < {k}")
    elif pot.in_degree < k:
        if pot.in_degree + pot.m_size < spec.s:
            raise PreconditionError("center", f"in-degree plus matching {pot.in_degree + pot.m_size} < s")
        if pot.total < k:
            raise PreconditionError("center", f"potential {pot.total} < {k}")
    return pot


class _Builder:
    def __init__(self, g, cut, b, u, x, profile):
        self.g = g
        self.adj = g.adj
        self.cut = cut
        self.b = b
        self.u = u
        self.x = x
        self.n = (cut.parts[0] | cut.parts[1]).bit_count()
        self.slack = profile.slack * self.n
        self.used = 1 << x
        self.low_count = None

    def pool(self, side: int) -> int:
        return self.u[side] & ~self.b[side] & ~self.used

    def route(self, start: int, end: int, length: int, close_relaxed: bool = False) -> list[int]:
        """Internal vertices of a ``length``-edge path from ``start`` to ``end``.

        Intermediate vertices alternate sides, starting opposite ``start``,
        and come from ``U \\ B``; the vertex next to ``end`` is a common
        neighbor with more than ``slack * n`` candidates.
        """
        adj = self.adj
        side = 1 - self.cut.side(start)
        end_side = self.cut.side(end)
        sides = [(side + j) % 2 for j in range(length - 1)]
        if sides[-1] == end_side:
            raise StitchingError(f"route {start}->{end} of length {length} has the wrong parity")
        nodes = [0]
        path: list[int] = []

        def close_pool(sd: int) -> int:
            if close_relaxed:
                return self.cut.parts[sd] & ~self.b[sd] & ~self.used
            return self.pool(sd)

        def rec(cur: int, j: int, taken: int):
            if j == length - 1:
                return True
            sd = sides[j]
            if j == length - 2:
                cand = adj[cur] & adj[end] & close_pool(sd) & ~taken
                c = cand.bit_count()
                if self.low_count is None or c < self.low_count:
                    self.low_count = c
                if c > self.slack and cand:
                    path.append(lowest(cand))
                    return True
                return False
            for v in bits(adj[cur] & self.pool(sd) & ~taken):
                nodes[0] += 1
                if nodes[0] > ROUTE_NODE_CAP:
                    return False
                path.append(v)
                if rec(v, j + 1, taken | (1 << v)):
                    return True
                path.pop()
            return False

        if not rec(start, 0, (1 << start) | (1 << end)):
            raise StitchingError(
                f"no admissible route {start}->{end} of length {length} around center {self.x} "
                f"(fewest closing candidates seen: {self.low_count}, slack {float(self.slack):.3f})")
        for v in path:
            self.used |= 1 << v
        return path


def find_flower_centered(g: Graph, cut: CutState, b_sets, u_sets, x: int, spec: FlowerSpec,
                         profile="desk") -> FlowerEmbedding:
    """Construct a flower centered at ``x`` using exactly k same-side edges."""
    prof = get_profile(profile, spec)
    pot = check_centered_preconditions(g, cut, b_sets, u_sets, x, spec, prof)
    b = (to_mask(b_sets[0]), to_mask(b_sets[1]))
    u = (to_mask(u_sets[0]), to_mask(u_sets[1]))
    i = pot.side
    k, s = spec.k, spec.s
    own = cut.parts[i]
    in_nbrs = list(bits(g.adj[x] & own))
    if pot.in_degree >= k:
        mm, ll, pp, qq = 0, k, 0, 0
    else:
        mm = min(pot.m_size, k)
        ll = min(pot.in_degree, k - mm)
        pp = min(pot.nu_rest, k - mm - ll)
        qq = k - mm - ll - pp
        if qq > pot.nu_edge:
            raise StitchingError("potential does not cover k cycles")
    m_edges = list(pot.matching[:mm])
    ys = in_nbrs[:ll]
    p_edges = list(pot.rest_matching[:pp])
    q_edges = list(pot.edge_matching[:qq])

    bld = _Builder(g, cut, b, u, x, prof)
    for e in m_edges + p_edges + q_edges:
        bld.used |= (1 << e[0]) | (1 << e[1])
    for y in ys:
        bld.used |= 1 << y

    lengths = spec.cycle_lengths
    cycles = []
    for j in range(1, k + 1):
        q = lengths[j - 1]
        if j <= min(mm, s):
            w, z = m_edges[j - 1]
            cycles.append((x, w, z, x))
        elif j <= mm:
            w, z = m_edges[j - 1]
            cycles.append((x, w, z, *bld.route(z, x, q - 2), x))
        elif j <= mm + ll:
            y = ys[j - mm - 1]
            if q == 3:
                cycles.append((x, y, *bld.route(y, x, 2), x))
            else:
                cycles.append((x, *bld.route(x, y, q - 1, close_relaxed=True), y, x))
        elif j <= mm + ll + pp:
            uu, vv = p_edges[j - mm - ll - 1]
            if b[i] >> uu & 1:
                uu, vv = vv, uu
            c1 = bld.route(x, uu, 2)
            tail = bld.route(x, vv, q - 3)
            cycles.append((x, *tail, vv, uu, *c1, x))
        else:
            w, z = q_edges[j - mm - ll - pp - 1]
            cycles.append((x, w, z, *bld.route(z, x, q - 2), x))

    emb = _ordered(x, cycles)
    _post_check(g, cut, u, spec, emb, pot)
    return emb


def internal_edge_count(cut: CutState, edges) -> int:
    return sum(1 for a, b in edges if cut.side(a) == cut.side(b))


def _post_check(g, cut, u, spec, emb, pot) -> None:
    if not verify_embedding(g, spec, emb):
        raise StitchingError(f"constructed flower at {emb.center} fails verification")
    inside = internal_edge_count(cut, emb.edges())
    if inside != spec.k:
        raise StitchingError(f"constructed flower uses {inside} same-side edges, expected {spec.k}")
    verts = to_mask(emb.vertices())
    i = pot.side
    if not verts & u[1 - i]:
        raise StitchingError("constructed flower misses the opposite U-set")
    if pot.in_degree >= spec.k and not verts & u[i]:
        raise StitchingError("constructed flower misses its own U-set")
