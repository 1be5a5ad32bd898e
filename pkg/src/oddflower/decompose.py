"""Edge decompositions into flower copies and single edges.

The driver peels low-degree vertices, takes a locally maximal cut, marks the
vertices with many same-side neighbors as bad, and then extracts flowers with
one of two greedy loops.  Every extracted flower uses exactly k same-side
edges; all other edges end up as single-edge parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExhausted, InputError, PreconditionError, StitchingError
from .extremal import ex_formula, turan_edge_count
from .flower import (FlowerEmbedding, FlowerSpec, constants_of, contains_flower, find_flower_centered,
                     flower_potential, internal_edge_count, verify_embedding)
from .graph import (CutState, Graph, best_local_cut, bits, induced_subgraph, lowest,
                    matching_number, maximum_matching, restricted_edge_set, to_mask)
from .profile import Profile, get_profile

# ---------------------------------------------------------------------------
# peeling


@dataclass
class PeelResult:
    kept: Graph
    old_of_new: list[int]
    peeled: list[tuple[int, int]]  # (original vertex, degree when removed)
    n_prime: int
    mode: str = "edge-count"
    phi_costs: list[int] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.n_prime == 0

    def excess_kept(self, g: Graph) -> bool:
        """e(kept) >= e(T_{n',2}) + j + (n - n') where e(g) = e(T_{n,2}) + j."""
        j = g.edge_count - g.n * g.n // 4
        n1 = self.n_prime
        return self.kept.edge_count >= n1 * n1 // 4 + j + (g.n - n1)

    def min_degree_ok(self) -> bool:
        return self.n_prime == 0 or self.kept.min_degree() >= self.n_prime // 2


def peel_min_degree(g: Graph, mode: str = "edge-count", spec: FlowerSpec | None = None) -> PeelResult:
    """Remove a lowest-id minimum-degree vertex while its degree is below half the order.

    In ``phi`` mode the degree of each removed vertex is also recorded as its
    cost: those edges become single-edge parts of a decomposition.
    """
    if mode not in ("edge-count", "phi"):
        raise InputError(f"unknown peel mode {mode!r}")
    alive = g.all_mask
    deg = g.degrees()
    peeled = []
    while alive:
        n1 = alive.bit_count()
        v = min(bits(alive), key=lambda u: (deg[u], u))
        if deg[v] >= n1 // 2:
            break
        peeled.append((v, deg[v]))
        alive &= ~(1 << v)
        for u in bits(g.adj[v] & alive):
            deg[u] -= 1
    kept, old = induced_subgraph(g, alive)
    costs = [d for _, d in peeled] if mode == "phi" else []
    return PeelResult(kept, old, peeled, kept.n, mode, costs)


# ---------------------------------------------------------------------------
# bad vertices and the bipartition


@dataclass
class BadSetState:
    cut: CutState
    bad: tuple[int, int]
    beta: Fraction
    m: int

    @property
    def bad_mask(self) -> int:
        return self.bad[0] | self.bad[1]

    def to_json(self) -> dict:
        return {"B0": list(bits(self.bad[0])), "B1": list(bits(self.bad[1])),
                "beta": str(self.beta), "m": self.m}


def _live_n(cut: CutState) -> int:
    return (cut.parts[0] | cut.parts[1]).bit_count()


def bad_set(g: Graph, cut: CutState, spec: FlowerSpec, profile="desk") -> BadSetState:
    prof = get_profile(profile, spec)
    n = _live_n(cut)
    bad = []
    for i in (0, 1):
        side = cut.parts[i]
        bad.append(sum(1 << v for v in bits(side) if (g.adj[v] & side).bit_count() > prof.beta * n))
    return BadSetState(cut, (bad[0], bad[1]), prof.beta, cut.m)


def regularize_bad(g: Graph, state: BadSetState, spec: FlowerSpec) -> Graph:
    """Trim every bad vertex to k*ceil(d/2k) same-side edges, all to good vertices."""
    k = spec.k
    g0 = g.copy()
    for i in (0, 1):
        side = state.cut.parts[i]
        bad = state.bad[i]
        nb = bad.bit_count()
        for v in bits(bad):
            d = (g.adj[v] & side).bit_count()
            keep = k * math.ceil(d / (2 * k))
            if nb > d - keep:
                raise PreconditionError("regularize", f"vertex {v}: |B_{i}|={nb} > {d} - {keep}")
            good = list(bits(g.adj[v] & side & ~bad))
            kept = set(good[:keep])
            for u in bits(g0.adj[v] & side):
                if u not in kept:
                    g0.remove_edge(v, u)
    for i in (0, 1):
        if g0.count_within(state.bad[i]):
            raise StitchingError("bad set still spans an edge after trimming")
    before = state.cut.m
    after = g0.count_within(state.cut.parts[0]) + g0.count_within(state.cut.parts[1])
    if 2 * after < before:
        raise StitchingError(f"trimming kept {after} of {before} same-side edges, fewer than half")
    return g0


def cut_diagnostics(g: Graph, cut: CutState, spec: FlowerSpec, profile="desk") -> dict:
    """Check the bipartition conclusions at the active profile's constants."""
    prof = get_profile(profile, spec)
    consts = constants_of(spec)
    state = bad_set(g, cut, spec, prof)
    n = _live_n(cut)
    m = cut.m
    sg, beta = prof.sqrt_gamma, prof.beta
    gamma = sg * sg
    nb = state.bad_mask.bit_count()
    sizes = cut.sizes()
    outs = {v: cut.out_degree(g, v) for v in bits(cut.parts[0] | cut.parts[1])}
    good = [v for v in outs if not state.bad_mask >> v & 1]
    checks = {
        "a_m": m < gamma * n * n,
        "a_bad": nb < 2 * gamma / beta * n if n else True,
        "b_sides": all(Fraction(n, 2) - sg * n <= s <= Fraction(n, 2) + sg * n for s in sizes),
        "c_out": all(outs[v] >= Fraction(n, 4) - Fraction(1, 4) for v in outs),
        "d_out": all(outs[v] >= Fraction(n, 2) - beta * n - Fraction(1, 2) for v in good),
        "bad_count": n == 0 or nb <= 2 * m / (beta * n),
    }
    return {"n": n, "m": m, "bad": nb, "sizes": list(sizes), "profile": prof.name,
            "exact_gamma": str(consts.gamma), "checks": checks}


# ---------------------------------------------------------------------------
# the extremal checker


def _all_maximum_matchings(g: Graph, mask: int, cap: int):
    target = matching_number(g, mask)
    out = []

    def rec(rest: int, chosen: list):
        if len(out) >= cap:
            return
        if len(chosen) == target:
            out.append(tuple(chosen))
            return
        if len(chosen) + matching_number(g, rest) < target:
            return
        v = lowest(rest)
        for u in bits(g.adj[v] & rest):
            chosen.append((v, u))
            rec(rest & ~(1 << v) & ~(1 << u), chosen)
            chosen.pop()
        rec(rest & ~(1 << v), chosen)

    rec(mask, [])
    return out, len(out) >= cap


def force_extremal_check(g: Graph, cut: CutState, spec: FlowerSpec,
                         exhaustive_bound: int = 16, matching_cap: int = 5000) -> dict:
    """Test the per-vertex potential bound k-1 under all maximum matchings.

    Up to ``exhaustive_bound`` vertices every maximum matching of the opposite
    neighborhood is tried; above it one canonical matching is used and the
    report is flagged ``sampled``.
    """
    k, s = spec.k, spec.s
    sampled = g.n > exhaustive_bound
    violations = []
    checked = 0
    for x in bits(cut.parts[0] | cut.parts[1]):
        i = cut.side(x)
        own, other = cut.parts[i], cut.parts[1 - i]
        deg_in = (g.adj[x] & own).bit_count()
        rest = matching_number(g, own & ~g.adj[x])
        nbhd = g.adj[x] & other
        if sampled:
            matchings = [tuple(maximum_matching(g, nbhd))]
        else:
            matchings, capped = _all_maximum_matchings(g, nbhd, matching_cap)
            sampled = sampled or capped
        for mt in matchings:
            checked += 1
            if deg_in + len(mt) < s:
                continue
            covered = to_mask([v for e in mt for v in e])
            edges = restricted_edge_set(g, other & ~covered, x)
            nu_edge = matching_number(Graph(g.n, edges)) if edges else 0
            total = deg_in + len(mt) + rest + nu_edge
            if total > k - 1:
                violations.append({"vertex": x, "total": total, "matching": [list(e) for e in mt]})
                break
    n = g.n
    return {"holds": not violations, "violations": violations, "sampled": sampled,
            "matchings_checked": checked, "e": g.edge_count,
            "extremal_value": turan_edge_count(n, 2) + (k - 1) ** 2 if n >= 2 else None}


# ---------------------------------------------------------------------------
# the two extraction loops


@dataclass
class LoopResult:
    flowers: list[FlowerEmbedding]
    residual: Graph
    stop_reason: str | None
    log: list[dict] = field(default_factory=list)
    deleted: list[int] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def _active(g: Graph, parts, bad, n: int, prof: Profile) -> tuple[int, int]:
    thr = Fraction(n, 2) - prof.activity_margin * n - Fraction(1, 4)
    out = []
    for i in (0, 1):
        other = parts[1 - i]
        out.append(sum(1 << v for v in bits(parts[i] & ~bad[i]) if (g.adj[v] & other).bit_count() >= thr))
    return out[0], out[1]


def _remove_flower(g: Graph, emb: FlowerEmbedding) -> None:
    for a, b in emb.edges():
        g.remove_edge(a, b)


def _in_part_edges(g: Graph, parts) -> int:
    return g.count_within(parts[0]) + g.count_within(parts[1])


def greedy_extraction(g0: Graph, state: BadSetState, spec: FlowerSpec, profile="desk") -> LoopResult:
    """Greedy extraction for the many-same-side-edges case.

    Step 1 takes centers of same-side degree at least k (bad vertices first);
    Step 2 takes a common opposite neighbor of a same-side k-matching.
    """
    prof = get_profile(profile, spec)
    k = spec.k
    parts = state.cut.parts
    bad = state.bad
    n = _live_n(state.cut)
    g = g0.copy()
    u = (parts[0] & ~bad[0], parts[1] & ~bad[1])
    flowers, log = [], []
    start_in = _in_part_edges(g, parts)
    thr = Fraction(n, 2) - prof.activity_margin * n - Fraction(1, 4)
    initially_active = [v for i in (0, 1) for v in bits(parts[i] & ~bad[i])
                        if (g.adj[v] & parts[1 - i]).bit_count() >= thr]
    out0 = {v: (g.adj[v] & parts[1 - state.cut.side(v)]).bit_count() for v in initially_active}
    cross_removed = 0
    stop = None

    def extract(x: int, step: int) -> bool:
        nonlocal u, cross_removed, stop
        cut = CutState.of(g, parts)
        try:
            emb = find_flower_centered(g, cut, bad, u, x, spec, prof)
        except PreconditionError as exc:
            stop = f"step {step}, iteration {len(flowers)}: precondition {exc.clause} failed at {x} ({exc.detail})"
            return False
        except StitchingError as exc:
            stop = f"step {step}, iteration {len(flowers)}: stitching failed at {x} ({exc})"
            return False
        _remove_flower(g, emb)
        flowers.append(emb)
        cross_removed += spec.edge_count - k
        log.append({"step": step, "center": x})
        u = _active(g, parts, bad, n, prof)
        return True

    # step 1
    while stop is None:
        cands = []
        for i in (0, 1):
            for v in bits(parts[i]):
                if (g.adj[v] & parts[i]).bit_count() >= k:
                    cands.append((0 if bad[i] >> v & 1 else 1, v))
        if not cands:
            break
        if not extract(min(cands)[1], 1):
            break
    # step 2
    while stop is None:
        found = False
        for i in (0, 1):
            mt = maximum_matching(g, parts[i])
            if len(mt) < k:
                continue
            ends = [v for e in mt[:k] for v in e]
            common = parts[1 - i] & ~bad[1 - i]
            for v in ends:
                common &= g.adj[v]
            if not common:
                stop = f"step 2, iteration {len(flowers)}: no common neighbor of a {k}-matching in side {i}"
                break
            found = extract(lowest(common), 2)
            break
        if not found:
            break

    residual_in = _in_part_edges(g, parts)
    diag = {"start_in_part": start_in, "residual_in_part": residual_in,
            "iterations": len(flowers)}
    if start_in != residual_in + k * len(flowers):
        raise StitchingError("same-side edge conservation violated in the greedy loop")
    if stop is None:
        for i in (0, 1):
            sub_delta = max(((g.adj[v] & parts[i]).bit_count() for v in bits(parts[i])), default=0)
            if sub_delta > k - 1 or matching_number(g, parts[i]) > k - 1:
                raise StitchingError("greedy loop stopped before its termination condition")
    # inactive vertices, against the first-principles bound and the printed one
    inactive = [v for v in initially_active if (g.adj[v] & parts[1 - state.cut.side(v)]).bit_count() < thr]
    gap = min((out0[v] - thr for v in initially_active), default=Fraction(0))
    fp_bound = (2 * cross_removed / gap) if gap > 0 else None
    if fp_bound is not None and inactive and not len(inactive) < fp_bound:
        raise StitchingError("inactive-vertex count exceeds its counting bound")
    m = state.m
    diag["inactive"] = len(inactive)
    diag["inactive_bound_counting"] = None if fp_bound is None else float(fp_bound)
    diag["inactive_bound_printed"] = (float((spec.edge_count - k) * Fraction(m, k) / (prof.beta * n))
                                      if n else None)
    return LoopResult(flowers, g, stop, log, [], diag)


def is_balanced(cut: CutState) -> bool:
    a, b = cut.sizes()
    return abs(a - b) <= 1


def deletion_extraction(g: Graph, cut: CutState, spec: FlowerSpec, profile="desk") -> LoopResult:
    """Extraction for the few-same-side-edges case, deleting one vertex per flower."""
    prof = get_profile(profile, spec)
    k, s = spec.k, spec.s
    consts = constants_of(spec)
    state = bad_set(g, cut, spec, prof)
    if state.bad_mask:
        raise PreconditionError("alg2_bad", "bad set must be empty")
    if consts.c_bound is None or cut.m > consts.c_bound:
        raise PreconditionError("alg2_m", f"m={cut.m} exceeds C(H)={consts.c_bound}")
    if not is_balanced(cut):
        raise PreconditionError("alg2_balanced", f"sides {cut.sizes()}")
    g = g.copy()
    parts = list(cut.parts)
    usets = [sum(1 << v for v in bits(parts[i]) if not g.adj[v] & parts[i]) for i in (0, 1)]
    m0 = cut.m
    flowers, log, deleted = [], [], []
    no_bad = (0, 0)
    lost_in = 0
    stop = None

    def extract(x: int, step: int) -> bool:
        nonlocal stop, lost_in
        istar = 0 if parts[0].bit_count() >= parts[1].bit_count() else 1
        cur = CutState.of(g, parts)
        try:
            emb = find_flower_centered(g, cur, no_bad, usets, x, spec, prof)
        except PreconditionError as exc:
            stop = f"step {step}, iteration {len(flowers)}: precondition {exc.clause} failed at {x} ({exc.detail})"
            return False
        except StitchingError as exc:
            stop = f"step {step}, iteration {len(flowers)}: stitching failed at {x} ({exc})"
            return False
        _remove_flower(g, emb)
        flowers.append(emb)
        side_x = cur.side(x)
        hit = to_mask(emb.vertices()) & usets[istar]
        if step == 2 and side_x == istar:
            uj = x
        else:
            if not hit:
                raise StitchingError(f"iteration {len(flowers)}: flower misses U_{istar}")
            uj = lowest(hit)
        lost_in += (g.adj[uj] & parts[istar]).bit_count()
        g.isolate(uj)
        parts[istar] &= ~(1 << uj)
        usets[istar] &= ~(1 << uj)
        deleted.append(uj)
        log.append({"step": step, "center": x, "deleted": uj, "i_star": istar})
        if abs(parts[0].bit_count() - parts[1].bit_count()) > 1:
            raise StitchingError("partition became unbalanced")
        if len(flowers) > m0 / k:
            raise StitchingError("more iterations than m/k")
        return True

    while stop is None:
        x = min((v for i in (0, 1) for v in bits(parts[i])
                 if (g.adj[v] & parts[i]).bit_count() >= k), default=None)
        if x is None:
            break
        if not extract(x, 1):
            break
    while stop is None:
        cur = CutState.of(g, parts)
        x = None
        for v in sorted(bits(parts[0] | parts[1])):
            p = flower_potential(g, cur, v, no_bad)
            if p.in_degree + p.m_size >= s and p.total >= k:
                x = v
                break
        if x is None:
            break
        if not extract(x, 2):
            break
    residual_in = _in_part_edges(g, parts)
    if m0 != residual_in + k * len(flowers) + lost_in:
        raise StitchingError("same-side edge conservation violated in the deletion loop")
    diag = {"start_in_part": m0, "residual_in_part": residual_in, "lost_to_deletion": lost_in,
            "iterations": len(flowers)}
    return LoopResult(flowers, g, stop, log, deleted, diag)


# ---------------------------------------------------------------------------
# driver


@dataclass
class DecompositionResult:
    flowers: list[FlowerEmbedding]
    single_edges: list[tuple[int, int]]
    spec: FlowerSpec
    n: int
    e: int
    m: int = 0
    branch: str = "none"
    peeled: list = field(default_factory=list)
    profile: str = "desk"
    stop_reason: str | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def packing(self) -> int:
        return len(self.flowers)

    @property
    def parts(self) -> int:
        return self.packing + len(self.single_edges)

    def to_json(self) -> dict:
        return {"spec": str(self.spec), "n": self.n, "e": self.e, "m": self.m,
                "branch": self.branch, "packing": self.packing, "parts": self.parts,
                "flowers": [f.to_json() for f in self.flowers],
                "single_edges": [list(e) for e in self.single_edges],
                "peeled": [list(p) for p in self.peeled], "profile": self.profile,
                "stop_reason": self.stop_reason, "diagnostics": self.diagnostics}


def validate_partition(g: Graph, result: DecompositionResult, spec: FlowerSpec) -> None:
    """Raise ``StitchingError`` unless the parts partition E(g) exactly."""
    seen = set()
    for f in result.flowers:
        if not verify_embedding(g, spec, f):
            raise StitchingError(f"flower at {f.center} is not a valid copy")
        es = f.edge_set()
        if len(es) != spec.edge_count or es & seen:
            raise StitchingError(f"flower at {f.center} overlaps an earlier part")
        seen |= es
    for a, b in result.single_edges:
        e = (min(a, b), max(a, b))
        if e in seen or not g.has_edge(*e):
            raise StitchingError(f"single edge {e} is repeated or absent")
        seen.add(e)
    if len(seen) != g.edge_count:
        raise StitchingError(f"parts cover {len(seen)} of {g.edge_count} edges")
    if result.parts != g.edge_count - result.packing * (spec.edge_count - 1):
        raise StitchingError("part count does not match the packing identity")


SWEEP_BUDGET = 200_000


def _sweep(g: Graph, flowers: list, spec: FlowerSpec, budget: int) -> tuple[list, str | None]:
    """Greedily pull further copies out of the edges no flower has used yet."""
    rest = g.copy()
    for f in flowers:
        _remove_flower(rest, f)
    found = []
    while True:
        try:
            emb = contains_flower(rest, spec, budget)
        except BudgetExhausted:
            return found, "budget"
        if emb is None:
            return found, None
        _remove_flower(rest, emb)
        found.append(emb)


def decompose(g: Graph, spec: FlowerSpec, profile="desk", seed: int = 0,
              sweep: bool = True, sweep_budget: int = SWEEP_BUDGET) -> DecompositionResult:
    """Decompose E(g) into flower copies and single edges.

    After the extraction loop, ``sweep`` runs a budgeted exhaustive search on
    the leftover edges; this is what finds copies in graphs the peeling step
    empties, such as a standalone flower.
    """
    prof = get_profile(profile, spec)
    consts = constants_of(spec)
    peel = peel_min_degree(g, "phi", spec)
    h = peel.kept
    old = peel.old_of_new
    result = DecompositionResult([], [], spec, g.n, g.edge_count, peeled=peel.peeled, profile=prof.name)
    flowers = []
    if h.edge_count:
        cut = best_local_cut(h, seed)
        state = bad_set(h, cut, spec, prof)
        result.m = cut.m
        use_alg2 = (spec.k > 1 and consts.c_bound is not None and cut.m <= consts.c_bound
                    and not state.bad_mask and is_balanced(cut))
        result.diagnostics["cut"] = cut_diagnostics(h, cut, spec, prof)
        if use_alg2:
            result.branch = "alg2"
            res = deletion_extraction(h, cut, spec, prof)
        else:
            result.branch = "alg1"
            try:
                g0 = regularize_bad(h, state, spec)
            except PreconditionError as exc:
                g0 = None
                result.stop_reason = f"trimming refused: {exc}"
            res = greedy_extraction(g0, state, spec, prof) if g0 is not None else None
        if res is not None:
            flowers = [f.relabel(old) for f in res.flowers]
            result.stop_reason = res.stop_reason
            result.diagnostics["loop"] = res.diagnostics
            if res.deleted:
                result.diagnostics["deleted"] = [old[v] for v in res.deleted]
    if sweep:
        extra, why = _sweep(g, flowers, spec, sweep_budget)
        flowers = flowers + extra
        result.diagnostics["sweep"] = {"found": len(extra), "stopped_by": why}
    used = set()
    for f in flowers:
        used |= f.edge_set()
    result.flowers = flowers
    result.single_edges = [e for e in g.edges() if e not in used]
    validate_partition(g, result, spec)
    return result


# names used by the public interface
algorithm1 = greedy_extraction
algorithm2 = deletion_extraction


def phi_of(result: DecompositionResult, g: Graph, spec: FlowerSpec) -> int:
    validate_partition(g, result, spec)
    return g.edge_count - result.packing * (spec.edge_count - 1)


def packing_target(g: Graph, spec: FlowerSpec) -> int:
    """Smallest packing that brings the part count down to the extremal formula."""
    excess = g.edge_count - ex_formula(g.n, spec)
    return max(0, -(-excess // (spec.edge_count - 1)))
