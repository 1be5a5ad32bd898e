"""Verification suites: each returns a JSON-ready report with a ``pass`` flag."""

from __future__ import annotations

import random

from .decompose import bad_set, cut_diagnostics, peel_min_degree
from .errors import BudgetExhausted, InputError, PreconditionError, StitchingError
from .extremal import build_family_member, chvatal_hanson_f, g_of_k
from .flower import (count_search_nodes, find_flower_centered, flower_potential, internal_edge_count,
                     parse_spec, verify_embedding)
from .graph import Graph, best_local_cut, bits, graph6_encode, random_graph_m
from . import oracle


FAMILY_SPECS = ("0,1:5", "1,1:5", "0,2:5,5", "2,1:7", "3,1:5")


def formulas(max_k: int = 8, max_arg: int = 50) -> dict:
    rows = []
    ok = True
    for k in range(1, max_k + 1):
        want = k * k - k if k % 2 else k * k - 3 * k // 2
        got = g_of_k(k)
        rows.append({"k": k, "g": got})
        ok = ok and got == want
    printed = g_of_k(3) == 6 and g_of_k(4) == 10
    f32 = chvatal_hanson_f(3, 2) == 9
    bound = all(chvatal_hanson_f(a, b) <= a * (b + 1)
                for a in range(1, max_arg + 1) for b in range(1, max_arg + 1))
    return {"g": rows, "printed_cases": printed, "f_3_2": f32, "f_upper_bound": bound,
            "pass": ok and printed and f32 and bound}


def matching_degree_tightness(max_nu: int = 3, max_delta: int = 3, max_n: int = 9) -> dict:
    return oracle.matching_degree_table(max_nu, max_delta, max_n)


def sum_min_bound(max_n: int = 8) -> dict:
    return oracle.sum_min_check(max_n)


def path_cycle_matching(max_n: int = 9) -> dict:
    return oracle.path_cycle_matching_check(max_n)


def peeling_instances(count: int = 200, max_n: int = 60, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(6, max_n)
        top = n * (n - 1) // 2 - n * n // 4
        j = rng.randint(0, min(top, 3 * n))
        yield n, j, random_graph_m(n, n * n // 4 + j, rng.randrange(1 << 30))


def peeling(count: int = 200, max_n: int = 60, seed: int = 0) -> dict:
    bad = []
    for n, j, g in peeling_instances(count, max_n, seed):
        res = peel_min_degree(g)
        if not (res.min_degree_ok() and res.excess_kept(g)):
            bad.append(graph6_encode(g))
    return {"graphs": count, "counterexamples": bad, "pass": not bad}


def degree_matching_extremal(s: int = 3, t: int = 1) -> dict:
    return oracle.degree_matching_extremal(s, t)


def family_members(specs=FAMILY_SPECS, n_min: int = 14, n_max: int = 24):
    """Every constructible (spec, n, variant, graph) in the grid."""
    for text in specs:
        spec = parse_spec(text)
        variants = ["block"] + (["3k3"] if (spec.s, spec.t) == (3, 1) else [])
        for n in range(n_min, n_max + 1):
            for var in variants:
                try:
                    g = build_family_member(n, spec, var)
                except InputError:
                    continue
                yield spec, n, var, g


def family_freeness(n_min: int = 14, n_max: int = 24, specs=FAMILY_SPECS, budget: int = 10 ** 7) -> dict:
    rows, ok = [], True
    for spec, n, var, g in family_members(specs, n_min, n_max):
        want = n * n // 4 + (spec.k - 1) ** 2
        try:
            found, nodes = count_search_nodes(g, spec, budget)
            verdict = "contains" if found else "free"
        except BudgetExhausted:
            verdict, nodes = "budget", budget
        good = g.edge_count == want and verdict == "free"
        ok = ok and good
        rows.append({"spec": str(spec), "n": n, "variant": var, "e": g.edge_count,
                     "verdict": verdict, "nodes": nodes, "pass": good})
    return {"members": len(rows), "rows": rows, "pass": ok and bool(rows)}


def block_instance(n: int, h: int, side: int = 0) -> Graph:
    """T_{n,2} with K_{h,h} added inside one side (on that side's lowest ids)."""
    half = (n + 1) // 2
    g = Graph(n, [(u, v) for u in range(half) for v in range(half, n)])
    base = 0 if side == 0 else half
    for a in range(h):
        for b in range(h):
            g.add_edge(base + a, base + h + b)
    return g


def bipartition_conclusions(sizes=(30, 40, 60), seed: int = 0, profile: str = "desk") -> dict:
    rows, ok = [], True
    spec = parse_spec("1,1:5")
    for n in sizes:
        for h in (2, 3):
            g = block_instance(n, h)
            cut = best_local_cut(g, seed)
            diag = cut_diagnostics(g, cut, spec, profile)
            good = all(diag["checks"].values())
            ok = ok and good
            rows.append({"n": n, "block": h, "checks": diag["checks"], "pass": good})
    return {"rows": rows, "pass": ok}


def centered_construction(sizes=(40, 60), specs=("1,1:5", "0,2:5,5", "2,1:5", "1,2:5,7"),
            profile: str = "desk", seed: int = 0) -> dict:
    """Build a flower at every eligible block vertex of block instances and check the conclusions."""
    rows, ok, built = [], True, 0
    for text in specs:
        spec = parse_spec(text)
        for n in sizes:
            g = block_instance(n, spec.k)
            cut = best_local_cut(g, seed)
            state = bad_set(g, cut, spec, profile)
            b_sets = [list(bits(m)) for m in state.bad]
            u_sets = [list(bits(p)) for p in cut.parts]
            for x in range(2 * spec.k):
                pot = flower_potential(g, cut, x, state.bad)
                if pot.total < spec.k:
                    continue
                try:
                    emb = find_flower_centered(g, cut, b_sets, u_sets, x, spec, profile)
                except (PreconditionError, StitchingError) as exc:
                    ok = False
                    rows.append({"spec": text, "n": n, "x": x, "error": str(exc), "pass": False})
                    continue
                good = verify_embedding(g, spec, emb) and internal_edge_count(cut, emb.edges()) == spec.k
                built += 1
                ok = ok and good
                rows.append({"spec": text, "n": n, "x": x, "pass": good})
    return {"built": built, "rows": rows, "pass": ok and built > 0}


# suite names accepted on the command line
SUITE_FUNCTIONS = {
    "lemma1": matching_degree_tightness,
    "lemma2": sum_min_bound,
    "obs1": path_cycle_matching,
    "lemma5": peeling,
    "lemma7": degree_matching_extremal,
    "lemma8": family_freeness,
    "lemma9": bipartition_conclusions,
    "lemma10": centered_construction,
    "formulas": formulas,
}
SUITES = tuple(SUITE_FUNCTIONS)


def run_suite(name: str, **bounds) -> dict:
    if name not in SUITE_FUNCTIONS:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITE_FUNCTIONS[name]
    report = fn(**{k: v for k, v in bounds.items() if v is not None})
    return {"suite": name, **report}
