"""The twelve acceptance criteria, each printing one PASS/FAIL line."""

import contextlib
import io
import json
import random
import time

import pytest

from oddflower import cli, verify
from oddflower.decompose import decompose, packing_target, validate_partition
from oddflower.extremal import build_family_member, ex_formula
from oddflower.flower import contains_flower, parse_spec, standalone_flower, verify_embedding
from oddflower.graph import graph6_encode, random_graph
from oddflower.oracle import (EnumerationStream, enumerate_graphs, ex_bruteforce, ex_descending,
                              flower_copies_by_subsets, degree_matching_extremal, max_packing,
                              min_partition_bruteforce)
from oddflower.verify import block_instance


@pytest.fixture
def record(capsys):
    def emit(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = ""):
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        line = f"criterion {number:2d} {status}  {title}  ({elapsed:.1f}s of {limit:.0f}s)"
        if detail:
            line += f"  {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, detail
        assert in_time, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def test_criterion_01_formulas(record):
    t = time.perf_counter()
    rep = verify.formulas()
    record(1, "formula suite", rep["pass"], time.perf_counter() - t, 1)


def test_criterion_02_matching_degree_tightness(record):
    t = time.perf_counter()
    rep = verify.matching_degree_tightness(3, 3, 9)
    bad = [r for r in rep["rows"] if r["max_edges"] != r["f"]]
    record(2, "max edges for each (matching number, max degree) equals f", rep["pass"],
           time.perf_counter() - t, 300, f"rows={len(rep['rows'])} mismatches={bad}")


def test_criterion_03_degree_matching_extremal(record):
    t = time.perf_counter()
    results = {st: degree_matching_extremal(*st) for st in [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2)]}
    ok = all(r["pass"] for r in results.values())
    detail = ", ".join(f"{st}: max={r['max_edges']} witnesses={len(r['witnesses'])}"
                       for st, r in results.items())
    record(3, "degree-plus-matching extremal graphs", ok, time.perf_counter() - t, 1800, detail)


def test_criterion_04_family_members_free(record):
    t = time.perf_counter()
    rep = verify.family_freeness(14, 24)
    failed = [r for r in rep["rows"] if not r["pass"]]
    record(4, "family members have the extremal count and are flower-free", rep["pass"],
           time.perf_counter() - t, 600, f"members={rep['members']} failed={failed[:3]}")


def test_criterion_05_paths_and_cycles_matching(record):
    t = time.perf_counter()
    rep = verify.path_cycle_matching(9)
    record(5, "max degree 2 graphs: 2*matching >= |V| - components", rep["pass"],
           time.perf_counter() - t, 60, f"graphs={rep['graphs']}")


def test_criterion_06_sum_min_bound(record):
    t = time.perf_counter()
    rep = verify.sum_min_bound(8)
    record(6, "sum of min(deg, b) bound", rep["pass"], time.perf_counter() - t, 600,
           f"graphs={rep['graphs']} cases={rep['cases']}")


def test_criterion_07_peeling(record):
    t = time.perf_counter()
    rep = verify.peeling(200, 60, seed=0)
    record(7, "min-degree peeling invariants", rep["pass"], time.perf_counter() - t, 60,
           f"graphs={rep['graphs']}")


def decomposition_corpus():
    rng = random.Random(2024)
    corpus = []
    specs = ["0,1:5", "1,1:5", "0,2:5,5", "2,1:7", "3,1:5"]
    for text in specs:
        for n in (24, 50):
            corpus.append(("family", text, build_family_member(n, parse_spec(text))))
    for j in range(10):
        text = specs[j % len(specs)]
        n = rng.choice([30, 44, 60, 80])
        g = build_family_member(n, parse_spec(text))
        half = (n + 1) // 2
        for _ in range(rng.randint(1, 6)):
            side = rng.randrange(2)
            lo, hi = (0, half) if side == 0 else (half, n)
            a, b = rng.sample(range(lo, hi), 2)
            if not g.has_edge(a, b):
                g.add_edge(a, b)
        corpus.append(("family+noise", text, g))
    for j in range(15):
        n = rng.choice([30, 40, 50, 60, 70, 80])
        r = rng.randint(1, 6)
        text = rng.choice(["1,1:5", "0,2:5,5", "2,1:5", "0,1:5"])
        corpus.append((f"block K{r},{r}", text, block_instance(n, r, rng.randrange(2))))
    for j in range(15):
        n = rng.choice([20, 30, 40, 50])
        p = rng.choice([0.5, 0.6, 0.7, 0.8])
        text = rng.choice(["1,1:5", "0,1:5", "0,2:5,5"])
        corpus.append(("random", text, random_graph(n, p, rng.randrange(1 << 30))))
    return corpus


def test_criterion_08_decomposition_validity(record):
    t = time.perf_counter()
    corpus = decomposition_corpus()
    failures = []
    for kind, text, g in corpus:
        spec = parse_spec(text)
        res = decompose(g, spec, profile="desk", seed=0)
        try:
            validate_partition(g, res, spec)
        except AssertionError as exc:
            failures.append((kind, text, str(exc)))
            continue
        if not all(verify_embedding(g, spec, f) for f in res.flowers):
            failures.append((kind, text, "bad flower"))
        if res.parts != g.edge_count - res.packing * (spec.edge_count - 1):
            failures.append((kind, text, "part count"))
    record(8, "decomposition partitions the edges exactly", len(corpus) == 50 and not failures,
           time.perf_counter() - t, 600, f"instances={len(corpus)} failures={failures[:3]}")


def test_criterion_09_packing_lower_bound(record):
    t = time.perf_counter()
    rows, ok = [], True
    for text in ("1,1:5", "0,2:5,5", "2,1:5", "1,2:5,5"):
        spec = parse_spec(text)
        for n in (40, 60):
            g = block_instance(n, spec.k)
            res = decompose(g, spec)
            need = packing_target(g, spec)
            good = res.packing >= need and res.parts <= ex_formula(n, spec)
            ok = ok and good
            rows.append(f"{text}/n{n}:{res.packing}>={need}")
    record(9, "packing reaches the extremal part count", ok, time.perf_counter() - t, 300, " ".join(rows))


def test_criterion_10_oracle_consistency(record):
    t = time.perf_counter()
    spec = parse_spec("1,1:5")
    ok = True
    rows = []
    for n in range(1, 8):
        a = ex_bruteforce(n, spec)
        b = ex_descending(n, spec)
        free = all(contains_flower(w, spec) is None and w.edge_count == a.value for w in a.witnesses)
        ok = ok and a.value == b.value and free
        rows.append(f"n{n}={a.value}")
    ok = ok and ex_bruteforce(6, spec).value == 15 and ex_bruteforce(7, spec).value < 21
    record(10, "enumeration and descending search agree on ex", ok, time.perf_counter() - t, 1800,
           " ".join(rows))


def test_criterion_11_phi_identity(record):
    t = time.perf_counter()
    checked, bad = 0, []
    for text in ("1,1:5", "0,1:5"):
        spec = parse_spec(text)
        for n in range(1, 9):
            for g in enumerate_graphs(EnumerationStream(n, max_edges=12, no_isolated=True)):
                if len(flower_copies_by_subsets(g, spec)) > 2:
                    continue
                checked += 1
                p = max_packing(g, spec)
                direct = min_partition_bruteforce(g, spec)
                if not p.exact or g.edge_count - p.value * (spec.edge_count - 1) != direct:
                    bad.append((text, graph6_encode(g)))
    record(11, "e - p*(e(H)-1) equals the direct minimum partition", checked > 0 and not bad,
           time.perf_counter() - t, 600, f"graphs={checked} mismatches={bad[:3]}")


def _run_cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli.main(argv + ["--json"])
    data = json.loads(buf.getvalue())
    data.pop("timings", None)
    return code, json.dumps(data, sort_keys=True)


def test_criterion_12_determinism(record, tmp_path):
    t = time.perf_counter()
    flower, _ = standalone_flower(parse_spec("1,1:5"))
    fpath = tmp_path / "flower.g6"
    fpath.write_text(graph6_encode(flower) + "\n")
    rpath = tmp_path / "random.g6"
    rpath.write_text(graph6_encode(random_graph(30, 0.6, 7)) + "\n")
    commands = [
        ["gen", "--n", "20", "--spec", "1,1:5", "--kind", "family"],
        ["gen", "--n", "9", "--kind", "turan", "--r", "3"],
        ["gen", "--n", "30", "--kind", "theorem1", "--k", "4"],
        ["check", str(fpath), "--spec", "1,1:5"],
        ["decompose", str(rpath), "--spec", "1,1:5", "--seed", "3"],
        ["decompose", str(fpath), "--spec", "1,1:5", "--profile", "paper"],
        ["verify", "lemma7", "--s", "2", "--t", "1"],
        ["verify", "lemma5", "--count", "20", "--seed", "5"],
        ["brute", "ex", "--n", "6", "--spec", "0,1:5"],
        ["brute", "packing", "--graph", str(fpath), "--spec", "1,1:5"],
        ["brute", "phi", "--graph", str(fpath), "--spec", "1,1:5"],
    ]
    diffs = []
    for argv in commands:
        first, second = _run_cli(argv), _run_cli(argv)
        if first != second:
            diffs.append(argv[0])
    record(12, "repeated CLI runs give identical JSON", not diffs, time.perf_counter() - t, 60,
           f"commands={len(commands)} differing={diffs}")
