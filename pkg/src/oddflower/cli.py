"""Command-line interface: gen, check, decompose, verify, brute."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .decompose import decompose, validate_partition
from .errors import BudgetExhausted, CapRefusal, InputError, StitchingError
from .extremal import build_family_member, build_theorem1_extremal, turan_graph
from .flower import DEFAULT_BUDGET, contains_flower, parse_spec
from .graph import format_graph, graph6_encode, parse_graph
from . import oracle, verify

SCHEMA_VERSION = 1

EXIT_OK, EXIT_CONTAINS, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL, EXIT_CAP = range(6)


def default_budget() -> int:
    raw = os.environ.get("ODDFLOWER_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"ODDFLOWER_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("ODDFLOWER_BUDGET must be positive")
    return value


def read_graph(path: str, fmt: str | None):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="ascii") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        except UnicodeDecodeError:
            raise InputError(f"{path} is not ASCII text") from None
    return parse_graph(text, fmt)


def _spec(args):
    if getattr(args, "spec", None) is None:
        raise InputError("--spec is required")
    return parse_spec(args.spec)


class Reporter:
    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.start = time.perf_counter()

    def emit(self, inputs: dict, outputs: dict, text: str, profile: str | None = None) -> None:
        if self.args.json:
            report = {
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "inputs": inputs,
                "outputs": outputs,
                "timings": {"seconds": round(time.perf_counter() - self.start, 6)},
                "profile": profile,
                "version": __version__,
            }
            print(json.dumps(report, sort_keys=True))
        else:
            print(text)


def cmd_gen(args) -> int:
    rep = Reporter(args, "gen")
    if args.n is None:
        raise InputError("--n is required")
    if args.kind == "family":
        spec = _spec(args)
        g = build_family_member(args.n, spec, args.variant)
    elif args.kind == "turan":
        g = turan_graph(args.n, args.r)
    else:
        k = args.k if args.k is not None else (_spec(args).k if args.spec else None)
        if k is None:
            raise InputError("theorem1 needs --k or --spec")
        g = build_theorem1_extremal(args.n, k)
    fmt = args.format or "graph6"
    text = format_graph(g, fmt)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    inputs = {"n": args.n, "kind": args.kind, "spec": args.spec, "variant": args.variant,
              "r": args.r, "k": args.k, "format": fmt}
    rep.emit(inputs, {"graph6": graph6_encode(g), "n": g.n, "e": g.edge_count},
             text.rstrip("\n"))
    return EXIT_OK


def cmd_check(args) -> int:
    rep = Reporter(args, "check")
    g = read_graph(args.graph, args.format)
    spec = _spec(args)
    budget = args.budget or default_budget()
    inputs = {"graph": graph6_encode(g), "spec": str(spec), "budget": budget}
    try:
        emb = contains_flower(g, spec, budget)
    except BudgetExhausted:
        rep.emit(inputs, {"verdict": "budget-exhausted"}, "budget-exhausted")
        return EXIT_BUDGET
    if emb is None:
        rep.emit(inputs, {"verdict": "free"}, "free")
        return EXIT_OK
    rep.emit(inputs, {"verdict": "contains", "embedding": emb.to_json()},
             f"contains center={emb.center} cycles={[list(c) for c in emb.cycles]}")
    return EXIT_CONTAINS


def cmd_decompose(args) -> int:
    rep = Reporter(args, "decompose")
    g = read_graph(args.graph, args.format)
    spec = _spec(args)
    res = decompose(g, spec, profile=args.profile, seed=args.seed, sweep=not args.no_sweep)
    validate_partition(g, res, spec)
    inputs = {"graph": graph6_encode(g), "spec": str(spec), "profile": args.profile,
              "seed": args.seed, "sweep": not args.no_sweep}
    text = (f"packing {res.packing} parts {res.parts} e {res.e} branch {res.branch}"
            + (f" stop {res.stop_reason}" if res.stop_reason else ""))
    rep.emit(inputs, res.to_json(), text, profile=args.profile)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = Reporter(args, "verify")
    bounds = {}
    if args.suite == "lemma1":
        bounds = {"max_nu": args.max_nu, "max_delta": args.max_delta, "max_n": args.max_n}
    elif args.suite in ("lemma2", "obs1"):
        bounds = {"max_n": args.max_n}
    elif args.suite == "lemma5":
        bounds = {"count": args.count, "max_n": args.max_n, "seed": args.seed}
    elif args.suite == "lemma7":
        bounds = {"s": args.s, "t": args.t}
    elif args.suite == "lemma8":
        bounds = {"n_min": args.n_min, "n_max": args.n_max}
    elif args.suite in ("lemma9", "lemma10"):
        bounds = {"seed": args.seed, "profile": args.profile}
    report = verify.run_suite(args.suite, **bounds)
    text = f"{args.suite}: {'pass' if report['pass'] else 'FAIL'}"
    if args.suite == "lemma7":
        text += f" max={report['max_edges']} witnesses={report['witnesses']}"
    rep.emit({"suite": args.suite, **{k: v for k, v in bounds.items() if v is not None}}, report, text)
    return EXIT_OK if report["pass"] else EXIT_CONTAINS


def cmd_brute(args) -> int:
    rep = Reporter(args, "brute")
    spec = _spec(args)
    budget = args.budget or default_budget()
    inputs = {"task": args.task, "spec": str(spec), "budget": budget}
    if args.task == "packing" or (args.task == "phi" and args.graph):
        if not args.graph:
            raise InputError("--graph is required")
        g = read_graph(args.graph, args.format)
        inputs["graph"] = graph6_encode(g)
        res = oracle.max_packing(g, spec, budget)
        if args.task == "packing":
            out = res.to_json()
            value = res.value
        else:
            value = g.edge_count - res.value * (spec.edge_count - 1)
            out = {"value": value, "packing": res.value, "exact": res.exact, "nodes": res.nodes}
        rep.emit(inputs, out, str(value) + ("" if res.exact else " (lower bound, budget)"))
        return EXIT_OK if res.exact else EXIT_BUDGET
    if args.n is None:
        raise InputError("--n is required")
    inputs["n"] = args.n
    try:
        if args.task == "ex":
            cert = oracle.ex_bruteforce(args.n, spec, budget)
        else:
            cert = oracle.phi_n_bruteforce(args.n, spec, budget)
    except BudgetExhausted as exc:
        out = exc.partial.to_json() if exc.partial is not None else {}
        rep.emit(inputs, out, "budget-exhausted")
        return EXIT_BUDGET
    rep.emit(inputs, cert.to_json(), str(cert.value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON run report")
    common.add_argument("--format", choices=("graph6", "edgelist"), help="graph format (default: sniff)")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="oddflower", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="construct a graph")
    g.add_argument("--n", type=int)
    g.add_argument("--spec")
    g.add_argument("--kind", choices=("family", "turan", "theorem1"), default="family")
    g.add_argument("--variant")
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--k", type=int)
    g.add_argument("--out", "-o")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", parents=[common], help="test a graph for a flower subgraph")
    c.add_argument("graph", help="file path or - for stdin")
    c.add_argument("--spec", required=True)
    c.add_argument("--budget", type=int)
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("decompose", parents=[common], help="partition edges into flowers and single edges")
    d.add_argument("graph")
    d.add_argument("--spec", required=True)
    d.add_argument("--profile", choices=("desk", "paper"), default="desk")
    d.add_argument("--no-sweep", action="store_true", help="skip the final greedy search on leftover edges")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", parents=[common], help="run an exhaustive verification suite")
    v.add_argument("suite", choices=verify.SUITES)
    v.add_argument("--max-n", type=int)
    v.add_argument("--max-nu", type=int)
    v.add_argument("--max-delta", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--t", type=int)
    v.add_argument("--count", type=int)
    v.add_argument("--n-min", type=int)
    v.add_argument("--n-max", type=int)
    v.add_argument("--profile", choices=("desk", "paper"))
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("brute", parents=[common], help="exact brute-force values")
    b.add_argument("task", choices=("ex", "phi", "packing"))
    b.add_argument("--n", type=int)
    b.add_argument("--graph")
    b.add_argument("--spec", required=True)
    b.add_argument("--budget", type=int)
    b.set_defaults(func=cmd_brute)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CapRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (StitchingError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
