"""Command-line front end.

Subcommands: graph (exact graph expansion figures), tuple (tuple metrics),
construct (emit tuple JSON), verify (inequality suites), experiment
(power sweeps). Reports are canonical JSON on stdout with the resolved
run configuration embedded; exit codes are 0 on success, 1 when a suite
or experiment records failures, 2 on usage/input errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import kernels
from .constructions import (
    graphical_tuple,
    haar_unitary_tuple,
    identity_tuple,
    localized_unitary_tuple,
    tuple_power,
)
from .core import random_tuple
from .dimension import dimension_edge_estimate, dimension_expansion_estimate
from .errors import ConfigError, ExpandlabError
from .fields import COMPLEX, prime_field
from .graph import (
    cycle_graph,
    edge_expansion,
    spectral_expansion,
    vertex_expansion,
)
from .quantum import quantum_edge_bracket, quantum_expansion, schatten_edge_bracket
from .rng import spawn_rng
from .serialize import canonical_json_bytes, load_graph, load_tuple, tuple_to_json
from .verify import (
    edge_identity_suite,
    graphical_exact_check,
    localized_experiment,
    norm_rank_suite,
    pi_expansion_suite,
    rank_chain_suite,
    separation_experiment,
    spectral_dimension_check,
    spectrum_lift_check,
    two_vertex_checks,
    witness_suite,
)

SUITES = ("eq16", "normrank", "prop31", "witness", "pi", "thm15", "thm16", "cor13", "prop19")


def _threads() -> int | None:
    raw = os.environ.get("EXPANDLAB_THREADS")
    if raw is None or raw == "":
        return None
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError(f"EXPANDLAB_THREADS must be an integer, got {raw!r}")
    if k < 1:
        raise ConfigError(f"EXPANDLAB_THREADS must be >= 1, got {k}")
    if kernels.ACTIVE_BACKEND == "numba":
        import numba

        numba.set_num_threads(min(k, numba.config.NUMBA_NUM_THREADS))
    return k


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="expandlab",
        description="Expansion figures for graphs and matrix tuples. Graph files "
        'are plain text ("n m" header then 1-indexed "u v" edge lines); tuples are '
        'JSON {"field": "complex"|{"prime": p}, "n": N, "matrices": [...]} with '
        "complex entries as [re, im] pairs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="exact expansion figures of a graph file")
    g.add_argument("path")
    g.add_argument("--metrics", default="h,mu,lambda", help="comma list from {h,mu,lambda}")
    g.add_argument("--limit", type=int, default=None, help="refuse graphs with more vertices")

    t = sub.add_parser("tuple", help="expansion metrics of a tuple JSON file")
    t.add_argument("path")
    t.add_argument("--metrics", default="lambda", help="comma list from {lambda,hq,sp,mu,hd}")
    t.add_argument("--p", type=float, default=2.0, help="Schatten index for the sp metric")
    t.add_argument("--budget", type=int, default=20000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument(
        "--normalization",
        default="tuple",
        help="edge denominator: 'tuple' (length), 'auto' (graph degree for graphical tuples), or an integer",
    )

    c = sub.add_parser("construct", help="build a tuple and emit its JSON")
    c.add_argument("kind", choices=["graphical", "power", "haar", "localized", "identity"])
    c.add_argument("--graph", help="graph file (graphical)")
    c.add_argument("--field", default="complex", help="'complex' or a prime p")
    c.add_argument("--unnormalized", action="store_true")
    c.add_argument("--input", help="tuple JSON file (power)")
    c.add_argument("--s", type=float, help="power exponent (power)")
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--eps", type=float)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", help="write here instead of stdout")

    v = sub.add_parser("verify", help="run an inequality suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--graph", help="graph file for graph-based suites (default C4)")
    v.add_argument("--input", help="tuple JSON file for tuple-based suites")
    v.add_argument("--field", default=None, help="'complex' or a prime (suite-dependent default)")
    v.add_argument("--p", type=int, default=2, help="prime for thm16")
    v.add_argument("--budget", type=int, default=20000)

    e = sub.add_parser("experiment", help="fractional-power sweeps")
    e.add_argument("kind", choices=["separation", "localized"])
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--d", type=int, default=None)
    e.add_argument("--eps", type=float, default=0.01)
    e.add_argument("--s", default=None, help="comma list of exponents")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--mu-budget", type=int, default=2000, dest="mu_budget")
    e.add_argument("--csv", help="also write per-s rows to this CSV file")
    return ap


def _config(args, inputs: list, threads) -> dict:
    cfg = {
        "command": args.command,
        "inputs": [str(x) for x in inputs],
        "seed": int(getattr(args, "seed", 0) or 0),
        "budget": int(getattr(args, "budget", 0) or 0),
        "tolerances": {},
        "normalization": getattr(args, "normalization", None),
        "output": "json",
        "backend": kernels.ACTIVE_BACKEND,
    }
    if threads is not None:
        cfg["threads"] = threads
    return cfg


def _field_arg(text: str):
    if text == "complex":
        return COMPLEX
    return prime_field(int(text))


def _run_graph(args, threads) -> tuple[int, object]:
    g = load_graph(args.path)
    if args.limit is not None and g.n > args.limit:
        raise ConfigError(f"graph has {g.n} vertices, over the requested limit {args.limit}")
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    result: dict = {"n": g.n, "m": g.m}
    for m in metrics:
        if m == "h":
            value, witness = edge_expansion(g)
            result["h"] = value
            result["h_witness"] = list(witness)
        elif m == "mu":
            value, witness = vertex_expansion(g)
            result["mu"] = value
            result["mu_witness"] = list(witness)
        elif m == "lambda":
            result.update(spectral_expansion(g))
        else:
            raise ConfigError(f"unknown graph metric {m!r}")
    return 0, {"config": _config(args, [args.path], threads), "result": result}


def _resolve_normalization(b, mode: str):
    if mode == "tuple":
        return None
    if mode == "auto":
        if b.meta.get("kind") == "graphical":
            return int(b.meta["degree"])
        return None
    try:
        return int(mode)
    except ValueError:
        raise ConfigError(f"normalization must be 'tuple', 'auto', or an integer, got {mode!r}")


def _run_tuple(args, threads) -> tuple[int, object]:
    b = load_tuple(args.path)
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    norm = _resolve_normalization(b, args.normalization)
    result: dict = {"n": b.n, "d": b.d, "field": b.field}
    for m in metrics:
        if m == "lambda":
            rep = quantum_expansion(b)
            result["gap"] = rep.gap
            result["lambda2_sv"] = rep.lambda2_sv
        elif m == "hq":
            result["hq"] = quantum_edge_bracket(b, budget=args.budget, seed=args.seed)
        elif m == "sp":
            result["sp"] = schatten_edge_bracket(b, args.p, budget=args.budget, seed=args.seed)
            result["sp_index"] = args.p
        elif m == "mu":
            result["mu"] = dimension_expansion_estimate(b, budget=args.budget, seed=args.seed)
        elif m == "hd":
            result["hd"] = dimension_edge_estimate(
                b, budget=args.budget, seed=args.seed, normalization=norm
            )
        else:
            raise ConfigError(f"unknown tuple metric {m!r}")
    return 0, {"config": _config(args, [args.path], threads), "result": result}


def _require(args, names: list) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigError(f"construct {args.kind} needs --{', --'.join(missing)}")


def _run_construct(args, threads) -> tuple[int, object]:
    del threads
    if args.kind == "graphical":
        _require(args, ["graph"])
        g = load_graph(args.graph)
        fld = _field_arg(args.field)
        normalized = None if not args.unnormalized else False
        b = graphical_tuple(g, fld, normalized=normalized)
    elif args.kind == "power":
        _require(args, ["input", "s"])
        b = tuple_power(load_tuple(args.input), args.s)
    elif args.kind == "haar":
        _require(args, ["n", "d"])
        b = haar_unitary_tuple(args.n, args.d, args.seed)
    elif args.kind == "localized":
        _require(args, ["n", "d", "eps"])
        b = localized_unitary_tuple(args.n, args.d, args.eps, args.seed)
    else:
        _require(args, ["n", "d"])
        b = identity_tuple(args.n, args.d, _field_arg(args.field))
    payload = canonical_json_bytes(tuple_to_json(b)) + b"\n"
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
        return 0, None
    sys.stdout.write(payload.decode())
    return 0, None


def _verify_graph(args):
    return load_graph(args.graph) if args.graph else cycle_graph(4)


def _verify_tuple(args):
    if args.input:
        return load_tuple(args.input)
    fld = _field_arg(args.field) if args.field else COMPLEX
    if fld.is_complex:
        return haar_unitary_tuple(6, 3, args.seed)
    return random_tuple(fld, 5, 2, spawn_rng(args.seed, "cli-suite-tuple", fld.p))


def _run_verify(args, threads) -> tuple[int, object]:
    suite = args.suite
    if suite == "prop19":
        rep = two_vertex_checks()
    elif suite == "eq16":
        rep = edge_identity_suite(_verify_tuple(args), trials=args.trials, seed=args.seed)
    elif suite == "normrank":
        rep = norm_rank_suite(_verify_tuple(args), trials=args.trials, seed=args.seed)
    elif suite == "prop31":
        rep = rank_chain_suite(_verify_tuple(args), trials=args.trials, seed=args.seed)
    elif suite == "witness":
        g = _verify_graph(args)
        fld = _field_arg(args.field) if args.field else prime_field(2)
        b = graphical_tuple(g, fld)
        if fld.is_complex:
            rep = witness_suite(b, trials=args.trials, seed=args.seed)
        else:
            rep = witness_suite(b, exhaustive=True)
    elif suite == "pi":
        g = _verify_graph(args)
        fld = _field_arg(args.field) if args.field else prime_field(2)
        if fld.is_complex:
            rep = pi_expansion_suite(g, fld, trials=args.trials, seed=args.seed)
        else:
            rep = pi_expansion_suite(g, fld, exhaustive=True)
    elif suite == "thm15":
        rep = spectrum_lift_check(_verify_graph(args))
    elif suite == "thm16":
        rep = graphical_exact_check(_verify_graph(args), p=args.p)
    else:
        b = load_tuple(args.input) if args.input else haar_unitary_tuple(8, 3, args.seed)
        rep = spectral_dimension_check(b, budget=args.budget, seed=args.seed)
    code = 0 if rep.passed else 1
    return code, {"config": _config(args, [], threads), "result": rep}


def _parse_s_list(text: str | None, default: tuple) -> tuple:
    if text is None:
        return default
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"--s wants a comma list of numbers, got {text!r}")


def _write_csv(path: str, rows: list) -> None:
    fieldnames = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {k: format(v, ".17g") if isinstance(v, float) else v for k, v in row.items()}
            )


def _run_experiment(args, threads) -> tuple[int, object]:
    if args.kind == "separation":
        s_list = _parse_s_list(args.s, (1, 0.3, 0.1, 0.03, 0.01, 0.003))
        report = separation_experiment(
            n=args.n or 8, d=args.d or 3, s_list=s_list, seed=args.seed, mu_budget=args.mu_budget
        )
        ok = report["all_caps_hold"]
    else:
        s_list = _parse_s_list(args.s, (0.1, 0.5, 1, 2, 10))
        report = localized_experiment(
            n=args.n or 16, d=args.d or 4, eps=args.eps, s_list=s_list, seed=args.seed
        )
        ok = report["all_ok"]
    if args.csv:
        _write_csv(args.csv, report["rows"])
    return (0 if ok else 1), {"config": _config(args, [], threads), "result": report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = _threads()
        runner = {
            "graph": _run_graph,
            "tuple": _run_tuple,
            "construct": _run_construct,
            "verify": _run_verify,
            "experiment": _run_experiment,
        }[args.command]
        code, report = runner(args, threads)
    except ExpandlabError as exc:
        sys.stderr.write(f"expandlab: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"expandlab: {exc}\n")
        return 2
    if report is not None:
        sys.stdout.write(canonical_json_bytes(report).decode() + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
