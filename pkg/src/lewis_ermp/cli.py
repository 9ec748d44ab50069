"""Command-line entry point: ``python -m lewis_ermp <command> ...``.

Exit codes: 0 success, 1 bad input, 2 an iterative solver missed its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .bounds import SCHEMA_VERSION, bounds_report
from .graph import FAMILIES, GraphError, generate, read_edge_list, write_edge_list
from .laplacian import DisconnectedSupportError
from .lewis import lewis_weights
from .oracle import design_gap_demo, ermp_solve
from .stt import lw_thin_tree
from .trees import TreeError, TreeInstance, is_bowtie, polarize

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    return x


def dumps_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def dumps_csv(rows: list[dict]) -> str:
    """One header row; every cell JSON-encoded so types survive a round trip."""
    rows = [_plain(r) for r in rows]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([json.dumps(r[c], sort_keys=True) if c in r else "" for c in cols])
    return buf.getvalue()


def loads_csv(text: str) -> list[dict]:
    rd = csv.reader(io.StringIO(text))
    cols = next(rd)
    return [{c: json.loads(v) for c, v in zip(cols, row) if v != ""} for row in rd]


def _emit(args, payload) -> None:
    if args.format == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        text = dumps_csv(rows)
    else:
        text = dumps_json(payload)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# argument handling


def parse_params(text: str | None) -> dict:
    """``"k=400,p=400"`` -> {"k": "400", "p": "400"}."""
    out = {}
    for part in (text or "").split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InputError(f"parameter {part!r} is not of the form key=value")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_graph(args):
    if args.graph and args.family:
        raise InputError("give either --graph or --family, not both")
    if args.graph:
        return read_edge_list(args.graph, take_lcc=args.lcc)
    if args.family:
        return generate(args.family, parse_params(args.params), args.seed)
    raise InputError("a graph is required: --graph FILE or --family NAME --params k=v,...")


def _graph_args(p):
    p.add_argument("--graph", help="edge-list file")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--params", default="", help="family parameters, k=v,...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lcc", action="store_true", help="keep the largest component of a disconnected input")


def _common(p):
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--quiet", action="store_true")


def _solver_args(p):
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--C", type=float, default=4.0)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args):
    G = load_graph(args)
    if args.out and args.format == "json":
        Path(args.out).write_text(dumps_json({"n": G.n, "m": G.m, "edges": G.edges, "schema": SCHEMA_VERSION}))
    elif args.out:
        write_edge_list(G, args.out)
    else:
        sys.stdout.write("".join(f"{u} {v}\n" for u, v in G.edges))
    _log(args, f"{G.name or 'graph'}: n={G.n} m={G.m}")
    return EXIT_OK


def cmd_lewis(args):
    G = load_graph(args)
    r = lewis_weights(G, eps=args.eps, C=args.C)
    out = r.to_dict()
    out.update(schema=SCHEMA_VERSION, n=G.n, m=G.m)
    _emit(args, out)
    return EXIT_OK if r.converged else EXIT_NONCONVERGED


def cmd_bounds(args):
    G = load_graph(args)
    rep = bounds_report(G, eps=args.eps, C=args.C, strict=False)
    _emit(args, rep.to_dict())
    for k, ok in rep.checks.items():
        if not ok:
            _log(args, f"warning: check {k} failed")
    return EXIT_OK if rep.lewis_converged else EXIT_NONCONVERGED


def cmd_solve(args):
    G = load_graph(args)
    sol = ermp_solve(G, tol=args.tol, max_iters=args.max_iters)
    out = sol.to_dict()
    out.update(schema=SCHEMA_VERSION, n=G.n, m=G.m)
    _emit(args, out)
    return EXIT_OK if sol.converged else EXIT_NONCONVERGED


def cmd_tree(args):
    T = TreeInstance.from_graph(load_graph(args))
    ok, dec = is_bowtie(T)
    out = T.to_dict()
    out.pop("edges")
    out.update(schema=SCHEMA_VERSION, g_star=T.g_star, is_bowtie=ok, bowtie=dec)
    _emit(args, out)
    return EXIT_OK


def cmd_polarize(args):
    P = polarize(load_graph(args), keep_trajectory=False)
    ok, dec = is_bowtie(P.final)
    if args.format == "csv":
        _emit(args, P.steps)
        return EXIT_OK
    summary = {
        "schema": SCHEMA_VERSION,
        "steps": len(P.steps),
        "alpha_initial": P.initial.alpha,
        "alpha_final": P.final.alpha,
        "is_bowtie": ok,
        "bowtie": dec,
        "final_edges": P.final.tree.edges,
    }
    text = P.jsonl() + json.dumps(_plain(summary), sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stt(args):
    G = load_graph(args)
    rep = lw_thin_tree(G, eps=args.eps)
    out = rep.to_dict()
    out["schema"] = SCHEMA_VERSION
    _emit(args, out)
    return EXIT_OK if rep.lewis_converged else EXIT_NONCONVERGED


def cmd_design_gap(args):
    out = design_gap_demo(args.n)
    out["schema"] = SCHEMA_VERSION
    _emit(args, out)
    return EXIT_OK


def _progress(args):
    def report(job, res):
        _log(args, f"{job[0]} {job[1]} seed={job[2]} alpha_min={res['alpha_min']:.4f} iters={res['iterations']}")

    return report


def cmd_table1(args):
    only = [s for s in (args.only or "").split(",") if s] or None
    rows = ex.table1(runs=args.runs, eps=args.eps, C=args.C, workers=args.workers, only=only, progress=_progress(args))
    _emit(args, rows)
    return EXIT_OK


def cmd_sweep(args):
    rows = ex.sweep(
        args.family,
        ex.parse_range(args.n),
        ex.parse_range(args.d) if args.d else None,
        runs=args.runs,
        eps=args.eps,
        C=args.C,
        workers=args.workers,
        progress=_progress(args),
    )
    _emit(args, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lewis_ermp", description="Lewis weights and Kirchhoff-index bounds on graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph and write its edge list")
    _graph_args(p)
    _common(p)
    p.set_defaults(func=cmd_gen, format="edges")

    for name, func, helptext in (
        ("lewis", cmd_lewis, "Lewis weights of a graph"),
        ("bounds", cmd_bounds, "ratio bounds at Lewis weights"),
        ("stt", cmd_stt, "spectral thinness of the Lewis spanning tree"),
    ):
        p = sub.add_parser(name, help=helptext)
        _graph_args(p)
        _solver_args(p)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("solve", help="reference optimum of the Kirchhoff index (n <= 200)")
    _graph_args(p)
    _common(p)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=50_000)
    p.set_defaults(func=cmd_solve)

    for name, func, helptext in (
        ("tree", cmd_tree, "closed-form optimum and ratio of a tree"),
        ("polarize", cmd_polarize, "drive a tree to a bowtie; JSON lines per step"),
    ):
        p = sub.add_parser(name, help=helptext)
        _graph_args(p)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("design-gap", help="Lewis weights versus the 1/i design on diag(1..n)")
    p.add_argument("--n", type=int, default=100)
    _common(p)
    p.set_defaults(func=cmd_design_gap)

    p = sub.add_parser("table1", help="alpha_min for the benchmark families")
    _solver_args(p)
    _common(p)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--only", help="comma-separated row labels")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", help="alpha_min versus size for regular graphs or lollipops")
    p.add_argument("--family", choices=("regular", "lollipop"), required=True)
    p.add_argument("--n", default="50..400")
    p.add_argument("--d", default=None, help="degrees for the regular family, e.g. 3..6")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    _solver_args(p)
    _common(p)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, GraphError, TreeError, DisconnectedSupportError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
