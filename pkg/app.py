#!/usr/bin/env python3
"""
Command-line entry point.

Usage:
  python app.py solve instance.gr --k 3
  python app.py solve instance.gr --json --trace
  python app.py solve-arcs instance.txt --format edge-list --k 2
  python app.py verify instance.gr solution.txt
  python app.py gen --n 1000 --m 3000 --k 3 --seed 7 --out planted.gr
  python app.py bench --k 3 --sizes 10000 20000 40000 --chart bench.html
  python app.py trace instance.gr --what crux --k 2

Exit codes: 0 success, 1 NO (or a failed verify), 2 usage or input error.
"""
import argparse
import json
import logging
import sys
from typing import Optional

from components.trace_render import render_trace, to_jsonable
from generators import gen_planted
from graphs.crux import CruxResult, classify_boundary, crux
from graphs.digraph import GraphError, PreconditionError, StructureInstance, find_cycle_pair, scc_decompose
from graphs.flow import ExceedsBudget, separator_layers
from graphs.tight_sequence import tight_separator_sequence
from pace_io import (
    FORMATS,
    InstanceFormatError,
    format_arc_solution,
    format_vertex_solution,
    parse_instance,
    read_arc_solution,
    read_vertex_solution,
    save_instance,
    write_edge_list,
    write_pace,
)
from services.config_loader import load_settings
from services.solver_service import build_run_config, run_solve
from solver.verifier import verify_arc_solution, verify_vertex_solution
from utils import bench_scaling, write_chart

logger = logging.getLogger("dfvs.app")

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _setup_logging(verbose: int, settings) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(settings.get("logging", {}).get("level", "WARNING")).upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def cmd_solve(args, settings, arcs: bool = False) -> int:
    cfg = build_run_config(args, settings)
    d = parse_instance(_read_text(args.input), args.format)
    out = run_solve(d, cfg, arcs=arcs)
    sol, report = out["solution"], out["report"]
    if cfg.output == "json":
        print(json.dumps(report))
    elif sol is None:
        print("NO")
    else:
        sys.stdout.write(format_arc_solution(sol.elements) if arcs else format_vertex_solution(sol.elements))
    if cfg.trace and sol is not None:
        render_trace(list(sol.trace), sys.stderr)
    return EXIT_NO if sol is None else EXIT_OK


def cmd_verify(args, settings) -> int:
    d = parse_instance(_read_text(args.input), args.format)
    text = _read_text(args.solution)
    if args.arcs:
        result = verify_arc_solution(d, read_arc_solution(text), args.k)
    else:
        result = verify_vertex_solution(d, read_vertex_solution(text), args.k)
    if result["ok"]:
        print("OK" + (f" ({result['note']})" if result["note"] else ""))
        return EXIT_OK
    print(f"FAIL: {result['note']}")
    return EXIT_NO


def cmd_gen(args, settings) -> int:
    seed = args.seed if args.seed is not None else settings["corpus"]["seed"]
    inst = gen_planted(args.n, args.m, args.k, seed)
    fmt = args.format or "pace"
    if args.out:
        save_instance(inst.digraph, args.out, fmt)
    else:
        (write_pace if fmt == "pace" else write_edge_list)(inst.digraph, sys.stdout)
    return EXIT_OK


def cmd_bench(args, settings) -> int:
    bench = settings["bench"]
    report = bench_scaling(
        args.k if args.k is not None else bench["k"],
        args.sizes if args.sizes is not None else bench["sizes"],
        args.reps if args.reps is not None else bench["reps"],
        args.seed if args.seed is not None else settings["corpus"]["seed"],
        args.workers if args.workers is not None else bench["workers"],
    )
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        print(text)
    if args.chart:
        write_chart(report, args.chart)
    return EXIT_OK


def _trace_crux(q: StructureInstance, s: int, t: int, k: int) -> dict:
    """Run crux on the strong component holding s and t; ids in the payload stay global."""
    q.digraph.check_vertex(s)
    q.digraph.check_vertex(t)
    scc = scc_decompose(q.digraph)
    comp = scc.components[scc.component_of[s]]
    if t not in comp:
        raise PreconditionError(f"vertices {s} and {t} are not in one strong component")
    sub = q.induced(comp)
    index = {label: i for i, label in enumerate(sub.labels)}
    out = crux(sub, index[s], index[t], k, check_premise=True)
    if not isinstance(out, CruxResult):
        return {"u": s, "v": t, "p": k, "no_separator": True, "infinite": out.infinite}

    def back(ids):
        return sorted(sub.to_labels(ids))

    witness = {key: [back(c) for c in val] if key == "components" else back(val) for key, val in out.witness.items()}
    steps = [{**e, "set": back(e["set"])} if "set" in e else e for e in out.trace]
    return {"u": s, "v": t, "p": k, "set": back(out.separator), "tag": out.tag, "witness": witness, "steps": steps}


def cmd_trace(args, settings) -> int:
    d = parse_instance(_read_text(args.input), args.format)
    q = StructureInstance(d)
    s, t = args.s, args.t
    if s is None or t is None:
        s, t = find_cycle_pair(q)
    k = args.k if args.k is not None else 1
    if args.what == "chain":
        chain = separator_layers(d, s, t, k)
        payload = {"exceeds": True, "infinite": chain.infinite} if isinstance(chain, ExceedsBudget) else chain.to_json()
    elif args.what == "sequence":
        seq = tight_separator_sequence(d, s, t, k)
        if isinstance(seq, ExceedsBudget):
            payload = {"exceeds": True, "infinite": seq.infinite}
        else:
            payload = seq.to_json()
            payload["classes"] = [classify_boundary(q, seq, i).to_json() for i in range(1, seq.q + 1)]
    else:
        payload = _trace_crux(q, s, t, k)
    print(json.dumps(to_jsonable(payload), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="app.py", description="Exact FPT solver for directed feedback vertex / arc set")
    parser.add_argument("--config", help="YAML config (default: config.yaml or $DFVS_CONFIG)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("solve", "Minimum feedback vertex set"), ("solve-arcs", "Minimum feedback arc set")):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", help="instance file, '-' for stdin")
        p.add_argument("--k", type=int, help="budget; omitted means search upward from 0")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--json", action="store_true")
        p.add_argument("--trace", action="store_true", help="write the recursion trace to stderr as JSON lines")

    p = sub.add_parser("verify", help="Check a solution file against an instance")
    p.add_argument("input")
    p.add_argument("solution")
    p.add_argument("--arcs", action="store_true", help="solution lists arcs 'u v'")
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=FORMATS)

    p = sub.add_parser("gen", help="Write a planted instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out")

    p = sub.add_parser("bench", help="Scaling benchmark on planted instances")
    p.add_argument("--k", type=int)
    p.add_argument("--sizes", type=int, nargs="*")
    p.add_argument("--reps", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.add_argument("--chart", help="HTML chart path")

    p = sub.add_parser("trace", help="Dump a separator chain, tight sequence or crux run")
    p.add_argument("input")
    p.add_argument("--what", choices=("chain", "sequence", "crux"), default="crux")
    p.add_argument("--s", type=int, help="source vertex, 0-based as in the JSON dump (PACE vertex i is i-1)")
    p.add_argument("--t", type=int, help="target vertex, 0-based as in the JSON dump")
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=FORMATS)
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "solve-arcs": lambda args, settings: cmd_solve(args, settings, arcs=True),
    "verify": cmd_verify,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "trace": cmd_trace,
}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        settings = load_settings(args.config)
        _setup_logging(args.verbose, settings)
        return COMMANDS[args.command](args, settings)
    except (InstanceFormatError, GraphError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
