import logging
import time
from dataclasses import dataclass
from functools import partial
from typing import Any, Dict, Optional

from graphs.digraph import Digraph, PreconditionError
from solver.driver import Solution, solve_dfas, solve_dfvs

logger = logging.getLogger("dfvs.service")

SCHEMA_VERSION = 1
SUBCOMMANDS = ("solve", "solve-arcs", "verify", "gen", "bench", "trace")


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    k: Optional[int] = None
    max_k: int = 12
    format: Optional[str] = None
    output: str = "plain"
    seed: int = 20240611
    verbosity: int = 0
    trace: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.k is not None and self.k < 0:
            raise ValueError("k must be non-negative")
        if self.output not in ("plain", "json"):
            raise ValueError("output must be 'plain' or 'json'")


def build_run_config(args: Any, settings: Dict[str, Any]) -> RunConfig:
    """argparse namespace + loaded settings -> RunConfig; explicit flags win."""
    seed = getattr(args, "seed", None)
    return RunConfig(
        subcommand=args.command,
        input=getattr(args, "input", None),
        k=getattr(args, "k", None),
        max_k=int(settings.get("solver", {}).get("max_k", 12)),
        format=getattr(args, "format", None),
        output="json" if getattr(args, "json", False) else "plain",
        seed=int(seed if seed is not None else settings["corpus"]["seed"]),
        verbosity=getattr(args, "verbose", 0) or 0,
        trace=bool(getattr(args, "trace", False)),
    )


def _search(solve, d: Digraph, k: Optional[int], max_k: int) -> Optional[Solution]:
    if k is not None:
        return solve(d, k)
    # the first budget that works is the optimum
    for budget in range(max_k + 1):
        sol = solve(d, budget)
        if sol is not None:
            return sol
    logger.info("no solution up to max_k=%d", max_k)
    return None


def run_solve(d: Digraph, cfg: RunConfig, arcs: bool = False) -> Dict[str, Any]:
    if cfg.k is None and cfg.max_k < 0:
        raise PreconditionError("max_k must be non-negative")
    start = time.monotonic()
    solve = partial(solve_dfas if arcs else solve_dfvs, detail=cfg.trace)
    sol = _search(solve, d, cfg.k, cfg.max_k)
    elapsed = time.monotonic() - start
    out: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "answer": "NO" if sol is None else "YES",
        "size": None if sol is None else sol.opt_size,
        "timings": {"solve_s": round(elapsed, 6)},
    }
    key = "arcs" if arcs else "vertices"
    out[key] = [] if sol is None else [e if isinstance(e, int) else list(e) for e in sol.elements]
    if cfg.trace and sol is not None:
        out["trace"] = list(sol.trace)
    logger.info("%s n=%d m=%d -> %s in %.3fs", cfg.subcommand, d.n, d.m, out["answer"], elapsed)
    return {"solution": sol, "report": out}
