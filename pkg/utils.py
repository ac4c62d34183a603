import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import plotly.express as px

from generators import DEFAULT_SEED, gen_planted
from graphs.digraph import SelfCheckError
from solver.driver import solve_dfvs

logger = logging.getLogger("dfvs.bench")


def planted_shape(m: int, k: int):
    """(n, m) used by the bench: three arcs per vertex on average."""
    return max(k + 2, m // 3), m


def _time_once(n: int, m: int, k: int, seed: int) -> float:
    inst = gen_planted(n, m, k, seed)
    start = time.monotonic()
    sol = solve_dfvs(inst.digraph, k)
    elapsed = time.monotonic() - start
    if sol is None:
        raise SelfCheckError(f"planted instance n={n} m={m} k={k} seed={seed} reported NO")
    return elapsed


def bench_scaling(
    k_fixed: int,
    sizes: Sequence[int],
    reps: int = 3,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> Dict[str, Any]:
    """Median solve time per arc count and the growth ratio for every step between sizes.

    Generation happens outside the timed region. With workers > 1 the reps of
    one size run in separate processes, so their timings overlap.
    """
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    rows: List[Dict[str, Any]] = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for m in sizes:
            n, m = planted_shape(m, k_fixed)
            args = ([n] * reps, [m] * reps, [k_fixed] * reps, [seed + r for r in range(reps)])
            times = list(pool.map(_time_once, *args) if pool else map(_time_once, *args))
            median = statistics.median(times)
            rows.append({"n": n, "m": m, "reps": reps, "median_s": median, "min_s": min(times), "max_s": max(times)})
            logger.info("bench k=%d m=%d median=%.4fs", k_fixed, m, median)
    finally:
        if pool:
            pool.shutdown()
    ratios = [
        {"from_m": a["m"], "to_m": b["m"], "ratio": (b["median_s"] / a["median_s"]) if a["median_s"] > 0 else None}
        for a, b in zip(rows, rows[1:])
    ]
    return {"schema": 1, "k": k_fixed, "seed": seed, "rows": rows, "ratios": ratios}


def report_frame(report: Dict[str, Any]) -> pd.DataFrame:
    df = pd.DataFrame(report.get("rows", []), columns=["n", "m", "reps", "median_s", "min_s", "max_s"])
    if not df.empty:
        df["us_per_arc"] = df["median_s"] / df["m"] * 1e6
    return df


def create_scaling_chart(report: Dict[str, Any]):
    df = report_frame(report)
    return px.line(
        df,
        x="m",
        y="median_s",
        markers=True,
        title=f"Median solve time, planted k={report.get('k')}",
        labels={"m": "arcs", "median_s": "seconds"},
    )


def write_chart(report: Dict[str, Any], path: str) -> None:
    create_scaling_chart(report).write_html(path)


def max_ratio(report: Dict[str, Any]) -> Optional[float]:
    values = [r["ratio"] for r in report.get("ratios", []) if r["ratio"] is not None]
    return max(values) if values else None
