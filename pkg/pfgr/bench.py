# FILE: pfgr/bench.py
# ==============================================================================
# Benchmark suites. `ov-scaling` times both OV engines on planted instances of
# growing n at fixed d and reports the log-log slope of total runtime.
# ==============================================================================
import csv
import logging
import time
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .generators import gen_ov
from .models import Engine
from .oracles import count_orthogonal_pairs
from .twdiam import solve_ov_via_diameter

CSV_COLUMNS = ("n", "d", "engine", "answer", "reduce_ms", "solve_ms", "total_ms", "seed")
SUITES = ("ov-scaling",)


def _time_brute(instance) -> Dict[str, object]:
    # Exhaustive, so the cost does not depend on where the planted pair lands.
    started = time.perf_counter()
    has_pair = count_orthogonal_pairs(instance) > 0
    solve_ms = (time.perf_counter() - started) * 1000.0
    return {"answer": has_pair, "reduce_ms": 0.0, "solve_ms": solve_ms, "total_ms": solve_ms}


def _time_diam(instance, max_d) -> Dict[str, object]:
    report = solve_ov_via_diameter(instance, max_d=max_d)
    return {
        "answer": report.has_orthogonal_pair,
        "reduce_ms": report.reduction_ms,
        "solve_ms": report.solve_ms,
        "total_ms": report.total_ms,
    }


def run_ov_scaling(
    d: int,
    n_list: Sequence[int],
    reps: int = 3,
    seed: int = 0,
    engines: Iterable[Engine] = (Engine.BRUTE, Engine.DIAM),
    max_d: Optional[int] = None,
) -> List[Dict[str, object]]:
    """One row per (n, engine, repetition); repetition r uses seed + r."""
    rows = []
    engines = [Engine(e) for e in engines]
    for n in n_list:
        for rep in range(reps):
            instance = gen_ov(n, d, plant=True, seed=seed + rep)
            for engine in engines:
                timing = _time_brute(instance) if engine == Engine.BRUTE else _time_diam(instance, max_d)
                rows.append({"n": n, "d": d, "engine": engine.value, "seed": seed + rep, **timing})
            logging.info(f"BENCH: n={n} d={d} repetition {rep + 1}/{reps} done")
    return rows


def write_csv(rows: Sequence[Dict[str, object]], handle: TextIO) -> None:
    writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "answer": str(row["answer"]).lower()})


def scaling_slope(rows: Sequence[Dict[str, object]], engine: str) -> float:
    """Least-squares slope of log(median total_ms) against log(n)."""
    by_n: Dict[int, List[float]] = {}
    for row in rows:
        if row["engine"] == Engine(engine).value:
            by_n.setdefault(int(row["n"]), []).append(float(row["total_ms"]))
    if len(by_n) < 2:
        raise ValueError("need timings for at least two values of n")
    sizes = sorted(by_n)
    medians = [max(float(np.median(by_n[n])), 1e-6) for n in sizes]
    slope, _ = np.polyfit(np.log(sizes), np.log(medians), 1)
    return float(slope)
