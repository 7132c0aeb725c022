"""Benchmark sweeps for the DP kernel and the circuit simulator.

Emits timing rows over (level, insertion-count) grids plus log-log fitted
scaling exponents.  The expected DP cost is Theta(m * N^2); the scalar
kernel exposes that arithmetic directly, while the vectorized kernel's
per-call overhead flattens the curve at desk-scale N, so exponent fits are
reported per kernel.  Simulator rows are informational (cost ~ 2^m * N^2).

CSV schema (frozen): row,kernel,sweep,level,m,ell,seconds,repeats,
exponent,expected,band — timing rows leave the last three columns empty,
fit rows leave the per-cell columns empty.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from .dp import run_dp
from .sim import hadamard_test_trace
from .sl2 import evaluate

CSV_COLUMNS = [
    "row",
    "kernel",
    "sweep",
    "level",
    "m",
    "ell",
    "seconds",
    "repeats",
    "exponent",
    "expected",
    "band",
]

DEFAULT_N_SWEEP = (11, 15, 21, 25, 31)
DEFAULT_M_SWEEP = (8, 16, 32, 64)
DEFAULT_FIXED_N = 17
DEFAULT_FIXED_M = 16
MIN_MEASURE_SECONDS = 0.005


@dataclass
class BenchRow:
    row: str
    kernel: str
    sweep: str
    level: int | None = None
    m: int | None = None
    ell: int | None = None
    seconds: float | None = None
    repeats: int | None = None
    exponent: float | None = None
    expected: float | None = None
    band: float | None = None

    def as_record(self) -> dict[str, str]:
        def fmt(value) -> str:
            if value is None:
                return ""
            if isinstance(value, float):
                return f"{value:.6g}"
            return str(value)

        return {col: fmt(getattr(self, col)) for col in CSV_COLUMNS}


def _time_call(fn, repeats: int) -> float:
    """Best-of-``repeats`` wall time, auto-looped so each sample >= 5 ms."""
    once = time.perf_counter()
    fn()
    once = time.perf_counter() - once
    loops = max(1, int(np.ceil(MIN_MEASURE_SECONDS / max(once, 1e-9))))
    best = once
    for _ in range(repeats):
        begin = time.perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, (time.perf_counter() - begin) / loops)
    return best


def _random_insertions(m: int, n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    return [(int(rng.integers(-n, n + 1)), int(rng.integers(-n, n + 1))) for _ in range(m)]


def fit_exponent(xs, times) -> float:
    """Slope of log(time) against log(x): the empirical scaling exponent."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(times, float)), 1)[0])


def bench_dp(
    n_sweep=DEFAULT_N_SWEEP,
    m_sweep=DEFAULT_M_SWEEP,
    fixed_n: int = DEFAULT_FIXED_N,
    fixed_m: int = DEFAULT_FIXED_M,
    kernels=("scalar", "vector"),
    repeats: int = 3,
    seed: int = 0,
) -> list[BenchRow]:
    """Timing + fit rows for the DP table update over N and m sweeps."""
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    for kernel in kernels:
        n_times = []
        for n in n_sweep:
            ins = _random_insertions(fixed_m, n, rng)
            seconds = _time_call(lambda: run_dp(ins, n, kernel=kernel), repeats)
            n_times.append(seconds)
            rows.append(
                BenchRow("timing", kernel, "n", level=n, m=fixed_m, seconds=seconds, repeats=repeats)
            )
        rows.append(
            BenchRow(
                "fit",
                kernel,
                "n",
                exponent=fit_exponent(n_sweep, n_times),
                expected=2.0,
                band=0.3,
            )
        )
        m_times = []
        for m in m_sweep:
            ins = _random_insertions(m, fixed_n, rng)
            seconds = _time_call(lambda: run_dp(ins, fixed_n, kernel=kernel), repeats)
            m_times.append(seconds)
            rows.append(
                BenchRow("timing", kernel, "m", level=fixed_n, m=m, seconds=seconds, repeats=repeats)
            )
        rows.append(
            BenchRow(
                "fit",
                kernel,
                "m",
                exponent=fit_exponent(m_sweep, m_times),
                expected=1.0,
                band=0.3,
            )
        )
    return rows


def bench_sim(
    levels=(3, 5, 7),
    ms=(1, 2, 3, 4),
    word_letters: int = 6,
    repeats: int = 2,
    seed: int = 0,
) -> list[BenchRow]:
    """Informational timing rows for the exact-mode trace circuit."""
    rng = np.random.default_rng(seed)
    word = [("S", "T", "Tinv")[int(rng.integers(3))] for _ in range(word_letters)]
    g = evaluate(word)
    rows: list[BenchRow] = []
    for n in levels:
        for m in ms:
            ins = _random_insertions(m, n, rng)
            seconds = _time_call(lambda: hadamard_test_trace(g, ins, n, mode="exact"), repeats)
            rows.append(
                BenchRow(
                    "timing",
                    "sim-exact",
                    "sim",
                    level=n,
                    m=m,
                    ell=word_letters,
                    seconds=seconds,
                    repeats=repeats,
                )
            )
    return rows


def run_bench(include_sim: bool = True, repeats: int = 3, seed: int = 0) -> list[BenchRow]:
    rows = bench_dp(repeats=repeats, seed=seed)
    if include_sim:
        rows.extend(bench_sim(seed=seed))
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())
    return buffer.getvalue()
