"""Shared test helpers and the acceptance-criteria summary table."""

from __future__ import annotations

import numpy as np

from toruswrt.sl2 import evaluate

ACCEPTANCE_RESULTS: dict[int, tuple[str, str, str]] = {}


def record_criterion(number: int, title: str, status: str, detail: str = "") -> None:
    """Register one acceptance-criterion outcome for the end-of-run table.

    ``status`` is PASS, FAIL, or INFO (informational, non-gating).
    """
    ACCEPTANCE_RESULTS[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, status, detail = ACCEPTANCE_RESULTS[number]
        line = f"CRITERION {number:2d} {status:<4} {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


def random_word(rng: np.random.Generator, letters: int) -> list[str]:
    return [("S", "T", "Tinv")[int(rng.integers(3))] for _ in range(letters)]


def random_sl2(rng: np.random.Generator, letters: int) -> tuple[int, int, int, int]:
    return evaluate(random_word(rng, letters))


def random_insertions(rng: np.random.Generator, m: int, bound: int) -> list[tuple[int, int]]:
    return [(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1))) for _ in range(m)]
