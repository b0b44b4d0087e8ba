import time

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def ginibre(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion and fail the test if the criterion fails."""
    start = time.perf_counter()

    def report(number, title, ok, detail, budget=None):
        elapsed = time.perf_counter() - start
        within = budget is None or elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        budget_txt = f" / budget {budget:g}s" if budget is not None else ""
        line = f"[{status}] criterion {number:>2}: {title} | {detail} | {elapsed:.2f}s{budget_txt}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
        assert within, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
