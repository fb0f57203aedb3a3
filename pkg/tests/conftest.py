from __future__ import annotations

import numpy as np
import pytest

from batchcodes.codes import IncidenceMatrix, mask_of

_ACCEPTANCE: list[tuple[str, str]] = []


def random_matrix(rng: np.random.Generator, m: int, n: int, density: float) -> IncidenceMatrix:
    """Random 0/1 matrix whose columns are redrawn until nonempty."""
    cols = []
    for _ in range(n):
        while True:
            rows = np.flatnonzero(rng.random(m) < density)
            if rows.size:
                cols.append(mask_of(int(r) for r in rows))
                break
    return IncidenceMatrix(m, tuple(cols))


def random_matrices(count: int, seed: int = 2024):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, 13))
        density = (0.2, 0.5, 0.8)[i % 3]
        out.append(random_matrix(rng, m, n, density))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}")
