import numpy as np
import pytest

from percolab.engine import Configuration, run_fast
from percolab.topology import GraphShape

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def warm_jit():
    """Compile (or load) the numba kernels once so timed sections exclude it."""
    from percolab import montecarlo

    for shape in (GraphShape(1, 1, 4, 3, 2), GraphShape(1, 2, 3, 3, 2), GraphShape(0, 3, 1, 2, 2)):
        run_fast(Configuration(shape, np.arange(shape.size) % 3 == 0))
        montecarlo.final_counts(shape, 0.3, 2, 0)
        montecarlo.pathwise_pc(shape, 0)


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""

    def record(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
