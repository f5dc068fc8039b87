import numpy as np
import pytest

from nakajima_bundles.quiver import Label, a2_quiver, jordan_quiver, star_quiver

QUIVERS = {
    "jordan": (jordan_quiver(), Label((2,), (0,))),
    "a2": (a2_quiver(), Label((1, 2), (0, 0))),
    "star": (star_quiver(), Label((2, 1, 1), (0, 0, 0))),
}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(QUIVERS))
def quiver_label(request):
    return QUIVERS[request.param]


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""
    lines = request.config._acceptance_lines

    def report(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        lines.append(line)

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
