import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gm4 import generators as gen  # noqa: E402
from gm4.wstructure import BlockSpec, Edge, GluingMatrix, GraphManifold  # noqa: E402

SWAP_Z_F2 = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
SWAP_Z_F1 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
SHEARED = ((0, 0, 1), (0, 1, 1), (1, 0, 0))
SHEAR_I2 = ((1, 2, 0), (0, 1, 0), (0, 0, -1))


def manifold(edges, genus=1, metadata=None):
    """Build a manifold from ``(source, target, matrix)`` triples, slots in order of appearance."""
    vs, shape_edges = [], []
    for a, b, _ in edges:
        for v in (a, b):
            if v not in vs:
                vs.append(v)
        shape_edges.append((a, b))
    return gen._assemble((vs, shape_edges), [m for _, _, m in edges], genus, metadata)


@pytest.fixture
def alternating4():
    return gen.gen_orthogonal(gen.cycle_shape(4), gen.alternating_gluings(4))


@pytest.fixture
def cycle3():
    return gen.gen_cycle_example(3, False)


@pytest.fixture
def cycle3_perturbed():
    return gen.gen_cycle_example(3, True)


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion after the run

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(name)
        if prev != "FAIL":
            _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2]) if n.split("_")[2].isdigit() else 99):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
