from __future__ import annotations

import os
import re
from pathlib import Path

import numpy as np
import pytest

from designswitch.bush_search import search_bush_type
from designswitch.design import IncidenceStructure
from designswitch.hadamard import SignMatrix, hadamard_to_menon

FANO_BLOCKS = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]

# J2 on the diagonal, K = [[1,-1],[-1,1]] and -K off it
BUSH4 = np.array(
    [[1, 1, 1, -1], [1, 1, -1, 1], [-1, 1, 1, 1], [1, -1, 1, 1]],
    dtype=np.int64,
)


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240917, help="seed for randomized tests")


@pytest.fixture
def rng(request) -> np.random.Generator:
    return np.random.default_rng(request.config.getoption("--seed"))


@pytest.fixture(scope="session")
def fano() -> IncidenceStructure:
    return IncidenceStructure.from_blocks(FANO_BLOCKS, 7)


def _design_632() -> IncidenceStructure:
    # points: infinity = 5, Z5 = 0..4; blocks {inf, i, i+1} and {i, i+1, i+3}
    blocks = [(5, i, (i + 1) % 5) for i in range(5)]
    blocks += [(i, (i + 1) % 5, (i + 3) % 5) for i in range(5)]
    return IncidenceStructure.from_blocks(blocks, 6)


@pytest.fixture(scope="session")
def d632() -> IncidenceStructure:
    return _design_632()


@pytest.fixture(scope="session")
def bush4() -> SignMatrix:
    return SignMatrix(BUSH4)


@pytest.fixture(scope="session")
def bush16() -> SignMatrix:
    return next(search_bush_type(2, "free"))


def bush_product(a: np.ndarray, na: int, b: np.ndarray, nb: int) -> np.ndarray:
    """Kronecker product of Bush-type matrices, indices regrouped so that the
    group of (i, j) is (group of i in a, group of j in b); Bush-type with n = 2 na nb."""
    sa, sb = 2 * na, 2 * nb
    ma, mb = a.shape[0], b.shape[0]
    order = sorted(
        range(ma * mb),
        key=lambda x: (x // mb // sa, x % mb // sb, x // mb % sa, x % mb % sb),
    )
    k = np.kron(a, b)
    return k[np.ix_(order, order)]


@pytest.fixture(scope="session")
def bush64(bush16) -> SignMatrix:
    return SignMatrix(bush_product(BUSH4, 1, bush16.entries.astype(np.int64), 2))


@pytest.fixture(scope="session")
def menon64(bush64) -> IncidenceStructure:
    return hadamard_to_menon(bush64)


@pytest.fixture(scope="session")
def bush36() -> SignMatrix:
    return next(search_bush_type(3, "block_negacyclic"))


@pytest.fixture(scope="session")
def menon36(bush36) -> IncidenceStructure:
    return hadamard_to_menon(bush36)


@pytest.fixture(scope="session")
def fixture_dir() -> Path | None:
    root = os.environ.get("DESIGNSWITCH_FIXTURES")
    return Path(root) if root else None


# -- acceptance summary ------------------------------------------------------

_CRITERIA = {
    1: "switching preserves 2-designs (Fano, 2-(6,3,2), order-36 Menon)",
    2: "orbit matrices M1, M2, M3, M3' and the M1 -> M2 switch",
    3: "pair switching of Fano gives Fano",
    4: "Bush pipeline, property tier",
    5: "Bush pipeline, golden tier (literature matrices)",
    6: "p-rank correctness",
    7: "canonical labeling",
    8: "Hadamard equivalence",
}
_OUTCOMES: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _OUTCOMES.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for num, label in _CRITERIA.items():
        outs = _OUTCOMES.get(num)
        if not outs:
            verdict = "NOT RUN"
        elif "failed" in outs:
            verdict = "FAIL"
        elif all(o == "skipped" for o in outs):
            verdict = "SKIPPED"
        elif "skipped" in outs:
            verdict = "PASS (partly skipped)"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"criterion {num}: {verdict:8s} {label}")
