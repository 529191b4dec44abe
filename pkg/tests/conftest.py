import numpy as np
import pytest

from solvergen import problems
from solvergen.groebner import groebner_basis
from solvergen.poly import MonomialOrder, Ring
from solvergen.sysio import system_from_strings

P = 30011


def zsys(names, eqs, p=P):
    return list(system_from_strings(names, eqs, p).equations)


@pytest.fixture
def toy():
    return zsys(["x", "y"], ["x + y^2 - 1", "x*y - 1"])


@pytest.fixture
def toy_gb(toy):
    return groebner_basis(toy)


@pytest.fixture
def ring_xy():
    return Ring.zp(["x", "y"], P)


@pytest.fixture(scope="session")
def stitch2_zp():
    return list(problems.generate("stitch2", 0, "zp").equations)


@pytest.fixture(scope="session")
def efl_zp():
    return list(problems.generate("efl", 0, "zp").equations)


def cubic_roots(coeffs):
    """Roots of a polynomial given highest degree first (numpy companion oracle)."""
    return np.roots(coeffs)


def match_sets(a, b, tol):
    """True when every element of a is within tol of a distinct element of b."""
    b = list(b)
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        if abs(z - b[k]) > tol:
            return False
        b.pop(k)
    return True


LEX_YX = MonomialOrder.lex((1, 0))


# one summary line per acceptance criterion at the end of the run
_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _ACCEPTANCE:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}  {detail}")
