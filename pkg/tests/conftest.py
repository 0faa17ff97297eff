import numpy as np
import pytest

from barbilian import InfluenceSpec, make_domain


@pytest.fixture
def euclid():
    return InfluenceSpec()


PLANAR_KINDS = ["halfplane", "disk", "quadrant", "circle_minus_point"]


@pytest.fixture(params=PLANAR_KINDS)
def planar_domain(request):
    return make_domain(request.param)


def close(a, b, tol):
    return np.allclose(np.asarray(a, float), np.asarray(b, float), atol=tol, rtol=0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        title, ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({detail})")
