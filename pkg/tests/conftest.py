import numpy as np
import pytest
from scipy import integrate


def complex_quad(f, lo, hi, **kw):
    """Integrate a complex-valued function along a real interval."""
    opts = dict(limit=5000, epsabs=1e-13, epsrel=1e-13)
    opts.update(kw)
    re = integrate.quad(lambda x: f(x).real, lo, hi, **opts)[0]
    im = integrate.quad(lambda x: f(x).imag, lo, hi, **opts)[0]
    return re + 1j * im


@pytest.fixture
def rng():
    return np.random.default_rng(20141115)


def pytest_terminal_summary(terminalreporter):
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if r.when == "call" and "test_acceptance.py::test_criterion" in r.nodeid]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        name = r.nodeid.split("::")[-1].replace("test_", "")
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  {name}")
