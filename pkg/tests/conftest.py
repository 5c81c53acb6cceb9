import math

import numpy as np
import pytest

from shearcst.grids import ModelParams, UniformGrid, x2_stencil_grid


@pytest.fixture(scope="session")
def p():
    return ModelParams()


@pytest.fixture(scope="session")
def grid64(p):
    """y grid whose dual (x3) grid coincides with it: step 1/sqrt(hbar4 N)."""
    return UniformGrid.centered(64, 1.0 / math.sqrt(p.hbar4 * 64))


@pytest.fixture(scope="session")
def grid128(p):
    return UniformGrid.centered(128, 1.0 / math.sqrt(p.hbar4 * 128))


@pytest.fixture(scope="session")
def x2s():
    return x2_stencil_grid(0.0, 1.0 / 512, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance summary: one line per criterion ------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        detail = props.get("detail", "")
        if report.outcome != "passed" and report.longrepr is not None:
            detail = str(getattr(report.longrepr, "reprcrash", None) and report.longrepr.reprcrash.message
                         or report.longrepr).splitlines()[0]
        _ACCEPTANCE[props["criterion"]] = (verdict, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        verdict, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{verdict}  criterion {name}  ({detail})")
