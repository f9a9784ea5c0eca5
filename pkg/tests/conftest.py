import dataclasses

import numpy as np
import pytest

from sarjoint.radar_model import ers2


@pytest.fixture(scope="session")
def params():
    return ers2()


@pytest.fixture(scope="session")
def short_chirp(params):
    """ERS-2 geometry with a 5 us pulse, so small grids hold whole echoes."""
    t = 5e-6
    return dataclasses.replace(params, t_chirp=t, beta=params.bandwidth / t)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    _criteria.append((number, title, report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_criteria):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d} {status}  {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
