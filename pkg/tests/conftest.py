import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "scripts"))

from make_uci_like import write_uci_like  # noqa: E402

DEFAULT_UCI = ROOT / "data" / "AirQualityUCI.csv"
_acceptance_lines = []


def pytest_addoption(parser):
    parser.addoption("--airquality", default=str(DEFAULT_UCI),
                     help="path to the UCI AirQualityUCI.csv file")


@pytest.fixture(scope="session")
def airquality_path(request):
    return Path(request.config.getoption("--airquality"))


@pytest.fixture(scope="session")
def uci_like_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "uci_like.csv"
    write_uci_like(path, n=3000, seed=1)
    return path


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        _acceptance_lines.append(f"{status}  {name}")
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance_lines.append(f"FAIL  {report.nodeid.split('::')[-1]} (setup)")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
