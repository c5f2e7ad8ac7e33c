import json
from pathlib import Path

import pytest

from genus2cantor.chain import ChainParams, build_chain

ORACLE_FILE = Path(__file__).with_name("oracle_values.json")

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def oracle():
    return json.loads(ORACLE_FILE.read_text())


@pytest.fixture(scope="session")
def chain32():
    return build_chain(ChainParams.from_m(1.0, 0.08, 32))


@pytest.fixture(scope="session")
def chain288():
    return build_chain(ChainParams.from_m(1.0, 0.08, 288))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
