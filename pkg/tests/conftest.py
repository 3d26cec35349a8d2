from pathlib import Path

import pytest

from atrisk import induce_tree, parse_csv, parse_schema

DATA = Path(__file__).parent / "data"

# column order of the 20-student training sheet
ATTRS = ("Quiz 1", "Quiz 2", "Mid-Term", "Assignment 1", "Assignment 2")


@pytest.fixture(scope="session")
def schema():
    return parse_schema((DATA / "course.cfg").read_text())


@pytest.fixture(scope="session")
def table2(schema):
    return parse_csv((DATA / "table2.csv").read_text(), schema)


@pytest.fixture(scope="session")
def tree(table2):
    return induce_tree(table2)


def rows_of(dataset):
    """Dataset -> plain rows for the oracle."""
    return [(dict(r.values), r.target) for r in dataset.records]


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome:7} {name}")
