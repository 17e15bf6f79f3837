import subprocess
import sys

import pytest

from tcarank.io import load_fixture

MATERIALISTS = ("ABCD137", "ACBD309", "ACDB255", "ADCB93", "CABD330", "CADB294", "CBAD117", "CDAB70")
POSTMATERIALISTS = (
    "BCAD61", "BCDA55", "BDAC33", "BDCA59", "CBDA69",
    "CDBA34", "DBAC29", "DBCA52", "DCAB35", "DCBA27",
)
MIXED = ("ABDC29", "ADBC52", "BACD48", "BADC23", "DABC21")
# a-priori groups: materialist items A, C on top; postmaterialist items B, D on top
APRIORI_MAT = ("ACBD309", "ACDB255", "CABD330", "CADB294")
APRIORI_POST = ("BDAC33", "BDCA59", "DBAC29", "DBCA52")


def subset_by_labels(ds, labels):
    index = {lab: i for i, lab in enumerate(ds.labels)}
    return ds.subset(sorted(index[lab] for lab in labels))


@pytest.fixture(scope="session")
def table1():
    return load_fixture("table1")


@pytest.fixture(scope="session")
def groups(table1):
    return {
        "materialists": subset_by_labels(table1, MATERIALISTS),
        "postmaterialists": subset_by_labels(table1, POSTMATERIALISTS),
        "mixed": subset_by_labels(table1, MIXED),
        "apriori_mat": subset_by_labels(table1, APRIORI_MAT),
        "apriori_post": subset_by_labels(table1, APRIORI_POST),
    }


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "tcarank", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
