import json
import os

import pytest

ORACLE_PATH = os.path.join(os.path.dirname(__file__), "oracles", "values.json")


@pytest.fixture(scope="session")
def oracle():
    with open(ORACLE_PATH) as fh:
        return json.load(fh)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
