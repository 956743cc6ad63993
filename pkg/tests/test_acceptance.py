"""Runs the fourteen acceptance criteria once and reports one line each."""

import pytest

from raagaut.acceptance import CRITERIA, run_all


@pytest.fixture(scope="module")
def results(pytestconfig):
    out = run_all(seed=0)
    tr = pytestconfig.pluginmanager.get_plugin("terminalreporter")
    tr.write_line("")
    for r in out:
        tr.write_line(r.line())
    return {r.number: r for r in out}


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(results, number):
    r = results[number]
    assert r.passed, r.line()
