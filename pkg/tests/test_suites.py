import io

import pytest

from hitkernel import cli, suites
from hitkernel.cli import CliConfig, run
from hitkernel.suites import SuiteResult, load_context, mutant_loop_boundary, mutant_suite, oracle_suite
from hitkernel.syntax import BUILTINS
from hitkernel.typecheck import TypeCheckError


def test_mutant_is_caught():
    res = mutant_suite()
    assert res.ok and res.total == 1


def test_mutant_is_undone():
    before = BUILTINS["S1"]
    with mutant_loop_boundary():
        assert BUILTINS["S1"] is not before
        with pytest.raises(TypeCheckError):
            load_context("")
    assert BUILTINS["S1"] is before
    load_context("")


def test_result_lines_are_stable():
    r = SuiteResult("x", total=3, elapsed=1.5)
    r.fail("boom")
    assert r.line() == "x: FAIL 2/3"
    assert SuiteResult("y", skipped=True).line() == "y: SKIPPED"


def test_oracle_skips_at_depth_zero():
    assert oracle_suite(probe_depth=0).skipped


def test_selftest_output(monkeypatch):
    good = SuiteResult("a", total=2)
    bad = SuiteResult("b", total=1)
    bad.fail("nope")
    monkeypatch.setattr(suites, "all_suites", lambda probe_depth=2: [good, SuiteResult("o", skipped=True)])
    out = io.StringIO()
    assert run(CliConfig("selftest", probe_depth=0), out, io.StringIO()) == cli.EXIT_OK
    assert out.getvalue().splitlines() == ["a: PASS 2/2", "o: SKIPPED", "selftest: PASS 2/2"]
    monkeypatch.setattr(suites, "all_suites", lambda probe_depth=2: [good, bad])
    out = io.StringIO()
    assert run(CliConfig("selftest"), out, io.StringIO()) == cli.EXIT_TYPE
    assert out.getvalue().splitlines()[-1] == "selftest: FAIL 2/3"
