import io
import subprocess
import sys

import pytest

from hitkernel.cli import CliConfig, main, parse_config, run
from hitkernel.corpus import prelude_text


@pytest.fixture
def prelude(tmp_path):
    p = tmp_path / "prelude.chit"
    p.write_text(prelude_text())
    return p


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(parse_config(list(map(str, argv))), out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_ok(prelude):
    code, out, _ = call("check", prelude)
    assert code == 0
    assert out.strip().endswith("ok, 15 definitions")


def test_type_error_exits_1(tmp_path):
    f = tmp_path / "bad.chit"
    f.write_text("m : (A : U) -> A -> Path (Susp A) N{A} N{A} = \\A a -> <i> merid{A} a i\n")
    code, _, err = call("check", f)
    assert code == 1
    assert err.startswith(f"{f}:1:") and "BoundaryMismatch" in err


def test_syntax_error_exits_2(tmp_path):
    f = tmp_path / "bad.chit"
    f.write_text("x : S1 = loop (i /\\\n")
    code, _, err = call("check", f)
    assert code == 2
    assert "SyntaxError: expected one of" in err


def test_missing_file_exits_2(tmp_path):
    code, _, err = call("check", tmp_path / "nope.chit")
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "expr, want",
    [
        ("loop 0", "base"),
        ("f2 (f1 (surf i j))", "surf i j"),
        ("trans^i S1 0F base", "base"),
        ("flip (loop i)", "loop -i"),
    ],
)
def test_normalize(prelude, expr, want):
    code, out, _ = call("normalize", prelude, "-e", expr)
    assert code == 0
    assert out.strip() == want


def test_normalize_ill_typed_expression(prelude):
    code, _, err = call("normalize", prelude, "-e", "f1 base")
    assert code == 1 and err.startswith("<expr>:")


def test_trace_goes_to_stderr(prelude):
    code, out, err = call("--trace", "normalize", prelude, "-e", "flip (loop i)")
    assert code == 0 and out.strip() == "loop -i"
    assert "trace:" in err
    after = call("normalize", prelude, "-e", "flip (loop i)", "--trace")[2]
    # fresh binder suffixes differ within one process; the rules must not
    assert [ln.split(":")[1] for ln in after.splitlines()] == [ln.split(":")[1] for ln in err.splitlines()]


def test_flags_reach_the_config():
    cfg = parse_config(["--generic-trans", "selftest", "--probe-depth", "0"])
    assert cfg.generic_trans and cfg.probe_depth == 0


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig("normalize")
    with pytest.raises(ValueError):
        CliConfig("frobnicate")


def test_main_returns_exit_code(prelude):
    assert main(["check", str(prelude)]) == 0


def test_console_runs_are_byte_identical(prelude):
    cmd = [sys.executable, "-m", "hitkernel.cli", "normalize", str(prelude), "-e", "double (loop i)"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout.strip()
