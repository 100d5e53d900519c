"""kernel: check .chit files, normalize expressions, run the self-test suites.

Exit codes: 0 success, 1 type error or failing self-test, 2 syntax or I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO

from .eval import GENERIC_TRANS, TRACE, KernelError, normalize
from .parser import ParseError, SourceModule, parse_expr, parse_module, pretty
from .syntax import free_dims
from .typecheck import Checker, TypeCheckError, check_module

EXIT_OK, EXIT_TYPE, EXIT_SYNTAX = 0, 1, 2


@dataclass
class CliConfig:
    command: str  # check | normalize | selftest
    file: Optional[Path] = None
    expr: Optional[str] = None
    generic_trans: bool = False
    trace: bool = False
    probe_depth: int = 2

    def __post_init__(self):
        if self.command not in ("check", "normalize", "selftest"):
            raise ValueError(f"unknown command {self.command}")
        if self.command == "normalize" and self.expr is None:
            raise ValueError("normalize needs an expression")
        if self.command != "selftest" and self.file is None:
            raise ValueError(f"{self.command} needs a file")


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _syntax_message(filename: str, e: ParseError) -> str:
    exp = ", ".join(sorted(e.expected))
    return f"{filename}:{e.line}:{e.col}: SyntaxError: expected one of {{{exp}}} got {e.got or 'end of input'}"


@contextlib.contextmanager
def _tracing(on: bool, err: TextIO):
    if not on:
        yield
        return
    token = TRACE.set(lambda rule, t: print(f"trace: {rule}: {pretty(t)}", file=err))
    try:
        yield
    finally:
        TRACE.reset(token)


def _load(path: Path, trace: bool = False, err: TextIO = sys.stderr) -> tuple[SourceModule, Checker]:
    name = str(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise _Failure(EXIT_SYNTAX, f"{name}: cannot read: {e.strerror or e}")
    try:
        mod = parse_module(text, name)
    except ParseError as e:
        raise _Failure(EXIT_SYNTAX, _syntax_message(name, e))
    try:
        with _tracing(trace, err):
            ck = check_module(mod)
    except TypeCheckError as e:
        raise _Failure(EXIT_TYPE, e.render(name))
    return mod, ck


def cmd_check(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    mod, _ = _load(cfg.file, cfg.trace, err)
    print(f"{cfg.file}: ok, {len(mod.defs)} definitions", file=out)
    return EXIT_OK


def cmd_normalize(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    mod, ck = _load(cfg.file)
    try:
        t = parse_expr(cfg.expr, scope=mod.names())
    except ParseError as e:
        raise _Failure(EXIT_SYNTAX, _syntax_message("<expr>", e))
    # free dimensions of the expression are bound in its context
    ctx = ck.ctx(free_dims(t))
    try:
        t2, ty = ck.infer(t, ctx)
        with _tracing(cfg.trace, err):
            nf = normalize(t2, ty, ctx.scope)
    except TypeCheckError as e:
        raise _Failure(EXIT_TYPE, e.render("<expr>"))
    except KernelError as e:
        raise _Failure(EXIT_TYPE, f"<expr>: {e}")
    print(pretty(nf), file=out)
    return EXIT_OK


def cmd_selftest(cfg: CliConfig, out: TextIO, err: TextIO) -> int:
    from .suites import all_suites

    results = all_suites(probe_depth=cfg.probe_depth)
    for r in results:
        print(r.line(), file=out)
        for f in r.failures[:5]:
            print(f"  {f}", file=out)
    ok = all(r.ok for r in results)
    passed = sum(r.passed for r in results if not r.skipped)
    total = sum(r.total for r in results if not r.skipped)
    print(f"selftest: {'PASS' if ok else 'FAIL'} {passed}/{total}", file=out)
    return EXIT_OK if ok else EXIT_TYPE


COMMANDS = {"check": cmd_check, "normalize": cmd_normalize, "selftest": cmd_selftest}


def _flags(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--generic-trans", action="store_true", default=default, help="transport Susp/Trunc constructors by the uniform algorithm")
    p.add_argument("--trace", action="store_true", default=default, help="print reduction steps to stderr")


def build_parser() -> argparse.ArgumentParser:
    # flags may come before or after the command; SUPPRESS keeps the first from being reset
    common = argparse.ArgumentParser(add_help=False)
    _flags(common, argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="kernel", description=__doc__.splitlines()[0])
    _flags(p, False)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="typecheck a .chit file")
    c.add_argument("file", type=Path)
    n = sub.add_parser("normalize", parents=[common], help="print the normal form of an expression")
    n.add_argument("file", type=Path)
    n.add_argument("-e", "--expr", required=True)
    s = sub.add_parser("selftest", parents=[common], help="run the built-in suites")
    s.add_argument("--probe-depth", type=int, default=2, help="oracle probe budget; 0 skips the oracle")
    return p


def parse_config(argv: Optional[list[str]] = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        file=getattr(ns, "file", None),
        expr=getattr(ns, "expr", None),
        generic_trans=ns.generic_trans,
        trace=ns.trace,
        probe_depth=getattr(ns, "probe_depth", 2),
    )


def run(cfg: CliConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    token = GENERIC_TRANS.set(cfg.generic_trans)
    try:
        return COMMANDS[cfg.command](cfg, out, err)
    except _Failure as f:
        print(str(f), file=err)
        return f.code
    finally:
        GENERIC_TRANS.reset(token)


def main(argv: Optional[list[str]] = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
