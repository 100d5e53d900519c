"""A proof-checking kernel for cubical type theory with higher inductive types.

The interval and faces live in `dimalg`, terms and HIT declarations in
`syntax`, evaluation and conversion in `eval`, typing in `typecheck`, and a
finite model of cubical sets used as a test oracle in `oracle`.
"""

from .dimalg import dim_eq, face_norm
from .eval import convert, normalize, whnf
from .parser import ParseError, parse_expr, parse_module, pretty
from .syntax import BUILTINS, alpha_eq
from .typecheck import Checker, TypeCheckError, check_module

__all__ = [
    "BUILTINS",
    "Checker",
    "ParseError",
    "TypeCheckError",
    "alpha_eq",
    "check_module",
    "convert",
    "dim_eq",
    "face_norm",
    "normalize",
    "parse_expr",
    "parse_module",
    "pretty",
    "whnf",
]
