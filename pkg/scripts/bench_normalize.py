#!/usr/bin/env python3
"""Time normalization of generated terms as the generator depth grows.

Prints, per depth, the median term size, median normal-form size and the
median and worst normalization time.  Use --generic to route Susp/Trunc
constructor transport through the uniform algorithm.

    python3 scripts/bench_normalize.py --depths 2 3 4 5 --n 100
"""

from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass, field
from typing import Optional

from hitkernel.eval import GENERIC_TRANS, normalize
from hitkernel.generate import Gen, scope_with_vars
from hitkernel.syntax import Term


@dataclass
class Config:
    depths: list = field(default_factory=lambda: [2, 3, 4])
    n: int = 100
    seed: Optional[int] = None
    generic: bool = False


def size(t) -> int:
    if isinstance(t, Term):
        return 1 + sum(size(v) for v in vars(t).values())
    if isinstance(t, tuple):
        return sum(size(v) for v in t)
    return 0


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--depths", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--generic", action="store_true")
    a = p.parse_args(argv)
    cfg = Config(a.depths, a.n, a.seed, a.generic)

    GENERIC_TRANS.set(cfg.generic)
    scope = scope_with_vars()
    print(f"{'depth':>5s} {'size':>6s} {'nf size':>8s} {'median ms':>10s} {'max ms':>8s}")
    for depth in cfg.depths:
        g = Gen.seeded(cfg.seed)
        sizes, nf_sizes, times = [], [], []
        for _ in range(cfg.n):
            t, ty, _ = g.typed_term(depth=depth, ndims=3)
            t0 = time.perf_counter()
            nf = normalize(t, ty, scope)
            times.append(1000 * (time.perf_counter() - t0))
            sizes.append(size(t))
            nf_sizes.append(size(nf))
        print(
            f"{depth:5d} {statistics.median(sizes):6.0f} {statistics.median(nf_sizes):8.0f}"
            f" {statistics.median(times):10.2f} {max(times):8.1f}"
        )


if __name__ == "__main__":
    main()
