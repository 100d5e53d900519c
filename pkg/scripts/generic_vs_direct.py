#!/usr/bin/env python3
"""Compare uniform constructor transport with the per-HIT rules.

For each HIT we transport generated constructor instances both ways and
record whether the normal forms coincide, plus how many hcomp nodes each
result carries.  Pushouts should agree exactly; Susp and Trunc are expected
to pick up extra hcomps while still meeting the face contracts.

    python3 scripts/generic_vs_direct.py --n 100 --seed 5
"""

from __future__ import annotations

import argparse
import statistics
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from hitkernel.dimalg import ONE
from hitkernel.eval import Scope, convert, generic_trans_constructor, normalize, trans_value
from hitkernel.generate import Gen, param_trans_instance, pushout_trans_instance
from hitkernel.syntax import BUILTINS, HComp, Term, Trans, alpha_eq, subst


@dataclass
class Config:
    n: int = 100
    seed: Optional[int] = None


def count_hcomps(t) -> int:
    if isinstance(t, HComp):
        return 1 + count_hcomps(t.base) + sum(count_hcomps(u) for _, u in t.system)
    if isinstance(t, Term):
        return sum(count_hcomps(v) for v in vars(t).values() if isinstance(v, (Term, tuple)))
    if isinstance(t, tuple):
        return sum(count_hcomps(v) for v in t)
    return 0


def instances(cfg: Config):
    g = Gen.seeded(cfg.seed)
    for _ in range(cfg.n):
        i, line, phi, u0, _ = pushout_trans_instance(g)
        yield "Pushout", i, line, phi, u0
    for hit in ("Susp", "Trunc"):
        for _ in range(cfg.n):
            yield (hit, *param_trans_instance(g, hit))


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int)
    a = p.parse_args(argv)
    cfg = Config(a.n, a.seed)

    scope = Scope()
    stats = defaultdict(lambda: {"n": 0, "alpha": 0, "convertible": 0, "direct": [], "generic": []})
    for hit, i, line, phi, u0 in instances(cfg):
        ty1 = subst(line, None, {i: ONE})
        direct = normalize(trans_value(Trans(i, line, phi, u0), scope), ty1, scope)
        generic = normalize(
            generic_trans_constructor(BUILTINS[hit], i, line.params, phi, u0.con, u0.args, u0.dims), ty1, scope
        )
        s = stats[hit]
        s["n"] += 1
        s["alpha"] += alpha_eq(direct, generic)
        s["convertible"] += convert(ty1, direct, generic, scope)
        s["direct"].append(count_hcomps(direct))
        s["generic"].append(count_hcomps(generic))

    print(f"{'hit':8s} {'n':>5s} {'alpha-eq':>9s} {'convert':>8s} {'hcomps direct':>14s} {'hcomps generic':>15s}")
    for hit, s in stats.items():
        print(
            f"{hit:8s} {s['n']:5d} {s['alpha']:9d} {s['convertible']:8d}"
            f" {statistics.mean(s['direct']):14.2f} {statistics.mean(s['generic']):15.2f}"
        )


if __name__ == "__main__":
    main()
