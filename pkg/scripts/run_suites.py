#!/usr/bin/env python3
"""Run some or all of the kernel's self-test suites and report counts and timings.

    python3 scripts/run_suites.py                   # everything
    python3 scripts/run_suites.py stability oracle --seed 3 --json out.json
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from hitkernel import suites

SUITES = {
    "corpus": lambda c: suites.corpus_suite(),
    "mutant": lambda c: suites.mutant_suite(),
    "torus": lambda c: suites.torus_suite(),
    "negative": lambda c: suites.negative_suite(),
    "typing": lambda c: suites.typing_suite(c.n_terms, c.seed),
    "stability": lambda c: suites.stability_suite(c.n_terms * 5, c.seed),
    "generic-stability": lambda c: suites.generic_flag_suite(c.n_terms, c.seed),
    "comp": lambda c: suites.comp_suite(c.n_terms, c.seed),
    "transport": lambda c: suites.transport_suite(c.n_terms // 2, c.seed),
    "dimalg": lambda c: suites.dimalg_suite(c.n_pairs, c.seed),
    "oracle": lambda c: suites.oracle_suite(c.n_oracle, c.probe_depth, c.seed),
}


@dataclass
class RunConfig:
    names: tuple = tuple(SUITES)
    seed: Optional[int] = None  # None: KERNEL_SEED or the built-in default
    n_terms: int = 200
    n_pairs: int = 10_000
    n_oracle: int = 40
    probe_depth: int = 2
    json_out: Optional[str] = None

    def __post_init__(self):
        unknown = set(self.names) - SUITES.keys()
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("names", nargs="*", help=f"any of {', '.join(SUITES)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-terms", type=int, default=200)
    p.add_argument("--n-pairs", type=int, default=10_000)
    p.add_argument("--n-oracle", type=int, default=40)
    p.add_argument("--probe-depth", type=int, default=2)
    p.add_argument("--json", dest="json_out")
    a = p.parse_args(argv)
    cfg = RunConfig(tuple(a.names) or tuple(SUITES), a.seed, a.n_terms, a.n_pairs, a.n_oracle, a.probe_depth, a.json_out)

    rows = []
    for name in cfg.names:
        res = SUITES[name](cfg)
        print(f"{res.line():45s} {res.elapsed:8.2f}s")
        for f in res.failures[:5]:
            print("   ", f)
        rows.append({"suite": name, "total": res.total, "failures": res.failures, "elapsed": res.elapsed, "skipped": res.skipped})
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": asdict(cfg), "results": rows}, fh, indent=2)
    return 0 if all(not r["failures"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
