#!/usr/bin/env python3
"""Interpret generated closed terms as trees and probe them with cube maps.

Reports the height distribution of the corpus, how many probe maps each
check used, and any stability or functoriality failures.  With --show the
trees themselves are printed.

    python3 scripts/oracle_probe.py --n 40 --depth 2 --show 5
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from hitkernel.eval import Scope
from hitkernel.oracle import (
    functoriality_check,
    pretree_counterexample,
    probe_maps,
    pushout_legs,
    show_tree,
    stability_check,
    tree_height,
)
from hitkernel.parser import pretty
from hitkernel.suites import oracle_corpus

NAMES = ("i", "j")


@dataclass
class Config:
    n: int = 40
    depth: int = 2
    max_height: int = 3
    seed: Optional[int] = None
    show: int = 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--depth", type=int, default=2, help="probe depth for hcomp families")
    p.add_argument("--max-height", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--show", type=int, default=0, help="print this many trees")
    a = p.parse_args(argv)
    cfg = Config(a.n, a.depth, a.max_height, a.seed, a.show)

    t0 = time.perf_counter()
    corpus = oracle_corpus(cfg.n, cfg.seed, cfg.max_height)
    heights = Counter(tree_height(u) for _, _, u in corpus)
    print(f"corpus: {len(corpus)} terms, heights {dict(sorted(heights.items()))}")
    print(f"probe maps over {NAMES}: {len(probe_maps(NAMES))}")

    bad = 0
    for n, (t, ty, u) in enumerate(corpus):
        if n < cfg.show:
            print(f"  {pretty(t)}\n    => {show_tree(u)}")
        for f in probe_maps(NAMES):
            v = stability_check(NAMES, t, ty, f, cfg.depth)
            if not v.passed:
                bad += 1
                print(f"stability FAIL {pretty(t)}: {v.witness}")
                break
        v = functoriality_check(u, NAMES, max(1, cfg.depth - 1), pushout_legs(ty, Scope()))
        if not v.passed:
            bad += 1
            print(f"functoriality FAIL {pretty(t)}: {v.witness}")

    tree, ns = pretree_counterexample()
    caught = not functoriality_check(tree, ns, 1).passed
    print(f"pre-tree counterexample rejected: {caught}")
    print(f"failures: {bad}, elapsed {time.perf_counter() - t0:.2f}s")
    return 0 if bad == 0 and caught else 1


if __name__ == "__main__":
    raise SystemExit(main())
