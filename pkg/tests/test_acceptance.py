"""The eight acceptance criteria, each at its stated size and time budget.

Every test records one PASS/FAIL line; the lines are echoed in the terminal
summary under "acceptance".
"""

from conftest import ACCEPTANCE

from hitkernel.corpus import EQUATIONS
from hitkernel.suites import (
    comp_suite,
    corpus_suite,
    dimalg_suite,
    negative_cases,
    negative_suite,
    oracle_suite,
    stability_suite,
    torus_suite,
    transport_suite,
)


def record(n: int, title: str, res, limit=None) -> bool:
    in_time = limit is None or res.elapsed < limit
    ok = res.ok and not res.skipped and in_time
    budget = f", {res.elapsed:.2f}s < {limit}s" if limit else f", {res.elapsed:.2f}s"
    if not in_time:
        budget += " EXCEEDED"
    line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'} {res.passed}/{res.total}{budget}"
    ACCEPTANCE[n] = line
    print(line)
    for f in res.failures[:5]:
        print("  ", f)
    return ok


def test_1_corpus():
    assert len(EQUATIONS) >= 30
    res = corpus_suite()
    assert record(1, "judgmental-equality corpus", res, 5.0), res.failures


def test_2_torus():
    res = torus_suite()
    assert res.total == 4
    assert record(2, "torus maps", res, 1.0), res.failures


def test_3_stability():
    res = stability_suite(1000)
    assert res.total >= 1000
    assert record(3, "substitution stability", res, 60.0), res.failures[:5]


def test_4_comp():
    res = comp_suite(200)
    assert res.total >= 200
    assert record(4, "derived comp contract", res), res.failures[:5]


def test_5_transport():
    res = transport_suite(100)
    # 100 pushout conversions, then 50 Susp and 50 Trunc contract checks
    assert res.total >= 200
    assert record(5, "generic vs direct transport", res), res.failures[:5]


def test_6_oracle():
    res = oracle_suite(40, probe_depth=2)
    assert res.total >= 41  # the corpus plus the pre-tree counterexample
    assert record(6, "presheaf oracle agreement", res, 60.0), res.failures[:5]


def test_7_dimalg():
    res = dimalg_suite(10_000)
    assert res.total == 20_000
    assert record(7, "interval and face soundness", res), res.failures[:5]


def test_8_negative():
    assert len(negative_cases()) == 10
    res = negative_suite()
    assert record(8, "negative suite", res), res.failures
