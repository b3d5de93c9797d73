"""End-to-end acceptance checks, one test per criterion.

Each test appends a single ``criterion N: PASS|FAIL ...`` line that is echoed in
the terminal summary, then asserts.
"""

import time

import pytest

from branched_decay.bounds import (appendix_suite, concavity_suite, counting_bound_suite,
                                   kernel_quadrature_report)
from branched_decay.experiments import (counterexample_report, decay_reports,
                                        geometric_comparison_report, identity_extension_report,
                                        lift_oracle_reports, main_lemma_reports)
from branched_decay.suites import factorisation_suite, hopf_suite, star_bound_suite
from branched_decay.trees import count_trees

from oracles import brute_force_tree_count, euler_transform_counts

pytestmark = pytest.mark.slow


def _log(log, n, reports, extra="", ok=None):
    if ok is None:
        ok = all(r.passed for r in reports)
    detail = "; ".join(f"{r.lemma} {r.checked} checked/{r.violations} bad" for r in reports)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}{extra}"
    log.append(line)
    print(line)
    for r in reports:
        print("   ", r.summary())
    return ok


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_1_tree_counts(acceptance_log):
    t0 = time.perf_counter()
    ours = [count_trees(n) for n in range(1, 8)]
    elapsed = time.perf_counter() - t0
    oracle = euler_transform_counts(7)
    brute = [brute_force_tree_count(n) for n in range(1, 8)]
    ok = ours == oracle == brute == [1, 1, 2, 4, 9, 20, 48] and elapsed < 5
    line = (f"criterion 1: {'PASS' if ok else 'FAIL'} counts {ours} vs recurrence {oracle}, "
            f"{elapsed:.2f}s")
    acceptance_log.append(line)
    print(line)
    assert ok


def test_criterion_2_hopf_laws(acceptance_log):
    reports, elapsed = _timed(hopf_suite, 6, 7)
    ok = _log(acceptance_log, 2, reports, f", {elapsed:.1f}s",
              ok=all(r.passed for r in reports) and elapsed < 60)
    assert ok


def test_criterion_3_forest_factorisation(acceptance_log):
    rep = factorisation_suite(n_pairs=50, max_size=6, seed=0)
    assert _log(acceptance_log, 3, [rep])


def test_criterion_4_star_bound(acceptance_log):
    rep = star_bound_suite(gammas=(0.5, 1.0), max_total=6, n_pairs=10, seed=0,
                           rel_slack=1e-12)
    assert _log(acceptance_log, 4, [rep])


def test_criterion_5_concavity_and_counting(acceptance_log):
    conc, elapsed = _timed(concavity_suite, 8, (0.3, 0.5, 0.9), 1e-12)
    count = counting_bound_suite(7)
    ok = conc.passed and count.passed and elapsed < 300
    assert _log(acceptance_log, 5, [conc, count], f", concavity {elapsed:.1f}s", ok=ok)


def test_criterion_6_binomial_lemmas(acceptance_log):
    reports = appendix_suite(n_max=20, N_max=3, rel_slack=1e-12)
    reports.append(kernel_quadrature_report(rtol=1e-6))
    assert _log(acceptance_log, 6, reports)


def test_criterion_7_identity_extension(acceptance_log):
    rep = identity_extension_report(level=12, max_size=4, atol=1e-8)
    assert _log(acceptance_log, 7, [rep], f", {rep.notes[-1]}")


def test_criterion_8_young_lift(acceptance_log):
    reports = lift_oracle_reports(levels=12, max_size=4, atol=1e-6, chen_atol=1e-5)
    assert _log(acceptance_log, 8, reports)


def test_criterion_9_decay_bound(acceptance_log):
    reports = decay_reports(max_size=6)
    geo = geometric_comparison_report(0.75)
    reports.append(geo)
    assert _log(acceptance_log, 9, reports, f", {geo.notes[-1]}")


def test_criterion_10_counterexample(acceptance_log):
    reports, table = counterexample_report(n_max=200, gamma=0.5, beta=2.0, a=0.5, b=1.0,
                                           threshold=1e3, ratio_tol=1e-6)
    assert len(table) == 200
    assert _log(acceptance_log, 10, reports, f", {reports[1].notes[-1]}")


def test_criterion_11_main_lemma(acceptance_log):
    reports = main_lemma_reports(ns=(2, 3, 4), denominator=8, rel_slack=1e-10)
    assert _log(acceptance_log, 11, reports)
