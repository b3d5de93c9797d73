import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from branched_decay.bounds import (EstimateKernel, branched_vs_geometric, bushy_cuts,
                                   check_adjacent_lemma, check_concavity,
                                   check_decreasing_lemma, check_main_lemma_remainder,
                                   check_overlap_lemma, check_taylor_binomial,
                                   concavity_suite, counterexample_ratio, counterexample_sum,
                                   counting_bound_suite, decay_bound, kernel_by_quadrature,
                                   kernel_quadrature_report, kernel_value, log_counterexample_sum,
                                   norm_scale, simplex_kernel, simplex_quadrature, verify_decay)
from branched_decay.hopf import cut_pairs
from branched_decay.lift import IdentityPath
from branched_decay.trees import bushy, parse_tree

unit = st.floats(0.0, 1.0)


def test_kernel_hand_value():
    assert kernel_value(EstimateKernel(2, 4, 0.0), 0.5, 1.0) == pytest.approx(9 / 128)


def test_kernel_against_mpmath():
    u, s, t, b = 0.1, 0.3, 0.9, 1.5
    want = mpmath.quad(lambda x: mpmath.quad(lambda y: (x - u) ** (b - 1) * (y - u) ** (b - 1),
                                             [x, t]), [s, t])
    assert simplex_kernel(2, b, u, s, t) == pytest.approx(float(want), rel=1e-10)


# the estimate kernels only use b = n/m >= 1, where the integrand is bounded
@given(unit, unit, unit, st.integers(1, 3), st.floats(1.0, 4.0))
def test_kernel_matches_quadrature(a, b_, c, m, b):
    u, s, t = sorted((a, b_, c))
    closed = simplex_kernel(m, b, u, s, t)
    quad = kernel_by_quadrature(m, b, u, s, t, nodes=30)
    assert quad == pytest.approx(closed, rel=1e-6, abs=1e-12)


def test_kernel_is_vectorised_and_validated():
    out = simplex_kernel(2, 1.0, np.zeros(3), np.zeros(3), np.array([0.0, 0.5, 1.0]))
    assert np.allclose(out, [0.0, 0.125, 0.5])
    with pytest.raises(ValueError):
        EstimateKernel(3, 2)
    with pytest.raises(ValueError):
        kernel_value(EstimateKernel(1, 1, 0.5), 0.2, 0.4)


def test_simplex_quadrature_volume():
    # volume of the m-simplex of side 1 is 1/m!
    for m in (1, 2, 3):
        vol = simplex_quadrature(lambda *c: np.ones_like(c[0]), m, 0.0, 1.0, grading=1)
        assert vol == pytest.approx(1 / math.factorial(m))


def test_appendix_lemmas_small_grid():
    grid = (0.0, 0.25, 0.5, 1.0)
    for N in range(3):
        for n in range(N + 1, 8):
            assert check_taylor_binomial(N, n, grid).passed
            assert check_overlap_lemma(N, n, 2, grid).passed
    for n in range(1, 8):
        for m in range(1, n + 1):
            for k in range(m):
                assert check_decreasing_lemma(k, m, n, grid).passed
                assert check_adjacent_lemma(k, m, n, grid).passed


def test_lemma_parameter_checks():
    with pytest.raises(ValueError):
        check_taylor_binomial(2, 2)
    with pytest.raises(ValueError):
        check_decreasing_lemma(2, 2, 3)
    with pytest.raises(ValueError):
        check_adjacent_lemma(2, 2, 3)


def test_kernel_report_small():
    rep = kernel_quadrature_report(m_max=2, n_max=4)
    assert rep.passed and rep.checked > 0


def test_concavity_small():
    rep = concavity_suite(max_size=6, gammas=(0.3, 0.9))
    assert rep.passed and rep.checked > 0


def test_concavity_checks_beta():
    t = parse_tree("[*.[*]]")
    with pytest.raises(ValueError):
        check_concavity(t, parse_tree("[*]"), 0.5, beta=1.0)
    with pytest.raises(ValueError):
        check_concavity(t, t, 0.5)


def test_counting_bound_small():
    rep = counting_bound_suite(max_size=6)
    assert rep.passed and rep.checked > 0


@pytest.mark.parametrize("n", range(1, 9))
def test_bushy_cuts_match_coproduct(n):
    mine = Counter({(p, tr): m for p, tr, m in bushy_cuts(n)})
    assert mine == Counter(dict(cut_pairs(bushy(n))))


def _generic_sum(n, gamma, beta, a, b):
    tau = bushy(n)
    total = 0.0
    for (p, tr), m in cut_pairs(tau):
        total += (m * (tau.factorial / (p.factorial * tr.factorial)) ** gamma
                  * beta ** -(p.components + tr.components)
                  * a ** (gamma * p.size) * b ** (gamma * tr.size))
    return total / (a + b) ** (gamma * (n + 1))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_counterexample_sum_against_direct(n):
    exact, lower = counterexample_sum(n, 0.5, 2.0, 0.5, 1.0)
    assert exact == pytest.approx(_generic_sum(n, 0.5, 2.0, 0.5, 1.0), rel=1e-12)
    assert exact >= lower


def test_counterexample_ratio_limit():
    r = counterexample_ratio(0.5, 2.0, 0.5, 1.0)
    l1 = log_counterexample_sum(150, 0.5, 2.0, 0.5, 1.0)[1]
    l2 = log_counterexample_sum(151, 0.5, 2.0, 0.5, 1.0)[1]
    assert math.exp(l2 - l1) == pytest.approx(r, abs=1e-12)
    with pytest.raises(ValueError):
        log_counterexample_sum(3, 1.0, 2.0, 0.5, 1.0)


def test_decay_bound_identity_path():
    times = [Fraction(i, 4) for i in range(5)]
    rep = verify_decay(IdentityPath(), 1.0, 5, times)
    assert rep.passed and rep.checked == 10 * 17
    assert decay_bound(parse_tree("*"), 1.0, 0, 0, {parse_tree("*"): 1.0}) == 0.0


def test_norm_scale_needs_low_degrees():
    with pytest.raises(ValueError):
        norm_scale({parse_tree("[*]"): 1.0}, 2)
    assert norm_scale({parse_tree("*"): 4.0, parse_tree("[*]"): 9.0}, 2) == 4.0


def test_branched_vs_geometric():
    out = branched_vs_geometric(0.75)
    assert out["exists"] and out["n0"] > 1
    assert all(v >= 0 for v in out["f_at_probes"])
    assert not branched_vs_geometric(1.0)["exists"]
    with pytest.raises(ValueError):
        branched_vs_geometric(0.5)


def test_main_lemma_small():
    times = [Fraction(i, 4) for i in range(5)]
    triples = list(combinations(times, 3))
    for n in (2, 3):
        rep = check_main_lemma_remainder(IdentityPath(), 1.0, n, triples, holder_norm=1.0)
        assert rep.passed and rep.checked == len(triples)


def test_branched_vs_geometric_beyond_float_range():
    out = branched_vs_geometric(0.9)
    assert out["exists"] and out["n0"] == math.inf
    assert 700 < out["log_n0"] < math.inf
    assert all(v >= 0 for v in out["f_at_probes"])
    # the crossover agrees with the direct lgamma form where both are finite
    g = 0.75
    low = branched_vs_geometric(g)
    n0 = low["n0"]
    from branched_decay.constants import Constants, zeta
    lz, base = math.log(1 + zeta(2 * g)), Constants(g).log_c_bar_base

    def f(n):
        return (1 - g) * math.lgamma(n + 1) + (n - 1) * lz - (n + 1) * base

    assert f(n0 * (1 + 1e-9)) > 0 > f(n0 * (1 - 1e-9))
