"""Analytic experiments: extension, lifts, decay bounds and the counterexample."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .bounds import (branched_vs_geometric, check_main_lemma_remainder,
                     counterexample_ratio, counterexample_table, verify_decay)
from .character import StarProduct
from .constants import Constants
from .extension import TruncatedPath, extend
from .lift import IdentityPath, PathData, lift_polynomial, lift_young
from .report import CheckReport
from .trees import enumerate_trees_upto

# x_t = (t, t²)
POLY_T_T2 = ((0, 1), (0, 0, 1))


def dyadic_times(denominator: int, exact: bool = True) -> list:
    if exact:
        return [Fraction(i, denominator) for i in range(denominator + 1)]
    return [i / denominator for i in range(denominator + 1)]


def identity_extension_report(level: int = 12, max_size: int = 4, denominator: int = 4,
                              atol: float = 1e-8) -> CheckReport:
    """Extend the degree-1 identity path and compare with (t-s)^|τ|/τ!."""
    report = CheckReport("identity-extension", f"N=1, M={max_size}, level {level}, "
                         f"pairs on 1/{denominator} grid, atol={atol}", rel_slack=0.0)
    X = TruncatedPath.identity(1)
    trees = enumerate_trees_upto(max_size)
    worst = 0.0
    for s, t in combinations(dyadic_times(denominator, exact=False), 2):
        res = extend(X, max_size, s, t, tol=atol, min_level=level, max_level=level,
                     strict=False)
        for tr in trees:
            err = abs(res.values[tr] - (t - s) ** tr.size / tr.factorial)
            worst = max(worst, err)
            report.record(err, atol, {"tree": tr.notation(), "s": s, "t": t})
    report.notes.append(f"max abs error {worst:.3e}")
    return report


def lift_oracle_reports(levels: int = 12, max_size: int = 4, atol: float = 1e-6,
                        chen_atol: float = 1e-5, denominator: int = 8) -> list[CheckReport]:
    """Young lift of sampled (t, t²) against the exact polynomial lift, plus Chen."""
    path = PathData.polynomial(POLY_T_T2, name="(t, t^2)")
    exact = lift_polynomial(path, max_size)
    numeric = lift_young(path.sampled(2 ** levels), max_size, tol=atol)
    times = dyadic_times(denominator, exact=False)
    agree = CheckReport("lift-vs-polynomial", f"2^{levels} samples, trees<={max_size}, "
                        f"atol={atol}", rel_slack=0.0)
    for s, t in combinations(times, 2):
        for tr, poly in exact.polys.items():
            err = abs(numeric.value(tr, s, t) - float(poly(Fraction(s), Fraction(t))))
            agree.record(err, atol, {"tree": tr.notation(), "s": s, "t": t})
    chen = CheckReport("lift-chen", f"triples on 1/{denominator} grid, atol={chen_atol}",
                       rel_slack=0.0)
    for u, s, t in combinations(times, 3):
        left = StarProduct(numeric.character(u, s), numeric.character(s, t))
        full = numeric.character(u, t)
        for tr in exact.polys:
            chen.record(abs(left(tr) - full(tr)), chen_atol,
                        {"tree": tr.notation(), "u": u, "s": s, "t": t})
    return [agree, chen]


def decay_reports(max_size: int = 6, denominator: int = 8) -> list[CheckReport]:
    """Decay bound for the identity path and for exact polynomial lifts."""
    times = dyadic_times(denominator)
    reports = [verify_decay(IdentityPath(), 1.0, max_size, times, label="decay-identity")]
    for name, coeffs in (("t,t^2", POLY_T_T2), ("t^2-t", ((0, -1, 1),))):
        lifted = lift_polynomial(PathData.polynomial(coeffs, name=name), max_size)
        reports.append(verify_decay(lifted, 1.0, max_size, times,
                                    label=f"decay-poly({name})"))
    return reports


def geometric_comparison_report(gamma: float = 0.75) -> CheckReport:
    """Existence of the crossover beyond which the branched bound is sharper."""
    out = branched_vs_geometric(gamma)
    report = CheckReport("branched-vs-geometric", f"gamma={gamma}", rel_slack=0.0)
    ok = out["exists"] and all(v >= 0 for v in out["f_at_probes"])
    report.record_equal(ok, {"n0": out.get("n0"), "log_n0": out.get("log_n0")})
    report.notes.append(f"n0 = {out.get('n0'):.4e} (log n0 = {out.get('log_n0'):.3f})"
                        if out["exists"] else out.get("reason", ""))
    return report


def counterexample_report(n_max: int = 200, gamma: float = 0.5, beta: float = 2.0,
                          a: float = 0.5, b: float = 1.0, threshold: float = 1e3,
                          ratio_tol: float = 1e-6):
    """Divergence of the cut sum on bushy trees; returns (reports, table)."""
    table = counterexample_table(n_max, gamma, beta, a, b)
    dominance = CheckReport("counterexample-dominance", f"n<={n_max}", rel_slack=1e-12)
    for n, exact_sum, lower in table:
        dominance.record(lower, exact_sum, {"n": n})
    diverge = CheckReport("counterexample-divergence", f"threshold {threshold}",
                          rel_slack=0.0)
    first = next((n for n, v, _ in table if v > threshold), None)
    diverge.record_equal(first is not None, {"first_n": first})
    diverge.notes.append(f"sum first exceeds {threshold:g} at n = {first}")
    target = counterexample_ratio(gamma, beta, a, b)
    ratio = CheckReport("counterexample-ratio", f"target {target:.12f}, tol {ratio_tol}",
                        rel_slack=0.0)
    last = table[-1][2] / table[-2][2]
    ratio.record(abs(last - target), ratio_tol, {"n": n_max, "ratio": last})
    return [dominance, diverge, ratio], table


def main_lemma_reports(ns: Sequence[int] = (2, 3, 4), denominator: int = 8,
                       rel_slack: float = 1e-10) -> list[CheckReport]:
    times = dyadic_times(denominator)
    triples = list(combinations(times, 3))
    path = IdentityPath()
    out = []
    for n in ns:
        out.append(check_main_lemma_remainder(path, 1.0, n, triples, holder_norm=1.0,
                                              rel_slack=rel_slack))
    return out


def constants_table(gammas: Sequence[float] = (0.3, 0.5, 0.75, 1.0)) -> list[dict]:
    return [Constants(g).as_dict() for g in gammas]


def analytic_suites() -> list[CheckReport]:
    reports = [identity_extension_report()]
    reports += lift_oracle_reports()
    reports += decay_reports()
    reports.append(geometric_comparison_report())
    reports += counterexample_report()[0]
    reports += main_lemma_reports()
    return reports

