"""Verification suites that combine the per-module checks into reports."""

from __future__ import annotations

import math
from itertools import combinations_with_replacement
from typing import Iterable, Optional

import numpy as np

from .character import (NormParams, StarProduct, Graded, is_character, random_character,
                        star_norm_bound_check, COUNIT, PreconditionError)
from .constants import log_c
from .hopf import coassociativity_sides, cut_pairs, tree_binomial
from .report import CheckReport
from .trees import EMPTY, count_trees, enumerate_forests_upto, enumerate_trees_upto

# Unlabelled rooted trees with n vertices, n = 1..7.
TREE_COUNTS = (1, 1, 2, 4, 9, 20, 48)


def tree_count_suite(max_size: int = 7) -> CheckReport:
    report = CheckReport("tree-counts", f"n<={max_size}", rel_slack=0.0)
    for n in range(1, max_size + 1):
        report.record_equal(count_trees(n) == _otter_count(n), {"n": n})
    return report


def _otter_count(n: int) -> int:
    # a(n+1) = (1/n) Σ_{k=1..n} (Σ_{d|k} d a(d)) a(n-k+1)
    a = [0, 1]
    for m in range(1, n):
        total = 0
        for k in range(1, m + 1):
            s = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            total += s * a[m - k + 1]
        a.append(total // m)
    return a[n]


def hopf_suite(max_forest: int = 6, max_tree: int = 7) -> list[CheckReport]:
    """Coassociativity, both counit laws and the tree binomial theorem."""
    coassoc = CheckReport("coassociativity", f"forests<={max_forest}", rel_slack=0.0)
    counit = CheckReport("counit", f"forests<={max_forest}", rel_slack=0.0)
    for f in enumerate_forests_upto(max_forest):
        left, right = coassociativity_sides(f)
        coassoc.record_equal(left == right, {"forest": str(f)})
        # (ε⊗id)Δf = f and (id⊗ε)Δf = f
        lhs = {tr: m for (p, tr), m in cut_pairs(f) if p == EMPTY}
        rhs = {p: m for (p, tr), m in cut_pairs(f) if tr == EMPTY}
        counit.record_equal(lhs == {f: 1} and rhs == {f: 1}, {"forest": str(f)})
    binom = CheckReport("tree-binomial", f"trees<={max_tree}", rel_slack=0.0)
    for t in enumerate_trees_upto(max_tree):
        for l in range(t.size + 1):
            binom.record_equal(tree_binomial(t, l) == math.comb(t.size, l),
                               {"tree": str(t), "l": l})
    return [coassoc, counit, binom]


def star_bound_suite(gammas: Iterable[float] = (0.5, 1.0), max_total: int = 6,
                     n_pairs: int = 10, seed: int = 0,
                     rel_slack: float = 1e-12) -> CheckReport:
    """Tree-norm bound on X^n ⋆ Y^k for seeded random characters, β = c_k."""
    gammas = tuple(gammas)
    report = CheckReport("star-tree-norm-bound",
                         f"n+k<={max_total}, gamma in {gammas}, beta=c_k, {n_pairs} pairs",
                         rel_slack=rel_slack)
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(n_pairs):
        decay = i % 2 == 1
        pairs.append((random_character(max_total, rng, decay=decay),
                      random_character(max_total, rng, decay=decay)))
    for gamma in gammas:
        for k in range(0, max_total):
            p = NormParams(gamma, log_beta=log_c(k, gamma))
            for n in range(1, max_total - k + 1):
                for X, Y in pairs:
                    star_norm_bound_check(X, Y, n, k, p, rel_slack=rel_slack, report=report)
    return report


def factorisation_suite(n_pairs: int = 50, max_size: int = 6, seed: int = 0) -> CheckReport:
    """⟨X^n⋆Y^k, ττ̃⟩ = Σ ⟨X⋆Y^{k1},τ⟩⟨X⋆Y^{k2},τ̃⟩ exactly, all forests ≤ max_size."""
    report = CheckReport("forest-factorisation", f"{n_pairs} pairs, forests<={max_size}",
                         rel_slack=0.0)
    rng = np.random.default_rng(seed)
    forests = enumerate_forests_upto(max_size, include_empty=False)
    for i in range(n_pairs):
        X = random_character(max_size, rng)
        Y = random_character(max_size, rng)
        for name, Z in (("X", X), ("Y", Y)):
            if not is_character(Z, max_size):
                raise PreconditionError(f"random {name} failed the character check")
        table = {}

        def sliced(f, j):
            key = (f, j)
            if key not in table:
                table[key] = StarProduct(Graded(X, f.size - j), Graded(Y, j))(f)
            return table[key]

        for a, b in combinations_with_replacement(forests, 2):
            if a.size + b.size > max_size:
                continue
            ab = a * b
            for k in range(ab.size + 1):
                rhs = sum(sliced(a, k1) * sliced(b, k - k1)
                          for k1 in range(max(0, k - b.size), min(k, a.size) + 1))
                report.record_equal(sliced(ab, k) == rhs,
                                    {"pair": i, "tau": str(a), "tau_tilde": str(b), "k": k})
    return report


def counit_star_suite(max_size: int = 6, seed: int = 0) -> CheckReport:
    """ε is a two-sided unit for ⋆ on a random character."""
    report = CheckReport("counit-star-unit", f"forests<={max_size}", rel_slack=0.0)
    X = random_character(max_size, np.random.default_rng(seed))
    for f in enumerate_forests_upto(max_size):
        ok = StarProduct(X, COUNIT)(f) == X(f) == StarProduct(COUNIT, X)(f)
        report.record_equal(ok, {"forest": str(f)})
    return report


def algebra_suites(max_tree: int = 7, seed: int = 0,
                   n_pairs: Optional[int] = None) -> list[CheckReport]:
    reports = [tree_count_suite(max_tree)]
    reports += hopf_suite(min(max_tree, 6), max_tree)
    reports.append(counit_star_suite(min(max_tree, 6), seed))
    reports.append(factorisation_suite(50 if n_pairs is None else n_pairs,
                                       min(max_tree, 6), seed))
    reports.append(star_bound_suite(max_total=min(max_tree, 6), seed=seed))
    return reports
