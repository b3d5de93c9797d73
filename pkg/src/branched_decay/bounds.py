"""Analytic estimates: comparison kernels, binomial-type lemmas, concavity,
the counter-example sum and the factorial decay bound.

Inequalities are evaluated in floating point (log space where magnitudes
demand it) and collected into :class:`CheckReport` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .character import Graded, StarProduct, log_abs
from .constants import Constants, log_c, zeta
from .hopf import (factorial_cut_sum, log_cut_sum_over_trunk,
                   permutation_classes, trunk_groups)
from .report import CheckReport
from .trees import (Forest, RootedTree, bushy, enumerate_trees, enumerate_trees_upto,
                    single_vertex)

DEFAULT_GRID = tuple(i / 10 for i in range(11))


# ------------------------------------------------------------------ kernel


def simplex_kernel(order: int, b: float, u, s, t):
    """S^(order)(ρ_u^b)_{s,t} = ((t-u)^b - (s-u)^b)^order / (b^order order!).

    Works elementwise on numpy arrays.
    """
    if order == 0:
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
    s, t, u = (np.asarray(x, dtype=float) for x in (s, t, u))
    diff = (t - u) ** b - (s - u) ** b
    diff = np.maximum(diff, 0.0)
    out = diff ** order / (b ** order * math.factorial(order))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class EstimateKernel:
    """S^(m)(ρ_u^{n/m}), the comparison function of order m."""

    m: int
    n: int
    u: float = 0.0

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ValueError("need 1 <= m <= n")

    def __call__(self, s, t):
        return kernel_value(self, s, t)


def kernel_value(k: EstimateKernel, s, t):
    if np.any(np.asarray(s) < k.u) or np.any(np.asarray(t) < np.asarray(s)):
        raise ValueError("kernel needs u <= s <= t")
    return simplex_kernel(k.m, k.n / k.m, k.u, s, t)


def simplex_quadrature(f: Callable, m: int, lo: float, hi: float, nodes: int = 24,
                       grading: int = 3) -> float:
    """∫ f(s_1, …, s_m) over lo < s_1 < … < s_m < hi by nested Gauss–Legendre.

    Each coordinate is integrated over (s_{i-1}, hi) after the substitution
    s = a + (hi - a) w**grading, which clusters nodes near the lower end
    where power-law integrands are singular.  ``f`` receives m arrays.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = (x + 1) / 2
    w = w / 2
    weights = np.array([1.0])
    lower = np.array([lo], dtype=float)
    coords: list = []
    for _ in range(m):
        span = hi - lower
        new = lower[:, None] + span[:, None] * x[None, :] ** grading
        jac = span[:, None] * grading * x[None, :] ** (grading - 1) * w[None, :]
        weights = (weights[:, None] * jac).ravel()
        coords = [c.repeat(nodes) for c in coords] + [new.ravel()]
        lower = new.ravel()
    return float(np.sum(weights * f(*coords)))


def kernel_by_quadrature(m: int, b: float, u: float, s: float, t: float, **kw) -> float:
    """S^(m)(ρ_u^b)_{s,t} as an iterated integral of Π (s_i - u)^{b-1}."""
    if t <= s:
        return 0.0
    return simplex_quadrature(lambda *c: np.prod([(ci - u) ** (b - 1) for ci in c], axis=0),
                              m, s, t, **kw)


def _triples(grid: Sequence[float]):
    tri = np.array(list(combinations_with_replacement(sorted(grid), 3)))
    return tri[:, 0], tri[:, 1], tri[:, 2]


def _quads(grid: Sequence[float]):
    q = np.array(list(combinations_with_replacement(sorted(grid), 4)))
    return q[:, 0], q[:, 1], q[:, 2], q[:, 3]


def _record_arrays(report: CheckReport, lhs: np.ndarray, rhs: np.ndarray, params: dict,
                   points: Sequence[np.ndarray]):
    with np.errstate(divide="ignore"):
        llhs = np.where(lhs > 0, np.log(np.where(lhs > 0, lhs, 1.0)), -np.inf)
        lrhs = np.where(rhs > 0, np.log(np.where(rhs > 0, rhs, 1.0)), -np.inf)
    for i in range(len(lhs)):
        report.record_log(float(llhs[i]), float(lrhs[i]),
                          {**params, "point": [float(p[i]) for p in points]})


# --------------------------------------------------------- appendix lemmas


def taylor_binomial_lhs(N: int, n: int, u, s, t):
    u, s, t = (np.asarray(x, dtype=float) for x in (u, s, t))
    return sum((s - u) ** (n - j) * (t - s) ** j / (math.factorial(n - j) * math.factorial(j))
               for j in range(N + 1, n + 1))


def check_taylor_binomial(N: int, n: int, grid: Sequence[float] = DEFAULT_GRID,
                          rel_slack: float = 1e-12, identity_points: int = 3,
                          report: Optional[CheckReport] = None) -> CheckReport:
    """Binomial tail against the order-(N+1) kernel; also the integral identity.

    The tail Σ_{j>N} (s-u)^{n-j}(t-s)^j/((n-j)! j!) is compared with
    S^(N+1)(ρ_u^{n/(N+1)})/(n-N-1)!, and at a few grid points the tail is
    matched against (n-N-1)!^{-1} ∫_{Δ_{N+1}(s,t)} (s_1-u)^{n-N-1} by
    quadrature (recorded as a note and as a violation when off by > 1e-6).
    """
    if n < N + 1:
        raise ValueError("need n >= N + 1")
    report = report or CheckReport("taylor-binomial", f"grid of {len(grid)} points",
                                   rel_slack=rel_slack)
    U, S, T = _triples(grid)
    lhs = taylor_binomial_lhs(N, n, U, S, T)
    rhs = simplex_kernel(N + 1, n / (N + 1), U, S, T) / math.factorial(n - N - 1)
    _record_arrays(report, lhs, rhs, {"N": N, "n": n}, (U, S, T))

    interior = [i for i in range(len(U)) if U[i] < S[i] < T[i]]
    picks = interior[:: max(1, len(interior) // identity_points)][:identity_points]
    for i in picks:
        u, s, t = U[i], S[i], T[i]
        quad = simplex_quadrature(lambda *c: (c[0] - u) ** (n - N - 1), N + 1, s, t,
                                  nodes=16 if N >= 3 else 24, grading=1)
        quad /= math.factorial(n - N - 1)
        err = float(abs(quad - lhs[i]) / max(abs(lhs[i]), 1e-300))
        report.checked += 1
        if err > 1e-6:
            report.violations += 1
            report.witnesses.append({"identity": [float(u), float(s), float(t)],
                                     "N": N, "n": n, "rel_err": err})
        _raise_max_note(report, "integral identity by quadrature, max rel err", err)
    return report


def _raise_max_note(report: CheckReport, prefix: str, value: float) -> None:
    for i, note in enumerate(report.notes):
        if note.startswith(prefix):
            if value > float(note.rsplit(" ", 1)[1]):
                report.notes[i] = f"{prefix} {value:.2e}"
            return
    report.notes.append(f"{prefix} {value:.2e}")


def check_overlap_lemma(N: int, n: int, m: int, grid: Sequence[float] = DEFAULT_GRID,
                        rel_slack: float = 1e-12,
                        report: Optional[CheckReport] = None) -> CheckReport:
    if n < N + 1 or m < 0:
        raise ValueError("need n >= N + 1 and m >= 0")
    report = report or CheckReport("overlap-lemma", f"grid of {len(grid)} points",
                                   rel_slack=rel_slack)
    U, S, T = _triples(grid)
    ff = lambda a: math.factorial(a) / math.factorial(a - N - 1)
    lhs = ff(n) * simplex_kernel(N + 1, n / (N + 1), U, S, T) * (T - U) ** m
    rhs = ff(n + m) * simplex_kernel(N + 1, (n + m) / (N + 1), U, S, T)
    _record_arrays(report, lhs, rhs, {"N": N, "n": n, "m": m}, (U, S, T))
    return report


def check_decreasing_lemma(k: int, m: int, n: int, grid: Sequence[float] = DEFAULT_GRID,
                           rel_slack: float = 1e-12,
                           report: Optional[CheckReport] = None) -> CheckReport:
    if not (0 <= k <= m <= n and m - k >= 1):
        raise ValueError("need 0 <= k <= m <= n and m - k >= 1")
    report = report or CheckReport("decreasing-lemma", f"grid of {len(grid)} points",
                                   rel_slack=rel_slack)
    U, S, T = _triples(grid)
    lhs = simplex_kernel(m, n / m, U, S, T) / math.factorial(n - m)
    rhs = math.exp(m) / math.factorial(n - m + k) * simplex_kernel(m - k, n / (m - k), U, S, T)
    _record_arrays(report, lhs, rhs, {"k": k, "m": m, "n": n}, (U, S, T))
    return report


def check_adjacent_lemma(k: int, m: int, n: int, grid: Sequence[float] = DEFAULT_GRID,
                         rel_slack: float = 1e-12,
                         report: Optional[CheckReport] = None) -> CheckReport:
    """Kernel on [s,t] times (v-t)^k/k! against the split kernels; needs k < m."""
    if not (0 <= k <= m <= n and m - k >= 1):
        raise ValueError("need 0 <= k < m <= n")
    report = report or CheckReport("adjacent-lemma", f"grid of {len(grid)} points",
                                   rel_slack=rel_slack)
    U, S, T, V = _quads(grid)
    b = (n + k) / m
    lhs = simplex_kernel(m - k, n / (m - k), U, S, T) * (V - T) ** k / math.factorial(k)
    rhs = simplex_kernel(m - k, b, U, S, T) * simplex_kernel(k, b, U, T, V)
    _record_arrays(report, lhs, rhs, {"k": k, "m": m, "n": n}, (U, S, T, V))
    return report


def appendix_suite(n_max: int = 20, N_max: int = 3, grid: Sequence[float] = DEFAULT_GRID,
                   rel_slack: float = 1e-12) -> list[CheckReport]:
    """All four binomial-type lemmas over their full parameter ranges."""
    desc = f"n<={n_max}, N<={N_max}, grid {len(grid)} points"
    taylor = CheckReport("taylor-binomial", desc, rel_slack=rel_slack)
    overlap = CheckReport("overlap-lemma", desc, rel_slack=rel_slack)
    for N in range(N_max + 1):
        for n in range(N + 1, n_max + 1):
            check_taylor_binomial(N, n, grid, rel_slack, report=taylor)
            for m in range(0, n_max - n + 1):
                check_overlap_lemma(N, n, m, grid, rel_slack, report=overlap)
    decreasing = CheckReport("decreasing-lemma", f"n<={n_max}, grid {len(grid)} points",
                             rel_slack=rel_slack)
    adjacent = CheckReport("adjacent-lemma", f"n<={n_max}, grid {len(grid)} points",
                           rel_slack=rel_slack)
    for n in range(1, n_max + 1):
        for m in range(1, n + 1):
            for k in range(0, m):
                check_decreasing_lemma(k, m, n, grid, rel_slack, report=decreasing)
                check_adjacent_lemma(k, m, n, grid, rel_slack, report=adjacent)
    return [taylor, overlap, decreasing, adjacent]


def kernel_quadrature_report(m_max: int = 3, n_max: int = 8,
                             grid: Sequence[float] = (0.0, 0.5, 1.0),
                             rtol: float = 1e-6) -> CheckReport:
    """Closed-form kernel against direct simplex quadrature."""
    report = CheckReport("kernel-vs-quadrature", f"m<={m_max}, n<={n_max}, rtol={rtol}",
                         rel_slack=0.0)
    for m in range(1, m_max + 1):
        for n in range(m, n_max + 1):
            for u, s, t in product(grid, repeat=3):
                if not u <= s <= t:
                    continue
                closed = kernel_value(EstimateKernel(m, n, u), s, t)
                quad = kernel_by_quadrature(m, n / m, u, s, t, nodes=40)
                err = abs(quad - closed)
                report.record(err, rtol * abs(closed) if closed else rtol,
                              {"m": m, "n": n, "u": u, "s": s, "t": t})
    return report


# -------------------------------------------------------------- concavity


def check_concavity(tau: RootedTree, sigma: Optional[RootedTree], gamma: float,
                    beta: Optional[float] = None, rel_slack: float = 1e-12,
                    report: Optional[CheckReport] = None) -> CheckReport:
    """Trunk-indexed cut sum with γ inside against γ outside the sum.

    ``sigma=None`` stands for the empty trunk.  β defaults to c_{|σ|}, which
    can be far beyond float range, so both sides are compared as logs.
    """
    size = 0 if sigma is None else sigma.size
    lc = log_c(size, gamma)
    if beta is None:
        log_beta = lc
    else:
        log_beta = math.log(beta)
        if log_beta < lc - 1e-12:
            raise ValueError(f"beta must be at least c_{size}")
    if sigma is not None and sigma == tau:
        raise ValueError("σ must be a proper trunk of τ")
    report = report or CheckReport("concavity", f"tau={tau}", rel_slack=rel_slack)
    if sigma is not None and sigma not in trunk_groups(tau):
        report.notes.append(f"{sigma} is not a trunk of {tau}: vacuous")
        report.checked += 1
        return report
    lhs = log_cut_sum_over_trunk(tau, sigma, gamma, log_beta)
    rhs = lc - log_beta + gamma * log_abs(factorial_cut_sum(tau, sigma))
    report.record_log(lhs, rhs, {"tau": str(tau), "sigma": str(sigma) if sigma else "1",
                                 "gamma": gamma})
    return report


def concavity_suite(max_size: int = 8, gammas: Iterable[float] = (0.3, 0.5, 0.9),
                    rel_slack: float = 1e-12) -> CheckReport:
    gammas = tuple(gammas)
    report = CheckReport("concavity", f"|tau|<={max_size}, gamma in {gammas}, beta=c_|sigma|",
                         rel_slack=rel_slack)
    for tau in enumerate_trees_upto(max_size):
        trunks = [k for k in trunk_groups(tau) if k != tau]
        for gamma in gammas:
            for sigma in trunks:
                check_concavity(tau, sigma, gamma, None, rel_slack, report)
    return report


def counting_bound_suite(max_size: int = 7) -> CheckReport:
    """|P'_{τ,σ}| ≤ exp(|σ|² k_{τ,σ}) and k ≥ 1 for proper non-empty trunks."""
    report = CheckReport("counting-bound", f"|tau|<={max_size}", rel_slack=0.0)
    for tau in enumerate_trees_upto(max_size):
        for sigma in trunk_groups(tau):
            if sigma is None or sigma == tau:
                continue
            pc = permutation_classes(tau, sigma)
            w = {"tau": str(tau), "sigma": str(sigma), "p_prime": pc.p_prime, "k": pc.k}
            if pc.k is None or pc.k < 1:
                report.checked += 1
                report.violations += 1
                report.witnesses.append(w)
                continue
            report.record_log(math.log(pc.p_prime), sigma.size ** 2 * pc.k, w)
    return report


# ---------------------------------------------------------- counter-example


def bushy_cuts(n: int):
    """Aggregated coproduct of the bushy tree with n leaves.

    Cutting k of the leaves leaves a bushy trunk with n - k leaves and k
    single vertices, C(n, k) ways; the full cut adds τ ⊗ 1.
    """
    tau = bushy(n)
    dot = single_vertex()
    cuts = [(Forest((dot,) * k), Forest((bushy(n - k),)), math.comb(n, k))
            for k in range(n + 1)]
    cuts.append((Forest((tau,)), Forest(()), 1))
    return cuts


def log_counterexample_sum(n: int, gamma: float, beta: float, a: float, b: float):
    """(log exact sum, log lower bound) for the bushy tree with n leaves."""
    if n < 1 or a <= 0 or b <= 0 or beta <= 0 or not 0 <= gamma < 1:
        raise ValueError("need n >= 1, a, b, beta > 0 and 0 <= gamma < 1")
    log_tau_fact = math.log(bushy(n).factorial)
    logs = [gamma * (log_tau_fact - math.log(p.factorial)
                     - math.log(tr.factorial)) + math.log(m)
            - (p.components + tr.components) * math.log(beta)
            + gamma * p.size * math.log(a) + gamma * tr.size * math.log(b)
            for p, tr, m in bushy_cuts(n)]
    top = max(logs)
    log_sum = top + math.log(math.fsum(math.exp(x - top) for x in logs))
    shift = -gamma * (n + 1) * math.log(a + b)
    log_lower = (shift + gamma * math.log(b) - math.log(beta)
                 + n * math.log(a ** gamma / beta + b ** gamma))
    return log_sum + shift, log_lower


def counterexample_sum(n: int, gamma: float, beta: float, a: float, b: float):
    ls, ll = log_counterexample_sum(n, gamma, beta, a, b)
    return math.exp(ls), math.exp(ll)


def counterexample_ratio(gamma: float, beta: float, a: float, b: float) -> float:
    """Limit ratio of successive lower bounds, (a^γ/β + b^γ) / (a+b)^γ."""
    return (a ** gamma / beta + b ** gamma) / (a + b) ** gamma


def counterexample_table(n_max: int, gamma: float, beta: float, a: float, b: float):
    return [(n, *counterexample_sum(n, gamma, beta, a, b)) for n in range(1, n_max + 1)]


# ------------------------------------------------------------- decay bound


def norm_scale(holder_norms: dict, N: int) -> float:
    """max_{1≤|σ|≤N} ‖X‖_{γ,σ}^{1/|σ|} from a tree → norm map."""
    degrees = {tr.size for tr in holder_norms}
    missing = [d for d in range(1, N + 1) if d not in degrees]
    if missing:
        raise ValueError(f"missing Hölder norms for degrees {missing}")
    return max(v ** (1 / tr.size) for tr, v in holder_norms.items() if tr.size <= N)


def log_decay_bound(tau: RootedTree, gamma: float, s, t, holder_norms: dict) -> float:
    c = Constants(gamma)
    lcb = c.log_c_bar(norm_scale(holder_norms, c.N))
    gap = float(t - s)
    if gap <= 0:
        return -math.inf
    return tau.size * lcb + gamma * tau.size * math.log(gap) - gamma * math.log(tau.factorial)


def decay_bound(tau: RootedTree, gamma: float, s, t, holder_norms: dict) -> float:
    """c̄_N^{|τ|} (t-s)^{γ|τ|} / τ!^γ (may overflow to inf)."""
    x = log_decay_bound(tau, gamma, s, t, holder_norms)
    return math.exp(x) if x < 700 else math.inf


def verify_decay(rough_path, gamma: float, M: int, times: Sequence, holder_norms: Optional[dict] = None,
                 inflate: float = 2.0, rel_slack: float = 1e-12,
                 label: str = "decay-bound") -> CheckReport:
    """|⟨X_{s,t},τ⟩| against the decay bound for all trees ≤ M and grid pairs.

    Missing Hölder norms are estimated on ``times``.  Because such estimates
    under-shoot the true suprema, the verdict with norms inflated by
    ``inflate`` is recorded in the notes as well.
    """
    from .lift import tree_holder_norms

    N = Constants(gamma).N
    if holder_norms is None:
        holder_norms = tree_holder_norms(rough_path, gamma, N, times)
    alphabet = getattr(rough_path, "alphabet", None)
    trees = enumerate_trees_upto(M, alphabet)
    report = CheckReport(label, f"M={M}, gamma={gamma}, {len(times)} times",
                         rel_slack=rel_slack)
    inflated = {tr: v * inflate for tr, v in holder_norms.items()}
    loose_fail = 0
    for i, s in enumerate(times):
        for t in times[i + 1:]:
            X = rough_path.character(s, t)
            for tr in trees:
                lv = log_abs(X(tr))
                ok = report.record_log(lv, log_decay_bound(tr, gamma, s, t, holder_norms),
                                       {"tree": str(tr), "s": str(s), "t": str(t)})
                if not ok and lv > log_decay_bound(tr, gamma, s, t, inflated):
                    loose_fail += 1
    report.notes.append(f"violations with norms inflated x{inflate}: {loose_fail}")
    return report


def branched_vs_geometric(gamma: float = 0.75) -> dict:
    """Threshold beyond which the branched bound on ∫ x^n dy is the sharper one.

    Compares c̄_1^{n+1}/(n+1)^γ with n!(1+ζ(2γ))^{n-1}‖x‖^{n+1}/(n+1)!^γ.
    The path norm enters both as the same factor ‖x‖^{n+1} and cancels,
    leaving f(n) = (1-γ) log n! + (n-1) log(1+ζ(2γ)) - (n+1) log c̄_1^base,
    which is convex in n; n₀ is where it turns non-negative for good. The
    search runs on f(n)/n in log n so that n₀ beyond float range still has a
    finite log n₀; ``f_at_probes`` holds f(n)/n at multiples of n₀.
    """
    c = Constants(gamma)
    if c.N != 1:
        raise ValueError("the comparison concerns the N = 1 regime (1/2 < γ <= 1)")
    if 2 * gamma <= 1:
        raise ValueError("ζ(2γ) needs γ > 1/2")
    lz = math.log(1 + zeta(2 * gamma))
    base = c.log_c_bar_base

    def f_over_n(x: float) -> float:
        # f(e^x)/e^x, which has the sign of f and stays finite for huge n
        inv = math.exp(-x)
        if x < 30:
            lf = math.lgamma(1 / inv + 1) * inv
        else:
            lf = x - 1 + (0.5 * math.log(2 * math.pi) + 0.5 * x) * inv
        return (1 - gamma) * lf + (1 - inv) * lz - (1 + inv) * base

    if gamma == 1:
        return {"gamma": gamma, "n0": None, "exists": False,
                "reason": "(1-γ) log n! vanishes at γ = 1"}
    lo, hi = 0.0, 1.0
    while f_over_n(hi) < 0:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if f_over_n(mid) < 0:
            lo = mid
        else:
            hi = mid
    n0 = float(math.ceil(math.exp(hi))) if hi < 700 else math.inf
    probes = [hi + math.log(x) for x in (1.0, 1.5, 2.0, 10.0, 1e3)]
    return {"gamma": gamma, "n0": n0, "log_n0": hi, "exists": True,
            "f_at_probes": [f_over_n(p) for p in probes], "log_c_bar_base": base}


# ------------------------------------------------------- main-lemma check


def check_main_lemma_remainder(rough_path, gamma: float, n: int, triples: Iterable,
                               holder_norm: Optional[float] = None,
                               rel_slack: float = 1e-10,
                               alphabet: Optional[int] = None) -> CheckReport:
    """Tree norm of Σ_{k>N} Y^{n-k}_{u,s} ⋆ Y^k_{s,t} against the kernel bound.

    Y is X scaled by λ^{|τ|} with λ = 1/((N! ‖X‖)^γ Ĉ_N) and β = Ĉ_N, the
    β threshold of the remainder estimate.  The unscaled sum is evaluated
    with X's own arithmetic (exact for rational data) and the scaling is
    applied in log space.
    """
    c = Constants(gamma)
    N = c.N
    if holder_norm is None:
        from .lift import tree_holder_norms
        norms = tree_holder_norms(rough_path, gamma, N)
        holder_norm = max(v ** (1 / (gamma * tr.size)) for tr, v in norms.items())
    log_beta = c.log_beta_threshold
    log_lambda = -(gamma * (math.lgamma(N + 1) + math.log(holder_norm)) + log_beta)
    report = CheckReport(f"main-lemma-remainder-n{n}", f"N={N}, n={n}, gamma={gamma}",
                         rel_slack=rel_slack)
    trees = enumerate_trees(n, alphabet)
    for u, s, t in triples:
        A, B = rough_path.character(u, s), rough_path.character(s, t)
        lhs = -math.inf
        for tr in trees:
            v = 0
            for k in range(N + 1, n + 1):
                v = v + StarProduct(Graded(A, n - k), Graded(B, k))(tr)
            lv = log_abs(v)
            if lv == -math.inf:
                continue
            lhs = max(lhs, n * log_lambda + lv + log_beta
                      + gamma * (math.log(tr.factorial) - math.lgamma(n + 1)))
        if n <= N:
            rhs = -math.inf
        else:
            ker = simplex_kernel(N + 1, n / (N + 1), float(u), float(s), float(t))
            rhs = gamma * (math.log(ker) - math.lgamma(n - N)) if ker > 0 else -math.inf
        report.record_log(lhs, rhs, {"u": str(u), "s": str(s), "t": str(t), "n": n})
    return report
