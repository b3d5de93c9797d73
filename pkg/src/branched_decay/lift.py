"""Lifting a path to a branched rough path by iterated integration.

For a tree τ = [τ_1 … τ_n]_i the recursion is

    ⟨X_{s,t}, τ⟩ = ∫_s^t Π_j ⟨X_{s,u}, τ_j⟩ dx^i_u,

which, with the empty product equal to one, also gives the increments on
single vertices.  Polynomial paths are lifted exactly with rational
bivariate polynomials in (s, t); sampled paths use left-point
Riemann–Stieltjes sums on dyadic sub-grids followed by Romberg
extrapolation across levels.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .character import INF, TabulatedCharacter, IdentityCharacter
from .trees import RootedTree, enumerate_trees_upto


class NonConvergenceError(RuntimeError):
    """Refinement budget exhausted before the Cauchy criterion was met."""

    def __init__(self, message: str, delta: float):
        super().__init__(message)
        self.delta = delta


# ------------------------------------------------------------ polynomials


class BivariatePoly:
    """Polynomial Σ c_ij s^i t^j with rational coefficients."""

    __slots__ = ("coef",)

    def __init__(self, coef: Optional[dict] = None):
        self.coef = {k: Fraction(v) for k, v in (coef or {}).items() if v != 0}

    @classmethod
    def in_t(cls, coeffs: Sequence) -> "BivariatePoly":
        return cls({(0, j): c for j, c in enumerate(coeffs)})

    @classmethod
    def one(cls) -> "BivariatePoly":
        return cls({(0, 0): 1})

    def __mul__(self, other: "BivariatePoly") -> "BivariatePoly":
        out: dict = defaultdict(Fraction)
        for (i1, j1), a in self.coef.items():
            for (i2, j2), b in other.coef.items():
                out[(i1 + i2, j1 + j2)] += a * b
        return BivariatePoly(out)

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out: dict = defaultdict(Fraction, self.coef)
        for k, v in other.coef.items():
            out[k] += v
        return BivariatePoly(out)

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.coef == other.coef

    def integrate_from_s(self) -> "BivariatePoly":
        """Q(s, t) = ∫_s^t P(s, u) du."""
        out: dict = defaultdict(Fraction)
        for (i, j), c in self.coef.items():
            c = c / (j + 1)
            out[(i, j + 1)] += c
            out[(i + j + 1, 0)] -= c
        return BivariatePoly(out)

    def __call__(self, s, t):
        if isinstance(s, (int, Fraction)) and isinstance(t, (int, Fraction)):
            s, t = Fraction(s), Fraction(t)
            return sum((c * s ** i * t ** j for (i, j), c in self.coef.items()), Fraction(0))
        return math.fsum(float(c) * s ** i * t ** j for (i, j), c in self.coef.items())

    def __repr__(self):
        return f"BivariatePoly({self.coef})"


def _poly_derivative(coeffs: Sequence[Fraction]) -> list[Fraction]:
    return [j * c for j, c in enumerate(coeffs)][1:]


def _poly_eval(coeffs: Sequence, t):
    acc = 0 * t
    for c in reversed(coeffs):
        acc = acc * t + (float(c) if isinstance(t, (float, np.ndarray)) else c)
    return acc


# ------------------------------------------------------------------ paths


@dataclass
class PathData:
    """A driving path on [0, 1]: either exact polynomial or sampled.

    ``poly[i]`` lists the rational coefficients of component ``i`` in
    increasing powers of t.  Sampled paths carry ``times`` of shape (m+1,)
    and ``values`` of shape (m+1, d).
    """

    holder_gamma: float = 1.0
    poly: Optional[tuple] = None
    times: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        if (self.poly is None) == (self.times is None):
            raise ValueError("give either polynomial coefficients or samples")
        if self.poly is not None:
            self.poly = tuple(tuple(Fraction(c) for c in comp) for comp in self.poly)
        else:
            self.times = np.asarray(self.times, dtype=float)
            vals = np.asarray(self.values, dtype=float)
            if vals.ndim == 1:
                vals = vals[:, None]
            self.values = vals
            if len(self.times) < 2 or np.any(np.diff(self.times) <= 0):
                raise ValueError("sample times must be strictly increasing")
            if len(self.times) != len(vals):
                raise ValueError("times and values differ in length")

    @property
    def is_polynomial(self) -> bool:
        return self.poly is not None

    @property
    def dim(self) -> int:
        return len(self.poly) if self.poly is not None else self.values.shape[1]

    @classmethod
    def polynomial(cls, coeffs, holder_gamma: float = 1.0, name: str = "") -> "PathData":
        return cls(holder_gamma=holder_gamma, poly=coeffs, name=name)

    @classmethod
    def from_samples(cls, times, values, holder_gamma: float, name: str = "") -> "PathData":
        return cls(holder_gamma=holder_gamma, times=times, values=values, name=name)

    @classmethod
    def from_csv(cls, path: str, holder_gamma: float) -> "PathData":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], [r for r in rows[1:] if r]
        if not header or header[0].strip() != "t":
            raise ValueError("CSV header must start with 't'")
        data = np.array([[float(x) for x in r] for r in body])
        return cls.from_samples(data[:, 0], data[:, 1:], holder_gamma, name=path)

    def evaluate(self, t) -> np.ndarray:
        if self.poly is None:
            raise ValueError("evaluate() needs a polynomial path")
        return np.stack([_poly_eval(c, np.asarray(t, dtype=float)) for c in self.poly], axis=-1)

    def sampled(self, n_intervals: int) -> "PathData":
        """Samples of a polynomial path on a uniform grid of [0, 1]."""
        times = np.linspace(0.0, 1.0, n_intervals + 1)
        return PathData.from_samples(times, self.evaluate(times), self.holder_gamma,
                                     name=self.name)


def weierstrass_path(gamma: float, levels: int = 12, dim: int = 2,
                     base: int = 2) -> PathData:
    """Deterministic γ-Hölder path Σ_k base^(-kγ) cos/sin(base^k π t + phase).

    Sampled on a uniform grid of 2**levels intervals with as many terms as
    the grid resolves.
    """
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    times = np.linspace(0.0, 1.0, 2 ** levels + 1)
    n_terms = levels
    cols = []
    for c in range(dim):
        phase = 0.7 * c
        x = sum(base ** (-k * gamma) * np.cos(base ** k * np.pi * times + phase)
                for k in range(n_terms))
        cols.append(x - x[0])
    return PathData.from_samples(times, np.stack(cols, axis=1), gamma,
                                 name=f"weierstrass(gamma={gamma})")


# ------------------------------------------------------------- exact lift


def _trees_for(dim: int, M: int, labelled: bool) -> list[RootedTree]:
    if not labelled:
        if dim != 1:
            raise ValueError("unlabelled trees need a one-dimensional path")
        return enumerate_trees_upto(M, None)
    return enumerate_trees_upto(M, dim)


def _component(t: RootedTree) -> int:
    return 0 if t.label is None else t.label


@dataclass
class PolynomialLift:
    """Exact lift: each tree maps to a bivariate polynomial in (s, t)."""

    path: PathData
    max_degree: int
    labelled: bool
    polys: dict = field(repr=False)

    @property
    def alphabet(self):
        return self.path.dim if self.labelled else None

    def value(self, tree: RootedTree, s, t):
        if tree.size > self.max_degree:
            raise ValueError(f"tree {tree} above lift degree {self.max_degree}")
        return self.polys[tree](s, t)

    def character(self, s, t) -> TabulatedCharacter:
        return TabulatedCharacter({tr: p(s, t) for tr, p in self.polys.items()},
                                  self.max_degree)


def lift_polynomial(path: PathData, M: int, labelled: Optional[bool] = None) -> PolynomialLift:
    """Exact lift of a polynomial path to all trees with at most M vertices."""
    if not path.is_polynomial:
        raise ValueError("lift_polynomial needs a polynomial path")
    if labelled is None:
        labelled = path.dim > 1
    derivs = [BivariatePoly.in_t(_poly_derivative(c)) for c in path.poly]
    polys: dict = {}
    for tree in _trees_for(path.dim, M, labelled):
        integrand = derivs[_component(tree)]
        for child in tree.children:
            integrand = integrand * polys[child]
        polys[tree] = integrand.integrate_from_s()
    return PolynomialLift(path, M, labelled, polys)


class IdentityPath:
    """The unlabelled lift of x_t = t in closed form."""

    alphabet = None

    def __init__(self, max_degree: float = INF):
        self.max_degree = max_degree

    def character(self, s, t) -> IdentityCharacter:
        return IdentityCharacter(s, t, self.max_degree)

    def value(self, tree: RootedTree, s, t):
        return self.character(s, t).tree_value(tree)


# ----------------------------------------------------------- numeric lift


def romberg(columns: Sequence, order_start: int = 1):
    """Richardson-extrapolate values from successively halved step sizes.

    ``columns[j]`` is the approximation at step h / 2**j, all aligned on the
    same points; error terms are assumed to be h^q for q = order_start,
    order_start + 1, ...  Returns the extrapolated diagonal entry.
    """
    row = list(columns)
    q = order_start
    while len(row) > 1:
        f = 2 ** q - 1
        row = [b + (b - a) / f for a, b in zip(row, row[1:])]
        q += 1
    return row[0]


def _riemann_from(dx: np.ndarray, trees: list, base: int, stride: int) -> dict:
    """Left-point sums at one dyadic level, base index in fine-grid units.

    Returns tree → array of values at fine indices base, base+stride, ...
    """
    inc = dx[base:]  # fine increments from base onward, shape (n, d)
    n_coarse = inc.shape[0] // stride
    inc = inc[: n_coarse * stride].reshape(n_coarse, stride, -1).sum(axis=1)
    out = {}
    for tree in trees:
        integrand = inc[:, _component(tree)].copy()
        for child in tree.children:
            integrand *= out[child][:-1]
        vals = np.empty(n_coarse + 1)
        vals[0] = 0.0
        np.cumsum(integrand, out=vals[1:])
        out[tree] = vals
    return out


@dataclass
class NumericLift:
    """Numeric lift on a dyadic grid of times; values[tree][i, j] = ⟨X_{t_i,t_j}, τ⟩."""

    times: np.ndarray
    max_degree: int
    labelled: bool
    dim: int
    values: dict = field(repr=False)
    deltas: list = field(default_factory=list)
    converged_level: Optional[int] = None

    @property
    def alphabet(self):
        return self.dim if self.labelled else None

    def index(self, time: float) -> int:
        i = int(np.searchsorted(self.times, time - 1e-12))
        if i >= len(self.times) or abs(self.times[i] - time) > 1e-9:
            raise ValueError(f"time {time} is not on the lift grid")
        return i

    def value(self, tree: RootedTree, s: float, t: float) -> float:
        return float(self.values[tree][self.index(s), self.index(t)])

    def character(self, s: float, t: float) -> TabulatedCharacter:
        i, j = self.index(s), self.index(t)
        return TabulatedCharacter({tr: float(v[i, j]) for tr, v in self.values.items()},
                                  self.max_degree)


def lift_young(path: PathData, M: int, tol: float = 1e-8, depth: int = 3,
               labelled: Optional[bool] = None, strict: bool = True) -> NumericLift:
    """Lift a sampled path with left-point sums plus Romberg extrapolation.

    The samples must sit on 2**L + 1 points.  For each level r the raw sums
    use every 2**(L-r)-th sample; ``depth`` successive levels are combined
    by Romberg extrapolation.  Convergence is judged by the Cauchy delta
    between extrapolations ending at levels L-1 and L (measured from the
    initial time).  Values for every base point are computed directly from
    that base point and returned on the grid of level L - depth.
    """
    if path.is_polynomial:
        raise ValueError("lift_young needs sampled data; use PathData.sampled")
    if path.holder_gamma <= 0.5:
        raise ValueError("Young lifting requires a Hölder exponent above 1/2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = len(path.times) - 1
    L = int(round(math.log2(m)))
    if 2 ** L != m:
        raise ValueError("the number of sample intervals must be a power of two")
    if depth < 0 or depth + 1 > L:
        raise ValueError(f"depth {depth} too large for {m} intervals")
    if labelled is None:
        labelled = path.dim > 1
    trees = _trees_for(path.dim, M, labelled)
    dx = np.diff(path.values, axis=0)

    def extrapolated(base: int, top: int) -> dict:
        cols = [_riemann_from(dx, trees, base, 2 ** (L - r)) for r in range(top - depth, top + 1)]
        return {tr: romberg([c[tr][::1 << i] for i, c in enumerate(cols)]) for tr in trees}

    deltas = []
    prev = None
    converged = None
    for top in range(depth + 1, L + 1):
        cur = extrapolated(0, top)
        if prev is not None:
            delta = max(float(np.max(np.abs(cur[tr][::2] - prev[tr]))) for tr in trees)
            deltas.append((top, delta))
            if delta < tol and converged is None:
                converged = top
        prev = cur
    final_delta = deltas[-1][1] if deltas else math.inf
    if converged is None or final_delta >= tol:
        converged = None
        if strict:
            raise NonConvergenceError(
                f"Cauchy delta {final_delta:.3e} above tol {tol:.1e} at the finest level",
                final_delta)

    stride = 2 ** depth
    grid = path.times[::stride]
    n = len(grid)
    values = {tr: np.zeros((n, n)) for tr in trees}
    for bi in range(n - 1):
        row = extrapolated(bi * stride, L)
        for tr in trees:
            values[tr][bi, bi:] = row[tr]
    return NumericLift(grid, M, labelled, path.dim, values, deltas, converged)


# ----------------------------------------------------------- Hölder norms


def holder_norm_estimate(path: PathData, gamma: float, component: Optional[int] = None,
                         n_points: int = 257) -> float:
    """sup over sample pairs of |x_t - x_s| / |t - s|^γ (a lower estimate).

    Polynomial paths are sampled on ``n_points`` uniform points.  With
    ``component=None`` the Euclidean norm of the increment is used.
    """
    if path.is_polynomial:
        times = np.linspace(0.0, 1.0, n_points)
        vals = path.evaluate(times)
    else:
        times, vals = path.times, path.values
    if component is not None:
        vals = vals[:, [component]]
    best = 0.0
    for i in range(len(times) - 1):
        inc = np.linalg.norm(vals[i + 1:] - vals[i], axis=1)
        best = max(best, float(np.max(inc / (times[i + 1:] - times[i]) ** gamma)))
    return best


def tree_holder_norms(rough_path, gamma: float, max_degree: int,
                      times: Optional[Sequence[float]] = None) -> dict:
    """Estimate ‖X‖_{γ,τ} = sup |⟨X_{s,t},τ⟩| / |t-s|^{γ|τ|} on grid pairs."""
    if isinstance(rough_path, NumericLift):
        n = len(rough_path.times)
        gaps = np.abs(rough_path.times[None, :] - rough_path.times[:, None])
        upper = np.triu(np.ones((n, n), dtype=bool), 1)
        out = {}
        for tr, v in rough_path.values.items():
            if tr.size <= max_degree:
                out[tr] = float(np.max(np.abs(v[upper]) / gaps[upper] ** (gamma * tr.size)))
        return out
    if times is None:
        times = [Fraction(i, 16) for i in range(17)]
    trees = enumerate_trees_upto(max_degree, rough_path.alphabet)
    out = {tr: 0.0 for tr in trees}
    for i, s in enumerate(times):
        for t in times[i + 1:]:
            X = rough_path.character(s, t)
            gap = float(t - s)
            for tr in trees:
                out[tr] = max(out[tr], abs(float(X(tr))) / gap ** (gamma * tr.size))
    return out
