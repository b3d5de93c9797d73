"""Extending a truncated branched rough path to higher degrees.

Degree n > N is obtained as the limit of partition sums

    X^{P,n}_{s,t} = Σ_i Σ_{k=1}^N X^{n-k}_{s,t_i} ⋆ X^k_{t_i,t_{i+1}}

over dyadic partitions of [s, t].  At each refinement level the lower
degrees on the sub-intervals [s, t_i] are themselves the discrete values of
that level, so one level is a single forward sweep over the grid, degree by
degree.  Levels are combined by Romberg extrapolation and stopped by a
Cauchy criterion on the extrapolated values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Optional

import numpy as np

from .character import (Functional, Graded, LinearCombination, StarProduct,
                        TabulatedCharacter, TruncationError)
from .hopf import cut_pairs
from .lift import NonConvergenceError, romberg
from .trees import Forest, as_forest, enumerate_trees, enumerate_trees_upto


@dataclass(frozen=True)
class Partition:
    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a partition needs at least two points")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("partition points must be strictly increasing")

    @classmethod
    def dyadic(cls, s, t, level: int) -> "Partition":
        m = 2 ** level
        if isinstance(s, (int, Fraction)) and isinstance(t, (int, Fraction)):
            s, t = Fraction(s), Fraction(t)
            return cls(tuple(s + (t - s) * Fraction(i, m) for i in range(m + 1)))
        return cls(tuple(s + (t - s) * i / m for i in range(m + 1)))

    @property
    def s(self):
        return self.points[0]

    @property
    def t(self):
        return self.points[-1]

    @property
    def mesh(self):
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    def __len__(self):
        return len(self.points)

    def without(self, j: int) -> "Partition":
        if not 0 < j < len(self.points) - 1:
            raise ValueError("only interior points can be dropped")
        return Partition(self.points[:j] + self.points[j + 1:])


class TruncatedPath:
    """A rough path seen only up to degree N."""

    def __init__(self, source, N: int, gamma: Optional[float] = None):
        self.source = source
        self.N = N
        self.gamma = gamma if gamma is not None else 1.0 / N
        self.alphabet = getattr(source, "alphabet", None)
        self._trees = enumerate_trees_upto(N, self.alphabet)

    @classmethod
    def identity(cls, N: int) -> "TruncatedPath":
        from .lift import IdentityPath
        return cls(IdentityPath(), N, gamma=1.0 / N if N > 1 else 1.0)

    @property
    def max_degree(self) -> int:
        return self.N

    def character(self, s, t) -> TabulatedCharacter:
        value = getattr(self.source, "value", None)
        if value is None:
            X = self.source.character(s, t)
            return TabulatedCharacter({tr: X(tr) for tr in self._trees}, self.N)
        return TabulatedCharacter({tr: value(tr, s, t) for tr in self._trees}, self.N)


# ----------------------------------------------------------- partition sums


def _degree_of(X) -> int:
    N = getattr(X, "N", None)
    if N is None:
        raise ValueError("pass N explicitly for paths without an N attribute")
    return N


def partition_sum(X, n: int, P: Partition, f, N: Optional[int] = None):
    """⟨X^{P,n}_{s,t}, f⟩ for s, t the end points of P."""
    N = _degree_of(X) if N is None else N
    if n <= N:
        raise ValueError(f"partition sums start above the truncation degree (n={n}, N={N})")
    f = as_forest(f)
    s = P.s
    total = 0
    for a, b in zip(P.points, P.points[1:]):
        left = X.character(s, a)
        right = X.character(a, b)
        for k in range(1, N + 1):
            try:
                total = total + StarProduct(Graded(left, n - k), Graded(right, k))(f)
            except TruncationError as exc:
                raise ValueError(f"missing lower-degree data: {exc}") from exc
    return total


class PartitionSum(Functional):
    """The functional X^{P,n}_{s,t} (zero off degree n)."""

    def __init__(self, X, n: int, P: Partition, N: int):
        self.X, self.n, self.P, self.N = X, n, P, N

    def _value(self, f: Forest):
        if f.size != self.n:
            return 0
        return partition_sum(self.X, self.n, self.P, f, self.N)


def drop_point_residual(X, P: Partition, j: int, n: int, u, f, N: Optional[int] = None):
    """Two evaluations of the effect of dropping t_j from P.

    Returns (direct, closed_form): the direct side is
    Σ_{k>N} X^{n-k}_{u,s} ⋆ (X^{P,k}_{s,t} - X^{P∖t_j,k}_{s,t}), the closed
    form is Σ X^{n-k2-k3}_{u,t_{j-1}} ⋆ X^{k2}_{t_{j-1},t_j} ⋆ X^{k3}_{t_j,t_{j+1}}
    over 1 ≤ k3 ≤ N, k2 + k3 ≥ N + 1.  Both need X up to degree n.
    """
    N = _degree_of(X) if N is None else N
    if not 0 < j < len(P) - 1:
        raise ValueError("j must index an interior partition point")
    if u > P.s:
        raise ValueError("u must not exceed the partition start")
    f = as_forest(f)
    s = P.s
    dropped = P.without(j)
    X_us = X.character(u, s)
    direct = 0
    for k in range(N + 1, n + 1):
        diff = LinearCombination([(1, PartitionSum(X, k, P, N)), (-1, PartitionSum(X, k, dropped, N))])
        direct = direct + StarProduct(Graded(X_us, n - k), diff)(f)

    a, b, c = P.points[j - 1], P.points[j], P.points[j + 1]
    A, B, C = X.character(u, a), X.character(a, b), X.character(b, c)
    closed = 0
    for k3 in range(1, N + 1):
        for k2 in range(max(0, N + 1 - k3), n - k3 + 1):
            inner = StarProduct(Graded(A, n - k2 - k3), Graded(B, k2))
            closed = closed + StarProduct(inner, Graded(C, k3))(f)
    return direct, closed


# --------------------------------------------------------------- extension


@dataclass
class ExtensionResult:
    s: object
    t: object
    N: int
    M: int
    values: dict
    levels: list = field(default_factory=list)
    converged_level: dict = field(default_factory=dict)
    deltas: list = field(default_factory=list)
    raw: dict = field(default_factory=dict, repr=False)

    def character(self) -> TabulatedCharacter:
        return TabulatedCharacter(self.values, self.M)

    def to_json(self) -> str:
        rows = []
        for tr in sorted(self.values):
            if tr.size <= self.N:
                continue
            v = self.values[tr]
            rows.append({"forest": tr.notation(), "s": str(self.s), "t": str(self.t),
                         "degree": tr.size, "level": self.levels[-1],
                         "value": str(v) if isinstance(v, Fraction) else float(v)})
        return json.dumps({"schema": 1, "N": self.N, "M": self.M, "rows": rows,
                           "deltas": [[lvl, {str(k): float(d) for k, d in ds.items()}]
                                      for lvl, ds in self.deltas]},
                          indent=2, sort_keys=True)


def _level_sweep(X: TruncatedPath, M: int, s, t, level: int, exact: bool, trees_by_degree):
    """Discrete values of all trees up to M at the end point t, one level."""
    m = 2 ** level
    if exact:
        grid = [s + (t - s) * Fraction(i, m) for i in range(m + 1)]
    else:
        grid = list(s + (t - s) * np.arange(m + 1) / m)
    low = [tr for d in range(1, X.N + 1) for tr in trees_by_degree[d]]
    bases = [X.character(s, a) for a in grid]
    incs = [X.character(a, b) for a, b in zip(grid, grid[1:])]

    def column(chars, tr):
        vals = [ch.tree_values.get(tr, 0) for ch in chars]
        return vals if exact else np.asarray(vals, dtype=float)

    Z = {tr: column(bases, tr) for tr in low}
    I = {tr: column(incs, tr) for tr in low}
    for d in range(X.N + 1, M + 1):
        for tr in trees_by_degree[d]:
            step = [0] * m if exact else np.zeros(m)
            for (p, trunk), mult in cut_pairs(tr):
                if not 1 <= trunk.size <= X.N:
                    continue
                inc = I[trunk.trees[0]]
                factors = [Z[q] for q in p.trees]
                if exact:
                    for i in range(m):
                        v = inc[i] * mult
                        for fz in factors:
                            v *= fz[i]
                        step[i] += v
                else:
                    v = inc * mult
                    for fz in factors:
                        v = v * fz[:-1]
                    step = step + v
            if exact:
                Z[tr] = [0, *accumulate(step)]
            else:
                col = np.empty(m + 1)
                col[0] = 0.0
                np.cumsum(step, out=col[1:])
                Z[tr] = col
    return {tr: Z[tr][-1] for d in range(X.N + 1, M + 1) for tr in trees_by_degree[d]}


def extend(X: TruncatedPath, M: int, s, t, tol: float = 1e-10, max_level: int = 14,
           min_level: int = 1, depth: Optional[int] = None, strict: bool = True) -> ExtensionResult:
    """Extend X from degree N to degree M on the pair (s, t).

    Each level r uses the dyadic partition with 2**r intervals; the
    extrapolated value at level r combines levels r - depth … r.  A degree
    counts as converged once successive extrapolations differ by less than
    ``tol``; the sweep stops when every degree has converged and
    ``min_level`` has been reached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive: the extension is a limit")
    if M < X.N:
        raise ValueError("target degree below truncation degree")
    if not s < t:
        raise ValueError("need s < t")
    exact = isinstance(s, (int, Fraction)) and isinstance(t, (int, Fraction))
    if exact:
        s, t = Fraction(s), Fraction(t)
    if depth is None:
        # discrete values of polynomial data are polynomials in the mesh, so
        # deep extrapolation is exact in rational arithmetic
        depth = min(2 * M, 10) if exact else min(M, 4)
    trees_by_degree = {d: enumerate_trees(d, X.alphabet) for d in range(1, M + 1)}
    base = X.character(s, t)
    values = {tr: base(tr) for d in range(1, X.N + 1) for tr in trees_by_degree[d]}
    high = [tr for d in range(X.N + 1, M + 1) for tr in trees_by_degree[d]]
    result = ExtensionResult(s, t, X.N, M, values)
    if not high:
        return result

    raw: list = []
    prev = None
    for level in range(0, max_level + 1):
        raw.append(_level_sweep(X, M, s, t, level, exact, trees_by_degree))
        result.levels.append(level)
        cols = raw[max(0, level - depth):]
        cur = {tr: romberg([c[tr] for c in cols]) for tr in high}
        if prev is not None:
            per_degree = {}
            for tr in high:
                d = abs(float(cur[tr] - prev[tr]))
                per_degree[tr.size] = max(per_degree.get(tr.size, 0.0), d)
            result.deltas.append((level, per_degree))
            for deg, dl in per_degree.items():
                if dl < tol and deg not in result.converged_level:
                    result.converged_level[deg] = level
                elif dl >= tol:
                    result.converged_level.pop(deg, None)
        prev = cur
        done = len(result.converged_level) == M - X.N
        if done and level >= min_level:
            break
    result.raw = {lvl: r for lvl, r in zip(result.levels, raw)}
    values.update(prev)
    if len(result.converged_level) < M - X.N:
        worst = max(result.deltas[-1][1].values()) if result.deltas else math.inf
        if strict:
            raise NonConvergenceError(
                f"extension did not reach tol={tol:.1e} by level {max_level} "
                f"(last delta {worst:.3e})", worst)
    return result


class ExtendedPath:
    """Rough path obtained by extending X on demand, cached per (s, t)."""

    def __init__(self, X: TruncatedPath, M: int, tol: float = 1e-10, **kwargs):
        self.X, self.M, self.tol, self.kwargs = X, M, tol, kwargs
        self.N = X.N
        self.alphabet = X.alphabet
        self.max_degree = M
        self._cache: dict = {}

    def character(self, s, t) -> TabulatedCharacter:
        if s == t:
            return TabulatedCharacter({}, self.M)
        key = (s, t)
        if key not in self._cache:
            self._cache[key] = extend(self.X, self.M, s, t, self.tol, **self.kwargs).character()
        return self._cache[key]


def extension_chen_defect(path: ExtendedPath, u, s, t, max_size: Optional[int] = None) -> float:
    """max_τ |⟨X_{u,s}⋆X_{s,t}, τ⟩ - ⟨X_{u,t}, τ⟩| over trees up to max_size."""
    max_size = path.M if max_size is None else max_size
    left = StarProduct(path.character(u, s), path.character(s, t))
    full = path.character(u, t)
    return max(abs(float(left(tr) - full(tr)))
               for tr in enumerate_trees_upto(max_size, path.alphabet))
