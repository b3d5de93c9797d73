"""Linear functionals on the forest algebra, their convolution and norms.

Every functional has a ``max_degree``; asking for a value above it raises
:class:`TruncationError` instead of silently returning zero.  Values are
``Fraction`` in exact mode and ``float`` otherwise; the arithmetic is
written so both flow through unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .hopf import cut_pairs
from .trees import (EMPTY, Forest, RootedTree, as_forest, enumerate_forests,
                    enumerate_forests_upto, enumerate_trees, parse_forest)

INF = math.inf


class TruncationError(ValueError):
    """A functional was evaluated above its truncation degree."""


class Functional:
    """Base class: subclasses implement ``_value`` on forests."""

    max_degree: float = INF

    def __call__(self, f: "Forest | RootedTree"):
        f = as_forest(f)
        if f.size > self.max_degree:
            raise TruncationError(f"degree {f.size} exceeds truncation {self.max_degree}")
        return self._value(f)

    value = __call__

    def _value(self, f: Forest):
        raise NotImplementedError

    # sugar -------------------------------------------------------------
    def star(self, other: "Functional") -> "StarProduct":
        return StarProduct(self, other)

    def graded(self, k: int) -> "Graded":
        return Graded(self, k)

    def __add__(self, other: "Functional") -> "LinearCombination":
        return LinearCombination([(1, self), (1, other)])

    def __sub__(self, other: "Functional") -> "LinearCombination":
        return LinearCombination([(1, self), (-1, other)])

    def scaled(self, c) -> "LinearCombination":
        return LinearCombination([(c, self)])


class Character(Functional):
    """Multiplicative functional determined by its values on trees."""

    def tree_value(self, t: RootedTree):
        raise NotImplementedError

    def _value(self, f: Forest):
        out = 1
        for t in f.trees:
            v = self.tree_value(t)
            if v == 0:
                return v * 0
            out = out * v
        return out


class TabulatedCharacter(Character):
    """Character from a table of tree values; missing trees are zero."""

    def __init__(self, tree_values: Mapping[RootedTree, object], max_degree: float):
        self.tree_values = dict(tree_values)
        self.max_degree = max_degree
        for t in self.tree_values:
            if t.size > max_degree:
                raise TruncationError(f"tree {t} above truncation {max_degree}")

    def tree_value(self, t: RootedTree):
        return self.tree_values.get(t, 0)


class IdentityCharacter(Character):
    """⟨X_{s,t}, τ⟩ = (t − s)^|τ| / τ!, the lift of x_t = t (unlabelled)."""

    def __init__(self, s, t, max_degree: float = INF):
        self.s, self.t = s, t
        self.h = t - s
        self.max_degree = max_degree

    def tree_value(self, tree: RootedTree):
        if isinstance(self.h, (int, Fraction)):
            return Fraction(self.h) ** tree.size / tree.factorial
        return self.h ** tree.size / tree.factorial


class Counit(Character):
    """ε: 1 on the empty forest and 0 elsewhere."""

    def tree_value(self, t):
        return 0


COUNIT = Counit()


class ForestFunctional(Functional):
    """General (not necessarily multiplicative) functional given on forests."""

    def __init__(self, forest_values: Mapping[Forest, object], max_degree: float):
        self.forest_values = {as_forest(k): v for k, v in forest_values.items()}
        self.max_degree = max_degree

    def _value(self, f: Forest):
        return self.forest_values.get(f, 0)


class Graded(Functional):
    """X^k: agrees with X on degree-k forests and vanishes elsewhere."""

    def __init__(self, base: Functional, k: int):
        if k > base.max_degree:
            raise TruncationError(f"graded slice {k} above truncation {base.max_degree}")
        self.base, self.k = base, k
        self.max_degree = INF

    def _value(self, f: Forest):
        return self.base(f) if f.size == self.k else 0


class StarProduct(Functional):
    """⟨X⋆Y, f⟩ = Σ mult · ⟨X, pruned⟩⟨Y, trunk⟩ over the coproduct of f."""

    def __init__(self, left: Functional, right: Functional):
        self.left, self.right = left, right
        self.max_degree = min(left.max_degree, right.max_degree)

    def _value(self, f: Forest):
        total = 0
        for (p, tr), m in cut_pairs(f):
            a = self.left(p)
            if a == 0:
                continue
            b = self.right(tr)
            if b == 0:
                continue
            total = total + m * a * b
        return total


class LinearCombination(Functional):
    def __init__(self, parts: Iterable[tuple[object, Functional]]):
        self.parts = list(parts)
        self.max_degree = min((X.max_degree for _, X in self.parts), default=INF)

    def _value(self, f: Forest):
        total = 0
        for c, X in self.parts:
            total = total + c * X(f)
        return total


class Cached(Functional):
    """Memoising wrapper; useful for expensive lazy functionals."""

    def __init__(self, base: Functional):
        self.base = base
        self.max_degree = base.max_degree
        self._memo: dict = {}

    def _value(self, f: Forest):
        try:
            return self._memo[f]
        except KeyError:
            v = self._memo[f] = self.base(f)
            return v


def star(X: Functional, Y: Functional, f: "Forest | RootedTree"):
    return StarProduct(X, Y)(f)


# ------------------------------------------------------- character property


@dataclass(frozen=True)
class CharacterCheck:
    ok: bool
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def is_character(X: Functional, up_to: int, alphabet: Optional[int] = None,
                 tol: float = 0.0) -> CharacterCheck:
    """Check ⟨X,1⟩ = 1 and ⟨X,a·b⟩ = ⟨X,a⟩⟨X,b⟩ for |a|+|b| ≤ up_to.

    With ``tol == 0`` the comparison is exact; otherwise it is absolute.
    The first failing pair is reported as ``(a, b)``.
    """

    def differ(x, y):
        return x != y if tol == 0 else abs(x - y) > tol

    if differ(X(EMPTY), 1):
        return CharacterCheck(False, (EMPTY, EMPTY))
    pieces = enumerate_forests_upto(up_to, alphabet, include_empty=False)
    for i, a in enumerate(pieces):
        for b in pieces[i:]:
            if a.size + b.size > up_to:
                continue
            if differ(X(a * b), X(a) * X(b)):
                return CharacterCheck(False, (a, b))
    return CharacterCheck(True)


# -------------------------------------------------------------------- norms


@dataclass(frozen=True)
class NormParams:
    """Hölder exponent γ and norm weight β.

    β may be given as ``log_beta`` when it is too large for a float.
    """

    gamma: float
    beta: Optional[float] = None
    log_beta: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if (self.beta is None) == (self.log_beta is None):
            raise ValueError("give exactly one of beta and log_beta")
        if self.beta is not None:
            if self.beta <= 0:
                raise ValueError("beta must be positive")
            object.__setattr__(self, "log_beta", math.log(self.beta))

    @property
    def N(self) -> int:
        return math.floor(1 / self.gamma + 1e-12)


def log_abs(x) -> float:
    """log|x| that survives huge or tiny exact rationals; -inf at zero."""
    if x == 0:
        return -INF
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    if isinstance(x, int):
        return math.log(abs(x))
    return math.log(abs(float(x)))


def _log_weight(f: Forest, p: NormParams) -> float:
    return (f.components * p.log_beta
            + p.gamma * (math.log(f.factorial) - math.lgamma(f.size + 1)))


def log_tree_norm(X: Functional, k: int, p: NormParams,
                  alphabet: Optional[int] = None) -> float:
    """log ‖X^k‖_T.  At k = 0 the empty tree is weighted like one component."""
    if k == 0:
        return log_abs(X(EMPTY)) + p.log_beta
    best = -INF
    for t in enumerate_trees(k, alphabet):
        f = t.as_forest()
        best = max(best, log_abs(X(f)) + _log_weight(f, p))
    return best


def log_forest_norm(X: Functional, k: int, p: NormParams,
                    alphabet: Optional[int] = None) -> float:
    best = -INF
    for f in enumerate_forests(k, alphabet):
        best = max(best, log_abs(X(f)) + _log_weight(f, p))
    return best


def tree_norm(X: Functional, k: int, p: NormParams, alphabet: Optional[int] = None) -> float:
    return math.exp(log_tree_norm(X, k, p, alphabet))


def forest_norm(X: Functional, k: int, p: NormParams, alphabet: Optional[int] = None) -> float:
    return math.exp(log_forest_norm(X, k, p, alphabet))


# ----------------------------------------------------------- serialization


def character_to_json(X: TabulatedCharacter) -> str:
    rows = []
    for t in sorted(X.tree_values):
        v = X.tree_values[t]
        if isinstance(v, (Fraction, int)):
            v = Fraction(v)
            rows.append([t.notation(), v.numerator, v.denominator])
        else:
            rows.append([t.notation(), float(v)])
    exact = all(len(r) == 3 for r in rows)
    return json.dumps({"schema": 1, "degree": X.max_degree,
                       "mode": "exact" if exact else "float", "values": rows})


def character_from_json(text: str) -> TabulatedCharacter:
    data = json.loads(text)
    values = {}
    for row in data["values"]:
        f = parse_forest(row[0])
        if not f.is_tree():
            raise ValueError(f"character tables are keyed by trees, got {row[0]!r}")
        values[f.trees[0]] = Fraction(row[1], row[2]) if len(row) == 3 else float(row[1])
    return TabulatedCharacter(values, data["degree"])


# ------------------------------------------------------------ bound checks


class PreconditionError(ValueError):
    """A lemma was invoked outside its hypotheses."""


def star_norm_bound_check(X: Functional, Y: Functional, n: int, k: int, p: NormParams,
                          alphabet: Optional[int] = None, rel_slack: float = 1e-12,
                          report=None):
    """‖X^n⋆Y^k‖_T ≤ c_k |T^k|^(1-γ) β^-1 ‖X^n‖_F ‖Y^k‖_T, in log space."""
    from .constants import log_c
    from .report import CheckReport
    from .trees import count_trees

    if n < 1:
        raise PreconditionError("the tree-norm bound needs n >= 1")
    lc = log_c(k, p.gamma)
    if p.log_beta < lc - 1e-12:
        raise PreconditionError(f"log beta={p.log_beta} below log c_{k}={lc}")
    if report is None:
        report = CheckReport("star-tree-norm-bound", f"n={n}, k={k}, gamma={p.gamma}",
                             rel_slack=rel_slack)
    prod = StarProduct(Graded(X, n), Graded(Y, k))
    lhs = log_tree_norm(prod, n + k, p, alphabet)
    rhs = (lc + (1 - p.gamma) * math.log(count_trees(k, alphabet)) - p.log_beta
           + log_forest_norm(X, n, p, alphabet) + log_tree_norm(Y, k, p, alphabet))
    report.record_log(lhs, rhs, {"n": n, "k": k, "gamma": p.gamma, "log_beta": p.log_beta})
    return report


def forest_factorisation_sides(X: Functional, Y: Functional, tau: Forest,
                               tau_tilde: Forest, k: int):
    """Both sides of ⟨X^n⋆Y^k, ττ̃⟩ = Σ_{k1+k2=k} ⟨X⋆Y^{k1}, τ⟩⟨X⋆Y^{k2}, τ̃⟩."""
    tau, tau_tilde = as_forest(tau), as_forest(tau_tilde)
    total = tau.size + tau_tilde.size
    if not 0 <= k <= total:
        raise ValueError(f"k={k} outside 0..{total}")

    def sliced(f: Forest, j: int):
        return StarProduct(Graded(X, f.size - j), Graded(Y, j))(f)

    lhs = sliced(tau * tau_tilde, k)
    rhs = 0
    for k1 in range(max(0, k - tau_tilde.size), min(k, tau.size) + 1):
        rhs = rhs + sliced(tau, k1) * sliced(tau_tilde, k - k1)
    return lhs, rhs


def forest_factorisation_check(X: Functional, Y: Functional, tau, tau_tilde, k: int,
                               alphabet: Optional[int] = None,
                               assume_characters: bool = False) -> bool:
    tau, tau_tilde = as_forest(tau), as_forest(tau_tilde)
    if not assume_characters:
        deg = tau.size + tau_tilde.size
        for name, Z in (("X", X), ("Y", Y)):
            verdict = is_character(Z, deg, alphabet)
            if not verdict:
                raise PreconditionError(f"{name} is not a character: {verdict.counterexample}")
    lhs, rhs = forest_factorisation_sides(X, Y, tau, tau_tilde, k)
    return lhs == rhs


def random_character(max_degree: int, rng, alphabet: Optional[int] = None,
                     exact: bool = True, denominator: int = 7, scale: float = 1.0,
                     decay: bool = False) -> TabulatedCharacter:
    """Seeded random character on trees up to ``max_degree``.

    Exact mode draws small rationals p/q; float mode draws normals.  With
    ``decay`` the value on τ is additionally divided by τ!.
    """
    values = {}
    for d in range(1, max_degree + 1):
        for t in enumerate_trees(d, alphabet):
            if exact:
                v = Fraction(int(rng.integers(-denominator, denominator + 1)),
                             int(rng.integers(1, denominator + 1)))
            else:
                v = float(rng.normal()) * scale ** d
            if decay:
                v = v / t.factorial
            values[t] = v
    return TabulatedCharacter(values, max_degree)
