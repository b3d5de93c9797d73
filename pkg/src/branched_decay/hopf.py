"""Connes-Kreimer coproduct on forests and the combinatorics built on it."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping

from .trees import EMPTY, Forest, RootedTree, as_forest, join


@dataclass(frozen=True, order=True)
class CutTerm:
    """One aggregated term ``pruned ⊗ trunk`` of a coproduct."""

    pruned: Forest
    trunk: Forest
    multiplicity: int

    def __str__(self) -> str:
        return f"{self.pruned} ⊗ {self.trunk} ×{self.multiplicity}"


@lru_cache(maxsize=None)
def _tree_cuts(t: RootedTree) -> tuple:
    """Coproduct of ``t`` as a tuple of ((pruned, trunk), multiplicity)."""
    # For every child either everything below the edge is cut off, or the
    # child keeps its root and contributes its own coproduct recursively.
    partial: Counter = Counter({(EMPTY, EMPTY): 1})
    for child in t.children:
        nxt: Counter = Counter()
        for (p, tr), m in partial.items():
            for (cp, ctr), cm in _tree_cuts(child):
                nxt[(p * cp, tr * ctr)] += m * cm
        partial = nxt
    out: Counter = Counter()
    for (p, tr), m in partial.items():
        out[(p, Forest((join(tr, t.label),)))] += m
    out[(Forest((t,)), EMPTY)] += 1
    return tuple(sorted(out.items()))


def _forest_cuts(f: Forest) -> dict:
    acc: Counter = Counter({(EMPTY, EMPTY): 1})
    for t in f.trees:
        nxt: Counter = Counter()
        for (p, tr), m in acc.items():
            for (tp, ttr), tm in _tree_cuts(t):
                nxt[(p * tp, tr * ttr)] += m * tm
        acc = nxt
    return acc


@lru_cache(maxsize=4096)
def _forest_cuts_cached(f: Forest) -> tuple:
    return tuple(sorted(_forest_cuts(f).items()))


def coproduct_tree(t: RootedTree) -> list[CutTerm]:
    return [CutTerm(p, tr, m) for (p, tr), m in _tree_cuts(t)]


def coproduct_forest(f: "Forest | RootedTree") -> list[CutTerm]:
    f = as_forest(f)
    return [CutTerm(p, tr, m) for (p, tr), m in _forest_cuts_cached(f)]


def cut_pairs(f: "Forest | RootedTree") -> tuple:
    """Fast access to ``((pruned, trunk), multiplicity)`` pairs, cached."""
    return _forest_cuts_cached(as_forest(f))


# ------------------------------------------------------------- HopfElement


class HopfElement:
    """Finite rational combination of forests."""

    __slots__ = ("terms",)

    def __init__(self, terms: "Mapping[Forest, object] | Iterable" = ()):
        acc: dict = defaultdict(Fraction)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for f, c in items:
            acc[as_forest(f)] += Fraction(c)
        self.terms = {f: c for f, c in acc.items() if c != 0}

    @classmethod
    def of(cls, f: "Forest | RootedTree", coef=1) -> "HopfElement":
        return cls({as_forest(f): coef})

    def __add__(self, other: "HopfElement") -> "HopfElement":
        return HopfElement(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "HopfElement") -> "HopfElement":
        return self + other.scale(-1)

    def scale(self, c) -> "HopfElement":
        return HopfElement({f: v * Fraction(c) for f, v in self.terms.items()})

    def __mul__(self, other: "HopfElement") -> "HopfElement":
        return HopfElement([(a * b, ca * cb)
                            for a, ca in self.terms.items()
                            for b, cb in other.terms.items()])

    def __eq__(self, other):
        return isinstance(other, HopfElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "HopfElement(0)"
        body = " + ".join(f"{c}·{f}" for f, c in sorted(self.terms.items()))
        return f"HopfElement({body})"

    def coproduct(self) -> dict:
        """Δ as a map (left forest, right forest) → coefficient."""
        out: dict = defaultdict(Fraction)
        for f, c in self.terms.items():
            for (p, tr), m in cut_pairs(f):
                out[(p, tr)] += c * m
        return {k: v for k, v in out.items() if v != 0}


def coassociativity_sides(f: "Forest | RootedTree") -> tuple[dict, dict]:
    """(Δ⊗id)Δf and (id⊗Δ)Δf as maps on triples of forests."""
    left: Counter = Counter()
    right: Counter = Counter()
    for (p, tr), m in cut_pairs(f):
        for (a, b), m2 in cut_pairs(p):
            left[(a, b, tr)] += m * m2
        for (a, b), m2 in cut_pairs(tr):
            right[(p, a, b)] += m * m2
    return dict(left), dict(right)


# --------------------------------------------------------- cut-indexed sums


def trunk_groups(t: RootedTree) -> dict:
    """Map trunk tree → list of (pruned forest, multiplicity).

    The trunk of the full cut (empty trunk) is keyed by ``None``.
    """
    out: dict = defaultdict(list)
    for (p, tr), m in _tree_cuts(t):
        out[tr.trees[0] if tr else None].append((p, m))
    return dict(out)


def trunks_of(t: RootedTree) -> set:
    """All trees occurring as a trunk of ``t`` (the empty trunk excluded)."""
    return {k for k in trunk_groups(t) if k is not None}


def _trunk_key(sigma: "RootedTree | Forest | None"):
    if sigma is None:
        return None
    if isinstance(sigma, Forest):
        if not sigma:
            return None
        if not sigma.is_tree():
            raise ValueError("a trunk is a single tree or empty")
        return sigma.trees[0]
    return sigma


def cut_sum_over_trunk(tau: RootedTree, sigma, gamma: float, beta: float) -> float:
    """Σ over cuts with trunk σ of β^(-c(pruned)) / pruned!^γ."""
    if gamma <= 0 or beta <= 0:
        raise ValueError("gamma and beta must be positive")
    terms = trunk_groups(tau).get(_trunk_key(sigma), [])
    return math.fsum(m * beta ** (-p.components) / p.factorial ** gamma for p, m in terms)


def log_cut_sum_over_trunk(tau: RootedTree, sigma, gamma: float, log_beta: float) -> float:
    """log of the trunk-indexed cut sum, for β too large to represent."""
    terms = trunk_groups(tau).get(_trunk_key(sigma), [])
    if not terms:
        return -math.inf
    logs = [math.log(m) - p.components * log_beta - gamma * math.log(p.factorial)
            for p, m in terms]
    top = max(logs)
    return top + math.log(math.fsum(math.exp(x - top) for x in logs))


def cut_sum_over_trunk_exact(tau: RootedTree, sigma, beta=1) -> Fraction:
    """γ = 1 version in exact arithmetic: Σ β^(-c(pruned)) / pruned!."""
    beta = Fraction(beta)
    terms = trunk_groups(tau).get(_trunk_key(sigma), [])
    return sum((Fraction(m, p.factorial) / beta ** p.components for p, m in terms), Fraction(0))


def factorial_cut_sum(tau: RootedTree, sigma) -> Fraction:
    """Σ over cuts with trunk σ of 1 / pruned!."""
    return cut_sum_over_trunk_exact(tau, sigma, 1)


def tree_binomial(tau: RootedTree, l: int) -> Fraction:
    """Σ over cuts with |trunk| = l of τ!/(pruned! trunk!); equals C(|τ|, l)."""
    if not 0 <= l <= tau.size:
        raise ValueError(f"l={l} outside 0..{tau.size}")
    total = Fraction(0)
    for (p, tr), m in _tree_cuts(tau):
        if tr.size == l:
            total += Fraction(m * tau.factorial, p.factorial * tr.factorial)
    return total


# ------------------------------------------------------- permutation classes


@dataclass(frozen=True)
class PermutationClasses:
    p_sigma: int
    p_prime: int
    k: int | None


def _padded_children(tau: RootedTree, sigma: RootedTree) -> tuple[tuple, tuple]:
    if tau.label != sigma.label:
        raise ValueError("root labels differ")
    n = len(tau.children)
    if len(sigma.children) > n:
        raise ValueError("σ has more children than τ; arity mismatch")
    return tau.children, sigma.children + (None,) * (n - len(sigma.children))


def _contained(sub, t: RootedTree) -> bool:
    # "σ_i ⊆ τ_i": σ_i is empty or occurs as a trunk of τ_i.
    return sub is None or sub == t or sub in trunks_of(t)


def permutation_classes(tau: RootedTree, sigma: RootedTree) -> PermutationClasses:
    """Count arrangements of σ's (padded) children over τ's children.

    ``p_sigma`` counts distinct assignments of σ's children to the slots of
    τ's children (permutations up to swapping equal σ children).  ``p_prime``
    counts those where every σ child is contained in the τ child it is
    matched with, and ``k`` is the minimal number of strict containments
    over ``p_prime`` (``None`` when ``p_prime`` is empty).
    """
    tkids, skids = _padded_children(tau, sigma)
    seen = set()
    p_prime = 0
    k_min = None
    for perm in permutations(range(len(skids))):
        arrangement = tuple(skids[i] for i in perm)
        if arrangement in seen:
            continue
        seen.add(arrangement)
        if all(_contained(s, t) for s, t in zip(arrangement, tkids)):
            p_prime += 1
            strict = sum(1 for s, t in zip(arrangement, tkids) if s != t)
            k_min = strict if k_min is None else min(k_min, strict)
    return PermutationClasses(len(seen), p_prime, k_min)


def induction_sides(tau: RootedTree, sigma: RootedTree, gamma=1, beta=1, exact=True):
    """Both sides of the factorisation of the trunk-indexed cut sum.

    LHS is Σ_{trunk=σ} β^(-c)/pruned!^γ computed directly.  RHS runs over
    the classes of P_σ and multiplies the per-child sums, where an empty
    σ child contributes the full cut of τ_i (β^-1/τ_i!^γ) and a matched
    child contributes its own trunk-indexed sum.
    """
    tkids, skids = _padded_children(tau, sigma)

    def child_sum(t, s):
        if s is None:
            if exact:
                return Fraction(1, t.factorial) / Fraction(beta)
            return 1.0 / (beta * t.factorial ** gamma)
        if exact:
            return cut_sum_over_trunk_exact(t, s, beta)
        return cut_sum_over_trunk(t, s, gamma, beta)

    if exact:
        if gamma != 1:
            raise ValueError("exact mode needs gamma = 1")
        lhs = cut_sum_over_trunk_exact(tau, sigma, beta)
    else:
        lhs = cut_sum_over_trunk(tau, sigma, gamma, beta)
    seen = set()
    rhs = Fraction(0) if exact else 0.0
    for perm in permutations(range(len(skids))):
        arrangement = tuple(skids[i] for i in perm)
        if arrangement in seen:
            continue
        seen.add(arrangement)
        rhs += math.prod((child_sum(t, s) for t, s in zip(tkids, arrangement)),
                         start=Fraction(1) if exact else 1.0)
    return lhs, rhs
