"""Named constants of the factorial-decay estimates, kept in log space.

Several of them are astronomically large (c_5 at γ = 1/2 is about
e^1952), so every constant is exposed as ``log_<name>`` and the plain
value is only a convenience that may be ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .trees import count_trees, count_trees_upto

# B_2, B_4, ..., B_12
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def zeta(p: float, cutoff: int = 20) -> float:
    """Riemann ζ(p) for real p > 1 via Euler–Maclaurin summation.

    A plain partial sum with an integral tail converges like K^(1-p), which
    is hopeless near p = 1; the Bernoulli corrections make the error of
    order K^(-p-11), far below 1e-12 for the p used here.
    """
    if p <= 1:
        raise ValueError("zeta needs p > 1")
    K = cutoff
    head = math.fsum(k ** -p for k in range(1, K))
    tail = K ** (1 - p) / (p - 1) + 0.5 * K ** -p
    rising = p  # p (p+1) ... (p + 2j - 2)
    for j, b in enumerate(_BERNOULLI, start=1):
        tail += b / math.factorial(2 * j) * rising * K ** (-p - 2 * j + 1)
        rising *= (p + 2 * j - 1) * (p + 2 * j)
    return head + tail


def safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def log_c(k: int, gamma: float) -> float:
    """log c_k = (1-γ) Σ_{i=1}^k k^i; c_0 = 1."""
    return (1 - gamma) * sum(k ** i for i in range(1, k + 1))


def c_k(k: int, gamma: float) -> float:
    return safe_exp(log_c(k, gamma))


def floor_inverse(gamma: float) -> int:
    # guard against 1/γ landing a hair below an integer
    return math.floor(1 / gamma + 1e-12)


@dataclass(frozen=True)
class Constants:
    """All constants attached to a Hölder exponent ``gamma``.

    Tree counts follow two conventions: ``count_trees(k)`` is the number of
    unlabelled trees with exactly ``k`` vertices (1 for k = 0), used by
    ``c_k``-type constants; the theorem-level constants use the number of
    non-empty trees with at most ``N`` vertices.
    """

    gamma: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")

    @cached_property
    def N(self) -> int:
        return floor_inverse(self.gamma)

    @cached_property
    def p(self) -> float:
        """Exponent (N+1)γ > 1 feeding ζ."""
        return (self.N + 1) * self.gamma

    @cached_property
    def zeta(self) -> float:
        return zeta(self.p)

    @cached_property
    def trees_upto_N(self) -> int:
        return count_trees_upto(self.N)

    def log_c(self, k: int) -> float:
        return log_c(k, self.gamma)

    def log_c_tilde(self, k: int) -> float:
        return self.log_c(k) + (1 - self.gamma) * math.log((k + 1) * count_trees(k))

    @cached_property
    def log_C_N(self) -> float:
        return self.N + 1.0

    @cached_property
    def log_c5(self) -> float:
        return math.log(2) + self.N + 1

    @cached_property
    def log_c6(self) -> float:
        return self.log_c5 + (1 - self.gamma) * math.log(self.N + 1)

    @cached_property
    def log_c_hat(self) -> float:
        g, N = self.gamma, self.N
        return (math.log(3) + (1 - g) * math.log(self.trees_upto_N)
                + 3 * (1 - g) * math.log(N + 1) + 2 * (N + 1))

    @cached_property
    def beta_series(self) -> float:
        """Σ_{r≥2} min(2/(r-1), 1)^p = 1 + 2^p (ζ(p) - 1)."""
        return 1 + 2 ** self.p * (self.zeta - 1)

    @cached_property
    def log_beta_threshold(self) -> float:
        N = self.N
        return (math.log(6) + 7 * sum((N + 1) ** i for i in range(1, N + 2))
                + math.log(self.beta_series)
                + (1 - self.gamma) * math.log(self.trees_upto_N))

    @cached_property
    def log_c_bar_base(self) -> float:
        """log c̄_N without the Hölder-norm factor."""
        N, g = self.N, self.gamma
        return (math.log(6) + 7 * sum((N + 1) ** (i + 1) for i in range(0, N + 2))
                + (2 - 2 * g) * math.log(self.trees_upto_N)
                + self.p * math.log(2) + math.log(self.zeta)
                + g * math.lgamma(N + 1))

    def log_c_bar(self, norm_scale: float) -> float:
        """log c̄_N given max_{|σ|≤N} ‖X‖_{γ,σ}^{1/|σ|}."""
        if norm_scale <= 0:
            return -math.inf
        return self.log_c_bar_base + math.log(norm_scale)

    def as_dict(self) -> dict:
        out = {
            "gamma": self.gamma,
            "N": self.N,
            "zeta_p": self.zeta,
            "log_c_k": {k: self.log_c(k) for k in range(self.N + 2)},
            "log_c_tilde_k": {k: self.log_c_tilde(k) for k in range(self.N + 2)},
            "log_C_N": self.log_C_N,
            "log_c5": self.log_c5,
            "log_c6": self.log_c6,
            "log_c_hat": self.log_c_hat,
            "log_beta_threshold": self.log_beta_threshold,
            "log_c_bar_base": self.log_c_bar_base,
        }
        return out
