"""Finite-sample laws of the log-ratio statistics under Pareto(alpha, delta).

With Pareto data, ``log(X_(j,n)/X_(i,n))`` has the law of ``-log(rho)/alpha``
with ``rho ~ Beta(n-j+1, j-i)``, i.e. of the ``(j-i)``-th order statistic of
``n-i`` exponentials with rate alpha. None of these laws depend on delta.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .estimators import q_denominator
from .special import harmonic_diff, reg_incomplete_beta


class LawKind(str, enum.Enum):
    LOG_RATIO = "log_ratio"
    Q = "q"
    QSTAR = "q_star"


@dataclass(frozen=True)
class ExactLaw:
    """Law of one statistic.

    For ``LOG_RATIO`` the fields ``i < j <= n`` select the order statistics.
    For ``Q`` and ``QSTAR`` only ``k`` and ``s`` are given and the implied
    design is ``i = k, j = ks, n = (s+1)k - 1``.
    """

    kind: LawKind
    alpha: float
    i: int
    j: int
    n: int
    k: int | None = None
    s: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", LawKind(self.kind))
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not 1 <= self.i < self.j <= self.n:
            raise DomainError(f"need 1 <= i < j <= n, got {self.i}, {self.j}, {self.n}")

    @classmethod
    def log_ratio(cls, i: int, j: int, n: int, alpha: float) -> "ExactLaw":
        return cls(LawKind.LOG_RATIO, float(alpha), i, j, n)

    @classmethod
    def q(cls, k: int, s: int, alpha: float) -> "ExactLaw":
        return cls._ratio(LawKind.Q, k, s, alpha)

    @classmethod
    def q_star(cls, k: int, s: int, alpha: float) -> "ExactLaw":
        return cls._ratio(LawKind.QSTAR, k, s, alpha)

    @classmethod
    def _ratio(cls, kind, k, s, alpha):
        if k < 1 or s < 2:
            raise DomainError(f"need k >= 1 and s >= 2, got k={k}, s={s}")
        return cls(kind, float(alpha), k, k * s, (s + 1) * k - 1, k, s)

    @property
    def beta_shapes(self) -> tuple[int, int]:
        """Shapes ``(n-j+1, j-i)`` of the Beta variable rho."""
        return self.n - self.j + 1, self.j - self.i

    @property
    def scale(self) -> float:
        """Constant c with ``statistic = log_ratio / c``."""
        if self.kind is LawKind.Q:
            return q_denominator(self.k, self.s)
        if self.kind is LawKind.QSTAR:
            return math.log(self.s)
        return 1.0

    def pdf(self, x):
        if self.kind is LawKind.LOG_RATIO:
            return log_ratio_pdf(self, x)
        if self.kind is LawKind.Q:
            return q_pdf(self, x)
        return q_star_pdf(self, x)

    def cdf(self, x):
        return statistic_cdf(self, x)

    def moments(self) -> tuple[float, float]:
        return exact_moments(self)

    def upper_tail_point(self, mass: float = 1e-12) -> float:
        """A point beyond which the law has at most `mass` probability.

        From ``I_t(a, b) <= t**a / (a B(a, b))`` for ``b >= 1`` and
        ``t = exp(-alpha * c * x)``.
        """
        a, b = self.beta_shapes
        lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        log_t = (math.log(mass) + math.log(a) + lbeta) / a
        return -log_t / (self.alpha * self.scale)


def _log_norm_const(law: ExactLaw) -> float:
    # log[(n-i)! / ((j-i-1)! (n-j)!)]
    n, i, j = law.n, law.i, law.j
    return math.lgamma(n - i + 1) - math.lgamma(j - i) - math.lgamma(n - j + 1)


def _scaled_log_ratio_pdf(law: ExactLaw, x, c: float):
    """Density of ``log_ratio / c`` at x."""
    xa = np.asarray(x, dtype=np.float64)
    a, b = law.beta_shapes  # a = n-j+1, b = j-i
    rate = law.alpha * c
    pos = xa > 0
    xp = np.where(pos, xa, 1.0)
    with np.errstate(divide="ignore"):
        logf = (
            math.log(rate)
            + _log_norm_const(law)
            + (b - 1) * np.log(-np.expm1(-rate * xp))
            - rate * a * xp
        )
    out = np.where(pos, np.exp(logf), 0.0)
    return float(out) if xa.ndim == 0 else out


def log_ratio_pdf(law: ExactLaw, x):
    """Density of ``log(X_(j,n)/X_(i,n))``."""
    return _scaled_log_ratio_pdf(law, x, 1.0)


def q_pdf(law: ExactLaw, x):
    if law.kind is not LawKind.Q:
        raise DomainError("q_pdf needs a Q law")
    return _scaled_log_ratio_pdf(law, x, law.scale)


def q_star_pdf(law: ExactLaw, x):
    if law.kind is not LawKind.QSTAR:
        raise DomainError("q_star_pdf needs a QStar law")
    return _scaled_log_ratio_pdf(law, x, law.scale)


def statistic_cdf(law: ExactLaw, x):
    """``P(statistic <= x) = 1 - I_t(n-j+1, j-i)`` with ``t = exp(-alpha c x)``."""
    xa = np.asarray(x, dtype=np.float64)
    a, b = law.beta_shapes
    pos = xa > 0
    t = np.exp(-law.alpha * law.scale * np.where(pos, xa, 0.0))
    out = np.where(pos, 1.0 - reg_incomplete_beta(t, a, b), 0.0)
    return float(out) if xa.ndim == 0 else out


def q_star_cdf(law: ExactLaw, x):
    if law.kind is not LawKind.QSTAR:
        raise DomainError("q_star_cdf needs a QStar law")
    return statistic_cdf(law, x)


def exact_moments(law: ExactLaw) -> tuple[float, float]:
    """Mean and variance of the statistic."""
    alpha = law.alpha
    m1 = harmonic_diff(law.n - law.i, law.n - law.j)
    m2 = harmonic_diff(law.n - law.i, law.n - law.j, 2)
    c = law.scale
    return m1 / (alpha * c), m2 / (alpha * c) ** 2


def chebyshev_bound(law: ExactLaw, epsilon: float) -> float:
    """Right-hand side of ``P(|stat - 1/alpha| > eps) <= Var(stat) / eps^2``.

    Returned unclamped, so the value can exceed 1. For ``Q*`` the bias is
    not included (the formula uses the variance alone).
    """
    if law.kind is LawKind.LOG_RATIO:
        raise DomainError("the bound is defined for Q and QStar laws only")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    _, var = exact_moments(law)
    return var / epsilon**2


def sample_rho_statistic(law: ExactLaw, size: int, rng: np.random.Generator):
    """Draws of ``-log(rho) / (alpha c)`` with ``rho`` Beta distributed."""
    a, b = law.beta_shapes
    rho = rng.beta(a, b, size=size)
    return -np.log(rho) / (law.alpha * law.scale)
