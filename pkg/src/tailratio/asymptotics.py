"""Large-k normal limits of the log-ratio statistic.

For a sample of size ``n = (s+1)k - 1`` from a model with density f and
quantile function F^{<-},

    T_{k,s} = sqrt(n) * [log(X_(ks,n) / X_(k,n)) - log(y / x)]

with ``x = F^{<-}(1/(s+1))`` and ``y = F^{<-}(s/(s+1))`` is asymptotically
normal with variance ``J D J'``, where D is the joint covariance of the two
central order statistics and ``J = (-1/x, 1/y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Family, TailModel, density, quantile
from .errors import DensityVanishes, DomainError


def _check_s(s):
    if int(s) != s or s < 2:
        raise DomainError(f"s must be an integer >= 2, got {s}")


def design_quantiles(model: TailModel, s: int) -> tuple[float, float]:
    """``(F^{<-}(1/(s+1)), F^{<-}(s/(s+1)))``."""
    _check_s(s)
    return quantile(model, 1.0 / (s + 1)), quantile(model, s / (s + 1.0))


def _densities_at_quantiles(model, s):
    x, y = design_quantiles(model, s)
    f1, f2 = density(model, x), density(model, y)
    for f in (f1, f2):
        if not (0.0 < f < math.inf):
            raise DensityVanishes(f"density {f} at a design quantile of {model}")
    return x, y, f1, f2


@dataclass(frozen=True)
class SmirnoffCovariance:
    """Asymptotic covariance of ``sqrt(n) (X_(k,n) - x, X_(ks,n) - y)``."""

    p1: float
    p2: float
    matrix: np.ndarray

    @property
    def correlation(self) -> float:
        m = self.matrix
        return float(m[0, 1] / math.sqrt(m[0, 0] * m[1, 1]))


def smirnoff_cov(model: TailModel, s: int) -> SmirnoffCovariance:
    """Covariance matrix D for ``p1 = 1/(s+1)`` and ``p2 = s/(s+1)``.

    Entries: ``p_i (1 - p_j) / (f_i f_j)`` for ``i <= j``, which gives the
    diagonal ``s / ((s+1)^2 f^2)`` and off-diagonal ``1 / ((s+1)^2 f1 f2)``.
    """
    _, _, f1, f2 = _densities_at_quantiles(model, s)
    p1, p2 = 1.0 / (s + 1), s / (s + 1.0)
    w = 1.0 / (s + 1.0) ** 2
    d11 = w * s / (f1 * f1)
    d22 = w * s / (f2 * f2)
    d12 = w / (f1 * f2)
    mat = np.array([[d11, d12], [d12, d22]])
    mat.setflags(write=False)
    return SmirnoffCovariance(p1, p2, mat)


@dataclass(frozen=True)
class AsymptoticVariance:
    s: int
    a: float
    b: float
    v: float
    model: str
    center: float  # log(y / x), the limit of the log-ratio


def theorem1_variance(model: TailModel, s: int) -> AsymptoticVariance:
    """Limit variance of ``T_{k,s}`` for an arbitrary model.

    ``a = x f(x)``, ``b = y f(y)`` and
    ``V = (s/a^2 - 2/(a b) + s/b^2) / (s+1)^2``.
    """
    x, y, f1, f2 = _densities_at_quantiles(model, s)
    a = x * f1
    b = y * f2
    v = (s / (a * a) - 2.0 / (a * b) + s / (b * b)) / (s + 1.0) ** 2
    return AsymptoticVariance(int(s), a, b, v, str(model), math.log(y / x))


def delta_method_variance(model: TailModel, s: int) -> float:
    """Same variance as :func:`theorem1_variance`, as the product ``J D J'``."""
    x, y = design_quantiles(model, s)
    jac = np.array([-1.0 / x, 1.0 / y])
    return float(jac @ smirnoff_cov(model, s).matrix @ jac)


def pareto_limit_variances(s: int, alpha: float) -> tuple[float, float, float]:
    """Closed-form Pareto limit variances.

    Returns the variances of the limits of ``sqrt(n)(L - log(s)/alpha)``,
    ``sqrt(n) c (alpha Q - log(s)/c)`` and ``sqrt(n)(alpha Q* - 1)``, where
    ``L`` is the log-ratio and ``c = H_{ks-1} - H_{k-1}``.
    """
    _check_s(s)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    base = (s * s - 1.0) / s
    return base / alpha**2, base, base / math.log(s) ** 2


def limit_center(model: TailModel, s: int) -> float:
    """Probability limit of the log-ratio, ``log(F^{<-}(s/(s+1)) / F^{<-}(1/(s+1)))``."""
    if model.family is Family.PARETO:
        return math.log(s) / model.alpha
    x, y = design_quantiles(model, s)
    return math.log(y / x)
