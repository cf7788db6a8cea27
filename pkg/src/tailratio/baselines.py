"""Classical tail-index estimators used as comparison baselines.

All four estimate the extreme value index ``gamma`` (``= 1/alpha`` for a
Pareto tail) from the ``k`` largest observations. In what follows
``X_(1) <= ... <= X_(n)``.

* Hill: ``(1/k) sum_{i=1}^k log X_(n-i+1) - log X_(n-k)``
* t-Hill: ``1 / [(1/k) sum_{i=1}^k X_(n-k) / X_(n-i+1)] - 1``
* Pickands: ``log[(X_(n-k+1) - X_(n-2k+1)) / (X_(n-2k+1) - X_(n-4k+1))] / log 2``
* Moment (Dekkers-Einmahl-de Haan):
  ``M1 + 1 - 1 / (2 (1 - M1^2 / M2))`` with
  ``Mr = (1/k) sum_{i=1}^k [log X_(n-i+1) - log X_(n-k)]^r``
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRatio, IndexOutOfRange, InsufficientSample
from .order_stats import make_ordered


class Method(str, enum.Enum):
    HILL = "Hill"
    THILL = "THill"
    PICKANDS = "Pickands"
    MOMENT = "Moment"


@dataclass(frozen=True)
class BaselineEstimate:
    method: Method
    k: int
    gamma_hat: float
    alpha_hat: float | None

    @classmethod
    def build(cls, method, k, gamma_hat):
        alpha_hat = 1.0 / gamma_hat if gamma_hat > 0 else None
        return cls(Method(method), int(k), float(gamma_hat), alpha_hat)


def _upper_block(sample, k):
    sample = make_ordered(sample)
    n = sample.n
    if not 1 <= k <= n - 1:
        raise IndexOutOfRange(f"k must be in 1..{n - 1}, got {k}")
    vals = sample.values
    # top k values (largest first) and the threshold X_(n-k)
    return vals[n - k:][::-1], vals[n - k - 1]


def hill(sample, k: int) -> BaselineEstimate:
    top, ref = _upper_block(sample, k)
    gamma = math.fsum(np.log(top) - math.log(ref)) / k
    if gamma == 0.0:
        raise DegenerateRatio("the k + 1 largest observations are all equal")
    return BaselineEstimate.build(Method.HILL, k, gamma)


def t_hill(sample, k: int) -> BaselineEstimate:
    top, ref = _upper_block(sample, k)
    mean_ratio = math.fsum(ref / top) / k
    return BaselineEstimate.build(Method.THILL, k, 1.0 / mean_ratio - 1.0)


def pickands(sample, k: int) -> BaselineEstimate:
    sample = make_ordered(sample)
    n = sample.n
    if k < 1:
        raise IndexOutOfRange(f"k must be positive, got {k}")
    if n < 4 * k:
        raise InsufficientSample(f"Pickands needs n >= 4k, got n={n}, k={k}")
    v = sample.values
    x1, x2, x4 = v[n - k], v[n - 2 * k], v[n - 4 * k]
    num, den = x1 - x2, x2 - x4
    if num <= 0 or den <= 0:
        raise DegenerateRatio("zero spacing in Pickands estimator")
    return BaselineEstimate.build(Method.PICKANDS, k, math.log(num / den) / math.log(2.0))


def moment_dedh(sample, k: int) -> BaselineEstimate:
    top, ref = _upper_block(sample, k)
    d = np.log(top) - math.log(ref)
    m1 = math.fsum(d) / k
    m2 = math.fsum(d * d) / k
    if m2 == 0.0:
        raise DegenerateRatio("second log-moment is zero")
    denom = 1.0 - m1 * m1 / m2
    if denom == 0.0:
        raise DegenerateRatio("M1^2 == M2 in moment estimator")
    return BaselineEstimate.build(Method.MOMENT, k, m1 + 1.0 - 0.5 / denom)


ESTIMATORS = {
    Method.HILL: hill,
    Method.THILL: t_hill,
    Method.PICKANDS: pickands,
    Method.MOMENT: moment_dedh,
}


def max_k(method: Method, n: int) -> int:
    return n // 4 if Method(method) is Method.PICKANDS else n - 1


def batch_gamma(sorted_rows: np.ndarray, method: Method, k: int) -> np.ndarray:
    """``gamma_hat`` for every row of an ascending-sorted ``(R, n)`` array.

    Degenerate rows give NaN, so the arrays can be aggregated directly.
    Agrees with the scalar functions up to summation rounding.
    """
    method = Method(method)
    rows = np.atleast_2d(sorted_rows)
    n = rows.shape[1]
    if k < 1 or k > max_k(method, n):
        raise IndexOutOfRange(f"k={k} not usable for {method.value} with n={n}")
    with np.errstate(divide="ignore", invalid="ignore"):
        if method is Method.PICKANDS:
            x1, x2, x4 = rows[:, n - k], rows[:, n - 2 * k], rows[:, n - 4 * k]
            num, den = x1 - x2, x2 - x4
            g = np.log(num / den) / math.log(2.0)
            return np.where((num > 0) & (den > 0), g, np.nan)
        top = rows[:, n - k:]
        ref = rows[:, n - k - 1][:, None]
        if method is Method.THILL:
            return 1.0 / np.mean(ref / top, axis=1) - 1.0
        d = np.log(top) - np.log(ref)
        m1 = d.mean(axis=1)
        if method is Method.HILL:
            return np.where(m1 == 0.0, np.nan, m1)
        m2 = (d * d).mean(axis=1)
        denom = 1.0 - m1 * m1 / m2
        g = m1 + 1.0 - 0.5 / denom
        return np.where((m2 == 0.0) | (denom == 0.0), np.nan, g)
