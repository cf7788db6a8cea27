"""Log-ratio estimators of the tail index built from two central order
statistics of a sample of size ``n = (s+1)k - 1``.

``Q`` divides the log-ratio by ``H_{ks-1} - H_{k-1}`` and is exactly unbiased
for ``1/alpha`` under Pareto data; ``Q*`` divides by ``log(s)`` and is only
asymptotically unbiased. The point estimate of ``alpha`` is ``1/Q*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRatio, DomainError, IncompatibleSampleSize
from .order_stats import OrderedSample, design_indices, make_ordered
from .special import harmonic_diff, std_normal_quantile


def q_denominator(k: int, s: int) -> float:
    """``H_{ks-1} - H_{k-1}``; tends to ``log(s)`` as k grows."""
    return harmonic_diff(k * s - 1, k - 1)


def _check_design(sample: OrderedSample, k: int, s: int) -> None:
    if k < 1 or s < 2:
        raise DomainError(f"need k >= 1 and s >= 2, got k={k}, s={s}")
    if sample.n != (s + 1) * k - 1:
        raise IncompatibleSampleSize(
            f"sample size {sample.n} != (s+1)k - 1 = {(s + 1) * k - 1}"
        )


def log_ratio(sample, k: int, s: int) -> float:
    """``log(X_(ks,n) / X_(k,n))`` for ``n = (s+1)k - 1``."""
    sample = make_ordered(sample)
    _check_design(sample, k, s)
    lo = sample.values[k - 1]
    hi = sample.values[k * s - 1]
    if hi == lo:
        raise DegenerateRatio(f"X_({k*s}) == X_({k}) = {lo!r}")
    # np.log keeps this bit-identical with batch_log_ratio
    return float(np.log(hi / lo))


def infer_k(sample, s: int) -> int:
    return design_indices(make_ordered(sample).n, s).k


@dataclass(frozen=True)
class RatioEstimate:
    k: int
    s: int
    n: int
    log_ratio: float
    q: float
    q_star: float
    alpha_hat: float

    @property
    def inv_q(self) -> float:
        """``1/Q``. Note ``Q`` (not its reciprocal) is the unbiased quantity."""
        return 1.0 / self.q

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "s": self.s,
            "n": self.n,
            "log_ratio": self.log_ratio,
            "q": self.q,
            "q_star": self.q_star,
            "alpha_hat": self.alpha_hat,
        }


def q_estimator(sample, k: int | None = None, s: int = 2) -> RatioEstimate:
    """Compute ``Q_{k,s}``, ``Q*_{k,s}`` and ``alpha_hat = 1/Q*``.

    If `k` is omitted it is inferred from the sample size.
    """
    sample = make_ordered(sample)
    if k is None:
        k = infer_k(sample, s)
    lr = log_ratio(sample, k, s)
    q_star = lr / math.log(s)
    return RatioEstimate(
        k=k,
        s=s,
        n=sample.n,
        log_ratio=lr,
        q=lr / q_denominator(k, s),
        q_star=q_star,
        alpha_hat=1.0 / q_star,
    )


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    k: int
    s: int
    n: int

    @property
    def center(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.upper - self.lower)

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def ci_half_width_factor(s: int, n: int, level: float) -> float:
    """``z_{1-a0/2} * sqrt((s^2-1) / (s n))``; divide by the log-ratio to get
    the half-width of the interval for alpha."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must be in (0, 1), got {level}")
    z = std_normal_quantile(0.5 + 0.5 * level)
    return z * math.sqrt((s * s - 1.0) / (s * n))


def interval_from_log_ratio(
    lr: float, k: int, s: int, level: float = 0.95
) -> ConfidenceInterval:
    if lr == 0:
        raise DegenerateRatio("log-ratio is zero")
    n = (s + 1) * k - 1
    center = math.log(s) / lr
    hw = ci_half_width_factor(s, n, level) / lr
    return ConfidenceInterval(center - hw, center + hw, level, k, s, n)


def confidence_interval(
    sample, k: int | None = None, s: int = 2, level: float = 0.95
) -> ConfidenceInterval:
    """Asymptotic confidence interval for alpha, centered at ``1/Q*``."""
    sample = make_ordered(sample)
    if k is None:
        k = infer_k(sample, s)
    return interval_from_log_ratio(log_ratio(sample, k, s), k, s, level)


# --- batch versions used by the simulation engine ---------------------------


def batch_log_ratio(draws: np.ndarray, k: int, s: int) -> np.ndarray:
    """Log-ratios for each row of an (unsorted) ``(replicates, n)`` array.

    Rows must have exactly ``(s+1)k - 1`` columns. Degenerate rows yield 0.
    """
    draws = np.atleast_2d(draws)
    n = (s + 1) * k - 1
    if draws.shape[1] != n:
        raise IncompatibleSampleSize(f"rows have {draws.shape[1]} values, need {n}")
    lo_i, hi_i = k - 1, k * s - 1
    part = np.partition(draws, (lo_i, hi_i), axis=1)
    return np.log(part[:, hi_i] / part[:, lo_i])
