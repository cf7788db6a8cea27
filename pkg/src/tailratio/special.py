"""Scalar kernels: harmonic numbers, incomplete beta, normal quantile,
Kolmogorov survival function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061
BASEL_LIMIT = math.pi**2 / 6.0

_BETACF_MAX_ITER = 200
_BETACF_EPS = 1e-12
_TINY = 1e-300


def _reciprocal_powers(n: int, m: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=np.float64)
    return 1.0 / i if m == 1 else 1.0 / i**m


@lru_cache(maxsize=4096)
def generalized_harmonic(n: int, m: int) -> float:
    """Return ``H_{n,m} = sum_{i=1}^{n} i**-m``.

    The sum is correctly rounded (``math.fsum``), so the result does not
    depend on accumulation order and ``m == 1`` reproduces
    :func:`harmonic` bit for bit.
    """
    n = int(n)
    m = int(m)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    if n == 0:
        return 0.0
    return math.fsum(_reciprocal_powers(n, m))


def harmonic(n: int) -> float:
    """Return the n-th harmonic number ``H_n`` (``H_0 = 0``)."""
    return generalized_harmonic(n, 1)


def harmonic_diff(upper: int, lower: int, m: int = 1) -> float:
    """``H_{upper,m} - H_{lower,m}`` summed directly over ``lower < i <= upper``.

    Direct summation avoids cancellation between two large partial sums.
    """
    if lower > upper:
        return -harmonic_diff(lower, upper, m)
    if lower == upper:
        return 0.0
    i = np.arange(lower + 1, upper + 1, dtype=np.float64)
    return math.fsum(1.0 / i if m == 1 else 1.0 / i**m)


@dataclass(frozen=True)
class HarmonicTable:
    """Partial sums ``H_{0,m}, ..., H_{max_n,m}`` with Neumaier-compensated
    cumulative accumulation in ascending order."""

    max_n: int
    power: int = 1
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_n < 1 or self.power < 1:
            raise DomainError("max_n and power must be positive")
        terms = _reciprocal_powers(self.max_n, self.power).tolist()
        out = [0.0] * (self.max_n + 1)
        total = 0.0
        comp = 0.0
        for idx, term in enumerate(terms, start=1):
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            out[idx] = total + comp
        values = np.asarray(out)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return self.max_n + 1


# --- regularized incomplete beta -------------------------------------------


def _betacf(x: np.ndarray, a: float, b: float) -> np.ndarray:
    """Continued fraction for I_x(a, b) (modified Lentz), vectorized over x."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = np.where(done, h, h * d * c)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < _BETACF_EPS
        if done.all():
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}"
    )


def reg_incomplete_beta(x, a: float, b: float):
    """Regularized incomplete beta function ``I_x(a, b)``.

    Parameters
    ----------
    x : float or array_like
        Evaluation point(s) in ``[0, 1]``.
    a, b : float
        Positive shape parameters.

    Returns
    -------
    float or ndarray
        Same shape as `x`.
    """
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0):
        raise DomainError(f"shape parameters must be positive, got a={a}, b={b}")
    xa = np.asarray(x, dtype=np.float64)
    if np.any(~np.isfinite(xa)) or np.any((xa < 0) | (xa > 1)):
        raise DomainError("x must lie in [0, 1]")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    out = np.empty_like(xa)
    out[xa == 0.0] = 0.0
    out[xa == 1.0] = 1.0
    inner = (xa > 0.0) & (xa < 1.0)
    if inner.any():
        xi = xa[inner]
        lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        front = np.exp(a * np.log(xi) + b * np.log1p(-xi) - lbeta)
        direct = xi < (a + 1.0) / (a + b + 2.0)
        res = np.empty_like(xi)
        if direct.any():
            res[direct] = front[direct] * _betacf(xi[direct], a, b) / a
        if (~direct).any():
            flip = 1.0 - xi[~direct]
            res[~direct] = 1.0 - front[~direct] * _betacf(flip, b, a) / b
        out[inner] = np.clip(res, 0.0, 1.0)
    return float(out[0]) if scalar else out


def inverse_reg_incomplete_beta(p, a: float, b: float, tol: float = 1e-12):
    """Solve ``I_x(a, b) = p`` for x by safeguarded Newton iteration.

    Vectorized over `p`; brackets are kept so each step either takes the
    Newton update or bisects.
    """
    pa = np.asarray(p, dtype=np.float64)
    if np.any(~((pa >= 0) & (pa <= 1))):
        raise DomainError("p must lie in [0, 1]")
    scalar = pa.ndim == 0
    pa = np.atleast_1d(pa)
    lo = np.zeros_like(pa)
    hi = np.ones_like(pa)
    x = np.full_like(pa, a / (a + b))
    lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    for _ in range(200):
        f = reg_incomplete_beta(x, a, b) - pa
        lo = np.where(f < 0, x, lo)
        hi = np.where(f > 0, x, hi)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            dens = np.exp(
                (a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - lbeta
            )
            step = x - f / dens
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        new = np.where(bad, 0.5 * (lo + hi), step)
        if np.all(np.abs(new - x) <= tol * np.maximum(1.0, np.abs(x))) or np.all(
            f == 0
        ):
            x = new
            break
        x = new
    x = np.where(pa == 0, 0.0, np.where(pa == 1, 1.0, x))
    return float(x[0]) if scalar else x


# --- standard normal --------------------------------------------------------

# Acklam's rational approximation, lower region and central region.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def std_normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _lower_quantile(p: float) -> float:
    # p <= 0.5 here, so the returned value is <= 0
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q
             + _C[5]) / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    else:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r
             + _A[5]) * q / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r
                              + _B[4]) * r + 1.0)
    # one Halley step against the erfc-based CDF
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def std_normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF, accurate to about 1e-12 absolute."""
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must be in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return _lower_quantile(p)
    return -_lower_quantile(1.0 - p)


# --- Kolmogorov distribution ------------------------------------------------


def kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov distribution,
    ``2 * sum_{j>=1} (-1)**(j-1) * exp(-2 j**2 x**2)``.

    For ``x < 1`` the equivalent theta-function form of the CDF is summed
    instead, since the alternating series converges slowly near zero.
    """
    x = float(x)
    if x < 0 or math.isnan(x):
        raise DomainError(f"x must be nonnegative, got {x}")
    if x < 0.05:
        return 1.0
    if x < 1.0:
        total = 0.0
        j = 1
        while True:
            term = math.exp(-((2 * j - 1) ** 2) * math.pi**2 / (8.0 * x * x))
            total += term
            if term < 1e-12 * max(total, 1e-300):
                break
            j += 1
        cdf = math.sqrt(2.0 * math.pi) / x * total
        return min(1.0, max(0.0, 1.0 - cdf))
    total = 0.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * x * x)
        total += term if j % 2 else -term
        if term < 1e-12:
            break
        j += 1
    return min(1.0, max(0.0, 2.0 * total))
