"""Tail models and reproducible inverse-transform sampling.

Every draw comes from a Philox counter-based generator keyed by
``(master_seed, stream_id)``: stream ``r`` always produces the same
uniforms, regardless of how many other streams exist or in which order
they are consumed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import DomainError

_UINT64_MASK = (1 << 64) - 1


class Family(str, enum.Enum):
    PARETO = "pareto"
    EXPONENTIAL = "exponential"
    BETA = "beta"
    FRECHET = "frechet"
    LOGLOGISTIC = "loglogistic"


_PARAM_NAMES = {
    Family.PARETO: ("alpha", "delta"),
    Family.EXPONENTIAL: ("rate",),
    Family.BETA: ("a", "b"),
    Family.FRECHET: ("alpha",),
    Family.LOGLOGISTIC: ("alpha",),
}


@dataclass(frozen=True)
class TailModel:
    """A continuous positive distribution with closed-form quantile and density.

    Use the constructors :func:`pareto`, :func:`exponential`, :func:`beta`,
    :func:`frechet` and :func:`loglogistic` rather than building this
    directly.
    """

    family: Family
    params: tuple

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        params = tuple(float(p) for p in self.params)
        if len(params) != len(_PARAM_NAMES[family]):
            raise DomainError(
                f"{family.value} expects parameters {_PARAM_NAMES[family]}"
            )
        if not all(math.isfinite(p) and p > 0 for p in params):
            raise DomainError(f"parameters must be positive and finite: {params}")
        object.__setattr__(self, "params", params)

    def __getattr__(self, name):
        names = _PARAM_NAMES.get(self.__dict__.get("family"), ())
        if name in names:
            return self.params[names.index(name)]
        raise AttributeError(name)

    @property
    def param_dict(self) -> dict:
        return dict(zip(_PARAM_NAMES[self.family], self.params))

    def __str__(self):
        inner = ", ".join(f"{k}={v:g}" for k, v in self.param_dict.items())
        return f"{self.family.value}({inner})"

    # the methods below accept scalars or arrays

    def quantile(self, p):
        return quantile(self, p)

    def cdf(self, x):
        return cdf(self, x)

    def sf(self, x):
        return sf(self, x)

    def density(self, x):
        return density(self, x)

    def sample(self, n, seed):
        return sample(self, n, seed)


def pareto(alpha: float, delta: float = 1.0) -> TailModel:
    return TailModel(Family.PARETO, (alpha, delta))


def exponential(rate: float = 1.0) -> TailModel:
    return TailModel(Family.EXPONENTIAL, (rate,))


def beta(a: float, b: float) -> TailModel:
    return TailModel(Family.BETA, (a, b))


def frechet(alpha: float) -> TailModel:
    return TailModel(Family.FRECHET, (alpha,))


def loglogistic(alpha: float) -> TailModel:
    return TailModel(Family.LOGLOGISTIC, (alpha,))


def _unwrap(arr, scalar):
    return float(arr) if scalar else arr


def quantile(model: TailModel, p):
    """Inverse CDF ``F^{<-}(p)`` for ``p`` in the open unit interval."""
    pa = np.asarray(p, dtype=np.float64)
    if np.any(~((pa > 0.0) & (pa < 1.0))):
        raise DomainError("quantile requires 0 < p < 1")
    fam = model.family
    if fam is Family.PARETO:
        alpha, delta = model.params
        x = delta * (1.0 - pa) ** (-1.0 / alpha)
    elif fam is Family.EXPONENTIAL:
        (rate,) = model.params
        x = -np.log1p(-pa) / rate
    elif fam is Family.FRECHET:
        (alpha,) = model.params
        x = (-np.log(pa)) ** (-1.0 / alpha)
    elif fam is Family.LOGLOGISTIC:
        (alpha,) = model.params
        x = (pa / (1.0 - pa)) ** (1.0 / alpha)
    else:
        a, b = model.params
        x = special.inverse_reg_incomplete_beta(pa, a, b)
    return _unwrap(x, pa.ndim == 0)


def cdf(model: TailModel, x):
    xa = np.asarray(x, dtype=np.float64)
    fam = model.family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.PARETO:
            alpha, delta = model.params
            out = np.where(xa > delta, -np.expm1(alpha * np.log(delta / xa)), 0.0)
        elif fam is Family.EXPONENTIAL:
            (rate,) = model.params
            out = np.where(xa > 0, -np.expm1(-rate * xa), 0.0)
        elif fam is Family.FRECHET:
            (alpha,) = model.params
            out = np.where(xa > 0, np.exp(-(xa ** -alpha)), 0.0)
        elif fam is Family.LOGLOGISTIC:
            (alpha,) = model.params
            out = np.where(xa > 0, 1.0 / (1.0 + xa ** -alpha), 0.0)
        else:
            a, b = model.params
            out = special.reg_incomplete_beta(np.clip(xa, 0.0, 1.0), a, b)
    return _unwrap(np.asarray(out, dtype=np.float64), xa.ndim == 0)


def sf(model: TailModel, x):
    """Survival function ``1 - F(x)``, computed without cancellation."""
    xa = np.asarray(x, dtype=np.float64)
    fam = model.family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.PARETO:
            alpha, delta = model.params
            out = np.where(xa > delta, (delta / xa) ** alpha, 1.0)
        elif fam is Family.EXPONENTIAL:
            (rate,) = model.params
            out = np.where(xa > 0, np.exp(-rate * xa), 1.0)
        elif fam is Family.FRECHET:
            (alpha,) = model.params
            out = np.where(xa > 0, -np.expm1(-(xa ** -alpha)), 1.0)
        elif fam is Family.LOGLOGISTIC:
            (alpha,) = model.params
            out = np.where(xa > 0, 1.0 / (1.0 + xa**alpha), 1.0)
        else:
            a, b = model.params
            out = special.reg_incomplete_beta(1.0 - np.clip(xa, 0.0, 1.0), b, a)
    return _unwrap(np.asarray(out, dtype=np.float64), xa.ndim == 0)


def density(model: TailModel, x):
    """Density ``f(x)``; zero outside the support."""
    xa = np.asarray(x, dtype=np.float64)
    fam = model.family
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if fam is Family.PARETO:
            alpha, delta = model.params
            out = np.where(
                xa >= delta, alpha * delta**alpha / xa ** (alpha + 1.0), 0.0
            )
        elif fam is Family.EXPONENTIAL:
            (rate,) = model.params
            out = np.where(xa >= 0, rate * np.exp(-rate * xa), 0.0)
        elif fam is Family.FRECHET:
            (alpha,) = model.params
            out = np.where(
                xa > 0, alpha * xa ** (-alpha - 1.0) * np.exp(-(xa ** -alpha)), 0.0
            )
        elif fam is Family.LOGLOGISTIC:
            (alpha,) = model.params
            out = np.where(
                xa > 0,
                alpha * xa ** (alpha - 1.0) / (1.0 + xa**alpha) ** 2,
                0.0,
            )
        else:
            a, b = model.params
            lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
            inside = (xa > 0) & (xa < 1)
            xi = np.where(inside, xa, 0.5)
            out = np.where(
                inside,
                np.exp((a - 1.0) * np.log(xi) + (b - 1.0) * np.log1p(-xi) - lbeta),
                0.0,
            )
    out = np.nan_to_num(np.asarray(out, dtype=np.float64), nan=0.0)
    return _unwrap(out, xa.ndim == 0)


# --- random streams ---------------------------------------------------------


@dataclass(frozen=True)
class SeedSpec:
    """Key of one independent random stream."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = int(getattr(self, name))
            if not 0 <= v <= _UINT64_MASK:
                raise DomainError(f"{name} must be a 64-bit unsigned integer")
            object.__setattr__(self, name, v)

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def open_uniforms(seed: SeedSpec, n: int) -> np.ndarray:
    """``n`` uniforms on the open interval (0, 1).

    Exact zeros are rejected and redrawn from the same stream, so the
    output stays a deterministic function of the seed.
    """
    gen = seed.generator()
    u = gen.random(n)
    bad = u == 0.0
    while bad.any():
        u[bad] = gen.random(int(bad.sum()))
        bad = u == 0.0
    return u


def sample(model: TailModel, n: int, seed: SeedSpec) -> np.ndarray:
    """Draw ``n`` values by inverse transform of open-interval uniforms."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return np.asarray(quantile(model, open_uniforms(seed, int(n))))
