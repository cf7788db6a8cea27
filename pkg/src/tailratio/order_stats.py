"""Ordered samples with 1-indexed order-statistic access."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .distributions import SeedSpec
from .errors import (
    EmptySample,
    IncompatibleSampleSize,
    IndexOutOfRange,
    NonFiniteEntry,
    NonPositiveEntry,
)


class OrderedSample:
    """Immutable ascending sample of strictly positive observations.

    ``sample[i]`` follows the usual ``X_(i,n)`` convention: ``i`` runs from 1
    to ``n``.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise EmptySample("sample is empty")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteEntry("sample contains non-finite values")
        if np.any(arr <= 0):
            bad = arr[arr <= 0][0]
            raise NonPositiveEntry(f"sample contains a nonpositive value ({bad!r})")
        arr = np.sort(arr, kind="stable")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return order_stat(self, i)

    def __repr__(self):
        return f"OrderedSample(n={self.n})"

    def scaled(self, c: float) -> "OrderedSample":
        return OrderedSample(self._values * c)


def make_ordered(raw) -> OrderedSample:
    if isinstance(raw, OrderedSample):
        return raw
    return OrderedSample(raw)


def order_stat(sample: OrderedSample, i: int) -> float:
    """The ``i``-th smallest value, ``1 <= i <= n``."""
    if not 1 <= i <= sample.n:
        raise IndexOutOfRange(f"order statistic index {i} outside 1..{sample.n}")
    return float(sample.values[i - 1])


class Design(NamedTuple):
    k: int
    lower_index: int
    upper_index: int


def design_indices(n: int, s: int) -> Design:
    """Indices ``(k, k*s)`` of the two order statistics for ``n = (s+1)k - 1``."""
    if s < 2:
        raise ValueError(f"s must be at least 2, got {s}")
    if n < 2:
        raise IncompatibleSampleSize(f"n must be at least 2, got {n}")
    k, rem = divmod(n + 1, s + 1)
    if rem:
        raise IncompatibleSampleSize(
            f"n + 1 = {n + 1} is not divisible by s + 1 = {s + 1}"
        )
    return Design(k, k, k * s)


def compatible_size(n: int, s: int) -> int:
    """Largest ``m <= n`` of the form ``(s+1)k - 1`` with ``k >= 1``."""
    k = (n + 1) // (s + 1)
    if k < 1:
        raise IncompatibleSampleSize(
            f"need at least {s} observations for s = {s}, got {n}"
        )
    return (s + 1) * k - 1


def truncate_to_design(raw, s: int, seed: SeedSpec) -> tuple[OrderedSample, int]:
    """Drop observations at random until the size fits ``(s+1)k - 1``.

    Returns the ordered remainder and the number of discarded values. Which
    observations go is decided by `seed`, never by their rank.
    """
    arr = np.asarray(raw, dtype=np.float64).ravel()
    keep = compatible_size(arr.size, s)
    dropped = arr.size - keep
    if dropped:
        idx = seed.generator().permutation(arr.size)[:keep]
        arr = arr[np.sort(idx)]
    return OrderedSample(arr), dropped
