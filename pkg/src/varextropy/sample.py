"""Canonical sample representation and order-statistic helpers.

A :class:`Sample` is the substrate of every estimator: a validated, sorted,
immutable vector of observations together with tie metadata.  The helpers
here implement the conventions every spacing-type estimator relies on:
index clamping at the boundaries (``X_(i) = X_(1)`` for ``i < 1`` and
``X_(i) = X_(n)`` for ``i > n``), the boundary weights ``c_i`` of the
two-sided windows, and the default window size ``m = floor(sqrt(n) + 0.5)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyOrSingleton,
    IndexOutOfRange,
    NonFiniteValue,
    WindowTooLarge,
    ZeroVariance,
)

__all__ = [
    "Sample",
    "WindowSpec",
    "make_sample",
    "order_statistic_clamped",
    "empirical_cdf",
    "default_window",
    "c_weights",
    "sample_std",
]


@dataclass(frozen=True)
class Sample:
    """Sorted observation vector with tie metadata.

    ``values`` is ascending, read-only, and free of NaN/infinity;
    ``tie_count`` is the number of adjacent equal pairs.
    """

    values: np.ndarray
    n: int
    has_ties: bool
    tie_count: int

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class WindowSpec:
    """Window size for spacing estimators.

    ``two_sided`` windows (gaps ``X_(i+m) - X_(i-m)``) require ``1 <= m < n/2``;
    one-sided windows (gaps ``X_(j+m) - X_(j)``) require ``1 <= m <= n-1``.
    """

    m: int
    two_sided: bool = True

    def validate(self, n: int) -> None:
        if self.two_sided:
            if not 1 <= self.m or not self.m < n / 2:
                raise WindowTooLarge(
                    f"two-sided window m={self.m} violates 1 <= m < n/2 for n={n}"
                )
        else:
            if not 1 <= self.m <= n - 1:
                raise WindowTooLarge(
                    f"one-sided window m={self.m} violates 1 <= m <= n-1 for n={n}"
                )


def make_sample(values) -> Sample:
    """Validate, sort and freeze a vector of observations.

    Input order is not retained; every downstream estimator is
    permutation-invariant.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size < 2:
        raise EmptyOrSingleton(f"need at least 2 observations, got {arr.size}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise NonFiniteValue(i, arr[i])
    srt = np.sort(arr)
    srt.flags.writeable = False
    ties = int(np.count_nonzero(np.diff(srt) == 0.0))
    return Sample(values=srt, n=int(srt.size), has_ties=ties > 0, tie_count=ties)


def order_statistic_clamped(s: Sample, i: int) -> float:
    """Return ``X_(i)`` with boundary clamping.

    ``i`` is 1-based; ``i < 1`` maps to ``X_(1)`` and ``i > n`` to ``X_(n)``.
    """
    if i < 1:
        return float(s.values[0])
    if i > s.n:
        return float(s.values[-1])
    return float(s.values[i - 1])


def empirical_cdf(s: Sample, x: float) -> float:
    """Right-continuous empirical distribution function at ``x``."""
    return float(np.searchsorted(s.values, x, side="right")) / s.n


def default_window(n: int, two_sided: bool = True) -> int:
    """Window-size heuristic ``m = floor(sqrt(n) + 0.5)``, clipped to bounds.

    Two-sided windows are clipped to ``ceil(n/2) - 1`` (so ``m < n/2`` holds
    strictly), one-sided windows to ``n - 1``.  The clipping rule for small
    ``n`` is our convention; the heuristic itself does not define one.
    """
    if n < 2:
        raise EmptyOrSingleton(f"need n >= 2, got {n}")
    m = int(math.floor(math.sqrt(n) + 0.5))
    if two_sided:
        cap = math.ceil(n / 2) - 1
    else:
        cap = n - 1
    return max(1, min(m, cap))


def c_weights(n: int, m: int, i: int | None = None):
    """Boundary weights of the two-sided window estimators.

    ``c_i = 1 + (i-1)/m`` for ``i <= m``, ``2`` on the middle block, and
    ``1 + (n-i)/m`` for ``i > n-m``.  With ``i=None`` the full length-``n``
    vector is returned.
    """
    WindowSpec(m, two_sided=True).validate(n)
    if i is not None:
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"i={i} outside 1..{n}")
        if i <= m:
            return 1.0 + (i - 1) / m
        if i <= n - m:
            return 2.0
        return 1.0 + (n - i) / m
    idx = np.arange(1, n + 1)
    c = np.full(n, 2.0)
    c[:m] = 1.0 + (idx[:m] - 1) / m
    c[n - m:] = 1.0 + (n - idx[n - m:]) / m
    return c


def sample_std(s: Sample) -> float:
    """Sample standard deviation with the n-1 divisor."""
    sd = float(np.std(s.values, ddof=1))
    if sd == 0.0:
        raise ZeroVariance("all observations are equal")
    return sd
