"""Uniformity goodness-of-fit tests on [0, 1] samples.

Five test statistics come straight from the varextropy estimators
(GV, GD, GB, GS, GQ); all of them converge to zero in probability exactly
when the data are standard uniform, so the critical region is one-sided:
reject when the statistic is at least the calibrated ``C_{1-alpha}``.

Seven competitor statistics are included for power comparisons: the
two-sided Kolmogorov-Smirnov distance and six varentropy-style statistics
(TV, TE, TD, TB, TC, TA) built from log-spacings, kernel densities and
local-linear slopes.  All twelve are large under the alternative.

Critical values come from seeded Monte Carlo: the empirical ``1-alpha``
quantile - the ``ceil((1-alpha)*reps)``-th order statistic - of the null
distribution of the statistic.  Calibration is deterministic given
``(kind, n, alpha, reps, seed)`` regardless of batching or worker count.

Composite nulls are handled by the probability integral transform with
parameters fitted by maximum likelihood; the classical caveat applies (the
null distribution of the test statistic is taken as the simple-null one,
ignoring the estimation effect).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _batch, _mc
from .errors import (
    DegenerateDensity,
    DomainError,
    MissingCriticalValue,
    NoConvergence,
    OutOfUnitInterval,
    TiedSpacings,
    UnsupportedFamily,
)
from .reference import ReferenceDistribution, a_distribution, exponential, normal, uniform01
from .sample import Sample, default_window, make_sample
from .estimators import estimate

__all__ = [
    "STAT_KINDS",
    "G_KINDS",
    "COMPETITOR_KINDS",
    "CriticalValueTable",
    "TestOutcome",
    "g_statistic",
    "ks_statistic",
    "competitor_statistic",
    "test_statistic",
    "calibrate_critical_value",
    "calibrate_table",
    "run_test",
    "probability_integral_transform",
    "fit_model",
]

G_KINDS = _batch.G_KINDS
COMPETITOR_KINDS = _batch.COMPETITOR_KINDS
STAT_KINDS = _batch.ALL_KINDS

_G_TO_ESTIMATOR = {"GV": "VJV", "GD": "VJD", "GB": "VJB", "GS": "VJS", "GQ": "VJQ"}

PIT_CLIP = 1e-12


@dataclass(frozen=True)
class TestOutcome:
    kind: str
    statistic: float
    critical_value: float
    alpha: float
    reject: bool


@dataclass
class CriticalValueTable:
    """Calibrated percentage points of one statistic at one level.

    ``entries`` maps sample size to ``C_{1-alpha}``; ``redraws`` counts the
    tie-voided Monte Carlo replicates per sample size (normally zero).
    """

    kind: str
    alpha: float
    entries: dict = field(default_factory=dict)
    reps: int = 0
    seed: int = 0
    redraws: dict = field(default_factory=dict)

    def critical_value(self, n: int) -> float:
        if n not in self.entries:
            raise MissingCriticalValue(n)
        return self.entries[n]


def _check_unit_interval(s: Sample) -> None:
    vals = s.values
    if vals[0] < 0.0:
        raise OutOfUnitInterval(0, float(vals[0]))
    if vals[-1] > 1.0:
        raise OutOfUnitInterval(s.n - 1, float(vals[-1]))


def g_statistic(kind: str, s: Sample) -> float:
    """One of the five varextropy test statistics with default tuning."""
    kind = kind.upper()
    if kind not in G_KINDS:
        raise UnsupportedFamily(f"not a G statistic: {kind!r}")
    _check_unit_interval(s)
    return estimate(_G_TO_ESTIMATOR[kind], s).value


def ks_statistic(s: Sample) -> float:
    """Two-sided Kolmogorov-Smirnov distance against the U(0,1) CDF."""
    _check_unit_interval(s)
    return float(_batch.ks_rows(s.values[None, :])[0])


def competitor_statistic(kind: str, s: Sample, m: int | None = None,
                         h: float | None = None) -> float:
    """One of the varentropy-style statistics TV, TE, TD, TB, TC, TA.

    ``m`` and ``h`` default to the shared window heuristic and Silverman
    bandwidth; overrides are for diagnostics and small-sample oracles.
    """
    kind = kind.upper()
    if kind == "KS":
        return ks_statistic(s)
    if kind not in ("TV", "TE", "TD", "TB", "TC", "TA"):
        raise UnsupportedFamily(f"not a competitor statistic: {kind!r}")
    _check_unit_interval(s)
    n = s.n
    x = s.values[None, :]
    if kind in ("TV", "TE", "TC"):
        mm = m if m is not None else default_window(n, two_sided=True)
        gaps = _batch.two_sided_gaps(x, mm)[0]
        bad = np.flatnonzero(gaps <= 0.0)
        if kind in ("TV", "TE") and bad.size:
            raise TiedSpacings(int(bad[0]), f"{kind}: zero window gap at index {int(bad[0])}")
        if kind == "TV":
            return float(_batch.tv_rows(x, mm)[0])
        if kind == "TE":
            return float(_batch.te_rows(x, mm)[0])
        with np.errstate(divide="raise", invalid="raise"):
            try:
                return float(_batch.tc_rows(x, mm)[0])
            except FloatingPointError:
                raise TiedSpacings(0, "TC: degenerate window (tied order statistics)")
    from .density import silverman_bandwidth
    from .sample import sample_std
    hh = h if h is not None else silverman_bandwidth(n, sample_std(s))
    ha = np.array([hh])
    with np.errstate(divide="raise"):
        try:
            if kind == "TD":
                return float(_batch.td_rows(x, ha)[0])
            if kind == "TB":
                return float(_batch.tb_rows(x, ha)[0])
            mm = m if m is not None else default_window(n, two_sided=True)
            return float(_batch.ta_rows(x, mm, ha)[0])
        except FloatingPointError:
            raise DegenerateDensity(f"{kind}: log of an underflowed density")


def test_statistic(kind: str, s: Sample) -> float:
    """Any of the twelve statistics by kind, with default tuning."""
    kind = kind.upper()
    if kind in G_KINDS:
        return g_statistic(kind, s)
    if kind == "KS":
        return ks_statistic(s)
    return competitor_statistic(kind, s)


# ---------------------------------------------------------------------------
# calibration


def empirical_upper_quantile(values: np.ndarray, alpha: float) -> float:
    """The ceil((1-alpha)*reps)-th order statistic of the null sample."""
    reps = values.shape[0]
    k = int(np.ceil((1.0 - alpha) * reps))
    k = min(max(k, 1), reps)
    return float(np.sort(values)[k - 1])


def calibrate_critical_value(kind: str, n: int, alpha: float, reps: int, seed: int,
                             workers: int = 1):
    """Monte Carlo critical value for one (kind, n) cell.

    Returns ``(critical_value, redraws)``.  Deterministic given
    ``(kind, n, alpha, reps, seed)``; replicates whose draws tie in binary64
    are re-drawn from their own substream and counted.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0,1), got {alpha}")
    if reps < 1:
        raise DomainError(f"reps must be >= 1, got {reps}")
    kind = kind.upper()
    if kind not in STAT_KINDS:
        raise UnsupportedFamily(f"unknown statistic kind {kind!r}")
    values, redraws = _mc.mc_statistics([kind], _mc.uniform_sampler, n, reps, seed,
                                        workers=workers)
    return empirical_upper_quantile(values[kind], alpha), redraws


def calibrate_table(kind: str, sizes, alpha: float, reps: int, seed: int,
                    workers: int = 1) -> CriticalValueTable:
    """Calibrate one statistic over several sample sizes."""
    table = CriticalValueTable(kind=kind.upper(), alpha=alpha, reps=reps, seed=seed)
    for n in sizes:
        c, rd = calibrate_critical_value(kind, n, alpha, reps, seed, workers=workers)
        table.entries[int(n)] = c
        table.redraws[int(n)] = rd
    return table


def run_test(kind: str, s: Sample, table: CriticalValueTable) -> TestOutcome:
    """Compute the statistic and compare against the table's entry for n.

    The critical region is closed: reject when statistic >= C.  The table
    must hold the exact sample size; no interpolation across n.
    """
    kind = kind.upper()
    if table.kind != kind:
        raise MissingCriticalValue(s.n)
    c = table.critical_value(s.n)
    stat = test_statistic(kind, s)
    return TestOutcome(kind=kind, statistic=stat, critical_value=c,
                       alpha=table.alpha, reject=bool(stat >= c))


# ---------------------------------------------------------------------------
# probability integral transform and model fitting


def probability_integral_transform(values, model: ReferenceDistribution) -> Sample:
    """Map data through the model CDF onto [0, 1] and sort.

    Exact 0/1 images (possible in the far tails) are nudged into the open
    interval by 1e-12 so downstream spacing statistics stay defined.
    """
    arr = np.asarray(values, dtype=float)
    lo, hi = model.support()
    if model.family == "a":
        bad = np.flatnonzero(arr <= 0.0)
        if bad.size:
            raise DomainError(
                f"value {arr[bad[0]]!r} outside the a-distribution support (x > 0)"
            )
    elif np.any(arr < lo) or np.any(arr > hi):
        bad = np.flatnonzero((arr < lo) | (arr > hi))
        raise DomainError(f"value {arr[bad[0]]!r} outside the {model.family} support")
    u = np.sort(model.cdf(arr))
    u = np.where(u <= 0.0, PIT_CLIP, u)
    u = np.where(u >= 1.0, 1.0 - PIT_CLIP, u)
    return make_sample(u)


def fit_model(family: str, values) -> ReferenceDistribution:
    """Maximum-likelihood fit of one family to raw data.

    normal: sample mean and n-1 standard deviation; exponential: rate 1/mean;
    a-distribution: bracketed 1-d search on the profile log-likelihood
    (relative tolerance 1e-6); uniform01: no parameters.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise NoConvergence("need at least 2 observations to fit")
    family = family.lower()
    if family in ("uniform", "uniform01"):
        return uniform01()
    if family == "normal":
        sd = float(np.std(arr, ddof=1))
        if sd == 0.0:
            raise NoConvergence("zero variance: normal fit is degenerate")
        return normal(float(np.mean(arr)), sd)
    if family == "exponential":
        if np.any(arr < 0.0):
            raise DomainError("exponential fit needs nonnegative data")
        mean = float(np.mean(arr))
        if mean <= 0.0:
            raise NoConvergence("zero mean: exponential fit is degenerate")
        return exponential(1.0 / mean)
    if family == "a":
        if np.any(arr <= 0.0):
            raise DomainError("a-distribution fit needs strictly positive data")

        def negll(beta):
            if beta <= 0.0:
                return np.inf
            e = np.exp(beta / arr)
            return -float(np.sum((1.0 - e) / beta + beta / arr - 2.0 * np.log(arr)))

        hi = float(10.0 * np.max(arr))
        while negll(hi) < negll(0.9 * hi) and hi < 1e12:
            hi *= 10.0
        res = minimize_scalar(negll, bounds=(1e-8, hi), method="bounded",
                              options={"xatol": 1e-6 * hi})
        if not res.success or not np.isfinite(res.fun):
            raise NoConvergence("a-distribution likelihood search failed")
        # polish with a relative tolerance around the bounded solution
        res = minimize_scalar(negll, bounds=(0.5 * res.x, 2.0 * res.x),
                              method="bounded", options={"xatol": 1e-7 * res.x})
        return a_distribution(float(res.x))
    raise UnsupportedFamily(f"cannot fit family {family!r}")
