"""Deterministic Monte Carlo studies: bias/MSE, percentage points, power.

Three experiment types share one replicate engine:

* ``mse_bias_study`` - estimator error against the analytic varextropy of a
  reference distribution;
* ``critical_value_study`` - empirical percentage points of the test
  statistics under the uniform null;
* ``power_study`` - rejection rates under the alternative families A_k
  (concentrating mass near 0), B_k (near the center) and C_k (near both
  ends), each sampled by closed-form inverse CDF.

Every cell carries a Monte Carlo standard error.  Reports echo their full
configuration and are bit-reproducible from it: replicate r of a study
seeded with ``seed`` draws from ``rng_substream(seed, r)`` no matter how
replicates are batched or distributed (see ``_mc``).

Replicates whose sample ties exactly in floating point (never observed in
practice, probability ~0) are re-drawn from their own substream and counted
in the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _batch, _mc
from .errors import DomainError, MissingCriticalValue, UnsupportedFamily
from .estimators import analytic_varextropy
from .reference import ReferenceDistribution, from_label as reference_from_label
from .rng import rng_substream
from .uniformity import CriticalValueTable, calibrate_table, empirical_upper_quantile

__all__ = [
    "AlternativeFamily",
    "StudyConfig",
    "StudyCell",
    "StudyReport",
    "inverse_cdf_alternative",
    "sample_alternative",
    "mse_bias_study",
    "power_study",
    "critical_value_study",
    "run_study",
    "rng_substream",
    "ESTIMATOR_TO_KIND",
]

# paper-grid shape parameters; other k > 0 are allowed but flagged
_STANDARD_K = {"A": (1.5, 2.0), "B": (1.5, 2.0, 3.0), "C": (1.5, 2.0)}

ESTIMATOR_TO_KIND = {"VJV": "GV", "VJD": "GD", "VJB": "GB", "VJS": "GS", "VJQ": "GQ"}


@dataclass(frozen=True)
class AlternativeFamily:
    """Shape-k alternative on [0, 1] from family A, B or C."""

    family: str
    k: float

    def __post_init__(self):
        if self.family not in ("A", "B", "C"):
            raise UnsupportedFamily(f"alternative family must be A, B or C, got {self.family!r}")
        if not self.k > 0:
            raise DomainError(f"shape k must be positive, got {self.k}")

    @property
    def standard(self) -> bool:
        return self.k in _STANDARD_K[self.family]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        k = self.k
        if self.family == "A":
            return 1.0 - (1.0 - x) ** k
        if self.family == "B":
            return np.where(
                x <= 0.5,
                2.0 ** (k - 1) * x**k,
                1.0 - 2.0 ** (k - 1) * (1.0 - x) ** k,
            )
        return np.where(
            x <= 0.5,
            0.5 - 2.0 ** (k - 1) * (0.5 - x) ** k,
            0.5 + 2.0 ** (k - 1) * (x - 0.5) ** k,
        )

    def ppf(self, u):
        return inverse_cdf_alternative(self, u)

    def sample(self, rng, n):
        return self.ppf(rng.random(n))

    def label(self) -> str:
        return f"{self.family}({self.k:g})"


def alternative_from_label(label: str) -> AlternativeFamily:
    name, rest = label.strip().split("(", 1)
    return AlternativeFamily(name.strip(), float(rest.rstrip(")")))


def distribution_from_label(label: str):
    label = label.strip()
    if label[:1] in ("A", "B", "C") and "(" in label:
        return alternative_from_label(label)
    return reference_from_label(label)


def inverse_cdf_alternative(fam: AlternativeFamily, u):
    """Closed-form inverse CDF of the A/B/C alternatives on [0, 1]."""
    ua = np.asarray(u, dtype=float)
    if np.any(ua < 0.0) or np.any(ua > 1.0):
        raise DomainError("u must lie in [0, 1]")
    k = fam.k
    if fam.family == "A":
        out = 1.0 - (1.0 - ua) ** (1.0 / k)
    elif fam.family == "B":
        out = np.where(
            ua <= 0.5,
            (ua / 2.0 ** (k - 1)) ** (1.0 / k),
            1.0 - ((1.0 - ua) / 2.0 ** (k - 1)) ** (1.0 / k),
        )
    else:
        out = np.where(
            ua <= 0.5,
            0.5 - ((0.5 - ua) / 2.0 ** (k - 1)) ** (1.0 / k),
            0.5 + ((ua - 0.5) / 2.0 ** (k - 1)) ** (1.0 / k),
        )
    return float(out) if np.isscalar(u) or ua.ndim == 0 else out


def sample_alternative(fam: AlternativeFamily, n: int, stream: np.random.Generator):
    """n inverse-CDF draws from the alternative; values in [0, 1]."""
    from .sample import make_sample

    return make_sample(fam.sample(stream, n))


# ---------------------------------------------------------------------------
# study configuration and report


@dataclass(frozen=True)
class StudyConfig:
    """Echoable description of one study run.

    ``statistics`` holds estimator ids for mse studies and statistic kinds
    for power/critical studies.  ``distributions`` holds labels (see
    ``distribution_from_label``).  ``cal_reps``/``cal_seed`` control the
    calibration used by power studies when no tables are supplied; the
    calibration seed defaults to an offset of the study seed so power draws
    and calibration draws use disjoint substream families.
    """

    study_type: str
    statistics: tuple
    sample_sizes: tuple
    distributions: tuple = ()
    reps: int = 10_000
    seed: int = 1
    alpha: float | None = None
    workers: int = 1
    cal_reps: int | None = None
    cal_seed: int | None = None

    def __post_init__(self):
        if self.study_type not in ("mse", "power", "critical"):
            raise DomainError(f"unknown study type {self.study_type!r}")
        if self.reps < 1:
            raise DomainError(f"reps must be >= 1, got {self.reps}")
        for n in self.sample_sizes:
            if n < 2:
                raise DomainError(f"sample sizes must be >= 2, got {n}")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must be in (0,1), got {self.alpha}")

    def calibration(self):
        return (
            self.cal_reps if self.cal_reps is not None else self.reps,
            self.cal_seed if self.cal_seed is not None else self.seed + 1_000_003,
        )

    def to_dict(self) -> dict:
        return {
            "study_type": self.study_type,
            "statistics": list(self.statistics),
            "sample_sizes": list(self.sample_sizes),
            "distributions": list(self.distributions),
            "reps": self.reps,
            "seed": self.seed,
            "alpha": self.alpha,
            "workers": self.workers,
            "cal_reps": self.cal_reps,
            "cal_seed": self.cal_seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "StudyConfig":
        return StudyConfig(
            study_type=d["study_type"],
            statistics=tuple(d["statistics"]),
            sample_sizes=tuple(int(n) for n in d["sample_sizes"]),
            distributions=tuple(d.get("distributions", ())),
            reps=int(d.get("reps", 10_000)),
            seed=int(d.get("seed", 1)),
            alpha=d.get("alpha"),
            workers=int(d.get("workers", 1)),
            cal_reps=d.get("cal_reps"),
            cal_seed=d.get("cal_seed"),
        )


@dataclass(frozen=True)
class StudyCell:
    kind: str
    n: int
    distribution: str
    metric: str
    value: float
    mc_se: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "distribution": self.distribution,
            "metric": self.metric,
            "value": self.value,
            "mc_se": self.mc_se,
        }


@dataclass
class StudyReport:
    config: StudyConfig
    cells: list
    redraws: int = 0

    def cell(self, kind: str, n: int, distribution: str, metric: str) -> StudyCell:
        for c in self.cells:
            if (c.kind, c.n, c.distribution, c.metric) == (kind, n, distribution, metric):
                return c
        raise KeyError((kind, n, distribution, metric))

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "redraws": self.redraws,
            "cells": [c.to_dict() for c in self.cells],
        }


# ---------------------------------------------------------------------------
# the three studies


def mse_bias_study(cfg: StudyConfig) -> StudyReport:
    """Bias and MSE of estimators against the analytic varextropy."""
    cells = []
    redraws = 0
    kinds = [ESTIMATOR_TO_KIND[e.upper()] for e in cfg.statistics]
    for label in cfg.distributions:
        dist = distribution_from_label(label)
        if not isinstance(dist, ReferenceDistribution):
            raise DomainError(f"mse study needs reference distributions, got {label!r}")
        true_vj = analytic_varextropy(dist)
        for n in cfg.sample_sizes:
            values, rd = _mc.mc_statistics(kinds, dist.sample, n, cfg.reps, cfg.seed,
                                           workers=cfg.workers)
            redraws += rd
            for est, kind in zip(cfg.statistics, kinds):
                v = values[kind]
                err = v - true_vj
                bias = float(err.mean())
                mse = float((err * err).mean())
                cells.append(StudyCell(est.upper(), n, dist.label(), "bias", bias,
                                       float(v.std(ddof=1) / math.sqrt(cfg.reps))))
                cells.append(StudyCell(est.upper(), n, dist.label(), "mse", mse,
                                       float((err * err).std(ddof=1) / math.sqrt(cfg.reps))))
    return StudyReport(config=cfg, cells=cells, redraws=redraws)


def critical_value_study(cfg: StudyConfig) -> StudyReport:
    """Percentage points of the statistics under the uniform null.

    All requested kinds are evaluated on the same null samples per n (the
    substream depends only on (seed, replicate)), so one pass serves every
    kind and matches per-kind calibration bit-for-bit.
    """
    if cfg.alpha is None:
        raise DomainError("critical study needs alpha")
    kinds = [k.upper() for k in cfg.statistics]
    cells = []
    redraws = 0
    for n in cfg.sample_sizes:
        values, rd = _mc.mc_statistics(kinds, _mc.uniform_sampler, n, cfg.reps, cfg.seed,
                                       workers=cfg.workers)
        redraws += rd
        for kind in kinds:
            v = values[kind]
            c = empirical_upper_quantile(v, cfg.alpha)
            cells.append(StudyCell(kind, n, "uniform01", "critical", c,
                                   _quantile_se(v, cfg.alpha)))
    return StudyReport(config=cfg, cells=cells, redraws=redraws)


def _quantile_se(values: np.ndarray, alpha: float) -> float:
    """Distribution-free spread of the empirical quantile.

    Half the distance between the order statistics one binomial standard
    deviation either side of the quantile rank.
    """
    reps = values.shape[0]
    v = np.sort(values)
    k = int(np.ceil((1.0 - alpha) * reps)) - 1
    half = math.sqrt(reps * alpha * (1.0 - alpha))
    lo = int(np.clip(k - half, 0, reps - 1))
    hi = int(np.clip(k + half, 0, reps - 1))
    return float(0.5 * (v[hi] - v[lo]))


def power_study(cfg: StudyConfig, tables: dict | None = None) -> StudyReport:
    """Rejection rates under the A/B/C alternatives.

    ``tables`` maps statistic kind to a :class:`CriticalValueTable`; when
    omitted, tables are calibrated with ``cfg.calibration()``.
    """
    if cfg.alpha is None:
        raise DomainError("power study needs alpha")
    kinds = [k.upper() for k in cfg.statistics]
    if tables is None:
        cal_reps, cal_seed = cfg.calibration()
        tables = {
            kind: calibrate_table(kind, cfg.sample_sizes, cfg.alpha, cal_reps, cal_seed,
                                  workers=cfg.workers)
            for kind in kinds
        }
    for kind in kinds:
        if kind not in tables:
            raise MissingCriticalValue(kind)
    cells = []
    redraws = 0
    for label in cfg.distributions:
        alt = distribution_from_label(label)
        for n in cfg.sample_sizes:
            values, rd = _mc.mc_statistics(kinds, alt.sample, n, cfg.reps, cfg.seed,
                                           workers=cfg.workers)
            redraws += rd
            for kind in kinds:
                c = tables[kind].critical_value(n)
                p = float((values[kind] >= c).mean())
                se = math.sqrt(max(p * (1.0 - p), 0.0) / cfg.reps)
                cells.append(StudyCell(kind, n, alt.label(), "power", p, se))
    return StudyReport(config=cfg, cells=cells, redraws=redraws)


def run_study(cfg: StudyConfig, tables: dict | None = None) -> StudyReport:
    if cfg.study_type == "mse":
        return mse_bias_study(cfg)
    if cfg.study_type == "critical":
        return critical_value_study(cfg)
    return power_study(cfg, tables=tables)
