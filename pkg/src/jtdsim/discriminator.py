"""Two-sample distinguishability statistics for switching-current data.

roc_curve scans every observed value as a decision threshold (classify as
"signal present" when i_sw >= threshold) and traces (FPR, TPR). The area is
computed in exact integer arithmetic, which makes the trapezoid identical to
the Mann-Whitney rank statistic with half-weight ties: auc(p, p) = 0.5
exactly, and auc(a, b) + auc(b, a) = 1 for tie-free data.

Raw AUC of multi-peak distributions can fall below 0.5 (they are not
stochastically ordered), so the orientation-corrected auc_star = max(auc,
1 - auc) is the separability figure compared against detection thresholds.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class RocResult:
    """ROC points ordered by ascending FPR, from (0,0) to (1,1)."""

    points: np.ndarray
    auc: float
    n0: int
    n1: int

    def __post_init__(self):
        self.points.flags.writeable = False

    @property
    def auc_star(self) -> float:
        """Orientation-corrected separability max(auc, 1-auc)."""
        return max(self.auc, 1.0 - self.auc)


def _as_samples(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    return arr


def _threshold_counts(p0: np.ndarray, p1: np.ndarray):
    """Distinct thresholds plus, for each, the counts of samples >= threshold."""
    thresholds = np.unique(np.concatenate([p0, p1]))
    s0 = np.sort(p0)
    s1 = np.sort(p1)
    c0 = p0.size - np.searchsorted(s0, thresholds, side="left")
    c1 = p1.size - np.searchsorted(s1, thresholds, side="left")
    return thresholds, c0.astype(np.int64), c1.astype(np.int64)


def _exact_auc_num2(c0: np.ndarray, c1: np.ndarray) -> int:
    """Twice the unnormalized trapezoid area, as an exact integer.

    c0/c1 are ">= threshold" counts for ascending thresholds; in ascending-FPR
    order the staircase runs from the (0, 0) corner (threshold above all data)
    up to (n0, n1). int64 is exact here: the total is 2*n0*n1*auc <= 2*n0*n1.
    """
    a = np.concatenate([[0], c0[::-1]])
    b = np.concatenate([[0], c1[::-1]])
    return int(np.sum((a[1:] - a[:-1]) * (b[:-1] + b[1:])))


def _rank_num2(p0: np.ndarray, p1: np.ndarray) -> int:
    """Twice the Mann-Whitney count: pairs with p1 > p0 count 2, ties count 1."""
    s0 = np.sort(p0)
    below = np.searchsorted(s0, p1, side="left")
    at_or_below = np.searchsorted(s0, p1, side="right")
    return int(below.sum()) + int(at_or_below.sum())


def roc_curve(p0_samples, p1_samples) -> RocResult:
    """Threshold-scan ROC of signal-present (p1) against background (p0)."""
    p0 = _as_samples(p0_samples, "p0_samples")
    p1 = _as_samples(p1_samples, "p1_samples")
    thresholds, c0, c1 = _threshold_counts(p0, p1)
    num2 = _exact_auc_num2(c0, c1)
    rank2 = _rank_num2(p0, p1)
    if num2 != rank2:
        raise RuntimeError(
            f"internal AUC cross-check failed: trapezoid {num2} != rank {rank2}"
        )
    auc_value = float(num2) / float(2 * p0.size * p1.size)
    fpr = np.concatenate([[0.0], (c0 / p0.size)[::-1]])
    tpr = np.concatenate([[0.0], (c1 / p1.size)[::-1]])
    points = np.column_stack([fpr, tpr])
    return RocResult(points=points, auc=auc_value, n0=int(p0.size), n1=int(p1.size))


def auc(p0_samples, p1_samples) -> float:
    return roc_curve(p0_samples, p1_samples).auc


def auc_star(p0_samples, p1_samples) -> float:
    return roc_curve(p0_samples, p1_samples).auc_star


def d_kc(p0_samples, p1_samples) -> float:
    """Kumar-Carroll deflection |mean1 - mean0| / sqrt((var1 + var0)/2).

    Unbiased sample variances; returns inf when both variances vanish but the
    means differ, raises on the 0/0 case.
    """
    p0 = _as_samples(p0_samples, "p0_samples")
    p1 = _as_samples(p1_samples, "p1_samples")
    if p0.size < 2 or p1.size < 2:
        raise ValueError("d_kc needs at least 2 samples per set")
    numerator = abs(float(p1.mean()) - float(p0.mean()))
    pooled = 0.5 * (float(p0.var(ddof=1)) + float(p1.var(ddof=1)))
    if pooled == 0.0:
        if numerator == 0.0:
            raise ValueError("d_kc is 0/0 for identical zero-variance samples")
        return math.inf
    return numerator / math.sqrt(pooled)


class ConfusionRates(NamedTuple):
    tp: float
    fp: float
    fn: float
    tn: float


def confusion_rates(p0_samples, p1_samples, theta: float) -> ConfusionRates:
    """Classification rates at one threshold, as probabilities."""
    p0 = _as_samples(p0_samples, "p0_samples")
    p1 = _as_samples(p1_samples, "p1_samples")
    tp = float(np.count_nonzero(p1 >= theta)) / p1.size
    fp = float(np.count_nonzero(p0 >= theta)) / p0.size
    return ConfusionRates(tp=tp, fp=fp, fn=1.0 - tp, tn=1.0 - fp)


def write_roc_csv(roc: RocResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in roc.points:
            writer.writerow([format(fpr, ".17g"), format(tpr, ".17g")])


def roc_summary(roc: RocResult, d_kc_value: float | None = None) -> dict:
    return {
        "auc": roc.auc,
        "auc_star": roc.auc_star,
        "n0": roc.n0,
        "n1": roc.n1,
        "d_kc": None if d_kc_value is None else float(d_kc_value),
    }


def write_roc_summary(roc: RocResult, path, d_kc_value: float | None = None) -> None:
    Path(path).write_text(
        json.dumps(roc_summary(roc, d_kc_value), indent=2, sort_keys=True) + "\n"
    )
