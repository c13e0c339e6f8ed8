"""Shared test utilities."""

import numpy as np
from scipy.signal import find_peaks

from jtdsim import histogram

PLOT_RANGE = (0.8, 1.02)
PLOT_BINS = 200


def count_modes(samples, n_bins=PLOT_BINS, value_range=PLOT_RANGE):
    """Histogram modes: local maxima whose prominence beats 3x Poisson noise.

    A peak of count c with base b (peak minus prominence) is significant when
    c - b > 3*sqrt(c + b).
    """
    _, counts = histogram(samples, n_bins, value_range)
    peaks, props = find_peaks(counts, prominence=0)
    significant = 0
    for peak, prominence in zip(peaks, props["prominences"]):
        c_peak = int(counts[peak])
        c_base = c_peak - int(prominence)
        if prominence >= 3.0 * np.sqrt(c_peak + c_base):
            significant += 1
    return significant


def ks_distance(samples, cdf_values):
    """One-sample KS statistic against a model CDF evaluated at the samples."""
    s = np.sort(np.asarray(samples, dtype=float))
    order = np.argsort(np.asarray(samples, dtype=float))
    f = np.asarray(cdf_values, dtype=float)[order]
    n = s.size
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return max(upper, lower)


def pair_count_auc(p0, p1):
    """O(n0*n1) Mann-Whitney oracle: wins + half ties over all cross pairs."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    total = 0.0
    for x in p1:
        total += np.count_nonzero(x > p0) + 0.5 * np.count_nonzero(x == p0)
    return total / (p0.size * p1.size)
