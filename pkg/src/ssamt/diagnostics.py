"""Quality metrics for denoising: relative errors against a known signal,
empirical signal-to-noise ratio, roughness, the combined decibel-scale
goodness score, and weighted (w-) correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ssamt.timeseries import TimeSeries

# roughness at or below this is treated as an exactly-smooth (affine) fit
ROUGHNESS_EPS = 1e-300


@dataclass(frozen=True)
class DenoisingScore:
    """Empirical SNR, roughness penalty, and the combined dB score.

    ``affine`` flags a reconstruction with zero roughness, where the
    score degenerates to +inf instead of a finite decibel value.
    """

    snr: float
    roughness: float
    goodness_db: float
    affine: bool = False


def _values(series, name="series") -> np.ndarray:
    if isinstance(series, TimeSeries):
        if series.has_missing:
            raise ValueError(f"{series.name!r} has missing values")
        return np.asarray(series.values, dtype=np.float64)
    values = np.asarray(series, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{name} has non-finite values")
    return values


def _matched(truth, est_a, est_b):
    f = _values(truth, "truth")
    a = _values(est_a, "est_a")
    b = _values(est_b, "est_b")
    if not (f.size == a.size == b.size):
        raise ValueError("all three series must have equal length")
    return f, a, b


def rrmse(truth, est_a, est_b) -> float:
    """Root-of-sum-of-squares error of est_a relative to est_b.

    Values below 1 mean est_a tracks the truth better than est_b, by
    (1 - value) * 100 percent.
    """
    f, a, b = _matched(truth, est_a, est_b)
    denom = math.sqrt(float(np.sum((f - b) ** 2)))
    if denom == 0.0:
        raise ValueError("baseline estimate equals the truth; relative error undefined")
    return math.sqrt(float(np.sum((f - a) ** 2))) / denom


def rmae(truth, est_a, est_b) -> float:
    """Sum-of-absolute-errors of est_a relative to est_b."""
    f, a, b = _matched(truth, est_a, est_b)
    denom = float(np.sum(np.abs(f - b)))
    if denom == 0.0:
        raise ValueError("baseline estimate equals the truth; relative error undefined")
    return float(np.sum(np.abs(f - a))) / denom


def snr(observed, denoised) -> float:
    """Empirical signal-to-noise ratio: sum of squared signal values over
    the (N-1)-denominator variance of the residuals."""
    y = _values(observed, "observed")
    f = _values(denoised, "denoised")
    if y.size != f.size:
        raise ValueError("observed and denoised must have equal length")
    residual = y - f
    variance = float(np.var(residual, ddof=1))
    if variance == 0.0:
        raise ValueError("residuals are constant; empirical variance is zero")
    return float(np.sum(f**2)) / variance


def roughness(series) -> float:
    """Sum of squared second differences; zero iff the series is affine."""
    f = _values(series)
    if f.size < 3:
        raise ValueError("roughness needs a series of length >= 3")
    second = f[2:] - 2.0 * f[1:-1] + f[:-2]
    return float(np.sum(second**2))


def goodness_of_denoising(observed, denoised) -> DenoisingScore:
    """Decibel-scale score 10*log10(SNR + 1/roughness); larger is better.

    The 1/roughness term rewards smooth reconstructions, counteracting
    the SNR's preference for overfitted ones. A perfectly smooth (affine)
    reconstruction yields +inf with the ``affine`` flag set.
    """
    s = snr(observed, denoised)
    rough = roughness(denoised)
    if rough <= ROUGHNESS_EPS:
        return DenoisingScore(s, rough, math.inf, affine=True)
    return DenoisingScore(s, rough, 10.0 * math.log10(s + 1.0 / rough))


def w_correlation(x, y, window: int) -> float:
    """Weighted correlation of two equal-length series.

    Position k (1-based) is weighted by its multiplicity in an L-window
    trajectory matrix, min(k, L, N - k + 1). Near-zero values mean the
    two series are nearly w-orthogonal (well separated).
    """
    a = _values(x, "x")
    b = _values(y, "y")
    if a.size != b.size:
        raise ValueError("series must have equal length")
    n = a.size
    if not 2 <= window <= n - 1:
        raise ValueError(f"window length {window} outside [2, {n - 1}]")
    k = np.arange(1, n + 1, dtype=np.float64)
    w = np.minimum(np.minimum(k, float(window)), n - k + 1.0)
    norm_a = math.sqrt(float(np.sum(w * a * a)))
    norm_b = math.sqrt(float(np.sum(w * b * b)))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("w-norm of an input is zero; correlation undefined")
    return float(np.sum(w * a * b)) / (norm_a * norm_b)
