"""Iterative SSA filling of missing values.

Gaps start at zero and are refreshed in cycles: denoise the filled
series, copy the reconstruction into the gap positions (observed entries
stay untouched), and repeat until the gap values move by at most ``tol``
or the iteration cap is hit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ssamt.ssa import ssa_denoise
from ssamt.timeseries import TimeSeries


@dataclass(frozen=True)
class ImputationResult:
    series: TimeSeries
    iterations: int
    converged: bool


def impute(
    series: TimeSeries,
    window: int,
    rank=None,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> ImputationResult:
    """Fill the missing entries of a series by repeated SSA filtering.

    Parameters
    ----------
    series : TimeSeries with at least one missing and at least L observed entries
    window : int
        Window length L with 2 <= L <= floor(N / 2).
    rank : int, "full", or None
        Rank passed to each denoising pass; None re-applies the singular
        value hard threshold on every iteration.
    tol : float
        Convergence threshold on the max absolute change of gap values.
    max_iter : int
        Iteration cap; on hitting it the last iterate is returned with
        ``converged=False`` rather than raising.

    Observed entries of the result equal the input bit-for-bit.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    gaps = np.asarray(series.missing, dtype=bool)
    if not gaps.any():
        raise ValueError(f"series {series.name!r}: nothing to impute")
    observed_count = int(np.count_nonzero(~gaps))
    if observed_count == 0:
        raise ValueError(f"series {series.name!r}: all entries missing")
    n = len(series)
    if not 2 <= window <= n // 2:
        raise ValueError(f"window length {window} outside [2, {n // 2}] for series of length {n}")
    if observed_count < window:
        raise ValueError(
            f"series {series.name!r}: only {observed_count} observed entries, need >= {window}"
        )

    filled = np.where(gaps, 0.0, series.values)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        smoothed = ssa_denoise(filled, window, rank).values
        change = float(np.max(np.abs(smoothed[gaps] - filled[gaps])))
        filled[gaps] = smoothed[gaps]
        if change <= tol:
            converged = True
            break
    return ImputationResult(TimeSeries(series.name, filled), iterations, converged)
