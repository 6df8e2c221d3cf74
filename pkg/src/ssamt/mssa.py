"""Multivariate SSA: joint decomposition of several series.

Each series contributes its own block of lagged vectors; the blocks are
concatenated column-wise into one stacked trajectory matrix which is
decomposed once. Reconstruction splits the matrix back into blocks and
diagonal-averages each block independently, so every output series keeps
its own length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ssamt.ssa import (
    ColumnSpan,
    TrajectoryMatrix,
    _resolve_rank,
    decompose,
    hankelize,
    reconstruct_group,
    sliding_windows,
)
from ssamt.timeseries import MultiSeries, TimeSeries


@dataclass(frozen=True)
class MssaPlan:
    """Column layout of a stacked trajectory matrix."""

    window_length: int
    series_lengths: tuple[int, ...]
    column_offsets: tuple[int, ...]

    @classmethod
    def for_lengths(cls, lengths, window: int) -> "MssaPlan":
        lengths = tuple(int(n) for n in lengths)
        if not lengths:
            raise ValueError("need at least one series")
        if not 2 <= window < min(lengths):
            raise ValueError(
                f"window length {window} outside [2, {min(lengths) - 1}] "
                f"for series lengths {lengths}"
            )
        offsets = []
        total = 0
        for n in lengths:
            offsets.append(total)
            total += n - window + 1
        return cls(window, lengths, tuple(offsets))

    @property
    def total_columns(self) -> int:
        return self.column_offsets[-1] + self.series_lengths[-1] - self.window_length + 1


def _complete_values(series: TimeSeries) -> np.ndarray:
    """Series values trimmed to the effective length; interior gaps are an error."""
    n = series.effective_length
    if n == 0:
        raise ValueError(f"series {series.name!r} is entirely missing")
    if series.missing[:n].any():
        raise ValueError(f"series {series.name!r} has missing values; impute first")
    return np.asarray(series.values[:n], dtype=np.float64)


def embed_multi(ms: MultiSeries, window: int) -> TrajectoryMatrix:
    """Stacked trajectory matrix: per-series Hankel blocks side by side.

    Requires 2 <= L < min_p N_p and complete series. column_spans records
    which columns belong to which series.
    """
    values = [_complete_values(s) for s in ms]
    plan = MssaPlan.for_lengths([v.size for v in values], window)
    blocks = [sliding_windows(v, window) for v in values]
    entries = np.hstack(blocks)
    spans = []
    for s, offset, block in zip(ms, plan.column_offsets, blocks):
        spans.append(ColumnSpan(s.name, offset, offset + block.shape[1]))
    return TrajectoryMatrix(entries, window, tuple(spans))


def mssa_denoise(ms: MultiSeries, window: int, rank=None) -> MultiSeries:
    """Joint rank-r denoising of all series through one stacked decomposition.

    The stacked matrix is decomposed once; the leading-r reconstruction is
    split by series block and each block is diagonal-averaged on its own.
    rank=None applies the singular value hard threshold to the joint
    spectrum. Series enter unscaled; square up magnitudes beforehand if
    the variables live on very different scales.
    """
    matrix = embed_multi(ms, window)
    dec = decompose(matrix)
    r = _resolve_rank(dec, rank)
    low_rank = reconstruct_group(dec, range(r))
    out = []
    for span in matrix.column_spans:
        out.append(TimeSeries(span.name, hankelize(low_rank[:, span.start : span.stop])))
    return MultiSeries(tuple(out))
