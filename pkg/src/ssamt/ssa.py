"""Basic singular spectrum analysis of a single series.

The four classical steps: embed the series into an L x K Hankel
trajectory matrix, take its SVD, group leading components, and project
back to a series by diagonal (anti-diagonal) averaging. Composing the
steps with the leading-r group gives rank-based denoising.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from ssamt.timeseries import TimeSeries

# sigma_i below sigma_1 * RANK_TOL * max(L, K) counts as zero rank
RANK_TOL = 1e-12


class ColumnSpan(NamedTuple):
    """Half-open column range [start, stop) holding one series' lagged vectors."""

    name: str
    start: int
    stop: int


@dataclass(frozen=True)
class TrajectoryMatrix:
    """L x K matrix of L-lagged windows (Hankel, or stacked Hankel blocks)."""

    entries: np.ndarray
    window_length: int
    column_spans: tuple[ColumnSpan, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2:
            raise ValueError("trajectory matrix must be 2-d")
        if entries.shape[0] != self.window_length:
            raise ValueError("row count must equal the window length")
        e = entries.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True)
class SsaDecomposition:
    """Ordered singular triples (sigma_i, U_i, V_i) of a trajectory matrix.

    sigma is non-increasing and strictly positive; columns of U and V are
    orthonormal. ``rank`` is the number of retained triples.
    """

    sigma: np.ndarray
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        for name in ("sigma", "U", "V"):
            a = np.asarray(getattr(self, name), dtype=np.float64).copy()
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def rank(self) -> int:
        return int(self.sigma.size)

    def triples(self):
        """Iterate (singular value, left vector, right vector)."""
        for i in range(self.rank):
            yield float(self.sigma[i]), self.U[:, i], self.V[:, i]


@dataclass(frozen=True)
class Grouping:
    """Disjoint, non-empty sets of component indices (0-based, within 0..d-1)."""

    groups: tuple[frozenset[int], ...]

    def __post_init__(self):
        groups = tuple(frozenset(g) for g in self.groups)
        seen: set[int] = set()
        for g in groups:
            if not g:
                raise ValueError("empty group")
            if g & seen:
                raise ValueError(f"groups overlap at indices {sorted(g & seen)}")
            seen |= g
        if seen and min(seen) < 0:
            raise ValueError("component indices must be >= 0")
        object.__setattr__(self, "groups", groups)

    def validate_rank(self, d: int) -> None:
        for g in self.groups:
            bad = [i for i in g if i >= d]
            if bad:
                raise ValueError(f"component indices {sorted(bad)} out of range for rank {d}")


def _series_values(series, require_complete: bool = True) -> np.ndarray:
    if isinstance(series, TimeSeries):
        if require_complete and series.has_missing:
            raise ValueError(f"series {series.name!r} has missing values; impute first")
        return np.asarray(series.values, dtype=np.float64)
    values = np.asarray(series, dtype=np.float64)
    if require_complete and not np.all(np.isfinite(values)):
        raise ValueError("series has non-finite values")
    return values


def sliding_windows(values: np.ndarray, window: int) -> np.ndarray:
    """L x K matrix whose column j is values[j : j + L]."""
    return np.lib.stride_tricks.sliding_window_view(values, window).T.copy()


def embed(series, window: int) -> TrajectoryMatrix:
    """Build the Hankel trajectory matrix of a complete series.

    Parameters
    ----------
    series : TimeSeries or 1-d array, without missing values
    window : int
        Window length L with 2 <= L <= floor(N / 2).
    """
    values = _series_values(series)
    n = values.size
    if not 2 <= window <= n // 2:
        raise ValueError(f"window length {window} outside [2, {n // 2}] for series of length {n}")
    name = series.name if isinstance(series, TimeSeries) else ""
    entries = sliding_windows(values, window)
    span = ColumnSpan(name, 0, entries.shape[1])
    return TrajectoryMatrix(entries, window, (span,))


def decompose(matrix) -> SsaDecomposition:
    """SVD of a trajectory matrix, truncated at the numerical rank.

    Singular vectors are sign-fixed so the first nonzero coordinate of
    each left vector is positive, which makes results reproducible.
    """
    entries = matrix.entries if isinstance(matrix, TrajectoryMatrix) else np.asarray(matrix, float)
    rows, cols = entries.shape
    try:
        u, s, vt = np.linalg.svd(entries, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD did not converge on a {rows}x{cols} trajectory matrix") from exc
    if s.size and s[0] > 0.0:
        d = int(np.count_nonzero(s > s[0] * RANK_TOL * max(rows, cols)))
    else:
        d = 0
    u, s, v = u[:, :d], s[:d], vt[:d].T
    for i in range(d):
        lead = np.flatnonzero(np.abs(u[:, i]) > 1e-12)
        if lead.size and u[lead[0], i] < 0.0:
            u[:, i] = -u[:, i]
            v[:, i] = -v[:, i]
    return SsaDecomposition(s, u, v)


def reconstruct_group(dec: SsaDecomposition, indices: Iterable[int]) -> np.ndarray:
    """Sum of the rank-one matrices sigma_i U_i V_i^T over ``indices`` (0-based)."""
    idx = sorted(set(int(i) for i in indices))
    if idx and (idx[0] < 0 or idx[-1] >= dec.rank):
        raise ValueError(f"component indices must lie in [0, {dec.rank - 1}]")
    if not idx:
        return np.zeros((dec.U.shape[0], dec.V.shape[0]))
    return (dec.U[:, idx] * dec.sigma[idx]) @ dec.V[:, idx].T


def hankelize(matrix: np.ndarray) -> np.ndarray:
    """Series of length L + K - 1 whose n-th entry is the mean over the
    anti-diagonal {(i, j) : i + j = n} of the matrix."""
    m = np.asarray(matrix, dtype=np.float64)
    rows, cols = m.shape
    n = rows + cols - 1
    out = np.zeros(n)
    counts = np.zeros(n)
    for i in range(rows):
        out[i : i + cols] += m[i]
        counts[i : i + cols] += 1.0
    return out / counts


def default_rank(dec: SsaDecomposition) -> int:
    """Signal rank by optimal singular value hard thresholding.

    Keeps components whose singular value exceeds omega(beta) times the
    median of the full L x K spectrum (Gavish-Donoho threshold for
    unknown noise level, beta the aspect ratio). The median is taken
    over all min(L, K) singular values including the truncated zeros, so
    noise-free low-rank signals keep exactly their rank. Returns at
    least 1 for a non-empty decomposition.
    """
    if dec.rank == 0:
        raise ValueError("decomposition has rank 0; no component to keep")
    rows, cols = dec.U.shape[0], dec.V.shape[0]
    spectrum = np.zeros(min(rows, cols))
    spectrum[: dec.rank] = dec.sigma
    beta = min(rows, cols) / max(rows, cols)
    omega = 0.56 * beta**3 - 0.95 * beta**2 + 1.82 * beta + 1.43
    tau = omega * float(np.median(spectrum))
    return max(1, int(np.count_nonzero(dec.sigma > tau)))


def _resolve_rank(dec: SsaDecomposition, rank) -> int:
    if rank is None:
        return default_rank(dec)
    if rank == "full":
        return dec.rank
    r = int(rank)
    if not 1 <= r <= dec.rank:
        raise ValueError(f"rank {r} outside [1, {dec.rank}]")
    return r


def ssa_denoise(series, window: int, rank=None) -> TimeSeries:
    """Rank-r SSA reconstruction of a series (embed, SVD, leading-r group,
    diagonal averaging).

    Parameters
    ----------
    series : TimeSeries or 1-d array, without missing values
    window : int
        Window length L with 2 <= L <= floor(N / 2).
    rank : int, "full", or None
        Number of leading components kept. None applies the hard
        threshold of :func:`default_rank`; "full" keeps everything.
    """
    matrix = embed(series, window)
    dec = decompose(matrix)
    r = _resolve_rank(dec, rank)
    values = hankelize(reconstruct_group(dec, range(r)))
    name = series.name if isinstance(series, TimeSeries) else ""
    return TimeSeries(name, values)
