"""Series containers and CSV ingestion/emission for the pipeline.

All numbers travel as float64. Missing observations are carried as an
explicit boolean mask; a masked position's stored value is never used by
any computation. CSV round trips are exact: values are written with
shortest round-trip decimal formatting and missing entries as "NA".
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

MISSING_MARKERS = frozenset({"", "na", "nan"})
MISSING_OUT = "NA"


class CsvFormatError(ValueError):
    """Raised when a CSV file violates the expected layout."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One named, ordered sequence of real observations.

    ``missing`` marks unobserved positions; the stored value there is
    ignored everywhere downstream (we keep NaN for safety).
    """

    name: str
    values: np.ndarray
    missing: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise ValueError(f"series {self.name!r}: need a 1-d sequence of length >= 1")
        if self.missing is None:
            missing = np.zeros(values.size, dtype=bool)
        else:
            missing = np.asarray(self.missing, dtype=bool)
        if missing.shape != values.shape:
            raise ValueError(f"series {self.name!r}: missing mask length != values length")
        if not np.all(np.isfinite(values[~missing])):
            raise ValueError(f"series {self.name!r}: non-finite value at an observed position")
        values = values.copy()
        values[missing] = np.nan
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "missing", _readonly(missing))

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.missing, other.missing)
            and np.array_equal(self.values[~self.missing], other.values[~other.missing])
        )

    @property
    def has_missing(self) -> bool:
        return bool(self.missing.any())

    @property
    def effective_length(self) -> int:
        """Number of rows up to (and including) the last non-missing entry."""
        observed = np.flatnonzero(~self.missing)
        return int(observed[-1]) + 1 if observed.size else 0

    def observed(self) -> np.ndarray:
        """Values at non-missing positions, in order."""
        return self.values[~self.missing]


@dataclass(frozen=True, eq=False)
class MultiSeries:
    """An ordered collection of uniquely named series (lengths may differ)."""

    series: tuple[TimeSeries, ...]

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise ValueError("MultiSeries needs at least one series")
        names = [s.name for s in series]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate series names: {dupes}")
        object.__setattr__(self, "series", series)

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(self.series)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.series == other.series

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.series)

    def get(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class GroupedSample:
    """Observations of one variable split into labelled groups."""

    variable_name: str
    groups: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self):
        groups = tuple((label, _readonly(np.asarray(vals, dtype=np.float64))) for label, vals in self.groups)
        if len(groups) < 2:
            raise ValueError(f"{self.variable_name!r}: need at least 2 groups")
        for label, vals in groups:
            if vals.size < 2:
                raise ValueError(f"{self.variable_name!r}: group {label!r} has fewer than 2 observations")
            if not np.all(np.isfinite(vals)):
                raise ValueError(f"{self.variable_name!r}: group {label!r} contains non-finite values")
        object.__setattr__(self, "groups", groups)


@dataclass(frozen=True)
class CsvOptions:
    """Parsing options for :func:`read_csv`.

    skip_index drops the leading index/time column; exclude drops named
    columns (e.g. label columns that are not numeric series).
    """

    skip_index: bool = False
    exclude: tuple[str, ...] = field(default_factory=tuple)


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    header, data = rows[0], rows[1:]
    width = len(header)
    for i, row in enumerate(data, start=1):
        if len(row) != width:
            raise CsvFormatError(f"{path}: row {i} has {len(row)} cells, expected {width}")
    return header, data


def _apply_options(header, data, options: CsvOptions):
    keep = list(range(len(header)))
    if options.skip_index:
        keep = keep[1:]
    keep = [j for j in keep if header[j] not in options.exclude]
    return [header[j] for j in keep], [[row[j] for j in keep] for row in data]


def read_csv(path, options: CsvOptions = CsvOptions()) -> MultiSeries:
    """Read one series per column from a headed, comma-delimited file.

    Empty cells, "NA" and "NaN" (case-insensitive) mark missing entries.
    Raises :class:`CsvFormatError` on duplicate header names, on files
    without data rows, and on cells that do not parse as decimal numbers
    (the error names the offending data row and column).
    """
    header, data = _read_rows(path)
    header, data = _apply_options(header, data, options)
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise CsvFormatError(f"{path}: duplicate header names: {dupes}")
    if not data:
        raise CsvFormatError(f"{path}: empty data")

    n = len(data)
    columns = []
    for j, name in enumerate(header):
        values = np.empty(n, dtype=np.float64)
        mask = np.zeros(n, dtype=bool)
        for i, row in enumerate(data):
            cell = row[j].strip()
            if cell.lower() in MISSING_MARKERS:
                values[i] = np.nan
                mask[i] = True
                continue
            try:
                values[i] = float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"{path}: malformed numeric cell {cell!r} at row {i + 1}, column {name!r}"
                ) from None
            if not np.isfinite(values[i]):
                raise CsvFormatError(
                    f"{path}: non-finite value {cell!r} at row {i + 1}, column {name!r}"
                )
        columns.append(TimeSeries(name, values, mask))
    return MultiSeries(tuple(columns))


def read_label_column(path, column: str, options: CsvOptions = CsvOptions()) -> list[str]:
    """Return the raw string entries of one column (for group labels)."""
    header, data = _read_rows(path)
    if options.skip_index:
        header, data = header[1:], [row[1:] for row in data]
    if column not in header:
        raise CsvFormatError(f"{path}: no column named {column!r}")
    j = header.index(column)
    return [row[j].strip() for row in data]


def _format(value: float) -> str:
    # repr() is shortest round-trip decimal for float64
    return repr(float(value))


def write_csv(ms: MultiSeries, path) -> None:
    """Write series as columns; re-reading reproduces ``ms`` exactly.

    Shorter series are padded with the missing marker so the file stays
    rectangular.
    """
    n = max(len(s) for s in ms)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ms.names)
        for i in range(n):
            row = []
            for s in ms:
                if i >= len(s) or s.missing[i]:
                    row.append(MISSING_OUT)
                else:
                    row.append(_format(s.values[i]))
            writer.writerow(row)
