"""Five FWER-controlling multiple test procedures.

Single-step: Bonferroni (threshold alpha/m) and Sidak
(1 - (1-alpha)^(1/m)). Step-down: Holm and the Sidak step-down, which
scan p-values from the smallest upward and stop at the first
non-rejection. Step-up: Hochberg, which scans from the largest p-value
downward and rejects everything below the first hit.

All procedures use the same strict comparison, reject iff p < threshold.
Reports carry the per-hypothesis comparison thresholds (in the original
hypothesis order) rather than adjusted p-values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BONFERRONI = "bonferroni"
HOLM = "holm"
SIDAK_SS = "sidak_ss"
SIDAK_SD = "sidak_sd"
HOCHBERG = "hochberg"


@dataclass(frozen=True)
class MtpReport:
    """Decisions of one procedure at level alpha; True means reject."""

    procedure: str
    alpha: float
    decisions: tuple[bool, ...]
    rejection_count: int
    adjusted_thresholds: tuple[float, ...]

    def __post_init__(self):
        if self.rejection_count != sum(self.decisions):
            raise ValueError("rejection_count does not match decisions")


def _checked(p_values, alpha: float) -> np.ndarray:
    p = np.asarray(p_values, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("need a non-empty 1-d list of p-values")
    if np.any((p < 0.0) | (p > 1.0) | np.isnan(p)):
        raise ValueError("p-values must lie in [0, 1]")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha {alpha} outside (0, 1)")
    return p


def _report(name, alpha, decisions, thresholds) -> MtpReport:
    return MtpReport(
        procedure=name,
        alpha=float(alpha),
        decisions=tuple(bool(x) for x in decisions),
        rejection_count=int(np.count_nonzero(decisions)),
        adjusted_thresholds=tuple(float(t) for t in thresholds),
    )


def bonferroni(p_values, alpha: float) -> MtpReport:
    """Reject hypothesis i iff p_i < alpha / m."""
    p = _checked(p_values, alpha)
    threshold = alpha / p.size
    return _report(BONFERRONI, alpha, p < threshold, np.full(p.size, threshold))


def sidak_ss(p_values, alpha: float) -> MtpReport:
    """Single-step Sidak: reject iff p_i < 1 - (1 - alpha)^(1/m)."""
    p = _checked(p_values, alpha)
    threshold = -np.expm1(np.log1p(-alpha) / p.size)
    return _report(SIDAK_SS, alpha, p < threshold, np.full(p.size, threshold))


def _step_down(name, p, alpha, thresholds_sorted) -> MtpReport:
    # stable sort keeps equal p-values in original hypothesis order
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    reject_sorted = np.zeros(p.size, dtype=bool)
    for j in range(p.size):
        if sorted_p[j] < thresholds_sorted[j]:
            reject_sorted[j] = True
        else:
            break
    decisions = np.zeros(p.size, dtype=bool)
    decisions[order] = reject_sorted
    thresholds = np.zeros(p.size)
    thresholds[order] = thresholds_sorted
    return _report(name, alpha, decisions, thresholds)


def holm(p_values, alpha: float) -> MtpReport:
    """Step-down Bonferroni: the j-th smallest p-value is compared with
    alpha / (m - j + 1); the scan stops at the first non-rejection."""
    p = _checked(p_values, alpha)
    m = p.size
    thresholds = alpha / (m - np.arange(m))
    return _step_down(HOLM, p, alpha, thresholds)


def sidak_sd(p_values, alpha: float) -> MtpReport:
    """Step-down Sidak: thresholds 1 - (1 - alpha)^(1 / (m - j + 1))."""
    p = _checked(p_values, alpha)
    m = p.size
    thresholds = -np.expm1(np.log1p(-alpha) / (m - np.arange(m)))
    return _step_down(SIDAK_SD, p, alpha, thresholds)


def hochberg(p_values, alpha: float) -> MtpReport:
    """Step-up: scan from the largest p-value (threshold alpha / 1) down to
    the smallest (alpha / m); the first p-value under its threshold is
    rejected together with every smaller one."""
    p = _checked(p_values, alpha)
    m = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    thresholds_sorted = alpha / (m - np.arange(m))
    hits = np.flatnonzero(sorted_p < thresholds_sorted)
    cutoff = hits[-1] + 1 if hits.size else 0
    reject_sorted = np.arange(m) < cutoff
    decisions = np.zeros(m, dtype=bool)
    decisions[order] = reject_sorted
    thresholds = np.zeros(m)
    thresholds[order] = thresholds_sorted
    return _report(HOCHBERG, alpha, decisions, thresholds)


PROCEDURES = {
    BONFERRONI: bonferroni,
    HOLM: holm,
    SIDAK_SS: sidak_ss,
    SIDAK_SD: sidak_sd,
    HOCHBERG: hochberg,
}
