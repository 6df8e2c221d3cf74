"""Per-variable test statistics and two-sided p-values.

Two designs are covered: the pooled two-sample t test for a difference of
two group means, and the one-way F test for equality of k group means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ssamt.distributions import f_cdf, t_cdf
from ssamt.timeseries import GroupedSample

TWO_SAMPLE_T = "two-sample-t"
ONE_WAY_F = "one-way-F"


@dataclass(frozen=True)
class TestResult:
    variable_name: str
    statistic: float
    dof: tuple[float, ...]
    p_value: float
    kind: str

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        if any(d <= 0 for d in self.dof):
            raise ValueError(f"degrees of freedom must be positive, got {self.dof}")


def _group(values, label: str) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    if a.size < 2:
        raise ValueError(f"{label} needs at least 2 observations")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{label} contains non-finite values")
    return a


def two_sample_t(group1, group2, variable_name: str = "") -> TestResult:
    """Pooled two-sample t test of equal means.

    T = (mean1 - mean2) / (S_p * sqrt((n1 + n2) / (n1 * n2))) with the
    pooled variance S_p^2 on n1 + n2 - 2 degrees of freedom; the p-value
    is two-sided. Constant data (zero pooled variance) is an error.
    """
    y1 = _group(group1, "group1")
    y2 = _group(group2, "group2")
    n1, n2 = y1.size, y2.size
    dof = n1 + n2 - 2
    pooled = ((n1 - 1) * np.var(y1, ddof=1) + (n2 - 1) * np.var(y2, ddof=1)) / dof
    if pooled == 0.0:
        raise ValueError(f"{variable_name or 'variable'}: zero pooled variance (constant data)")
    t = float((y1.mean() - y2.mean()) / (math.sqrt(pooled) * math.sqrt((n1 + n2) / (n1 * n2))))
    p = min(1.0, 2.0 * (1.0 - t_cdf(abs(t), dof)))
    return TestResult(variable_name, t, (float(dof),), p, TWO_SAMPLE_T)


def one_way_f(sample: GroupedSample) -> TestResult:
    """One-way F test of equal means across k >= 2 groups.

    F is the between-group mean square over the within-group mean square,
    on (k - 1, N - k) degrees of freedom. Zero within-group variance is
    an error.
    """
    groups = [vals for _, vals in sample.groups]
    k = len(groups)
    n_total = sum(g.size for g in groups)
    grand = sum(float(g.sum()) for g in groups) / n_total
    ss_between = sum(g.size * (float(g.mean()) - grand) ** 2 for g in groups)
    ss_within = sum(float(np.sum((g - g.mean()) ** 2)) for g in groups)
    if ss_within == 0.0:
        raise ValueError(f"{sample.variable_name}: zero within-group variance")
    d1, d2 = float(k - 1), float(n_total - k)
    f = (ss_between / d1) / (ss_within / d2)
    p = 1.0 - f_cdf(f, d1, d2)
    return TestResult(sample.variable_name, float(f), (d1, d2), p, ONE_WAY_F)
