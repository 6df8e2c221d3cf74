"""SSA-based denoising/imputation of time series plus FWER-controlled multiple testing.

The package implements a two-stage analysis pipeline:

1. preprocess noisy (possibly multivariate, possibly gappy) series with
   singular spectrum analysis -- univariate SSA, multivariate MSSA, or
   iterative SSA imputation of missing values;
2. test one hypothesis per variable (pooled two-sample t or one-way F)
   and control the family-wise error rate with one of five classical
   procedures (Bonferroni, Holm, Sidak single-step/step-down, Hochberg).

Denoising quality is scored with an empirical signal-to-noise ratio
penalized by a roughness term, and with the weighted correlation between
reconstruction and residual. A seeded Monte Carlo harness measures
reconstruction accuracy on four synthetic signal models.
"""

from ssamt.timeseries import (
    CsvOptions,
    CsvFormatError,
    GroupedSample,
    MultiSeries,
    TimeSeries,
    read_csv,
    read_label_column,
    write_csv,
)
from ssamt.ssa import (
    SsaDecomposition,
    TrajectoryMatrix,
    decompose,
    default_rank,
    embed,
    hankelize,
    reconstruct_group,
    ssa_denoise,
)
from ssamt.mssa import MssaPlan, embed_multi, mssa_denoise
from ssamt.diagnostics import (
    DenoisingScore,
    goodness_of_denoising,
    rmae,
    roughness,
    rrmse,
    snr,
    w_correlation,
)
from ssamt.imputation import ImputationResult, impute
from ssamt.distributions import f_cdf, regularized_incomplete_beta, t_cdf
from ssamt.hypotheses import TestResult, one_way_f, two_sample_t
from ssamt.mtp import (
    MtpReport,
    PROCEDURES,
    bonferroni,
    hochberg,
    holm,
    sidak_sd,
    sidak_ss,
)
from ssamt.simulation import (
    SIGNAL_KINDS,
    SignalModel,
    SimReport,
    add_noise,
    generate_signal,
    replication_seed,
    run_study,
)

__version__ = "0.1.0"
