"""majlab: majority dynamics on Erdos-Renyi random graphs.

A fast bit-parallel simulator for two-color majority dynamics (standard and
color-1-biased rules), an exhaustive exact oracle for graphs on up to six
vertices, structural-set computations for day-1/day-2 analysis, a p-biased
Fourier toolkit for the centered day-1 indicators, and grid verification of
the package's stock of binomial/normal inequalities.
"""

__version__ = "0.1.0"

from .graphs import (ColoredGraph, ColoringScheme, FixedGap, GraphParams,
                     RandomBiased, RandomHalf, degree_split, sample_gnp,
                     split_seed)
from .dynamics import (CapReached, DynamicsTrace, TwoCycle, Unanimity,
                       UpdateRule, default_cap, run, step)
from .structure import (StructuralReport, check_day2_identity, compute_r_hat,
                        compute_s_sets, day2_identity_sides)
from .probability import (BERRY_ESSEEN_C, BinDiffDist, bindiff_cdf,
                          bindiff_pmf, binom_pmf, normal_cdf,
                          normal_cdf_centered, normal_pdf)
from .appendix_a import InequalityReport, default_grid, verify_appendix_a
from .stats import (CenteredIndicators, DeltaThreshold, LemmaReport,
                    ThresholdParams, centered_indicators, compute_mu,
                    compute_mu_exact, delta_threshold, lemma_report,
                    moment_estimate)
from .fourier import FourierTable, fourier_coefficients
from .oracle import (ExpectedCount, FourierCoeff, MomentZ, OracleQuery,
                     SetStat, VarCount, WinProb, oracle_eval, oracle_vs_mc)
from .harness import (ExperimentConfig, ScanResult, SweepResult,
                      run_sweep, scheme_experiment, threshold_scan,
                      wilson_interval)
