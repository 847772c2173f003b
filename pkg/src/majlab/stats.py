"""Day-1/day-2 statistics: gap thresholds, centering constants, centered
indicators, their moments, and the quantitative-bound report.

The centered indicator of a vertex v is Z_v = (+-1) - mu_v, where +-1 records
whether v keeps its color on day 1 of the *biased* rule and mu_v is the exact
keep probability mapped to [-1, 1].  The aggregate Z = sum_v L(v) Z_v equals
2|C_{1,1}| - 2 E|C_{1,1}| (biased day 1) when the mu's are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .dynamics import UpdateRule, default_cap, run, step
from .graphs import (ColoredGraph, FixedGap, GraphParams, sample_gnp,
                     split_seed)
from .probability import (BERRY_ESSEEN_C, bindiff_cdf, bindiff_geq_exact,
                          normal_pdf)
from .structure import compute_r_hat, compute_s_sets

__all__ = [
    "ThresholdParams",
    "DeltaThreshold",
    "delta_threshold",
    "compute_mu",
    "compute_mu_exact",
    "expected_biased_day1_count",
    "CenteredIndicators",
    "centered_indicators",
    "MomentEstimate",
    "moment_estimate",
    "double_factorial",
    "LemmaRecord",
    "LemmaReport",
    "lemma_report",
    "LEMMA_ANCHORS",
]


@dataclass(frozen=True)
class ThresholdParams:
    """Constants of the two-branch gap threshold; defaults are non-normative."""

    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("threshold constants must be positive")


@dataclass(frozen=True)
class DeltaThreshold:
    value: float
    exp_branch: float
    poly_branch: float

    @property
    def dominant(self) -> str:
        return "exponential" if self.exp_branch >= self.poly_branch else "polynomial"


def delta_threshold(n: int, p: float,
                    params: ThresholdParams = ThresholdParams()) -> DeltaThreshold:
    """max{ exp(A*sqrt(log(1/p)))/sqrt(p), B * p^(-3/2) * n^(-1/2) }."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    exp_branch = math.exp(params.a * math.sqrt(math.log(1.0 / p))) / math.sqrt(p)
    poly_branch = params.b * p**-1.5 / math.sqrt(n)
    return DeltaThreshold(max(exp_branch, poly_branch), exp_branch, poly_branch)


def _check_sizes(c1: int, c2: int) -> None:
    if c1 < 1 or c2 < 1:
        raise ValueError(f"both classes must be nonempty, got c1={c1}, c2={c2}")


def compute_mu(c1: int, c2: int, p: float) -> tuple[float, float]:
    """Centering constants of the biased day-1 keep events.

    mu1 = 2 P(Bin(c1-1,p) - Bin(c2,p) >= -1) - 1   (color-1 vertex keeps)
    mu2 = 2 P(Bin(c2-1,p) - Bin(c1,p) >= +1) - 1   (color-2 vertex keeps)

    The asymmetric shifts mirror the rule: color 1 already wins ties, so a
    color-2 vertex survives only on a strict same-color majority.
    """
    _check_sizes(c1, c2)
    mu1 = 2.0 * (1.0 - bindiff_cdf(c1 - 1, c2, p, -2)) - 1.0
    mu2 = 2.0 * (1.0 - bindiff_cdf(c2 - 1, c1, p, 0)) - 1.0
    return mu1, mu2


def compute_mu_exact(c1: int, c2: int, p: Union[Fraction, int]) -> tuple[Fraction, Fraction]:
    """Exact-rational twin of compute_mu."""
    _check_sizes(c1, c2)
    p = Fraction(p)
    mu1 = 2 * bindiff_geq_exact(c1 - 1, c2, p, -1) - 1
    mu2 = 2 * bindiff_geq_exact(c2 - 1, c1, p, 1) - 1
    return mu1, mu2


def expected_biased_day1_count(c1: int, c2: int, p, exact: bool = False):
    """E|C_{1,1}| for the biased rule, = (n + mu1*c1 - mu2*c2) / 2."""
    if exact:
        mu1, mu2 = compute_mu_exact(c1, c2, Fraction(p))
        return Fraction(c1 + c2 + mu1 * c1 - mu2 * c2, 2)
    mu1, mu2 = compute_mu(c1, c2, p)
    return (c1 + c2 + mu1 * c1 - mu2 * c2) / 2.0


@dataclass
class CenteredIndicators:
    mu1: Union[float, Fraction]
    mu2: Union[float, Fraction]
    z_values: Union[np.ndarray, list]
    z: Union[float, Fraction]
    kept: np.ndarray


def centered_indicators(g: ColoredGraph, p, exact: bool = False) -> CenteredIndicators:
    """Per-vertex Z_v and the aggregate Z = sum_v L(v) Z_v for one graph."""
    c1, c2 = g.counts()
    day1 = step(g, UpdateRule.BIASED)
    kept = np.asarray(day1.colors == g.colors)
    is_c1 = g.colors == 1
    if exact:
        mu1, mu2 = compute_mu_exact(c1, c2, Fraction(p))
        z_values = [
            (1 if kept[v] else -1) - (mu1 if is_c1[v] else mu2)
            for v in range(g.n)
        ]
        z = sum(zv if is_c1[v] else -zv for v, zv in enumerate(z_values))
        return CenteredIndicators(mu1, mu2, z_values, z, kept)
    mu1, mu2 = compute_mu(c1, c2, p)
    sign = np.where(kept, 1.0, -1.0)
    mu_v = np.where(is_c1, mu1, mu2)
    z_values = sign - mu_v
    z = float(np.sum(np.where(is_c1, z_values, -z_values)))
    return CenteredIndicators(mu1, mu2, z_values, z, kept)


def double_factorial(m: int) -> int:
    """m!! for m >= -1 (with (-1)!! = 1)."""
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@dataclass
class MomentEstimate:
    k: int
    value: float
    stderr: float
    trials: int
    reference: Optional[float]  # (k-1)!! * n^(k/2) for even k
    ratio: Optional[float]
    odd_k: bool


def moment_estimate(n: int, p: float, delta, k: int, trials: int,
                    master_seed: int = 0) -> MomentEstimate:
    """Monte Carlo estimate of E[Z^k] under a fixed-gap coloring.

    Odd k is allowed but flagged; the reference scale is defined for even k.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if k == 0:
        return MomentEstimate(0, 1.0, 0.0, trials, 1.0, 1.0, False)
    scheme = FixedGap.from_delta(delta)
    c1, c2 = scheme.class_sizes(n)
    _check_sizes(c1, c2)
    mu1, mu2 = compute_mu(c1, c2, p)
    samples = np.empty(trials)
    for t in range(trials):
        g = sample_gnp(GraphParams(n, p, split_seed(master_seed, t)), scheme)
        day1 = step(g, UpdateRule.BIASED)
        kept = day1.colors == g.colors
        is_c1 = g.colors == 1
        zv = np.where(kept, 1.0, -1.0) - np.where(is_c1, mu1, mu2)
        z = float(np.sum(np.where(is_c1, zv, -zv)))
        samples[t] = z**k
    value = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(trials)) if trials > 1 else float("inf")
    odd = k % 2 == 1
    reference = None if odd else float(double_factorial(k - 1)) * n ** (k / 2)
    ratio = None if odd else value / reference
    return MomentEstimate(k, value, stderr, trials, reference, ratio, odd)


# ----------------------------------------------------------------------
# quantitative-bound report

LEMMA_ANCHORS: dict[str, str] = {
    "day1_expectation": r"\frac{19\sqrt{pn}\Delta}{1920}",
    "biased_day1_tail": r"\frac{1}{\sqrt{np(1-p)}} + \mathcal{D}p\Delta",
    "moment_growth": r"(k-1)!! \cdot n^{k/2}",
    "day2_conditional_sum": r"1 + \phi(6)\min\{1, \sqrt{p}\Delta_2/\sqrt{n}\}",
    "beta_gap": r"\frac{80C_{BE}+3}{p}",
    "beta2_bound": r"\frac{3\sqrt{(1-p)(n-1)}}{\sqrt{p}}",
    "day2_pair_sum": r"1 + 1.5*10^{-11} p\Delta",
    "day2_expectation": r"\frac{n}{2} + 5*10^{-12}*pn\Delta",
    "day2_variance": r"\mathcal{O}(n^2p) + \mathcal{O}(n/p)",
    "day2_gap_probability": r"\frac{n}{2} - 4*10^{-12}pn\Delta",
    "day3_contraction": r"ba^2 > 3(\log 2)/2",
    "final_win_time": r"t^* = \mathcal{O}(\log_{pn} n)",
    "sstar_mean": r"\mathbb{E}[|S_{u,v}^*|] \leq \frac{2\sqrt{n}}{\sqrt{p}}",
    "sstar_variance": r"\frac{289\sqrt{n}}{\sqrt{p}}",
    "setdiff_variance": r"\mathbf{Var}(|S^{(1)}| - |S^{(2)}| - |S^*|) \leq 4n",
    "setdiff_mean_sq": r"\frac{328n}{p}",
    "ig_variance": r"21 p^{3/2}n^{1/2}",
    "ig_mean": r"2p^{3/2}n^{1/2}",
    "ig_mean_sq": r"21 p^{3/2} n^{1/2} + 4p^3 n",
    "sstar_mean_sq": r"\frac{293n}{p}",
    "s1_variance_unstated": r"\frac{7(n-1)}{12}",
    "ig_mean_identity": r"p^2 \mathbb{E}[|S^{*}_{uv}|]",
}

_LOG_HUGE_A = 3.0e6     # ln n needed by the day-1/day-2 moment bounds
_LOG_HUGE_B = 6.0e13    # ln n needed by the day-2 expectation chain


@dataclass
class LemmaRecord:
    lemma_id: str
    quote_anchor: str
    lhs: Optional[float]
    rhs: Optional[float]
    direction: str  # '<=', '>=' or '=='
    mode: str  # 'exact' or 'mc'
    hypotheses_met: bool
    asserted: bool
    satisfied: Optional[bool]
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "quote_anchor": self.quote_anchor,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "direction": self.direction,
            "mode": self.mode,
            "hypotheses_met": self.hypotheses_met,
            "asserted": self.asserted,
            "satisfied": self.satisfied,
            "extra": self.extra,
        }


@dataclass
class LemmaReport:
    n: int
    p: float
    delta: float
    trials: int
    mode: str
    records: list[LemmaRecord]

    def record(self, lemma_id: str) -> LemmaRecord:
        for r in self.records:
            if r.lemma_id == lemma_id:
                return r
        raise KeyError(lemma_id)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "delta": self.delta,
            "trials": self.trials,
            "mode": self.mode,
            "records": [r.to_dict() for r in self.records],
        }

    def asserted_failures(self) -> list[str]:
        return [r.lemma_id for r in self.records
                if r.asserted and r.satisfied is False]


def _desk_p_range(n: int, p: float) -> bool:
    return math.log(n) / n <= p <= 0.25


def _gather_trial_quantities(n: int, p: float, delta, trials: int,
                             master_seed: int, cap: int) -> dict[str, np.ndarray]:
    """One pass of sampled graphs; every report row is built from these."""
    scheme = FixedGap.from_delta(delta)
    cols = {
        name: np.empty(trials)
        for name in ("c11_std", "c11_biased", "rhat1", "rhat2", "c12", "c23",
                     "win1", "win_day", "s1", "s2", "ss", "ig",
                     "v1_in_c12", "v2_in_c12")
    }
    for t in range(trials):
        g = sample_gnp(GraphParams(n, p, split_seed(master_seed, t)), scheme)
        is_c1 = g.colors == 1
        ones = np.flatnonzero(is_c1)
        twos = np.flatnonzero(~is_c1)
        v1, v2 = int(ones[0]), int(twos[0])
        u, v = int(ones[0]), int(ones[1])
        day1 = step(g, UpdateRule.STANDARD)
        day2 = step(day1, UpdateRule.STANDARD)
        day3 = step(day2, UpdateRule.STANDARD)
        day1b = step(g, UpdateRule.BIASED)
        cols["c11_std"][t] = int((day1.colors == 1).sum())
        cols["c11_biased"][t] = int((day1b.colors == 1).sum())
        cols["rhat1"][t] = compute_r_hat(g, v1).shape[0]
        cols["rhat2"][t] = compute_r_hat(g, v2).shape[0]
        c12 = int((day2.colors == 1).sum())
        cols["c12"][t] = c12
        cols["c23"][t] = n - int((day3.colors == 1).sum())
        tr = run(g, UpdateRule.STANDARD, cap)
        rec = tr.termination_record()
        win1 = rec["kind"] == "unanimity" and rec["winner"] == 1
        cols["win1"][t] = float(win1)
        cols["win_day"][t] = rec["day"] if win1 else np.nan
        rep = compute_s_sets(g, u, v)
        cols["s1"][t] = len(rep.s1)
        cols["s2"][t] = len(rep.s2)
        cols["ss"][t] = len(rep.s_star)
        cols["ig"][t] = rep.i_g
        cols["v1_in_c12"][t] = float(day2.colors[v1] == 1)
        cols["v2_in_c12"][t] = float(day2.colors[v2] == 1)
    return cols


def lemma_report(n: int, p: float, delta, trials: int, master_seed: int = 0,
                 k: int = 2, d_const: float = 1.0, dd_const: float = 1.0,
                 b_const: float = 1.0 / 3.0) -> LemmaReport:
    """Estimate every tracked quantity and tabulate it against its bound.

    n <= 6 uses exhaustive enumeration with exact weights (mode 'exact');
    larger n uses trials Monte Carlo samples.  Bounds whose hypotheses hold
    only at astronomically large n are present but never asserted.
    """
    if trials < 100:
        raise ValueError("trials must be at least 100")
    scheme = FixedGap.from_delta(delta)
    c1, c2 = scheme.class_sizes(n)
    if c1 < 2 or c2 < 1:
        raise ValueError("report needs at least two color-1 and one color-2 vertex")
    delta_f = scheme.delta
    cap = default_cap(n, p) if n * p > 1 else 4 * n

    exact_mode = n <= 6
    if exact_mode:
        from .oracle import enumerate_trial_quantities
        cols, weights = enumerate_trial_quantities(n, c1, p, cap)
        wsum = float(weights.sum())

        def mean(x):
            return float((weights * x).sum() / wsum)
    else:
        cols = _gather_trial_quantities(n, p, delta, trials, master_seed, cap)
        weights = np.full(trials, 1.0 / trials)

        def mean(x):
            return float(np.mean(x))

    def var(x):
        m = mean(x)
        return mean((x - m) ** 2)

    def cond_mean(x, mask):
        wm = float((weights * mask).sum())
        if wm <= 0:
            return None
        return float((weights * mask * np.nan_to_num(x)).sum() / wm)

    mode = "exact" if exact_mode else "mc"
    sqrt_pn = math.sqrt(p * n)
    sigma = math.sqrt(n * p * (1 - p))
    huge_a = math.log(n) >= _LOG_HUGE_A
    huge_b = math.log(n) >= _LOG_HUGE_B
    desk_p = _desk_p_range(n, p)
    delta_window = 1 <= delta_f <= 10 / p

    mu1, mu2 = compute_mu(c1, c2, p)
    e_c11_biased = (n + mu1 * c1 - mu2 * c2) / 2.0

    records: list[LemmaRecord] = []

    def add(lemma_id, lhs, rhs, direction, hypotheses_met, asserted,
            extra=None, satisfied="auto"):
        if satisfied == "auto":
            if lhs is None or rhs is None:
                satisfied = None
            elif direction == "<=":
                satisfied = lhs <= rhs
            elif direction == ">=":
                satisfied = lhs >= rhs
            else:
                satisfied = lhs == rhs
        records.append(LemmaRecord(
            lemma_id, LEMMA_ANCHORS[lemma_id],
            None if lhs is None else float(lhs),
            None if rhs is None else float(rhs),
            direction, mode, hypotheses_met, asserted and hypotheses_met,
            satisfied, extra or {}))

    # day 1, expectation of the color-1 count (standard rule)
    add("day1_expectation", mean(cols["c11_std"]),
        n / 2 + 19 * sqrt_pn * delta_f / 1920, ">=",
        huge_a and desk_p and delta_window, False)

    # day 1, tail of the biased count around its exact mean
    tail_freq = mean(np.abs(cols["c11_biased"] - e_c11_biased)
                     >= d_const * sqrt_pn * delta_f)
    add("biased_day1_tail", tail_freq, 1.0 / sigma + dd_const * p * delta_f,
        "<=", False, False,
        {"d_const": d_const, "dd_const": dd_const, "exact_mean": e_c11_biased})

    # moments of Z against the Gaussian reference scale
    zc = 2.0 * (cols["c11_biased"] - e_c11_biased)
    zk = zc**k
    ref = float(double_factorial(k - 1)) * n ** (k / 2) if k % 2 == 0 else None
    add("moment_growth", mean(zk), ref, "<=",
        k % 2 == 0 and k <= math.sqrt(n / 20), False,
        {"k": k, "ratio": None if ref is None else mean(zk) / ref})

    # beta constants: how much conditioning on one vertex shifts day 1
    beta1 = mean(cols["rhat1"]) - mean(cols["c11_std"])
    beta2 = mean(cols["c11_std"]) - mean(cols["rhat2"])
    delta2 = 19 * sqrt_pn * delta_f / 3840

    ev1 = cols["rhat1"] >= (n - 1) / 2 + delta2 + beta1
    ev2 = cols["rhat2"] >= (n - 1) / 2 + delta2 - beta2
    p1 = cond_mean(cols["v1_in_c12"], ev1)
    p2 = cond_mean(cols["v2_in_c12"], ev2)
    cond_sum = None if (p1 is None or p2 is None) else p1 + p2
    add("day2_conditional_sum", cond_sum,
        1.0 + normal_pdf(6.0) * min(1.0, math.sqrt(p) * delta2 / math.sqrt(n)),
        ">=", huge_b and p * delta2 >= 2e8, False,
        {"beta1": beta1, "beta2": beta2, "delta2": delta2,
         "cond_frac_1": float((weights * ev1).sum()),
         "cond_frac_2": float((weights * ev2).sum())})

    add("beta_gap", beta2 - beta1, (80 * BERRY_ESSEEN_C + 3) / p, "<=",
        huge_b and desk_p and delta_f >= 2, False,
        {"beta1": beta1, "beta2": beta2})
    add("beta2_bound", beta2, 3 * math.sqrt((1 - p) * (n - 1)) / math.sqrt(p),
        "<=", huge_b and desk_p and delta_f >= 2, False)

    # day 2 via the pair of focal vertices
    add("day2_pair_sum", mean(cols["v1_in_c12"]) + mean(cols["v2_in_c12"]),
        1.0 + 1.5e-11 * p * delta_f, ">=",
        huge_b and desk_p and delta_window, False)
    add("day2_expectation", mean(cols["c12"]),
        n / 2 + 5e-12 * p * n * delta_f, ">=",
        huge_b and desk_p and delta_window, False)
    add("day2_variance", var(cols["c12"]), n * n * p + n / p, "<=",
        huge_a and desk_p and delta_window, False,
        {"ratio": var(cols["c12"]) / (n * n * p + n / p),
         "reference_constant": 1.0})

    gap_thresh = n / 2 - 4e-12 * p * n * delta_f
    chebyshev_ref = 1.0 - (1.0 / (p * delta_f**2) + 1.0 / (n * p**3 * delta_f**2))
    add("day2_gap_probability", mean(n - cols["c12"] <= gap_thresh),
        max(0.0, chebyshev_ref), ">=", desk_p and delta_window and huge_b,
        False, {"reference_constant": 1.0})

    # day 3 contraction and final win time
    a_const = 4e-12 * p**1.5 * math.sqrt(n) * delta_f
    shrink2 = (n - cols["c12"]) <= n / 2 - a_const * n / math.sqrt(p * n)
    day3_ok = cond_mean((cols["c23"] <= b_const * n).astype(float), shrink2)
    add("day3_contraction", day3_ok, 1.0, ">=",
        b_const * a_const**2 > 1.5 * math.log(2), False,
        {"a": a_const, "b": b_const, "b_a_sq": b_const * a_const**2,
         "cond_frac": float((weights * shrink2).sum())})

    lam = p * n / math.log(n) - 1.0
    small2 = (n - cols["c12"]) <= b_const * n
    win_rate = cond_mean(cols["win1"], small2)
    add("final_win_time", win_rate,
        max(0.0, 1.0 - 2.0 * n ** (-lam / 2) if lam > 0 else 0.0), ">=",
        lam > 0, False,
        {"lambda": lam, "cap": cap,
         "mean_win_day": cond_mean(cols["win_day"], cols["win1"] > 0)})

    # structural-set moments
    add("sstar_mean", mean(cols["ss"]), 2 * math.sqrt(n / p), "<=",
        desk_p, True)
    add("sstar_variance", var(cols["ss"]), 289 * math.sqrt(n / p), "<=",
        desk_p and n >= 1048, True)
    diff = cols["s1"] - cols["s2"] - cols["ss"]
    add("setdiff_variance", var(diff), 4.0 * n, "<=",
        huge_a and desk_p and delta_window, False)
    add("setdiff_mean_sq", mean(diff**2), 328 * n / p, "<=",
        huge_a and desk_p and delta_window, False)
    add("ig_variance", var(cols["ig"]), 21 * p**1.5 * math.sqrt(n), "<=",
        huge_a and desk_p and delta_window, False)
    add("ig_mean", mean(cols["ig"]), 2 * p**1.5 * math.sqrt(n), "<=",
        huge_a and desk_p and delta_window, False)
    add("ig_mean_sq", mean(cols["ig"] ** 2),
        21 * p**1.5 * math.sqrt(n) + 4 * p**3 * n, "<=",
        huge_a and desk_p and delta_window, False)
    add("sstar_mean_sq", mean(cols["ss"] ** 2), 293 * n / p, "<=",
        huge_a and desk_p and delta_window, False)
    # cited but never stated in the source; tracked, never asserted
    add("s1_variance_unstated", var(cols["s1"]), 7 * (n - 1) / 12, "<=",
        False, False)

    # double-neighbour count vs p^2 * |S*|: exact identity in expectation
    lhs_ig = mean(cols["ig"])
    rhs_ig = p**2 * mean(cols["ss"])
    if exact_mode:
        ig_ok = abs(lhs_ig - rhs_ig) < 1e-12
        extra_ig = {}
    else:
        resid = cols["ig"] - p**2 * cols["ss"]
        se = float(np.std(resid, ddof=1) / math.sqrt(len(resid)))
        ig_ok = abs(float(np.mean(resid))) <= 4 * se
        extra_ig = {"residual_mean": float(np.mean(resid)), "residual_stderr": se}
    add("ig_mean_identity", lhs_ig, rhs_ig, "==", True, True,
        extra_ig, satisfied=ig_ok)

    return LemmaReport(n, p, delta_f, trials, mode, records)
