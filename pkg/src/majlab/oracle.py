"""Ground truth by exhaustive enumeration: statistics of G(n,p) for n <= 6
are integrated over all 2^C(n,2) edge configurations with exact weights.

Graphs are edge bitmasks in lexicographic pair order; adjacency rows and
color classes are small ints, so a day of dynamics is a handful of popcounts.
With a rational p every answer is an exact Fraction; with a float p the
answer is a compensated float with the rounding scale reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .dynamics import UpdateRule
from .fourier import edge_list, fourier_coefficients
from .stats import compute_mu, compute_mu_exact

__all__ = [
    "MAX_ORACLE_N",
    "WinProb",
    "ExpectedCount",
    "VarCount",
    "MomentZ",
    "SetStat",
    "FourierCoeff",
    "OracleQuery",
    "OracleResult",
    "oracle_eval",
    "OracleMcAgreement",
    "oracle_vs_mc",
    "rows_from_mask",
    "step_mask",
    "rhat_mask",
    "s_sets_mask",
    "mask_trajectory",
    "enumerate_trial_quantities",
]

MAX_ORACLE_N = 6


# ----------------------------------------------------------------------
# bitmask engine

_ROWS_CACHE: dict[int, list[tuple[int, ...]]] = {}


def _edge_index(n: int) -> list[tuple[int, int]]:
    return edge_list(n)


def rows_from_mask(n: int, mask: int) -> tuple[int, ...]:
    rows = [0] * n
    for k, (a, b) in enumerate(_edge_index(n)):
        if mask >> k & 1:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
    return tuple(rows)


def _all_rows(n: int) -> list[tuple[int, ...]]:
    if n not in _ROWS_CACHE:
        n_edges = n * (n - 1) // 2
        _ROWS_CACHE[n] = [rows_from_mask(n, m) for m in range(1 << n_edges)]
    return _ROWS_CACHE[n]


def step_mask(n: int, rows: Sequence[int], c1mask: int,
              rule: UpdateRule = UpdateRule.STANDARD) -> int:
    """One synchronous day on a bitmask graph; returns the new color-1 set."""
    new = 0
    for v in range(n):
        row = rows[v]
        d1 = (row & c1mask).bit_count()
        deg = row.bit_count()
        cur = c1mask >> v & 1
        if rule is UpdateRule.STANDARD:
            take = 2 * d1 > deg or (2 * d1 == deg and cur)
        else:
            take = 2 * d1 >= deg or (2 * d1 == deg - 1 and cur)
        if take:
            new |= 1 << v
    return new


@dataclass(frozen=True)
class MaskTrajectory:
    counts: tuple[int, ...]          # c1 per day, day 0 first
    kind: str                        # 'unanimity' | 'cycle' | 'cap'
    winner: Optional[int]
    day: Optional[int]               # unanimity day
    entered_day: Optional[int]
    period: Optional[int]

    def count_at(self, day: int) -> int:
        if day < len(self.counts):
            return self.counts[day]
        if self.kind == "unanimity":
            return self.counts[-1]
        if self.kind == "cycle":
            e = self.entered_day
            return self.counts[e + (day - e) % self.period]
        raise ValueError(f"trajectory capped before day {day}")


def mask_trajectory(n: int, rows: Sequence[int], c1mask: int,
                    rule: UpdateRule = UpdateRule.STANDARD,
                    cap: Optional[int] = None) -> MaskTrajectory:
    """Run until unanimity or a period <= 2 repeat; cap defaults to 2^n + 4."""
    if cap is None:
        cap = (1 << n) + 4
    full = (1 << n) - 1
    counts = [c1mask.bit_count()]
    if c1mask in (0, full):
        return MaskTrajectory(tuple(counts), "unanimity",
                              1 if c1mask == full else 2, 0, None, None)
    cur, prev = c1mask, None
    for day in range(1, cap + 1):
        nxt = step_mask(n, rows, cur, rule)
        counts.append(nxt.bit_count())
        if nxt in (0, full):
            return MaskTrajectory(tuple(counts), "unanimity",
                                  1 if nxt == full else 2, day, None, None)
        if nxt == cur:
            return MaskTrajectory(tuple(counts), "cycle", None, None, day - 1, 1)
        if prev is not None and nxt == prev:
            return MaskTrajectory(tuple(counts), "cycle", None, None, day - 2, 2)
        prev, cur = cur, nxt
    return MaskTrajectory(tuple(counts), "cap", None, None, None, None)


def rhat_mask(n: int, rows: Sequence[int], c1mask: int, w: int) -> int:
    """Bitmask twin of the day-1 margin set for focal vertex w."""
    lw = 1 if c1mask >> w & 1 else -1
    bit_w = 1 << w
    out = 0
    c2mask = ~c1mask & ((1 << n) - 1)
    for u in range(n):
        if u == w:
            continue
        row = rows[u] & ~bit_w
        d1 = (row & c1mask).bit_count()
        d2 = (row & c2mask).bit_count()
        if c1mask >> u & 1:
            member = d1 + lw >= d2
        else:
            member = d1 + lw > d2
        if member:
            out |= 1 << u
    return out


def s_sets_mask(n: int, rows: Sequence[int], c1mask: int, u: int,
                v: int) -> tuple[int, int, int, int]:
    """(s1, s2, s_star, i_g) for a color-1 focal pair, as bitmasks and count."""
    if not (c1mask >> u & 1 and c1mask >> v & 1):
        raise ValueError("both focal vertices must have color 1")
    full = (1 << n) - 1
    c2mask = ~c1mask & full
    skip = (1 << u) | (1 << v)
    s1 = s2 = ss = 0
    for w in range(n):
        if skip >> w & 1:
            continue
        row = rows[w] & ~skip
        gap = (row & c1mask).bit_count() - (row & c2mask).bit_count()
        if c1mask >> w & 1:
            if gap >= -1:
                s1 |= 1 << w
            elif gap == -2:
                ss |= 1 << w
            else:
                s2 |= 1 << w
        else:
            if gap >= 0:
                s1 |= 1 << w
            elif gap == -1:
                ss |= 1 << w
            else:
                s2 |= 1 << w
    ig = (ss & rows[u] & rows[v]).bit_count()
    return s1, s2, ss, ig


# ----------------------------------------------------------------------
# queries

@dataclass(frozen=True)
class WinProb:
    color: int = 1
    rule: UpdateRule = UpdateRule.STANDARD
    cap: Optional[int] = None


@dataclass(frozen=True)
class ExpectedCount:
    day: int
    color: int = 1
    rule: UpdateRule = UpdateRule.STANDARD


@dataclass(frozen=True)
class VarCount:
    day: int
    color: int = 1
    rule: UpdateRule = UpdateRule.STANDARD


@dataclass(frozen=True)
class MomentZ:
    k: int


@dataclass(frozen=True)
class SetStat:
    which: str  # 's1' | 's2' | 's_star' | 'i_g' | 'r_hat'
    moment: int = 1
    u: Optional[int] = None
    v: Optional[int] = None
    w: Optional[int] = None


@dataclass(frozen=True)
class FourierCoeff:
    v: int
    s: tuple[tuple[int, int], ...]


Statistic = Union[WinProb, ExpectedCount, VarCount, MomentZ, SetStat, FourierCoeff]


@dataclass(frozen=True)
class OracleQuery:
    n: int
    p: Union[float, Fraction]
    colors: tuple[int, ...]
    statistic: Statistic

    def __post_init__(self):
        if self.n > MAX_ORACLE_N:
            raise ValueError(f"oracle limited to n <= {MAX_ORACLE_N}")
        if len(self.colors) != self.n:
            raise ValueError("colors must have one entry per vertex")
        if any(c not in (1, 2) for c in self.colors):
            raise ValueError("colors must be 1 or 2")

    @property
    def exact(self) -> bool:
        return isinstance(self.p, (Fraction, int))


@dataclass
class OracleResult:
    value: Union[float, Fraction]
    details: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)


def _c1mask(colors: Sequence[int]) -> int:
    m = 0
    for i, c in enumerate(colors):
        if c == 1:
            m |= 1 << i
    return m


def _focal_pair(q: OracleQuery, stat: SetStat) -> tuple[int, int]:
    ones = [i for i, c in enumerate(q.colors) if c == 1]
    if stat.u is not None and stat.v is not None:
        return stat.u, stat.v
    if len(ones) < 2:
        raise ValueError("set statistics need two color-1 vertices")
    return ones[0], ones[1]


_TRAJ_CACHE: dict[tuple, list[MaskTrajectory]] = {}


def _trajectories(n: int, colors: tuple[int, ...], rule: UpdateRule,
                  cap: Optional[int]) -> list[MaskTrajectory]:
    key = (n, colors, rule, cap)
    if key not in _TRAJ_CACHE:
        c1 = _c1mask(colors)
        _TRAJ_CACHE[key] = [
            mask_trajectory(n, rows, c1, rule, cap) for rows in _all_rows(n)
        ]
    return _TRAJ_CACHE[key]


def _mask_values(q: OracleQuery) -> tuple[list, dict]:
    """Per-configuration value of the statistic, plus evaluation details."""
    n = q.n
    stat = q.statistic
    c1m = _c1mask(q.colors)
    rows_all = _all_rows(n)
    details: dict = {}

    if isinstance(stat, WinProb):
        cap = stat.cap if stat.cap is not None else (1 << n) + 4
        trajs = _trajectories(n, q.colors, stat.rule, cap)
        vals = [
            1 if (t.kind == "unanimity" and t.winner == stat.color
                  and t.day <= cap) else 0
            for t in trajs
        ]
        details["cap_mass_indicator"] = [1 if t.kind == "cap" else 0 for t in trajs]
        return vals, details

    if isinstance(stat, (ExpectedCount, VarCount)):
        trajs = _trajectories(n, q.colors, stat.rule, None)
        vals = []
        for t in trajs:
            c1 = t.count_at(stat.day)
            vals.append(c1 if stat.color == 1 else n - c1)
        return vals, details

    if isinstance(stat, MomentZ):
        c1 = c1m.bit_count()
        c2 = n - c1
        if q.exact:
            mu1, mu2 = compute_mu_exact(c1, c2, Fraction(q.p))
        else:
            mu1, mu2 = compute_mu(c1, c2, float(q.p))
        center = n + mu1 * c1 - mu2 * c2
        vals = []
        for rows in rows_all:
            c11 = step_mask(n, rows, c1m, UpdateRule.BIASED).bit_count()
            vals.append((2 * c11 - center) ** stat.k)
        details["mu"] = (mu1, mu2)
        return vals, details

    if isinstance(stat, SetStat):
        if stat.moment not in (1, 2):
            raise ValueError("set-statistic moment must be 1 or 2")
        vals = []
        if stat.which == "r_hat":
            w = stat.w if stat.w is not None else 0
            for rows in rows_all:
                vals.append(rhat_mask(n, rows, c1m, w).bit_count() ** stat.moment)
            return vals, details
        u, v = _focal_pair(q, stat)
        pick = {"s1": 0, "s2": 1, "s_star": 2, "i_g": 3}.get(stat.which)
        if pick is None:
            raise ValueError(f"unknown set statistic: {stat.which}")
        for rows in rows_all:
            parts = s_sets_mask(n, rows, c1m, u, v)
            raw = parts[pick] if pick == 3 else parts[pick].bit_count()
            vals.append(raw**stat.moment)
        return vals, details

    raise TypeError(f"unsupported statistic: {stat!r}")


def oracle_eval(q: OracleQuery) -> OracleResult:
    """Integrate the queried statistic over every edge configuration.

    Rational p gives an exact Fraction; float p gives a compensated float
    with the accumulation scale reported in details.
    """
    if isinstance(q.statistic, FourierCoeff):
        table = fourier_coefficients(q.n, q.colors, q.statistic.v, q.p,
                                     exact=q.exact)
        value = table.coefficient(list(q.statistic.s))
        return OracleResult(value, {
            "scaled": table.coefficient_scaled(list(q.statistic.s)),
            "exact": q.exact,
        })

    n_edges = q.n * (q.n - 1) // 2
    vals, details = _mask_values(q)
    e_counts = np.bitwise_count(np.arange(1 << n_edges, dtype=np.uint64))

    if q.exact:
        p = Fraction(q.p)
        pow_hi = [p**i for i in range(n_edges + 1)]
        pow_lo = [(1 - p) ** i for i in range(n_edges + 1)]
        total = Fraction(0)
        sq = Fraction(0)
        cap_mass = Fraction(0)
        cap_ind = details.get("cap_mass_indicator")
        for mask, val in enumerate(vals):
            e = int(e_counts[mask])
            w = pow_hi[e] * pow_lo[n_edges - e]
            total += w * val
            if isinstance(q.statistic, VarCount):
                sq += w * val * val
            if cap_ind is not None and cap_ind[mask]:
                cap_mass += w
        details = {"exact": True}
        if cap_ind is not None:
            details["cap_mass"] = cap_mass
        if isinstance(q.statistic, VarCount):
            return OracleResult(sq - total * total, details)
        return OracleResult(total, details)

    p = float(q.p)
    w = p ** e_counts.astype(np.float64) * (1.0 - p) ** (
        n_edges - e_counts).astype(np.float64)
    v_arr = np.asarray([float(x) for x in vals])
    total = math.fsum(w * v_arr)
    details_out = {"exact": False, "accumulation_terms": len(vals)}
    cap_ind = details.get("cap_mass_indicator")
    if cap_ind is not None:
        details_out["cap_mass"] = math.fsum(w * np.asarray(cap_ind, dtype=float))
    if isinstance(q.statistic, VarCount):
        sq = math.fsum(w * v_arr * v_arr)
        return OracleResult(sq - total * total, details_out)
    return OracleResult(total, details_out)


# ----------------------------------------------------------------------
# Monte Carlo agreement

@dataclass
class OracleMcAgreement:
    oracle_value: float
    mc_estimate: float
    mc_stderr: float
    trials: int
    z_score: float
    within_4se: bool


def _sample_masks(rng: np.random.Generator, n_edges: int, p: float,
                  trials: int) -> np.ndarray:
    bits = rng.random((trials, n_edges)) < p
    powers = (np.uint64(1) << np.arange(n_edges, dtype=np.uint64))
    return bits.astype(np.uint64) @ powers


def oracle_vs_mc(q: OracleQuery, trials: int,
                 master_seed: int = 0) -> OracleMcAgreement:
    """Monte Carlo estimate over sampled configurations vs the exact value.

    The sampler draws fresh edge configurations; the per-graph statistic is
    the same bitmask kernel the enumeration uses (that kernel is validated
    against the array engine separately).
    """
    oracle_value = float(oracle_eval(q).value)
    if isinstance(q.statistic, FourierCoeff):
        raise ValueError("Monte Carlo comparison is for graph statistics")
    vals, _ = _mask_values(q)
    table = np.asarray([float(x) for x in vals])
    rng = np.random.default_rng(np.random.SeedSequence(master_seed))
    n_edges = q.n * (q.n - 1) // 2
    masks = _sample_masks(rng, n_edges, float(q.p), trials)
    samples = table[masks]

    if isinstance(q.statistic, VarCount):
        est = float(np.var(samples, ddof=1))
        m = samples.mean()
        m2 = np.mean((samples - m) ** 2)
        m4 = np.mean((samples - m) ** 4)
        var_of_var = (m4 - m2**2 * (trials - 3) / (trials - 1)) / trials
        se = math.sqrt(max(var_of_var, 0.0))
    else:
        est = float(np.mean(samples))
        se = float(np.std(samples, ddof=1) / math.sqrt(trials))

    dev = abs(oracle_value - est)
    z = dev / se if se > 0 else (0.0 if dev == 0 else float("inf"))
    return OracleMcAgreement(oracle_value, est, se, trials, z, z <= 4.0)


# ----------------------------------------------------------------------
# exhaustive identity scan

@dataclass
class IdentityScan:
    n: int
    combos: int
    rhat_checks: int
    partition_checks: int
    day2_checks: int
    centering_checks: int
    violations: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations


def exhaustive_identity_scan(n: int, p: Union[Fraction, int] = Fraction(1, 3),
                             max_violations: int = 20) -> IdentityScan:
    """Check the structural identities on every coloring and configuration.

    For all 2^n colorings and all 2^C(n,2) edge sets:

    * the color-1 neighbours of each w on day 1 are exactly rhat(w) cap N(w);
    * s1 / s2 / s_star partition the non-focal vertices for every color-1 pair;
    * the day-1 margin at u decomposes through the s-sets for non-adjacent
      color-1 pairs;
    * Z_v + mu_v is the +-1 keep indicator of biased day 1, and the Z's sum
      (signed by the initial color) to 2|C_{1,1}| - 2 E|C_{1,1}| exactly.
    """
    if n > MAX_ORACLE_N:
        raise ValueError(f"scan limited to n <= {MAX_ORACLE_N}")
    p = Fraction(p)
    full = (1 << n) - 1
    rows_all = _all_rows(n)
    scan = IdentityScan(n, 0, 0, 0, 0, 0)
    mu_cache: dict[int, tuple[Fraction, Fraction]] = {}

    def note(msg: str) -> None:
        if len(scan.violations) < max_violations:
            scan.violations.append(msg)

    for c1m in range(1 << n):
        c1 = c1m.bit_count()
        c2 = n - c1
        mus = None
        if 0 < c1 < n:
            if c1 not in mu_cache:
                mu_cache[c1] = compute_mu_exact(c1, c2, p)
            mus = mu_cache[c1]
            center = n + mus[0] * c1 - mus[1] * c2
        ones = [i for i in range(n) if c1m >> i & 1]
        for mask, rows in enumerate(rows_all):
            scan.combos += 1
            m1 = step_mask(n, rows, c1m, UpdateRule.STANDARD)
            b1 = step_mask(n, rows, c1m, UpdateRule.BIASED)
            for w in range(n):
                scan.rhat_checks += 1
                rh = rhat_mask(n, rows, c1m, w)
                if rh & rows[w] != m1 & rows[w]:
                    note(f"rhat: n={n} colors={c1m:0{n}b} mask={mask} w={w}")
            for i, u in enumerate(ones):
                for v in ones[i + 1:]:
                    s1, s2, ss, ig = s_sets_mask(n, rows, c1m, u, v)
                    scan.partition_checks += 1
                    rest = full & ~((1 << u) | (1 << v))
                    if (s1 | s2 | ss) != rest or s1 & s2 or s1 & ss or s2 & ss:
                        note(f"partition: colors={c1m:0{n}b} mask={mask} uv=({u},{v})")
                    if not rows[u] >> v & 1:
                        scan.day2_checks += 1
                        du = rows[u]
                        lhs = 2 * (du & m1).bit_count() - du.bit_count()
                        rhs = ((s1 & du).bit_count() - (s2 & du).bit_count()
                               - (ss & du & ~rows[v]).bit_count() + ig)
                        if lhs != rhs:
                            note(f"day2: colors={c1m:0{n}b} mask={mask} uv=({u},{v})")
            if mus is not None:
                z_total = Fraction(0)
                for v in range(n):
                    scan.centering_checks += 1
                    was1 = c1m >> v & 1
                    kept = (b1 >> v & 1) == was1
                    mu_v = mus[0] if was1 else mus[1]
                    z = (1 if kept else -1) - mu_v
                    if z + mu_v not in (-1, 1):
                        note(f"centering: colors={c1m:0{n}b} mask={mask} v={v}")
                    z_total += z if was1 else -z
                if z_total != 2 * b1.bit_count() - center:
                    note(f"aggregate-z: colors={c1m:0{n}b} mask={mask}")
    return scan


# ----------------------------------------------------------------------
# bulk quantities for the bound report (exact mode)

def enumerate_trial_quantities(n: int, c1: int, p: float,
                               cap: int) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Per-configuration report quantities for the canonical split coloring
    [1]*c1 + [2]*(n-c1), plus the configuration weights.

    G(n,p) is exchangeable over vertices, so fixing the coloring loses no
    generality.  Focal vertices: first/second color-1, first color-2.
    """
    if c1 < 2 or n - c1 < 1:
        raise ValueError("need at least two color-1 and one color-2 vertex")
    colors = tuple([1] * c1 + [2] * (n - c1))
    c1m = _c1mask(colors)
    v1, v2, u, v = 0, c1, 0, 1
    n_edges = n * (n - 1) // 2
    n_masks = 1 << n_edges
    names = ("c11_std", "c11_biased", "rhat1", "rhat2", "c12", "c23",
             "win1", "win_day", "s1", "s2", "ss", "ig",
             "v1_in_c12", "v2_in_c12")
    cols = {name: np.empty(n_masks) for name in names}
    rows_all = _all_rows(n)
    for mask, rows in enumerate(rows_all):
        d1 = step_mask(n, rows, c1m, UpdateRule.STANDARD)
        d2 = step_mask(n, rows, d1, UpdateRule.STANDARD)
        d3 = step_mask(n, rows, d2, UpdateRule.STANDARD)
        cols["c11_std"][mask] = d1.bit_count()
        cols["c11_biased"][mask] = step_mask(n, rows, c1m, UpdateRule.BIASED).bit_count()
        cols["rhat1"][mask] = rhat_mask(n, rows, c1m, v1).bit_count()
        cols["rhat2"][mask] = rhat_mask(n, rows, c1m, v2).bit_count()
        cols["c12"][mask] = d2.bit_count()
        cols["c23"][mask] = n - d3.bit_count()
        traj = mask_trajectory(n, rows, c1m, UpdateRule.STANDARD, None)
        win1 = traj.kind == "unanimity" and traj.winner == 1 and traj.day <= cap
        cols["win1"][mask] = float(win1)
        cols["win_day"][mask] = traj.day if win1 else np.nan
        s1, s2, ss, ig = s_sets_mask(n, rows, c1m, u, v)
        cols["s1"][mask] = s1.bit_count()
        cols["s2"][mask] = s2.bit_count()
        cols["ss"][mask] = ss.bit_count()
        cols["ig"][mask] = ig
        cols["v1_in_c12"][mask] = float(d2 >> v1 & 1)
        cols["v2_in_c12"][mask] = float(d2 >> v2 & 1)
    e_counts = np.bitwise_count(np.arange(n_masks, dtype=np.uint64)).astype(np.float64)
    weights = p**e_counts * (1.0 - p) ** (n_edges - e_counts)
    return cols, weights
