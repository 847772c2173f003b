"""Fourier analysis of the centered day-1 indicators over the edge cube.

The sample space is {-1,1}^E for the C(m,2) potential edges of an m-vertex
set, with each edge present (+1) independently with probability p.  The
orthonormal basis is

    Phi_S(x) = prod_{e in S} (x_e + 1 - 2p) / (2 sqrt(p(1-p))),

and coefficients of a function f are f_hat(S) = E[f Phi_S].  Because the
normalizer is irrational, each coefficient is kept internally as the exact
rational r_S = E[f * prod_{e in S}(x_e + 1 - 2p)] together with |S|, so that
squares, ratios, and reconstructions stay exact when p is rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .stats import compute_mu, compute_mu_exact

__all__ = ["FourierTable", "fourier_coefficients", "edge_list"]

_MAX_VERTICES = 7
_EXACT_DEFAULT_LIMIT = 5


def edge_list(m: int) -> list[tuple[int, int]]:
    """Canonical edge order: lexicographic pairs (i, j), i < j."""
    return list(itertools.combinations(range(m), 2))


def _popcounts(values: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(values & np.uint64(mask)).astype(np.int64)


def _keep_flags(m: int, colors: Sequence[int], v: int) -> np.ndarray:
    """For every edge configuration, does v keep its color on biased day 1."""
    edges = edge_list(m)
    star1 = 0
    star2 = 0
    for k, (a, b) in enumerate(edges):
        if v in (a, b):
            other = b if a == v else a
            if colors[other] == 1:
                star1 |= 1 << k
            else:
                star2 |= 1 << k
    configs = np.arange(1 << len(edges), dtype=np.uint64)
    d1 = _popcounts(configs, star1)
    d2 = _popcounts(configs, star2)
    if colors[v] == 1:
        return d1 >= d2 - 1
    return d1 <= d2 - 1


def _forward_exact(a: list, n_bits: int, p: Fraction) -> list:
    """x-indexed w(x)f(x) -> S-indexed r_S."""
    t0 = -2 * p          # edge absent: x_e = -1
    t1 = 2 - 2 * p       # edge present: x_e = +1
    for k in range(n_bits):
        low = 1 << k
        for base in range(0, len(a), low << 1):
            for off in range(base, base + low):
                x0 = a[off]
                x1 = a[off + low]
                a[off] = x0 + x1
                a[off + low] = t0 * x0 + t1 * x1
    return a


def _inverse_exact(a: list, n_bits: int, p: Fraction) -> list:
    """S-indexed c_S -> x-indexed sum_S c_S prod_{k in S} t_k(x_k)."""
    t0 = -2 * p
    t1 = 2 - 2 * p
    for k in range(n_bits):
        low = 1 << k
        for base in range(0, len(a), low << 1):
            for off in range(base, base + low):
                s0 = a[off]
                s1 = a[off + low]
                a[off] = s0 + t0 * s1
                a[off + low] = s0 + t1 * s1
    return a


def _forward_float(a: np.ndarray, n_bits: int, p: float) -> np.ndarray:
    t0 = -2.0 * p
    t1 = 2.0 - 2.0 * p
    for k in range(n_bits):
        low = 1 << k
        shaped = a.reshape(-1, 2, low)
        x0 = shaped[:, 0, :].copy()
        x1 = shaped[:, 1, :]
        shaped[:, 0, :] = x0 + x1
        shaped[:, 1, :] = t0 * x0 + t1 * x1
    return a


def _inverse_float(a: np.ndarray, n_bits: int, p: float) -> np.ndarray:
    t0 = -2.0 * p
    t1 = 2.0 - 2.0 * p
    for k in range(n_bits):
        low = 1 << k
        shaped = a.reshape(-1, 2, low)
        s0 = shaped[:, 0, :].copy()
        s1 = shaped[:, 1, :]
        shaped[:, 0, :] = s0 + t0 * s1
        shaped[:, 1, :] = s0 + t1 * s1
    return a


@dataclass
class FourierTable:
    """All coefficients of Z_v^power over the edge cube of an m-vertex set."""

    m: int
    colors: tuple[int, ...]
    v: int
    p: Union[float, Fraction]
    power: int
    exact: bool
    mu_v: Union[float, Fraction]
    scaled: Union[list, np.ndarray]  # indexed by the subset bitmask S
    max_set_size: int

    @property
    def edges(self) -> list[tuple[int, int]]:
        return edge_list(self.m)

    @property
    def n_edges(self) -> int:
        return self.m * (self.m - 1) // 2

    def _mask_of(self, s: Union[int, Iterable[tuple[int, int]]]) -> int:
        if isinstance(s, int):
            return s
        index = {e: k for k, e in enumerate(self.edges)}
        mask = 0
        for e in s:
            e = tuple(sorted(e))
            if e not in index:
                raise ValueError(f"not an edge of the vertex set: {e}")
            mask |= 1 << index[e]
        return mask

    def coefficient_scaled(self, s) -> Union[float, Fraction]:
        """r_S = coefficient * (2 sqrt(p(1-p)))^|S|; exact when p is rational."""
        return self.scaled[self._mask_of(s)]

    def coefficient(self, s) -> float:
        mask = self._mask_of(s)
        size = int(mask).bit_count()
        norm = (2.0 * math.sqrt(float(self.p) * (1.0 - float(self.p)))) ** size
        return float(self.scaled[mask]) / norm

    def coefficient_sq(self, s) -> Union[float, Fraction]:
        """Squared coefficient; exact rational in exact mode."""
        mask = self._mask_of(s)
        size = int(mask).bit_count()
        r = self.scaled[mask]
        if self.exact:
            return r * r / (4 * self.p * (1 - self.p)) ** size
        q = float(self.p)
        return float(r) ** 2 / (4.0 * q * (1.0 - q)) ** size

    @property
    def coefficients(self) -> dict[frozenset, float]:
        """Float coefficients keyed by edge subsets up to max_set_size."""
        out = {}
        for mask in range(1 << self.n_edges):
            if int(mask).bit_count() <= self.max_set_size:
                s = frozenset(e for k, e in enumerate(self.edges) if mask >> k & 1)
                out[s] = self.coefficient(mask)
        return out

    def parseval_sum(self) -> Union[float, Fraction]:
        """sum_S coefficient(S)^2, which must equal E[(Z_v^power)^2]."""
        if self.exact:
            total = Fraction(0)
            for mask, r in enumerate(self.scaled):
                size = int(mask).bit_count()
                total += r * r / (4 * self.p * (1 - self.p)) ** size
            return total
        q = float(self.p)
        sizes = np.bitwise_count(np.arange(len(self.scaled), dtype=np.uint64))
        return float(np.sum(np.asarray(self.scaled) ** 2
                            / (4.0 * q * (1.0 - q)) ** sizes.astype(np.float64)))

    def second_moment(self) -> Union[float, Fraction]:
        """E[(Z_v^power)^2] straight from the definition (Parseval's mate)."""
        vals = self.function_values()
        if self.exact:
            p = self.p
            total = Fraction(0)
            for x, z in enumerate(vals):
                e = int(x).bit_count()
                total += p**e * (1 - p) ** (self.n_edges - e) * z * z
            return total
        e_counts = np.bitwise_count(
            np.arange(len(vals), dtype=np.uint64)).astype(np.float64)
        q = float(self.p)
        w = q**e_counts * (1.0 - q) ** (self.n_edges - e_counts)
        return float(np.sum(w * np.asarray(vals) ** 2))

    def function_values(self) -> Union[list, np.ndarray]:
        """Z_v^power on every configuration, recomputed from the definition."""
        keep = _keep_flags(self.m, self.colors, self.v)
        if self.exact:
            return [((1 if k else -1) - self.mu_v) ** self.power for k in keep]
        return (np.where(keep, 1.0, -1.0) - float(self.mu_v)) ** self.power

    def reconstruct_all(self) -> Union[list, np.ndarray]:
        """Evaluate sum_S coefficient(S) Phi_S on every configuration at once."""
        if self.exact:
            p = self.p
            c = []
            for mask, r in enumerate(self.scaled):
                size = int(mask).bit_count()
                c.append(r / (4 * p * (1 - p)) ** size)
            return _inverse_exact(c, self.n_edges, p)
        q = float(self.p)
        sizes = np.bitwise_count(np.arange(len(self.scaled), dtype=np.uint64))
        c = np.asarray(self.scaled) / (4.0 * q * (1.0 - q)) ** sizes.astype(np.float64)
        return _inverse_float(c, self.n_edges, q)


def fourier_coefficients(m: int, colors: Sequence[int], v: int, p,
                         max_set_size: Optional[int] = None, power: int = 1,
                         exact: Optional[bool] = None) -> FourierTable:
    """Coefficients of Z_v^power by exact expectation over all 2^C(m,2) graphs.

    Exact-rational arithmetic is the default for m <= 5 (p is converted to a
    Fraction); larger m uses float64.  power >= 2 gives the coefficients of
    the corresponding power of the centered indicator.
    """
    if not 2 <= m <= _MAX_VERTICES:
        raise ValueError(f"vertex count must be in [2, {_MAX_VERTICES}], got {m}")
    colors = tuple(int(c) for c in colors)
    if len(colors) != m or any(c not in (1, 2) for c in colors):
        raise ValueError("colors must be a length-m sequence over {1, 2}")
    if not 0 <= v < m:
        raise ValueError(f"vertex {v} out of range")
    if power < 1:
        raise ValueError("power must be at least 1")
    n_edges = m * (m - 1) // 2
    if max_set_size is None:
        max_set_size = n_edges
    if max_set_size > n_edges:
        raise ValueError("max_set_size exceeds the number of potential edges")
    if exact is None:
        exact = m <= _EXACT_DEFAULT_LIMIT
    c1 = sum(1 for c in colors if c == 1)
    c2 = m - c1
    if c1 < 1 or c2 < 1:
        raise ValueError("both colors must appear")
    keep = _keep_flags(m, colors, v)
    e_counts = np.bitwise_count(np.arange(1 << n_edges, dtype=np.uint64))

    if exact:
        pf = Fraction(p)
        if not 0 < pf < 1:
            raise ValueError(f"p must lie in (0,1), got {p}")
        mu1, mu2 = compute_mu_exact(c1, c2, pf)
        mu_v = mu1 if colors[v] == 1 else mu2
        a = []
        for x in range(1 << n_edges):
            e = int(e_counts[x])
            w = pf**e * (1 - pf) ** (n_edges - e)
            z = (1 if keep[x] else -1) - mu_v
            a.append(w * z**power)
        scaled = _forward_exact(a, n_edges, pf)
        return FourierTable(m, colors, v, pf, power, True, mu_v, scaled,
                            max_set_size)

    q = float(p)
    if not 0.0 < q < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    mu1, mu2 = compute_mu(c1, c2, q)
    mu_v = mu1 if colors[v] == 1 else mu2
    w = q ** e_counts.astype(np.float64) * (1.0 - q) ** (
        n_edges - e_counts).astype(np.float64)
    z = (np.where(keep, 1.0, -1.0) - mu_v) ** power
    scaled = _forward_float(w * z, n_edges, q)
    return FourierTable(m, colors, v, q, power, False, mu_v, scaled,
                        max_set_size)
