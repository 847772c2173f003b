"""Colored graphs over bit-packed adjacency, G(n,p) sampling, and coloring schemes.

Vertices are indices 0..n-1.  Adjacency is stored as n rows of 64-bit words
(bit j of row i set iff i ~ j), so neighbourhood/color intersections are
word-AND plus popcount.  Colors are the integers 1 and 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

__all__ = [
    "ColoredGraph",
    "ColoringScheme",
    "FixedGap",
    "RandomHalf",
    "RandomBiased",
    "GraphParams",
    "sample_gnp",
    "degree_split",
    "split_seed",
    "pack_color_mask",
    "unpack_row",
    "popcount_rows",
]

_WORD = 64


def _n_words(n: int) -> int:
    return (n + _WORD - 1) // _WORD


def pack_color_mask(flags: np.ndarray) -> np.ndarray:
    """Pack a boolean vector of length n into uint64 words, bit j -> word j>>6, bit j&63."""
    n = flags.shape[0]
    w = _n_words(n)
    b = np.packbits(flags.astype(np.uint8), bitorder="little")
    out = np.zeros(w * 8, dtype=np.uint8)
    out[: b.shape[0]] = b
    return out.view("<u8")


def unpack_row(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_color_mask: uint64 words -> boolean vector of length n."""
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:n].astype(bool)


def popcount_rows(words: np.ndarray) -> np.ndarray:
    """Per-row popcount of a (..., W) uint64 array."""
    return np.bitwise_count(words).sum(axis=-1).astype(np.int64)


def split_seed(master_seed: int, *path: int) -> int:
    """Derive an independent 64-bit child seed from a master seed and an index path.

    Children are independent of worker layout: trial t of cell c always gets
    split_seed(master, c, t), no matter which process runs it.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class FixedGap:
    """Deterministic class sizes |C1| = n/2 + delta, positions permuted by the RNG.

    delta is a half-integer; it is stored doubled so odd n never produces
    fractional counts.
    """

    twice_delta: int

    def __post_init__(self):
        if self.twice_delta < 0:
            raise ValueError("gap must be nonnegative")

    @classmethod
    def from_delta(cls, delta) -> "FixedGap":
        td = Fraction(delta) * 2
        if td.denominator != 1:
            raise ValueError(f"gap must be a half-integer, got {delta}")
        return cls(int(td))

    @property
    def delta(self) -> float:
        return self.twice_delta / 2

    def class_sizes(self, n: int) -> tuple[int, int]:
        if (n + self.twice_delta) % 2 != 0:
            raise ValueError(
                f"n/2 + delta must be an integer: n={n}, delta={self.delta}"
            )
        c1 = (n + self.twice_delta) // 2
        c2 = n - c1
        if c2 < 0:
            raise ValueError(f"delta={self.delta} too large for n={n}")
        return c1, c2


@dataclass(frozen=True)
class RandomHalf:
    """Every vertex independently colored 1 or 2 with probability 1/2 each."""


@dataclass(frozen=True)
class RandomBiased:
    """Every vertex independently colored 1 with probability q1, else 2."""

    q1: float

    def __post_init__(self):
        if not 0.0 <= self.q1 <= 1.0:
            raise ValueError(f"q1 must lie in [0,1], got {self.q1}")

    @property
    def q2(self) -> float:
        return 1.0 - self.q1


ColoringScheme = Union[FixedGap, RandomHalf, RandomBiased]


@dataclass(frozen=True)
class GraphParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0,1], got {self.p}")


class ColoredGraph:
    """Immutable simple graph with a {1,2}-coloring of its vertices."""

    __slots__ = ("n", "adj", "colors", "_color1_words", "_degrees")

    def __init__(self, n: int, adj: np.ndarray, colors: np.ndarray,
                 _degrees: Optional[np.ndarray] = None):
        if adj.shape != (n, _n_words(n)):
            raise ValueError("adjacency shape does not match n")
        colors = np.asarray(colors, dtype=np.int8)
        if colors.shape != (n,):
            raise ValueError("colors must have one entry per vertex")
        if not np.isin(colors, (1, 2)).all():
            raise ValueError("colors must be 1 or 2")
        adj.setflags(write=False)
        colors.setflags(write=False)
        self.n = n
        self.adj = adj
        self.colors = colors
        self._color1_words = pack_color_mask(colors == 1)
        self._color1_words.setflags(write=False)
        self._degrees = _degrees

    @property
    def color1_words(self) -> np.ndarray:
        return self._color1_words

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = popcount_rows(self.adj)
            self._degrees.setflags(write=False)
        return self._degrees

    def counts(self) -> tuple[int, int]:
        c1 = int((self.colors == 1).sum())
        return c1, self.n - c1

    def with_colors(self, colors: np.ndarray) -> "ColoredGraph":
        """New graph sharing this adjacency (and its cached degrees)."""
        return ColoredGraph(self.n, self.adj, colors, _degrees=self._degrees)

    def is_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u, v >> 6] >> np.uint64(v & 63)) & np.uint64(1))

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(unpack_row(self.adj[v], self.n))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            row = unpack_row(self.adj[u], self.n)
            for v in np.flatnonzero(row):
                if u < v:
                    out.append((u, int(v)))
        return out

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   colors: Iterable[int]) -> "ColoredGraph":
        adj = np.zeros((n, _n_words(n)), dtype=np.uint64)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
            adj[v, u >> 6] |= np.uint64(1) << np.uint64(u & 63)
        return cls(n, adj, np.asarray(list(colors), dtype=np.int8))

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "edges": [[u, v] for u, v in self.edges()],
             "colors": [int(c) for c in self.colors]},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ColoredGraph":
        d = json.loads(text)
        return cls.from_edges(d["n"], [tuple(e) for e in d["edges"]], d["colors"])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColoredGraph)
            and self.n == other.n
            and np.array_equal(self.adj, other.adj)
            and np.array_equal(self.colors, other.colors)
        )

    def __repr__(self) -> str:
        c1, c2 = self.counts()
        return f"ColoredGraph(n={self.n}, edges={int(popcount_rows(self.adj).sum()) // 2}, c1={c1}, c2={c2})"


def _sample_pair_indices(rng: np.random.Generator, n_pairs: int, p: float) -> np.ndarray:
    """Indices of present pairs among 0..n_pairs-1, each independently kept w.p. p.

    Geometric skips between successes, so work is proportional to the number
    of edges rather than the number of pairs.
    """
    if p <= 0.0 or n_pairs == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_pairs, dtype=np.int64)
    chunks = []
    pos = 0
    mean = n_pairs * p
    batch = min(int(mean + 10.0 * np.sqrt(mean + 1.0) + 16), 1 << 24)
    while pos < n_pairs:
        gaps = rng.geometric(p, size=batch)
        steps = np.cumsum(gaps) + pos
        take = steps[steps <= n_pairs]
        if take.shape[0] < steps.shape[0]:
            chunks.append(take - 1)
            break
        chunks.append(steps - 1)
        pos = int(steps[-1])
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def _pairs_from_linear(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map linear upper-triangle indices to (i, j) with i < j."""
    row_starts = np.arange(n - 1, dtype=np.int64) * (n - 1) - (
        np.arange(n - 1, dtype=np.int64) * (np.arange(n - 1, dtype=np.int64) - 1)
    ) // 2
    i = np.searchsorted(row_starts, idx, side="right") - 1
    j = i + 1 + (idx - row_starts[i])
    return i, j


def sample_gnp(params: GraphParams, scheme: ColoringScheme) -> ColoredGraph:
    """Draw a G(n,p) graph and color it under the given scheme.

    Every unordered pair is present independently with probability p.  The
    adjacency is drawn first and the coloring second from a single stream
    seeded by params.seed, so equal inputs give bit-identical graphs.
    """
    n, p = params.n, params.p
    rng = np.random.default_rng(np.random.SeedSequence(params.seed))
    w = _n_words(n)
    adj = np.zeros((n, w), dtype=np.uint64)
    n_pairs = n * (n - 1) // 2
    idx = _sample_pair_indices(rng, n_pairs, p)
    if idx.shape[0]:
        i, j = _pairs_from_linear(n, idx)
        one = np.uint64(1)
        np.bitwise_or.at(adj, (i, j >> 6), one << (j & 63).astype(np.uint64))
        np.bitwise_or.at(adj, (j, i >> 6), one << (i & 63).astype(np.uint64))

    if isinstance(scheme, FixedGap):
        c1, c2 = scheme.class_sizes(n)
        base = np.concatenate(
            [np.ones(c1, dtype=np.int8), np.full(c2, 2, dtype=np.int8)]
        )
        colors = base[rng.permutation(n)]
    elif isinstance(scheme, RandomHalf):
        colors = np.where(rng.random(n) < 0.5, 1, 2).astype(np.int8)
    elif isinstance(scheme, RandomBiased):
        colors = np.where(rng.random(n) < scheme.q1, 1, 2).astype(np.int8)
    else:
        raise TypeError(f"unknown coloring scheme: {scheme!r}")
    return ColoredGraph(n, adj, colors)


def degree_split(g: ColoredGraph, v: int) -> tuple[int, int]:
    """(d1, d2): how many neighbours of v currently hold color 1 / color 2."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    row = g.adj[v]
    d1 = int(np.bitwise_count(row & g.color1_words).sum())
    deg = int(np.bitwise_count(row).sum())
    return d1, deg - d1
