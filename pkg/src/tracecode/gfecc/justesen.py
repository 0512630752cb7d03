"""Justesen-style inner codes found by brute force, and their concatenation with RS.

The inner map sends an m-bit symbol ``x`` to ``(x, top_s_bits(alpha * x))``
for a field element ``alpha``; the search keeps the first ``alpha`` whose
code has no nonzero codeword of weight at most
``e = floor((m + s) * Hinv(s / (m + s)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import ParameterError
from .field import GF2m, get_field
from .reedsolomon import RSCode

MAX_SEARCH_M = 14


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def inverse_binary_entropy(y: float) -> float:
    """The unique ``x`` in ``[0, 1/2]`` with ``H(x) = y``."""
    if not 0.0 <= y <= 1.0:
        raise ParameterError(f"entropy value must lie in [0, 1], got {y}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    # tiny xtol so the relative tolerance governs near 0
    return brentq(lambda x: binary_entropy(x) - y, 0.0, 0.5, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)


def justesen_distance_bound(m: int, s: int) -> int:
    return math.floor((m + s) * inverse_binary_entropy(s / (m + s)))


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.array([int(v).bit_count() for v in arr.tolist()], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class JustesenInner:
    field: GF2m
    m: int
    s: int
    alpha: int
    e: int
    min_weight: int
    codewords: np.ndarray  # codewords[x] as an (m+s)-bit int

    @property
    def length(self) -> int:
        return self.m + self.s

    def encode_symbol(self, x: int) -> np.ndarray:
        return _int_to_bits(int(self.codewords[x]), self.length)

    def decode_block(self, bits) -> int:
        """Nearest codeword by Hamming distance, lowest symbol on ties."""
        word = _bits_to_int(bits)
        dist = _popcount(self.codewords ^ word)
        return int(np.argmin(dist))

    def to_dict(self) -> dict:
        return {"m": self.m, "s": self.s, "alpha": self.alpha, "e": self.e}

    @classmethod
    def from_dict(cls, data: dict) -> "JustesenInner":
        m, s, alpha = int(data["m"]), int(data["s"]), int(data["alpha"])
        inner = build_inner(get_field(m), s, alpha)
        if inner.min_weight <= int(data["e"]):
            raise ParameterError("stored alpha does not certify the stored distance")
        return inner


def _int_to_bits(v: int, width: int) -> np.ndarray:
    return np.array([(v >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def _bits_to_int(bits) -> int:
    out = 0
    for b in np.asarray(bits).tolist():
        out = (out << 1) | int(b)
    return out


def _codeword_table(gf: GF2m, s: int, alpha: int) -> np.ndarray:
    m = gf.b
    xs = np.arange(1 << m, dtype=np.int64)
    prod = gf.vmul(np.full_like(xs, alpha), xs)
    return (xs << s) | (prod >> (m - s))


def build_inner(gf: GF2m, s: int, alpha: int) -> JustesenInner:
    table = _codeword_table(gf, s, alpha)
    weights = _popcount(table[1:])
    return JustesenInner(gf, gf.b, s, alpha, justesen_distance_bound(gf.b, s), int(weights.min()), table)


def justesen_inner_search(m: int, s: int) -> JustesenInner:
    """First ``alpha`` (in integer order) whose inner code beats the distance bound."""
    if not 1 <= s <= m <= MAX_SEARCH_M:
        raise ParameterError(f"need 1 <= s <= m <= {MAX_SEARCH_M}")
    gf = get_field(m)
    e = justesen_distance_bound(m, s)
    for alpha in range(gf.order):
        table = _codeword_table(gf, s, alpha)
        w = int(_popcount(table[1:]).min())
        if w > e:
            return JustesenInner(gf, m, s, alpha, e, w, table)
    raise ParameterError(f"no alpha beats distance {e} at m={m}, s={s}")


@dataclass(frozen=True, eq=False)
class ConcatCode:
    """RS over GF(2^m) with every outer symbol encoded by the inner code, then ``pad`` zeros."""

    outer: RSCode
    inner: JustesenInner
    pad: int = 0

    def __post_init__(self):
        if self.outer.field != self.inner.field:
            raise ParameterError("outer and inner codes must share GF(2^m)")
        if self.pad < 0:
            raise ParameterError("pad must be nonnegative")

    @property
    def length(self) -> int:
        return self.outer.n * self.inner.length + self.pad

    @property
    def guaranteed_budget(self) -> int:
        """Every error pattern of weight strictly below this is corrected."""
        wrong_blocks_needed = (self.outer.n - self.outer.k) // 2 + 1
        return wrong_blocks_needed * math.ceil(self.inner.min_weight / 2)

    def encode(self, msg) -> np.ndarray:
        symbols = self.outer.encode(msg)
        blocks = [self.inner.encode_symbol(int(x)) for x in symbols]
        return np.concatenate(blocks + [np.zeros(self.pad, dtype=np.uint8)])

    def decode(self, word) -> np.ndarray:
        w = np.asarray(word, dtype=np.uint8)
        if w.size != self.length:
            raise ParameterError(f"word must have {self.length} bits, got {w.size}")
        L = self.inner.length
        symbols = [self.inner.decode_block(w[i * L : (i + 1) * L]) for i in range(self.outer.n)]
        return self.outer.decode(symbols)


def concat_encode(code: ConcatCode, msg) -> np.ndarray:
    return code.encode(msg)


def concat_decode(code: ConcatCode, word) -> np.ndarray:
    return code.decode(word)


@dataclass(frozen=True)
class JustesenParameters:
    m: int
    s: int
    outer_n: int
    outer_k: int
    pad: int


def justesen_parameters(n: int, eps: float) -> JustesenParameters:
    """Parameter coupling for a rate-(1 - eps) code of length n.

    ``m`` is the smallest integer above ``12/eps`` with ``m * 2**m >= n``;
    ``s`` the largest with ``m/(m+s) >= 1 - eps/3``; the outer RS code has
    length ``n // (m+s)`` and dimension ``ceil(n' (1 - eps/3))``.
    Formula helper only: the resulting ``m`` is far beyond brute-force reach.
    """
    if not 0 < eps < 0.5:
        raise ParameterError("eps must lie in (0, 1/2)")
    m = math.floor(12 / eps) + 1
    while m * 2**m < n:
        m += 1
    s = 0
    while m / (m + s + 1) >= 1 - eps / 3:
        s += 1
    if s == 0:
        raise ParameterError("no positive s satisfies the rate constraint")
    outer_n = n // (m + s)
    outer_k = math.ceil(outer_n * (1 - eps / 3))
    return JustesenParameters(m, s, outer_n, outer_k, n - outer_n * (m + s))
