"""Exact deletion-channel likelihoods and maximum-likelihood trace decoding.

``Pr[y | x] = E(y, x) * q**(|x|-|y|) * (1-q)**|y|`` where ``E(y, x)`` counts
the deletion patterns that turn ``x`` into ``y``. Counts are kept exact, so
decoding compares integer products rather than rounded floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from ._stats import wilson_interval
from .channel import Trace, apply_bdc, as_bits, pack_hex, unpack_hex
from .errors import ParameterError

MAX_AVG_CASE_LENGTH = 20


def _payload(y) -> np.ndarray:
    return y.payload if isinstance(y, Trace) else np.asarray(y)


def count_embeddings(y, x) -> int:
    """Number of ways ``y`` occurs as a subsequence of ``x`` (exact)."""
    ys = _payload(y).tolist()
    xs = np.asarray(x).tolist()
    L = len(ys)
    if L > len(xs):
        return 0
    row = [1] + [0] * L
    for xi in xs:
        for j in range(L, 0, -1):
            if ys[j - 1] == xi:
                row[j] += row[j - 1]
    return row[L]


def _check_open_probability(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ParameterError(f"likelihoods need 0 < q < 1, got {q}")
    return q


def bdc_log_likelihood(y, x, q: float) -> float:
    """log2 Pr[trace y | input x] over the deletion channel; ``-inf`` if impossible."""
    q = _check_open_probability(q)
    ys = _payload(y)
    count = count_embeddings(ys, x)
    if count == 0:
        return -math.inf
    n, L = len(x), len(ys)
    return math.log2(count) + (n - L) * math.log2(q) + L * math.log2(1 - q)


@dataclass(frozen=True, eq=False)
class Codebook:
    """Distinct equal-length binary codewords; row ``i`` encodes message ``i``."""

    words: np.ndarray

    def __post_init__(self):
        words = np.atleast_2d(np.asarray(self.words, dtype=np.uint8))
        if words.shape[0] == 0:
            raise ParameterError("a codebook needs at least one word")
        if words.size and words.max() > 1:
            raise ParameterError("codewords must be binary")
        if len({w.tobytes() for w in words}) != words.shape[0]:
            raise ParameterError("codewords must be pairwise distinct")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def from_strings(cls, words: Sequence[str]) -> "Codebook":
        return cls(np.array([as_bits(w) for w in words]))

    @property
    def n(self) -> int:
        return int(self.words.shape[1])

    def __len__(self) -> int:
        return int(self.words.shape[0])

    def __getitem__(self, index: int) -> np.ndarray:
        return self.words[index]

    def index_of(self, word) -> int:
        hits = np.flatnonzero((self.words == np.asarray(word, dtype=np.uint8)).all(axis=1))
        if hits.size == 0:
            raise KeyError("word not in codebook")
        return int(hits[0])

    def to_dict(self) -> dict:
        return {"n": self.n, "words": [pack_hex(w) for w in self.words]}

    @classmethod
    def from_dict(cls, data: dict) -> "Codebook":
        n = int(data["n"])
        return cls(np.array([unpack_hex(h, n) for h in data["words"]], dtype=np.uint8).reshape(-1, n))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _count_dtype(n: int):
    # every DP cell is bounded by C(n, n//2)
    return np.int64 if math.comb(n, n // 2) < 2**62 else object


def embedding_counts(cb: Codebook, traces: Sequence) -> list[list[int]]:
    """``counts[t][c]`` = embeddings of trace t into codeword c, exact, vectorized over the book."""
    ys = [_payload(y) for y in traces]
    words = cb.words
    C, n = words.shape
    if not ys:
        return []
    Lmax = max(y.size for y in ys)
    if Lmax > n:
        # an overlong trace embeds nowhere; handle it without widening the DP
        short = [i for i, y in enumerate(ys) if y.size <= n]
        sub = embedding_counts(cb, [ys[i] for i in short]) if short else []
        out = [[0] * C for _ in ys]
        for i, row in zip(short, sub):
            out[i] = row
        return out
    T = len(ys)
    padded = np.full((T, Lmax), 2, dtype=np.int64)
    for t, y in enumerate(ys):
        padded[t, : y.size] = y
    dtype = _count_dtype(n)
    E = np.zeros((C, T, Lmax + 1), dtype=dtype)
    E[:, :, 0] = 1
    for i in range(n):
        match = (padded[None, :, :] == words[:, i, None, None]).astype(dtype)
        E[:, :, 1:] += match * E[:, :, :-1]
    return [[int(E[c, t, ys[t].size]) for c in range(C)] for t in range(T)]


def ml_scores(cb: Codebook, traces: Sequence, q: float) -> np.ndarray:
    """Summed log2-likelihood per codeword; MISSING (``None``) traces contribute 0."""
    q = _check_open_probability(q)
    present = [y for y in traces if y is not None]
    scores = np.zeros(len(cb))
    for y, counts in zip(present, embedding_counts(cb, present)):
        L = _payload(y).size
        const = (cb.n - L) * math.log2(q) + L * math.log2(1 - q)
        scores += np.array([math.log2(c) + const if c else -math.inf for c in counts])
    return scores


def ml_decode(cb: Codebook, traces: Sequence, q: float) -> int:
    """Index of the most likely codeword given independent traces.

    ``None`` entries are MISSING and skipped. All codewords share a length,
    so the channel factors cancel and the exact product of embedding counts
    decides; ties and the all-impossible case resolve to the lowest index.
    """
    _check_open_probability(q)
    if len(cb) == 0:
        raise ParameterError("empty codebook")
    if len(traces) == 0:
        raise ParameterError("ml_decode needs at least one trace")
    present = [y for y in traces if y is not None]
    products = [1] * len(cb)
    for counts in embedding_counts(cb, present):
        products = [p * c for p, c in zip(products, counts)]
    best = 0
    for idx, p in enumerate(products):
        if p > products[best]:
            best = idx
    return best


def full_codebook(m: int) -> Codebook:
    """All ``2**m`` strings of length m, index = integer value read MSB-first."""
    if m == 0:
        return Codebook(np.zeros((1, 0), dtype=np.uint8))
    return Codebook(np.array(list(product((0, 1), repeat=m)), dtype=np.uint8))


@dataclass(frozen=True)
class SuccessEstimate:
    failures: int
    trials: int
    ci_low: float
    ci_high: float

    @property
    def rate(self) -> float:
        return self.failures / self.trials


def estimate_avg_success(m: int, q: float, T: int, trials: int, rng: np.random.Generator) -> SuccessEstimate:
    """Monte Carlo failure rate of exact ML reconstruction of a uniform length-m string.

    Returns the failure count with a 95% Wilson interval.
    """
    if not 1 <= m <= MAX_AVG_CASE_LENGTH:
        raise ParameterError(f"average-case estimation supports 1 <= m <= {MAX_AVG_CASE_LENGTH}")
    if T < 1 or trials < 1:
        raise ParameterError("T and trials must be positive")
    cb = full_codebook(m)
    failures = 0
    for _ in range(trials):
        idx = int(rng.integers(len(cb)))
        traces = [apply_bdc(cb[idx], q, rng) for _ in range(T)]
        if ml_decode(cb, traces, q) != idx:
            failures += 1
    lo, hi = wilson_interval(failures, trials)
    return SuccessEstimate(failures, trials, lo, hi)
