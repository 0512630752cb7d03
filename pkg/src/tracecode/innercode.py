"""m-protected inner codebooks and their multi-trace reconstruction.

A word is m-protected when it reads ``0^m w 1^m`` with an interior ``w``
that starts with 1, ends with 0, and in every window of length
``L >= m/4`` holds between ``L/4`` and ``3L/4`` ones. The buffers let a
parser find block boundaries in a trace; the density bound keeps deletions
inside the interior from faking a buffer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import apply_bdc
from .errors import ConstructionError, ParameterError
from .likelihood import Codebook, ml_decode

DONT_KNOW = None

SAMPLE_ATTEMPTS = 10_000
PRUNE_ROUNDS = 100


def is_m_protected(w, m: int) -> bool:
    w = np.asarray(w, dtype=np.int64)
    n = w.size
    if m < 1 or n <= 2 * m:
        return False
    if w[:m].any() or not w[n - m :].all():
        return False
    interior = w[m : n - m]
    if interior[0] != 1 or interior[-1] != 0:
        return False
    prefix = np.concatenate(([0], np.cumsum(interior)))
    size = interior.size
    for L in range(max(1, -(-m // 4)), size + 1):
        ones = prefix[L:] - prefix[:-L]
        # L/4 <= ones <= 3L/4, kept in integers
        if np.any(4 * ones < L) or np.any(4 * ones > 3 * L):
            return False
    return True


def sample_protected(n: int, m: int, rng: np.random.Generator, max_attempts: int = SAMPLE_ATTEMPTS) -> np.ndarray:
    """Uniform draw from the m-protected words of length n, by rejection."""
    if n < 3 * m:
        raise ParameterError(f"need n >= 3m, got n={n}, m={m}")
    free = n - 2 * m - 2
    for _ in range(max_attempts):
        w = np.concatenate(
            (
                np.zeros(m, dtype=np.uint8),
                [1],
                rng.integers(0, 2, size=free, dtype=np.uint8),
                [0],
                np.ones(m, dtype=np.uint8),
            )
        ).astype(np.uint8)
        if is_m_protected(w, m):
            return w
    raise ConstructionError(f"no {m}-protected word of length {n} in {max_attempts} draws")


@dataclass(frozen=True, eq=False)
class ProtectedCodebook:
    book: Codebook
    m: int
    failure_estimates: tuple[float, ...] | None = None

    def __post_init__(self):
        bad = [i for i, w in enumerate(self.book.words) if not is_m_protected(w, self.m)]
        if bad:
            raise ParameterError(f"codewords {bad[:5]} are not {self.m}-protected")

    @property
    def n(self) -> int:
        return self.book.n

    @property
    def k(self) -> int:
        return len(self.book).bit_length() - 1

    def __len__(self) -> int:
        return len(self.book)

    def __getitem__(self, index: int) -> np.ndarray:
        return self.book[index]

    def to_dict(self) -> dict:
        out = self.book.to_dict()
        out["m"] = self.m
        if self.failure_estimates is not None:
            out["failure_estimates"] = list(self.failure_estimates)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ProtectedCodebook":
        est = data.get("failure_estimates")
        return cls(Codebook.from_dict(data), int(data["m"]), tuple(est) if est is not None else None)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _estimate_failures(words: np.ndarray, q: float, T: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    cb = Codebook(words)
    out = np.zeros(len(cb))
    for idx in range(len(cb)):
        miss = 0
        for _ in range(trials):
            traces = [apply_bdc(cb[idx], q, rng) for _ in range(T)]
            miss += ml_decode(cb, traces, q) != idx
        out[idx] = miss / trials
    return out


def build_inner_code(
    n_R: int,
    k: int,
    m: int,
    q: float,
    T: int,
    prune_trials: int,
    rng: np.random.Generator,
    prune_rounds: int = PRUNE_ROUNDS,
) -> ProtectedCodebook:
    """Sample ``2**k`` distinct protected words, then greedily swap out the hardest ones.

    With ``prune_trials > 0`` each word's ML failure rate is estimated from
    that many T-trace trials; each round proposes a fresh word in place of
    the worst one and keeps the swap only if the book's mean estimate drops.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    size = 2**k
    seen: set[bytes] = set()
    words = []
    budget = SAMPLE_ATTEMPTS * size
    while len(words) < size:
        if budget <= 0:
            raise ConstructionError(f"could not find {size} distinct {m}-protected words of length {n_R}")
        w = sample_protected(n_R, m, rng)
        budget -= 1
        if w.tobytes() not in seen:
            seen.add(w.tobytes())
            words.append(w)
    words_arr = np.array(words, dtype=np.uint8)
    if prune_trials <= 0 or size == 1:
        return ProtectedCodebook(Codebook(words_arr), m)

    est = _estimate_failures(words_arr, q, T, prune_trials, rng)
    for _ in range(prune_rounds):
        worst = int(np.argmax(est))
        if est[worst] == 0.0:
            break
        for _ in range(SAMPLE_ATTEMPTS):
            cand = sample_protected(n_R, m, rng)
            if cand.tobytes() not in seen:
                break
        else:
            break
        trial = words_arr.copy()
        trial[worst] = cand
        trial_est = _estimate_failures(trial, q, T, prune_trials, rng)
        if trial_est.mean() < est.mean():
            seen.discard(words_arr[worst].tobytes())
            seen.add(cand.tobytes())
            words_arr, est = trial, trial_est
    return ProtectedCodebook(Codebook(words_arr), m, tuple(float(v) for v in est))


def inner_reconstruct(cb: ProtectedCodebook, traces: Sequence, q: float):
    """ML symbol from per-trace guesses; ``None`` guesses are MISSING.

    Returns :data:`DONT_KNOW` when every guess is missing, so the caller can
    treat the position as an erasure.
    """
    present = [t for t in traces if t is not None]
    if not present:
        return DONT_KNOW
    return ml_decode(cb.book, present, q)
