"""Deletion and erasure channels over bit and symbol strings.

Strings are one-dimensional numpy arrays: ``uint8`` for bits, ``int64`` for
symbols over a larger alphabet. Erased cells are marked with :data:`ERASED`.
Every random operation takes an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError

ERASED = -1

# rejection rounds per cell before switching to inverse-CDF sampling
_REJECTION_CAP = 10_000
_MAX_ENUM_T = 16


def as_bits(x: str | Sequence[int] | np.ndarray) -> np.ndarray:
    """Coerce ``"0110"``, a list of ints or an array to a uint8 bit array."""
    if isinstance(x, str):
        if any(ch not in "01" for ch in x):
            raise ParameterError(f"not a bit string: {x!r}")
        return np.frombuffer(x.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(x, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ParameterError("bit strings may only contain 0 and 1")
    return arr.astype(np.uint8)


def as_symbols(x: Sequence[int] | np.ndarray, alphabet_size: int | None = None) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64).ravel()
    if arr.size and arr.min() < 0:
        raise ParameterError("symbols must be nonnegative")
    if alphabet_size is not None and arr.size and arr.max() >= alphabet_size:
        raise ParameterError(f"symbol out of range for alphabet of size {alphabet_size}")
    return arr


def bits_to_str(x: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in np.asarray(x).tolist())


def pack_hex(bits: np.ndarray) -> str:
    """Hex-encode bits MSB-first within each byte; the tail byte is zero padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes().hex()


def unpack_hex(text: str, n: int) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    bits = np.unpackbits(raw)
    if bits.size < n:
        raise ParameterError(f"hex string holds {bits.size} bits, expected {n}")
    return bits[:n].copy()


def _check_probability(q: float) -> float:
    q = float(q)
    if not (0.0 <= q <= 1.0) or math.isnan(q):
        raise ParameterError(f"probability must lie in [0, 1], got {q}")
    return q


@dataclass(frozen=True, eq=False)
class Trace:
    """Channel output. ``pattern`` holds the kept input positions when instrumented."""

    payload: np.ndarray
    pattern: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.payload.size)


def apply_pattern(x: np.ndarray, kept_positions: Sequence[int] | np.ndarray) -> np.ndarray:
    """Restrict ``x`` to a strictly increasing set of kept positions."""
    kept = np.asarray(kept_positions, dtype=np.int64)
    if kept.size:
        if np.any(np.diff(kept) <= 0):
            raise ParameterError("kept positions must be strictly increasing")
        if kept[0] < 0 or kept[-1] >= len(x):
            raise ParameterError("kept position out of range")
    return np.asarray(x)[kept]


def apply_bdc(x: np.ndarray, q: float, rng: np.random.Generator, instrumented: bool = False) -> Trace:
    """Send ``x`` through the deletion channel: each cell vanishes with probability ``q``."""
    q = _check_probability(q)
    x = np.asarray(x)
    keep = rng.random(x.size) >= q
    kept = np.flatnonzero(keep)
    return Trace(x[kept], kept if instrumented else None)


def apply_erasure(x: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    """Replace each cell by :data:`ERASED` independently with probability ``q``."""
    q = _check_probability(q)
    out = np.asarray(x, dtype=np.int64).copy()
    out[rng.random(out.size) < q] = ERASED
    return out


def _conditional_keep_patterns(count: int, q: float, T: int, rng: np.random.Generator) -> np.ndarray:
    """Sample ``count`` rows of T keep-flags, each conditioned on at least one keep."""
    keep = rng.random((count, T)) >= q
    bad = np.flatnonzero(~keep.any(axis=1))
    rounds = 0
    while bad.size and rounds < _REJECTION_CAP:
        keep[bad] = rng.random((bad.size, T)) >= q
        bad = bad[~keep[bad].any(axis=1)]
        rounds += 1
    if bad.size:
        if T > _MAX_ENUM_T:
            raise ParameterError(f"conditional sampling needs T <= {_MAX_ENUM_T} at q={q}")
        masks = np.arange(1, 2**T)
        ones = np.array([bin(v).count("1") for v in masks])
        logw = ones * math.log1p(-q) + (T - ones) * math.log(q)
        w = np.exp(logw - logw.max())
        picks = masks[rng.choice(masks.size, size=bad.size, p=w / w.sum())]
        keep[bad] = (picks[:, None] >> np.arange(T)) & 1 == 1
    return keep


def couple_erasure_to_traces(
    y: np.ndarray,
    q: float,
    T: int,
    rng: np.random.Generator,
    instrumented: bool = False,
) -> list[Trace]:
    """Turn one output of the erasure channel with rate ``q**T`` into T deletion traces.

    An erased cell is dropped from every trace. A surviving cell gets T
    independent keep/delete draws conditioned on being kept at least once.
    The traces are then jointly distributed as T independent passes of the
    original string through the deletion channel with rate ``q``.
    """
    q = _check_probability(q)
    if T < 1:
        raise ParameterError("T must be at least 1")
    y = np.asarray(y, dtype=np.int64)
    present = np.flatnonzero(y != ERASED)
    if present.size and q >= 1.0:
        raise ParameterError("a surviving cell cannot be coupled at q = 1")
    keep = np.zeros((y.size, T), dtype=bool)
    keep[present] = _conditional_keep_patterns(present.size, q, T, rng)
    traces = []
    for t in range(T):
        kept = np.flatnonzero(keep[:, t])
        traces.append(Trace(y[kept], kept if instrumented else None))
    return traces


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for ``(seed, *keys)``, e.g. ``derive_rng(seed, grid_index, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys)))
