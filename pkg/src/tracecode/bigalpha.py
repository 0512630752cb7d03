"""Large-alphabet trace-reconstructible codec.

Each codeword symbol pairs an outer RS symbol with the matching symbol of a
synchronization string, packed as ``content * |sync alphabet| + sync``.
Decoding indexes every long-enough trace with the error-free deletion-only
indexer, takes the first content value seen at each position and fills the
rest with erasures for the RS decoder.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import ERASED, Trace
from .errors import DecodeFailure, ParameterError
from .gfecc import RSCode, get_field
from .syncstr import SyncString, gen_sync, index_deletion_only


def traces_needed(q: float, eps: float) -> int:
    """``ceil(log_{1/q}(160 / eps^3))``."""
    if not (0 < q < 1 and 0 < eps < 1):
        raise ParameterError("need 0 < q < 1 and 0 < eps < 1")
    return math.ceil(math.log(160 / eps**3) / math.log(1 / q))


@dataclass(frozen=True, eq=False)
class BigAlphaCodec:
    outer: RSCode
    sync: SyncString
    q: float

    def __post_init__(self):
        if len(self.sync) != self.outer.n:
            raise ParameterError("sync string length must equal the outer block length")
        if not 0 <= self.q < 1:
            raise ParameterError("q must lie in [0, 1)")

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def q_prime(self) -> float:
        return (1 + self.q) / 2

    @property
    def useful_threshold(self) -> float:
        """Traces shorter than ``(1 - q') n`` are discarded."""
        return (1 - self.q_prime) * self.n

    @property
    def content_alphabet(self) -> int:
        return self.outer.field.order

    @property
    def sync_alphabet(self) -> int:
        return self.sync.alphabet_size

    @property
    def alphabet_size(self) -> int:
        return self.content_alphabet * self.sync_alphabet

    def rate(self) -> Fraction:
        """Exact rate in bits: ``k log|Sigma_C| / (n log|Sigma|)``; exact when both sizes are powers of 2."""
        bc = self.outer.field.b
        bs = math.log2(self.sync_alphabet)
        if not bs.is_integer():
            raise ParameterError("exact rate needs a power-of-two sync alphabet")
        return Fraction(self.outer.k * bc, self.n * (bc + int(bs)))

    def split(self, symbols) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(symbols, dtype=np.int64)
        return arr // self.sync_alphabet, arr % self.sync_alphabet

    def to_dict(self) -> dict:
        return {"kind": "bigalpha", "q": self.q, "outer": self.outer.to_dict(), "sync": self.sync.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "BigAlphaCodec":
        return cls(RSCode.from_dict(data["outer"]), SyncString.from_dict(data["sync"]), float(data["q"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_bigalpha(
    n: int,
    b: int,
    erasure_budget: float,
    q: float,
    eta: float,
    rng: np.random.Generator,
    sync_alphabet: int = 256,
) -> BigAlphaCodec:
    """RS of length n over GF(2^b) with ``n - k = ceil(erasure_budget * n)``, zipped with a fresh sync string."""
    if not 0 <= erasure_budget < 1:
        raise ParameterError("erasure_budget must lie in [0, 1)")
    k = n - math.ceil(erasure_budget * n)
    outer = RSCode(get_field(b), n, k)
    sync = gen_sync(n, eta, sync_alphabet, rng)
    return BigAlphaCodec(outer, sync, q)


def ba_encode(codec: BigAlphaCodec, msg) -> np.ndarray:
    content = codec.outer.encode(msg)
    return content * codec.sync_alphabet + codec.sync.symbols


def _merge(codec: BigAlphaCodec, traces: Sequence) -> tuple[np.ndarray, int]:
    estimate = np.full(codec.n, ERASED, dtype=np.int64)
    useful = 0
    for tr in traces:
        z = tr.payload if isinstance(tr, Trace) else np.asarray(tr, dtype=np.int64)
        if z.size < codec.useful_threshold:
            continue
        useful += 1
        content, sync = codec.split(z)
        for j, i in enumerate(index_deletion_only(codec.sync, sync)):
            if i is not None and estimate[i] == ERASED:
                estimate[i] = content[j]
    return estimate, useful


def erasure_estimate(codec: BigAlphaCodec, traces: Sequence) -> np.ndarray:
    """Per-position content value or ERASED, before RS decoding."""
    return _merge(codec, traces)[0]


def ba_decode(codec: BigAlphaCodec, traces: Sequence) -> np.ndarray:
    """Message from traces; raises :class:`DecodeFailure` when nothing useful arrives or RS fails."""
    estimate, useful = _merge(codec, traces)
    if useful == 0:
        raise DecodeFailure("no useful traces")
    return codec.outer.decode(estimate)
