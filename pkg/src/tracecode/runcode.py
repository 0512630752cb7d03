"""Run-length code carrying K-bit symbols across the deletion channel.

A codeword has 2K alternating runs (0s first), K of length ``m`` and K of
length ``2m``. The symbol is the co-lexicographic rank of the positions
of the single-length runs. Decoding thresholds each received run at
``1.4 (1 - q) m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .errors import ParameterError

GIVE_UP = 0


def _rank_combination(positions: list[int]) -> int:
    return sum(math.comb(p, i + 1) for i, p in enumerate(sorted(positions)))


def _unrank_combination(rank: int, size: int) -> list[int]:
    out = []
    for i in range(size, 0, -1):
        p = i - 1
        while math.comb(p + 1, i) <= rank:
            p += 1
        out.append(p)
        rank -= math.comb(p, i)
    return sorted(out)


@dataclass(frozen=True)
class RunCodeParams:
    K: int
    m: int
    q: float

    def __post_init__(self):
        if self.K < 1 or self.m < 1:
            raise ParameterError("K and m must be positive")
        if not 0.0 <= self.q < 1.0:
            raise ParameterError("q must lie in [0, 1)")
        if self.threshold <= 1.0:
            raise ParameterError(
                f"threshold 1.4(1-q)m = {self.threshold:.3g} cannot separate single and double runs"
            )

    @property
    def threshold(self) -> float:
        return 1.4 * (1.0 - self.q) * self.m

    @property
    def length(self) -> int:
        return 3 * self.K * self.m

    @property
    def num_symbols(self) -> int:
        return 2**self.K

    def run_profile(self, sigma: int) -> list[int]:
        """Run lengths in units of m: 1 at the ranked positions, 2 elsewhere."""
        if not 0 <= sigma < self.num_symbols:
            raise ParameterError(f"symbol {sigma} outside [0, {self.num_symbols})")
        single = set(_unrank_combination(sigma, self.K))
        return [1 if p in single else 2 for p in range(2 * self.K)]


def rl_encode(params: RunCodeParams, sigma: int) -> np.ndarray:
    runs = params.run_profile(sigma)
    return np.concatenate(
        [np.full(r * params.m, idx % 2, dtype=np.uint8) for idx, r in enumerate(runs)]
    )


def rl_decode(params: RunCodeParams, s, fallback: bool = False) -> int:
    """Symbol from a received word; malformed input returns :data:`GIVE_UP`.

    With ``fallback``, a word whose runs do not threshold into exactly K
    unit runs is read by taking its K shortest runs as the unit runs,
    provided they are strictly shorter than the others. This rescues
    lightly damaged words (clean ones included) whose unit runs sit above
    the threshold.
    """
    bits = np.asarray(s).tolist()
    runs = [(b, sum(1 for _ in grp)) for b, grp in groupby(bits)]
    if len(runs) != 2 * params.K or runs[0][0] != 0:
        return GIVE_UP
    single = [p for p, (_, length) in enumerate(runs) if length < params.threshold]
    if len(single) != params.K:
        if not fallback:
            return GIVE_UP
        lengths = sorted(length for _, length in runs)
        cut = lengths[params.K - 1]
        if cut == lengths[params.K]:
            return GIVE_UP
        single = [p for p, (_, length) in enumerate(runs) if length <= cut]
    rank = _rank_combination(single)
    return rank if rank < params.num_symbols else GIVE_UP


def failure_bound(params: RunCodeParams, divisor: int = 40) -> float:
    """``6K * 2**(-(1-q) m / divisor)``; 40 matches the codec's parameter choice, 20 the single-code bound."""
    return 6 * params.K * 2.0 ** (-(1 - params.q) * params.m / divisor)
