"""Synchronization strings: ID distance, verification, construction and indexing.

A string ``S`` of length ``n`` is an eta-synchronization string when every
pair of adjacent intervals satisfies
``ID(S[i:j], S[j:k]) > (1 - eta) * (k - i)``. Indexing maps each received
symbol back to a source position (0-based) or to ``None`` for "don't know".
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import as_symbols
from .errors import ConstructionError, ParameterError

BOTTOM = None


def _lcs_bitparallel(a: Sequence[int], b: Sequence[int]) -> int:
    # Hyyro's bit-vector LCS: zero bits of V count the LCS length
    n = len(a)
    if n == 0 or len(b) == 0:
        return 0
    full = (1 << n) - 1
    masks: dict[int, int] = {}
    for p, c in enumerate(a):
        masks[c] = masks.get(c, 0) | (1 << p)
    V = full
    for c in b:
        U = V & masks.get(c, 0)
        V = ((V + U) | (V - U)) & full
    return n - V.bit_count()


def lcs_length(a, b) -> int:
    return _lcs_bitparallel(np.asarray(a).tolist(), np.asarray(b).tolist())


def id_distance(a, b) -> int:
    """Minimum insertions plus deletions turning ``a`` into ``b``."""
    return len(a) + len(b) - 2 * lcs_length(a, b)


def _eta_fraction(eta) -> Fraction:
    f = Fraction(eta).limit_denominator(1_000_000)
    if not 0 < f < 1:
        raise ParameterError(f"eta must lie in (0, 1), got {eta}")
    return f


@dataclass(frozen=True)
class SyncCheck:
    ok: bool
    # 1-based (i, j, k) naming the intervals S[i, j) and S[j, k)
    violation: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_sync(s, eta) -> SyncCheck:
    """Exhaustively check the synchronization property, stopping at the first violation.

    Triples are scanned in lexicographic order of ``(i, j, k)``.
    """
    sym = np.asarray(s).tolist()
    n = len(sym)
    f = _eta_fraction(eta)
    num, den = f.numerator, f.denominator
    positions: dict[int, int] = {}
    for p, c in enumerate(sym):
        positions[c] = positions.get(c, 0) | (1 << p)
    for i in range(n):
        for j in range(i + 1, n):
            width = j - i
            full = (1 << width) - 1
            V = full
            for k in range(j + 1, n + 1):
                U = V & (positions[sym[k - 1]] >> i) & full
                V = ((V + U) | (V - U)) & full
                lcs = width - V.bit_count()
                total = k - i
                # ID <= (1 - eta) * total, in integers
                if (total - 2 * lcs) * den <= (den - num) * total:
                    return SyncCheck(False, (i + 1, j + 1, k + 1))
    return SyncCheck(True)


@dataclass(frozen=True, eq=False)
class SyncString:
    symbols: np.ndarray
    eta: float
    alphabet_size: int
    verified: bool = False

    def __post_init__(self):
        sym = as_symbols(self.symbols, self.alphabet_size)
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)

    def __len__(self) -> int:
        return int(self.symbols.size)

    def to_dict(self) -> dict:
        return {"eta": self.eta, "alphabet_size": self.alphabet_size, "symbols": self.symbols.tolist()}

    @classmethod
    def from_dict(cls, data: dict, verify: bool = True) -> "SyncString":
        sym = np.asarray(data["symbols"], dtype=np.int64)
        ok = bool(verify_sync(sym, data["eta"])) if verify else False
        if verify and not ok:
            raise ParameterError("stored string is not a synchronization string for its eta")
        return cls(sym, float(data["eta"]), int(data["alphabet_size"]), ok)


def default_alphabet_size(eta: float) -> int:
    return math.ceil(64 / eta**2)


def _extend_ok(sym: list[int], masks: dict[int, int], states: list[list[int]], c: int, num: int, den: int):
    """States after appending ``c``, or ``None`` if some new triple violates the bound.

    ``states[j][i]`` is the bit-parallel LCS vector of ``S[i:j]`` against ``S[j:]``.
    """
    p = len(sym)
    k = p + 1
    cmask = masks.get(c, 0)
    new_states = []
    # scan the shortest windows first; they reject most candidates
    for j in range(p, 0, -1):
        row = states[j] if j < p else [((1 << (j - i)) - 1) for i in range(j)]
        new_row = [0] * j
        for i in range(j - 1, -1, -1):
            width = j - i
            full = (1 << width) - 1
            V = row[i]
            U = V & (cmask >> i) & full
            V = ((V + U) | (V - U)) & full
            lcs = width - V.bit_count()
            total = k - i
            if (total - 2 * lcs) * den <= (den - num) * total:
                return None
            new_row[i] = V
        new_states.append((j, new_row))
    return new_states


def gen_sync(
    n: int,
    eta: float,
    alphabet_size: int | None = None,
    rng: np.random.Generator | None = None,
    max_attempts: int = 100,
    method: str = "greedy",
) -> SyncString:
    """Randomized construction of a verified eta-synchronization string.

    ``method="greedy"`` extends a random string one symbol at a time, trying
    symbols in random order and accepting the first that keeps every triple
    ending at the new position valid; a dead end restarts and costs one
    attempt. ``method="rejection"`` draws whole uniform strings and verifies
    them. ``method="distinct"`` samples without replacement (needs
    ``n <= alphabet_size``) and is always valid.
    """
    if alphabet_size is None:
        alphabet_size = default_alphabet_size(eta)
    if alphabet_size < 2:
        raise ParameterError("alphabet_size must be at least 2")
    if n < 0:
        raise ParameterError("n must be nonnegative")
    f = _eta_fraction(eta)
    rng = rng if rng is not None else np.random.default_rng()
    if method == "distinct":
        if n > alphabet_size:
            raise ParameterError("distinct sampling needs n <= alphabet_size")
        return SyncString(rng.choice(alphabet_size, size=n, replace=False), float(eta), alphabet_size, True)
    if method == "rejection":
        for _ in range(max_attempts):
            cand = rng.integers(alphabet_size, size=n)
            if verify_sync(cand, eta):
                return SyncString(cand, float(eta), alphabet_size, True)
        raise ConstructionError(f"no {eta}-synchronization string of length {n} in {max_attempts} draws")
    if method != "greedy":
        raise ParameterError(f"unknown method {method!r}")
    num, den = f.numerator, f.denominator
    for _ in range(max_attempts):
        sym: list[int] = []
        masks: dict[int, int] = {}
        states: list[list[int]] = [[]]
        while len(sym) < n:
            for c in rng.permutation(alphabet_size).tolist():
                upd = _extend_ok(sym, masks, states, c, num, den)
                if upd is not None:
                    break
            else:
                break
            # states keeps one slot per split point j in [0, len(sym)]
            for j, row in upd:
                states[j] = row
            masks[c] = masks.get(c, 0) | (1 << len(sym))
            sym.append(c)
            states.append([])
        if len(sym) == n:
            return SyncString(np.array(sym, dtype=np.int64), float(eta), alphabet_size, True)
    raise ConstructionError(
        f"greedy construction of a length-{n} {eta}-synchronization string failed "
        f"{max_attempts} times over {alphabet_size} symbols"
    )


def _symbols_of(s) -> np.ndarray:
    return s.symbols if isinstance(s, SyncString) else np.asarray(s)


def index_deletion_only(s, received) -> list[int | None]:
    """Error-free indexing of a subsequence of ``s``.

    A received position is indexed only when its leftmost and rightmost
    embeddings into ``s`` agree, so every returned index is correct under any
    deletion pattern consistent with the input. A non-subsequence yields all
    ``None``.
    """
    src = _symbols_of(s).tolist()
    rec = np.asarray(received).tolist()
    where: dict[int, list[int]] = {}
    for p, c in enumerate(src):
        where.setdefault(c, []).append(p)
    left = []
    pos = 0
    for c in rec:
        occ = where.get(c, ())
        at = bisect.bisect_left(occ, pos)
        if at == len(occ):
            return [BOTTOM] * len(rec)
        left.append(occ[at])
        pos = occ[at] + 1
    right = [0] * len(rec)
    pos = len(src) - 1
    for idx in range(len(rec) - 1, -1, -1):
        occ = where[rec[idx]]
        at = bisect.bisect_right(occ, pos) - 1
        right[idx] = occ[at]
        pos = occ[at] - 1
    return [l if l == r else BOTTOM for l, r in zip(left, right)]


def lcs_table(a, b) -> np.ndarray:
    """Full LCS table ``D[x, y] = LCS(a[:x], b[:y])``, one vectorized row per symbol of ``a``."""
    a = np.asarray(a)
    b = np.asarray(b)
    D = np.zeros((a.size + 1, b.size + 1), dtype=np.int32)
    for x in range(1, a.size + 1):
        diag = D[x - 1, :-1] + (b == a[x - 1])
        cand = np.maximum(D[x - 1, 1:], diag)
        D[x, 1:] = np.maximum.accumulate(cand)
    return D


def index_insdel(s, received, delta: float | None = None) -> list[int | None]:
    """Index via one minimum-ID-distance alignment of ``received`` against ``s``.

    Matched positions get their source index, unmatched ones ``None``. Among
    optimal alignments the traceback prefers matches at earlier source
    positions. ``delta`` is accepted for interface parity and not used; the
    alignment is applied whatever the corruption level.
    """
    src = _symbols_of(s)
    rec = np.asarray(received)
    D = lcs_table(rec, src)
    out: list[int | None] = [BOTTOM] * rec.size
    x, y = rec.size, src.size
    while x > 0 and y > 0:
        if D[x, y - 1] == D[x, y]:
            y -= 1
        elif rec[x - 1] == src[y - 1] and D[x - 1, y - 1] + 1 == D[x, y]:
            out[x - 1] = y - 1
            x -= 1
            y -= 1
        else:
            x -= 1
    return out


def count_misdecodings(assigned: Sequence[int | None], truth: Sequence[int | None]) -> int:
    """Received symbols given a wrong index; ``truth`` is None for inserted symbols, and ``None`` guesses never count."""
    return sum(1 for a, t in zip(assigned, truth) if a is not None and a != t)
