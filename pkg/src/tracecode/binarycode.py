"""Binary trace-reconstructible codec built from content and synchronization blocks.

Encoding: outer RS symbols ``r_i`` become m-protected content blocks
``a_i``; the synchronization string symbols ``s_i`` become run-length
blocks ``b_i``; the codeword is ``a_1 b_1 a_2 b_2 ... a_n b_n`` (optionally
preceded by zero padding).

Decoding, per trace: split into decoded content blocks and their trailing
sync blocks, decode each sync block, align the decoded sync symbols against
the synchronization string, and use the alignment to guess each content
block's image. Then reconstruct every outer symbol by ML over all traces
and finish with RS errors-and-erasures decoding.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .channel import ERASED, Trace
from .errors import ParameterError
from .gfecc import RSCode, get_field
from .innercode import DONT_KNOW, ProtectedCodebook, build_inner_code, inner_reconstruct
from .runcode import RunCodeParams, rl_decode, rl_encode
from .syncstr import SyncString, gen_sync, index_insdel


@dataclass(frozen=True)
class BinaryCodecParams:
    """Desk-scale parameters; ``delta_S`` and ``gamma`` use the asymptotic formulas at these sizes."""

    q: float = 0.3
    n_R: int = 60
    k_inner: int = 5
    m: int = 16
    K: int = 4
    n_S: int = 192
    n_out: int = 31
    outer_redundancy: int = 12
    T: int = 16
    eta: float = 0.5
    pad: int = 0
    eps: float | None = None

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ParameterError("q must lie in (0, 1)")
        if self.m_prime <= 0:
            raise ParameterError("buffer threshold m' must be positive")
        if self.n_R <= 2 * self.m:
            raise ParameterError("content blocks need n_R > 2m")
        if self.n_S % (3 * self.K):
            raise ParameterError(f"n_S={self.n_S} is not a multiple of 3K={3 * self.K}")
        if not 1 <= self.k_inner <= 16:
            raise ParameterError("k_inner must lie in 1..16")
        if not 1 <= self.n_out <= 2**self.k_inner - 1:
            raise ParameterError(f"n_out must lie in 1..{2**self.k_inner - 1} for GF(2^{self.k_inner})")
        if not 0 <= self.outer_redundancy < self.n_out:
            raise ParameterError("outer redundancy must lie in [0, n_out)")
        if self.T < 1 or self.pad < 0:
            raise ParameterError("T must be positive and pad nonnegative")

    @property
    def m_prime(self) -> float:
        return 0.5 * (1 - self.q) * self.m

    @property
    def sync_unit(self) -> int:
        return self.n_S // (3 * self.K)

    @property
    def k_out(self) -> int:
        return self.n_out - self.outer_redundancy

    @property
    def block_length(self) -> int:
        return self.n_R + self.n_S

    @property
    def length(self) -> int:
        return self.pad + self.n_out * self.block_length

    @property
    def delta_S(self) -> float:
        return 6 * self.K * 2.0 ** (-(1 - self.q) * self.sync_unit / 40)

    @property
    def gamma(self) -> float:
        return 2.0 ** (-(1 - self.q) * self.m / 80)

    @property
    def rate(self) -> float:
        return self.k_out * self.k_inner / self.length

    def to_dict(self) -> dict:
        return asdict(self)


def asymptotic_parameters(q: float, eps: float) -> dict[str, float]:
    """Asymptotic parameter choices for target rate loss ``eps``, as plain formulas (logs base 2)."""
    if not (0 < q < 1 and 0 < eps < 1):
        raise ParameterError("need 0 < q < 1 and 0 < eps < 1")
    beta = 1e4 / (1 - q) ** 3
    n_R = math.floor(1e4 * beta / eps * math.log2(1 / eps))
    m = math.floor(beta * math.log2(n_R))
    K = 20
    return {
        "beta": beta,
        "n_R": n_R,
        "delta_R": float(n_R) ** (-3 * beta),
        "m": m,
        "m_prime": 0.5 * (1 - q) * m,
        "eta": 1 / 3,
        "K": K,
        "n_S": 60 * m,
        "delta_S": 6 * K * 2.0 ** (-(1 - q) * m / 40),
        "gamma": 2.0 ** (-(1 - q) * m / 80),
        "delta_out": eps**3 / 50000,
    }


@dataclass(frozen=True, eq=False)
class BinaryCodec:
    params: BinaryCodecParams
    inner: ProtectedCodebook
    runcode: RunCodeParams
    outer: RSCode
    sync: SyncString

    def __post_init__(self):
        p = self.params
        if len(self.inner) != 2**p.k_inner or self.inner.n != p.n_R or self.inner.m != p.m:
            raise ParameterError("inner codebook does not match the parameters")
        if self.runcode.K != p.K or self.runcode.length != p.n_S:
            raise ParameterError("run-length code does not match the parameters")
        if self.outer.field.b != p.k_inner or self.outer.n != p.n_out or self.outer.k != p.k_out:
            raise ParameterError("outer code does not match the parameters")
        if len(self.sync) != p.n_out or self.sync.alphabet_size != 2**p.K:
            raise ParameterError("sync string does not match the parameters")

    def block_spans(self) -> list[tuple[int, int, int]]:
        """Codeword offsets ``(a_start, b_start, b_end)`` of every block pair."""
        p = self.params
        out = []
        for i in range(p.n_out):
            a = p.pad + i * p.block_length
            out.append((a, a + p.n_R, a + p.block_length))
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "binary",
            "params": self.params.to_dict(),
            "inner": self.inner.to_dict(),
            "runcode": {"K": self.runcode.K, "m": self.runcode.m, "q": self.runcode.q},
            "outer": self.outer.to_dict(),
            "sync": self.sync.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BinaryCodec":
        rc = data["runcode"]
        return cls(
            BinaryCodecParams(**data["params"]),
            ProtectedCodebook.from_dict(data["inner"]),
            RunCodeParams(int(rc["K"]), int(rc["m"]), float(rc["q"])),
            RSCode.from_dict(data["outer"]),
            SyncString.from_dict(data["sync"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_binary_codec(params: BinaryCodecParams, rng: np.random.Generator, prune_trials: int = 0) -> BinaryCodec:
    inner = build_inner_code(params.n_R, params.k_inner, params.m, params.q, params.T, prune_trials, rng)
    runcode = RunCodeParams(params.K, params.sync_unit, params.q)
    outer = RSCode(get_field(params.k_inner), params.n_out, params.k_out)
    sync = gen_sync(params.n_out, params.eta, 2**params.K, rng, max_attempts=1000)
    return BinaryCodec(params, inner, runcode, outer, sync)


def bc_encode(codec: BinaryCodec, msg) -> np.ndarray:
    r = codec.outer.encode(msg)
    parts = [np.zeros(codec.params.pad, dtype=np.uint8)]
    for ri, si in zip(r.tolist(), codec.sync.symbols.tolist()):
        parts.append(np.asarray(codec.inner[ri], dtype=np.uint8))
        parts.append(rl_encode(codec.runcode, si))
    return np.concatenate(parts)


@dataclass
class ParsedTrace:
    """Decoded content blocks ``x_j`` and the sync blocks ``y_j`` that follow them."""

    content_blocks: list[np.ndarray] = field(default_factory=list)
    sync_blocks: list[np.ndarray] = field(default_factory=list)
    content_spans: list[tuple[int, int]] = field(default_factory=list)
    sync_spans: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.content_blocks)


def runs_of(z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(values, starts, lengths)`` of the maximal runs of ``z``."""
    z = np.asarray(z)
    if z.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    cuts = np.flatnonzero(np.diff(z)) + 1
    starts = np.concatenate(([0], cuts))
    lengths = np.diff(np.concatenate((starts, [z.size])))
    return z[starts].astype(np.int64), starts, lengths


def parse_trace(z, m_prime: float) -> ParsedTrace:
    """Split a trace at decoded buffers (maximal runs longer than ``m_prime``).

    A decoded content block is a 0-buffer, at least one non-buffer run, then
    a 1-buffer. Each sync block spans from the end of its content block to
    the start of the next one, or to the end of the trace.
    """
    z = np.asarray(z)
    values, starts, lengths = runs_of(z)
    is_buffer = lengths > m_prime
    spans = []
    p, R = 0, len(lengths)
    while p < R:
        if not (is_buffer[p] and values[p] == 0):
            p += 1
            continue
        e = p + 1
        while e < R and not is_buffer[e]:
            e += 1
        if e < R and e > p + 1 and values[e] == 1:
            spans.append((int(starts[p]), int(starts[e] + lengths[e])))
            p = e + 1
        else:
            p = e
    out = ParsedTrace()
    for j, (a, b) in enumerate(spans):
        end = spans[j + 1][0] if j + 1 < len(spans) else z.size
        out.content_blocks.append(z[a:b])
        out.content_spans.append((a, b))
        out.sync_blocks.append(z[b:end])
        out.sync_spans.append((b, end))
    return out


@dataclass
class TraceAlignment:
    """Per-source-index guess of a content block's image (``None`` = MISSING)."""

    guesses: list[np.ndarray | None]
    # guess_source[i] = index j of the parsed block used for source i
    guess_source: list[int | None]
    sync_symbols: list[int]
    indices: list[int | None]


def align_trace(codec: BinaryCodec, parsed: ParsedTrace) -> TraceAlignment:
    n = codec.params.n_out
    s_hat = [rl_decode(codec.runcode, y, fallback=True) for y in parsed.sync_blocks]
    idx = index_insdel(codec.sync, np.array(s_hat, dtype=np.int64)) if s_hat else []
    guesses: list[np.ndarray | None] = [None] * n
    source: list[int | None] = [None] * n
    for j, i in enumerate(idx):
        # keep the first block claiming an index
        if i is not None and guesses[i] is None:
            guesses[i] = parsed.content_blocks[j]
            source[i] = j
    return TraceAlignment(guesses, source, s_hat, list(idx))


def align_traces(codec: BinaryCodec, parsed: Sequence[ParsedTrace]) -> list[TraceAlignment]:
    return [align_trace(codec, p) for p in parsed]


def _payload(tr) -> np.ndarray:
    return tr.payload if isinstance(tr, Trace) else np.asarray(tr)


def outer_estimate(codec: BinaryCodec, traces: Sequence) -> np.ndarray:
    """Reconstructed outer symbols before RS decoding; positions with no guess are ERASED."""
    p = codec.params
    alignments = align_traces(codec, [parse_trace(_payload(t), p.m_prime) for t in traces])
    out = np.full(p.n_out, ERASED, dtype=np.int64)
    for i in range(p.n_out):
        sym = inner_reconstruct(codec.inner, [al.guesses[i] for al in alignments], p.q)
        if sym is not DONT_KNOW:
            out[i] = sym
    return out


def bc_decode(codec: BinaryCodec, traces: Sequence) -> np.ndarray:
    """Message from binary traces; raises :class:`DecodeFailure` when RS decoding fails."""
    return codec.outer.decode(outer_estimate(codec, traces))


@dataclass
class IntactReport:
    """Ground-truth parse diagnostics for every (trace, index) pair."""

    # conditions[t][i] = (lead0, trail1, no_spurious, sync_runs, sync_decodes, has_content)
    conditions: list[list[tuple[bool, ...]]]
    spurious: list[list[int]]
    content_images: list[list[tuple[int, int]]]
    sync_images: list[list[tuple[int, int]]]

    def intact(self, t: int, i: int) -> bool:
        n = len(self.conditions[t])
        if i < 0 or i >= n:
            return True
        return all(self.conditions[t][i])

    def correctly_parsed(self, t: int, i: int) -> bool:
        return self.intact(t, i - 1) and self.intact(t, i) and self.intact(t, i + 1)


def diagnose_intact(codec: BinaryCodec, traces: Sequence[Trace]) -> IntactReport:
    """Evaluate the intact conditions from instrumented deletion patterns.

    Indices are 0-based; positions -1 and n_out act as always-intact
    sentinels. Buffer-survival conditions use the parser's strict ``> m'``
    test. The sixth flag requires the content image to keep at least one
    non-buffer bit, without which no decoded content block can form.
    """
    p = codec.params
    mp = p.m_prime
    conds, spur, a_img, b_img = [], [], [], []
    for tr in traces:
        if tr.pattern is None:
            raise ParameterError("diagnose_intact needs instrumented traces")
        kept = np.asarray(tr.pattern)
        z = tr.payload
        values, starts, lengths = runs_of(z)
        buf_start = starts[lengths > mp]
        buf_end = (starts + lengths)[lengths > mp]
        in_buffer = np.zeros(z.size, dtype=bool)
        for a, b in zip(buf_start.tolist(), buf_end.tolist()):
            in_buffer[a:b] = True
        row_c, row_s, row_a, row_b = [], [], [], []
        for i, (a0, b0, b1) in enumerate(codec.block_spans()):
            lo, mid, hi = np.searchsorted(kept, [a0, b0, b1])
            row_a.append((int(lo), int(mid)))
            row_b.append((int(mid), int(hi)))
            lead = np.searchsorted(kept, a0 + p.m) - lo
            trail = mid - np.searchsorted(kept, b0 - p.m)
            ilo, ihi = np.searchsorted(kept, [a0 + p.m, b0 - p.m])
            n_spur = 0
            if ihi > ilo:
                inside = (buf_start >= ilo) & (buf_end <= ihi)
                n_spur = int(inside.sum())
            run_ok = True
            offset = b0
            for length in codec.runcode.run_profile(int(codec.sync.symbols[i])):
                span = length * codec.runcode.m
                c = np.searchsorted(kept, offset + span) - np.searchsorted(kept, offset)
                run_ok &= bool(c > mp)
                offset += span
            decodes = rl_decode(codec.runcode, z[mid:hi], fallback=True) == int(codec.sync.symbols[i])
            has_content = bool(mid > lo and not in_buffer[lo:mid].all())
            row_c.append((bool(lead > mp), bool(trail > mp), n_spur == 0, run_ok, bool(decodes), has_content))
            row_s.append(n_spur)
        conds.append(row_c)
        spur.append(row_s)
        a_img.append(row_a)
        b_img.append(row_b)
    return IntactReport(conds, spur, a_img, b_img)
