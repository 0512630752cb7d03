"""Seeded Monte Carlo sweeps over (q, T) grids with CSV output."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._stats import wilson_interval
from .bigalpha import ba_decode, ba_encode, build_bigalpha
from .binarycode import BinaryCodecParams, bc_decode, bc_encode, build_binary_codec
from .channel import apply_bdc, derive_rng
from .errors import DecodeFailure, ParameterError
from .innercode import build_inner_code, inner_reconstruct
from .likelihood import full_codebook, ml_decode
from .runcode import RunCodeParams, rl_decode, rl_encode

KINDS = ("bigalpha", "binary", "inner", "runcode", "avgcase")
CSV_COLUMNS = ("codec", "q", "T", "n", "trials", "failures", "rate", "ci_lo", "ci_hi", "seconds")
THREADS_ENV = "TRACECODE_THREADS"

# Channel-independent build parameters per kind, overridable through ``params``.
DEFAULTS = {
    "bigalpha": {"n": 64, "b": 8, "erasure_budget": 0.25, "eta": 0.5, "sync_alphabet": 256},
    "binary": {},
    "inner": {"n_R": 60, "k": 5, "m": 16, "prune_trials": 0},
    "runcode": {"K": 4, "m": 40},
    "avgcase": {"m": 8},
}


@dataclass
class ExperimentConfig:
    kind: str
    q: list[float]
    T: list[int]
    trials: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    timing: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown codec kind {self.kind!r}; expected one of {KINDS}")
        self.q = [float(v) for v in self.q]
        self.T = [int(v) for v in self.T]
        if not self.q or not self.T:
            raise ParameterError("q and T grids must be nonempty")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if any(not 0 <= v < 1 for v in self.q) or any(v < 1 for v in self.T):
            raise ParameterError("grid needs 0 <= q < 1 and T >= 1")
        unknown = set(self.params) - set(DEFAULTS[self.kind]) - (
            set(BinaryCodecParams.__dataclass_fields__) if self.kind == "binary" else set()
        )
        if unknown:
            raise ParameterError(f"unknown parameters for {self.kind}: {sorted(unknown)}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        for key in ("q", "T"):
            if not isinstance(data.get(key), list):
                data[key] = [data[key]] if key in data else []
        return cls(
            kind=data["kind"],
            q=data["q"],
            T=data["T"],
            trials=int(data.get("trials", 100)),
            seed=int(data.get("seed", 0)),
            params=dict(data.get("params", {})),
            timing=bool(data.get("timing", False)),
        )


@dataclass(frozen=True)
class ResultRow:
    codec: str
    q: float
    T: int
    n: int
    trials: int
    failures: int
    ci_lo: float
    ci_hi: float
    seconds: float | None = None

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    def as_csv_row(self) -> list:
        secs = "" if self.seconds is None else f"{self.seconds:.3f}"
        return [self.codec, repr(self.q), self.T, self.n, self.trials, self.failures,
                repr(self.rate), repr(self.ci_lo), repr(self.ci_hi), secs]


def _prepare(kind: str, params: dict, q: float, T: int, rng) -> tuple[int, Callable]:
    """Build the codec for one grid point; return its length and a trial function."""
    p = {**DEFAULTS[kind], **params}
    # channel-dependent constructions need q in (0, 1); q = 0 reuses a small positive design value
    q_design = q if q > 0 else 0.01

    if kind == "bigalpha":
        codec = build_bigalpha(p["n"], p["b"], p["erasure_budget"], q_design, p["eta"], rng, p["sync_alphabet"])
        k, size = codec.outer.k, 2 ** codec.outer.field.b

        def trial(r):
            msg = r.integers(0, size, k)
            x = ba_encode(codec, msg)
            return np.array_equal(ba_decode(codec, [apply_bdc(x, q, r) for _ in range(T)]), msg)

        return codec.n, trial

    if kind == "binary":
        bp = BinaryCodecParams(**{**p, "q": q_design, "T": T})
        codec = build_binary_codec(bp, rng)
        k, size = bp.k_out, 2**bp.k_inner

        def trial(r):
            msg = r.integers(0, size, k)
            x = bc_encode(codec, msg)
            return np.array_equal(bc_decode(codec, [apply_bdc(x, q, r) for _ in range(T)]), msg)

        return bp.length, trial

    if kind == "inner":
        cb = build_inner_code(p["n_R"], p["k"], p["m"], q_design, T, p["prune_trials"], rng)

        def trial(r):
            idx = int(r.integers(len(cb)))
            return inner_reconstruct(cb, [apply_bdc(cb[idx], q, r) for _ in range(T)], q_design) == idx

        return cb.n, trial

    if kind == "runcode":
        rc = RunCodeParams(p["K"], p["m"], q)

        # single-trace code: T is echoed but only one trace is drawn
        def trial(r):
            sigma = int(r.integers(rc.num_symbols))
            return rl_decode(rc, apply_bdc(rl_encode(rc, sigma), q, r).payload) == sigma

        return rc.length, trial

    cb = full_codebook(p["m"])

    def trial(r):
        idx = int(r.integers(len(cb)))
        return ml_decode(cb, [apply_bdc(cb[idx], q, r) for _ in range(T)], q_design) == idx

    return cb.n, trial


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """One row per (q, T) grid point, in grid order; deterministic given the seed."""
    rows = []
    threads = _threads()
    grid = [(q, T) for q in cfg.q for T in cfg.T]
    for g, (q, T) in enumerate(grid):
        start = time.perf_counter()
        try:
            n, trial = _prepare(cfg.kind, cfg.params, q, T, derive_rng(cfg.seed, g))
        except Exception as exc:
            raise type(exc)(f"grid point {g} (q={q}, T={T}): {exc}") from exc

        def run(t, g=g, trial=trial):
            try:
                return bool(trial(derive_rng(cfg.seed, g, t)))
            except DecodeFailure:
                return False

        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                outcomes = list(pool.map(run, range(cfg.trials)))
        else:
            outcomes = [run(t) for t in range(cfg.trials)]
        failures = outcomes.count(False)
        lo, hi = wilson_interval(failures, cfg.trials)
        seconds = time.perf_counter() - start if cfg.timing else None
        rows.append(ResultRow(cfg.kind, q, T, n, cfg.trials, failures, lo, hi, seconds))
    return rows


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()
