"""Command-line entry point: ``tracecode <subcommand> ...``.

Config files are JSON or TOML (by extension). Experiment configs look like::

    kind = "bigalpha"      # bigalpha | binary | inner | runcode | avgcase
    q = [0.3, 0.5]
    T = [2, 4, 6]
    trials = 200
    seed = 7
    [params]
    n = 256
    b = 12

Codec configs for ``build-codec`` use ``kind`` (bigalpha | binary), ``seed``
and ``params`` (for bigalpha: n, b, erasure_budget, q, eta, sync_alphabet;
for binary: any BinaryCodecParams field).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bigalpha import BigAlphaCodec, ba_decode, ba_encode, build_bigalpha
from .binarycode import BinaryCodec, BinaryCodecParams, bc_decode, bc_encode, build_binary_codec
from .channel import ERASED, apply_bdc, as_bits, pack_hex, unpack_hex
from .errors import ConstructionError, DecodeFailure, ParameterError
from .experiment import ExperimentConfig, rows_to_csv, run_experiment
from .syncstr import SyncString, verify_sync

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("tracecode")


class UsageError(Exception):
    pass


def load_config(path: str) -> dict:
    p = Path(path)
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(p.read_text())
        return json.loads(p.read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def load_codec(path: str):
    data = load_config(path)
    kind = data.get("kind")
    if kind == "bigalpha":
        return BigAlphaCodec.from_dict(data)
    if kind == "binary":
        return BinaryCodec.from_dict(data)
    raise UsageError(f"{path}: unknown codec kind {kind!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_message(text: str) -> np.ndarray:
    try:
        return np.array([int(v) for v in text.replace(",", " ").split()], dtype=np.int64)
    except ValueError as exc:
        raise UsageError(f"bad message {text!r}: {exc}") from exc


def _codeword_json(codec, word: np.ndarray) -> dict:
    if isinstance(codec, BinaryCodec):
        return {"n": int(word.size), "hex": pack_hex(word)}
    return {"symbols": [int(v) for v in word]}


def _trace_from_json(codec, item) -> np.ndarray:
    if isinstance(codec, BinaryCodec):
        if isinstance(item, str):
            return as_bits(item)
        return unpack_hex(item["hex"], int(item["n"]))
    return np.array([ERASED if v is None else v for v in item], dtype=np.int64)


def cmd_build_codec(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    rng = np.random.default_rng(seed)
    params = dict(cfg.get("params", {}))
    kind = cfg.get("kind")
    if kind == "bigalpha":
        codec = build_bigalpha(
            int(params.get("n", 64)), int(params.get("b", 8)), float(params.get("erasure_budget", 0.25)),
            float(params.get("q", 0.5)), float(params.get("eta", 0.5)), rng, int(params.get("sync_alphabet", 256)),
        )
    elif kind == "binary":
        prune = int(params.pop("prune_trials", 0))
        codec = build_binary_codec(BinaryCodecParams(**params), rng, prune)
    else:
        raise UsageError(f"build-codec: unknown kind {kind!r}")
    _emit(codec.to_json() + "\n", args.out)
    return 0


def cmd_encode(args) -> int:
    codec = load_codec(args.codec)
    msg = _parse_message(args.message)
    word = bc_encode(codec, msg) if isinstance(codec, BinaryCodec) else ba_encode(codec, msg)
    _emit(json.dumps(_codeword_json(codec, word)) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    codec = load_codec(args.codec)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    msg = _parse_message(args.message)
    word = bc_encode(codec, msg) if isinstance(codec, BinaryCodec) else ba_encode(codec, msg)
    traces = [_codeword_json(codec, apply_bdc(word, args.q, rng).payload) for _ in range(args.T)]
    _emit(json.dumps({"traces": traces}) + "\n", args.out)
    return 0


def cmd_decode(args) -> int:
    codec = load_codec(args.codec)
    data = load_config(args.traces)
    items = data["traces"] if isinstance(data, dict) else data
    traces = []
    for item in items:
        if isinstance(item, dict) and "symbols" in item:
            item = item["symbols"]
        traces.append(_trace_from_json(codec, item))
    try:
        msg = bc_decode(codec, traces) if isinstance(codec, BinaryCodec) else ba_decode(codec, traces)
    except DecodeFailure as exc:
        print(f"decode failure: {exc}", file=sys.stderr)
        return 1
    _emit(",".join(str(int(v)) for v in msg) + "\n", args.out)
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_dict(load_config(args.config))
    if args.seed is not None:
        cfg.seed = args.seed
    rows = run_experiment(cfg)
    _emit(rows_to_csv(rows), args.out)
    return 0


def cmd_verify_sync(args) -> int:
    data = load_config(args.file)
    s = SyncString(np.array(data["symbols"], dtype=np.int64), float(data["eta"]), int(data["alphabet_size"]))
    check = verify_sync(s.symbols, s.eta)
    if check.ok:
        print(f"ok: length {len(s)} is a {s.eta}-synchronization string")
        return 0
    i, j, k = check.violation
    print(f"violation at (i, j, k) = ({i}, {j}, {k})")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracecode", description="Coded trace reconstruction tools.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-codec", help="construct a codec and write it as JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_codec)

    p = sub.add_parser("encode", help="encode a message (comma or space separated symbols)")
    p.add_argument("--codec", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", help="encode a message and pass it through the deletion channel")
    p.add_argument("--codec", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode", help="decode a JSON file of traces")
    p.add_argument("--codec", required=True)
    p.add_argument("--traces", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("experiment", help="run a Monte Carlo sweep and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify-sync", help="check a stored synchronization string")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_verify_sync)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ParameterError, ConstructionError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
