"""Coded trace reconstruction over the binary deletion channel."""

from .bigalpha import BigAlphaCodec, ba_decode, ba_encode, build_bigalpha, traces_needed
from .binarycode import (
    BinaryCodec,
    BinaryCodecParams,
    bc_decode,
    bc_encode,
    build_binary_codec,
    diagnose_intact,
    asymptotic_parameters,
    parse_trace,
)
from .channel import ERASED, Trace, apply_bdc, apply_erasure, couple_erasure_to_traces, derive_rng
from .errors import ConstructionError, DecodeFailure, ParameterError
from .experiment import ExperimentConfig, ResultRow, rows_to_csv, run_experiment
from .innercode import ProtectedCodebook, build_inner_code, inner_reconstruct, is_m_protected
from .likelihood import (
    Codebook,
    bdc_log_likelihood,
    count_embeddings,
    estimate_avg_success,
    ml_decode,
)
from .runcode import RunCodeParams, rl_decode, rl_encode
from .syncstr import SyncString, gen_sync, id_distance, index_deletion_only, index_insdel, verify_sync

__version__ = "0.1.0"

__all__ = [
    "apply_bdc",
    "apply_erasure",
    "asymptotic_parameters",
    "ba_decode",
    "ba_encode",
    "bc_decode",
    "bc_encode",
    "bdc_log_likelihood",
    "BigAlphaCodec",
    "BinaryCodec",
    "BinaryCodecParams",
    "build_bigalpha",
    "build_binary_codec",
    "build_inner_code",
    "Codebook",
    "ConstructionError",
    "count_embeddings",
    "couple_erasure_to_traces",
    "DecodeFailure",
    "derive_rng",
    "diagnose_intact",
    "ERASED",
    "estimate_avg_success",
    "ExperimentConfig",
    "gen_sync",
    "id_distance",
    "index_deletion_only",
    "index_insdel",
    "inner_reconstruct",
    "is_m_protected",
    "ml_decode",
    "ParameterError",
    "parse_trace",
    "ProtectedCodebook",
    "ResultRow",
    "rl_decode",
    "rl_encode",
    "rows_to_csv",
    "run_experiment",
    "RunCodeParams",
    "SyncString",
    "Trace",
    "traces_needed",
    "verify_sync",
]
