"""Outer error correction: GF(2^b), Reed-Solomon, Justesen inner codes and their concatenation."""

from .field import GF2m, get_field, is_irreducible
from .justesen import (
    ConcatCode,
    JustesenInner,
    binary_entropy,
    build_inner,
    concat_decode,
    concat_encode,
    inverse_binary_entropy,
    justesen_distance_bound,
    justesen_inner_search,
    justesen_parameters,
)
from .reedsolomon import RSCode, rs_decode, rs_encode

__all__ = [
    "ConcatCode",
    "GF2m",
    "JustesenInner",
    "RSCode",
    "binary_entropy",
    "build_inner",
    "concat_decode",
    "concat_encode",
    "get_field",
    "inverse_binary_entropy",
    "is_irreducible",
    "justesen_distance_bound",
    "justesen_inner_search",
    "justesen_parameters",
    "rs_decode",
    "rs_encode",
]
