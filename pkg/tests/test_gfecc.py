import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import gf_mul

from tracecode.channel import ERASED
from tracecode.errors import DecodeFailure, ParameterError
from tracecode.gfecc import (
    ConcatCode,
    GF2m,
    RSCode,
    binary_entropy,
    get_field,
    inverse_binary_entropy,
    is_irreducible,
    justesen_distance_bound,
    justesen_inner_search,
    justesen_parameters,
)
from tracecode.gfecc.field import DEFAULT_POLYS


@pytest.mark.parametrize("b", range(1, 17))
def test_default_polynomials_irreducible(b):
    assert is_irreducible(DEFAULT_POLYS[b])


def test_reducible_polynomial_rejected():
    assert not is_irreducible(0b101)  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ParameterError):
        GF2m(2, 0b101)


@pytest.mark.parametrize("b", [2, 3, 4, 5])
def test_field_tables_match_shift_and_add(b):
    gf = get_field(b)
    poly = gf.reduction_poly
    for a in range(gf.order):
        for c in range(gf.order):
            assert gf.mul(a, c) == gf_mul(a, c, poly, b)
        if a:
            assert gf.mul(a, gf.inv(a)) == 1


@pytest.mark.parametrize("b", [3, 4, 8])
def test_field_axioms(b):
    gf = get_field(b)
    rng = np.random.default_rng(b)
    xs = rng.integers(0, gf.order, (200, 3))
    for a, c, d in xs.tolist():
        assert gf.mul(a, c) == gf.mul(c, a)
        assert gf.mul(a, gf.mul(c, d)) == gf.mul(gf.mul(a, c), d)
        assert gf.mul(a, c ^ d) == gf.mul(a, c) ^ gf.mul(a, d)


def test_generator_has_full_order():
    gf = get_field(8)
    powers = {gf.alpha_pow(i) for i in range(255)}
    assert len(powers) == 255 and 0 not in powers


def test_rs_linearity_examples():
    code = RSCode(get_field(4), 15, 5)
    assert not code.encode([0] * 5).any()
    assert code.encode([7, 0, 0, 0, 0]).tolist() == [7] * 15


def test_rs_parameter_checks():
    gf = get_field(3)
    with pytest.raises(ParameterError):
        RSCode(gf, 8, 3)
    with pytest.raises(ParameterError):
        RSCode(gf, 5, 6)
    with pytest.raises(ParameterError):
        RSCode(gf, 3, 2, (1, 1, 2))


def _corrupt(code, word, errors, erasures, rng):
    out = word.copy()
    pos = rng.choice(code.n, size=errors + erasures, replace=False)
    for p in pos[:errors]:
        out[p] ^= int(rng.integers(1, code.field.order))
    out[pos[errors:]] = ERASED
    return out


@pytest.mark.parametrize("b,n,k", [(4, 15, 3), (4, 15, 9), (5, 31, 19), (8, 40, 20)])
def test_rs_random_boundary_patterns(b, n, k):
    code = RSCode(get_field(b), n, k)
    rng = np.random.default_rng(n + k)
    r = n - k
    for _ in range(150):
        f = int(rng.integers(0, r + 1))
        e = (r - f) // 2
        msg = rng.integers(0, code.field.order, k)
        received = _corrupt(code, code.encode(msg), e, f, rng)
        assert code.decode(received).tolist() == msg.tolist()


def test_rs_all_erasure_patterns_gf16():
    code = RSCode(get_field(4), 15, 9)
    msg = np.arange(1, 10)
    word = code.encode(msg)
    for pos in itertools.combinations(range(15), 6):
        received = word.copy()
        received[list(pos)] = ERASED
        assert code.decode(received).tolist() == msg.tolist()


@pytest.fixture(scope="module")
def gf8_code():
    code = RSCode(get_field(3), 7, 3)
    msgs = list(itertools.product(range(8), repeat=3))
    words = np.array([code.encode(m) for m in msgs])
    return code, msgs, words


def test_rs_gf8_matches_nearest_codeword(gf8_code):
    code, msgs, words = gf8_code
    rng = np.random.default_rng(0)
    for _ in range(300):
        received = rng.integers(0, 8, 7)
        dist = (words != received).sum(axis=1)
        best = int(dist.min())
        if best <= 2:
            assert code.decode(received).tolist() == list(msgs[int(dist.argmin())])
        else:
            with pytest.raises(DecodeFailure):
                code.decode(received)


def test_rs_custom_eval_points_roundtrip():
    gf = get_field(4)
    code = RSCode(gf, 6, 2, (3, 5, 7, 9, 11, 13))
    msg = [4, 9]
    received = code.encode(msg)
    received[2] ^= 6
    assert code.decode(received).tolist() == msg
    again = RSCode.from_dict(code.to_dict())
    assert again.eval_points == code.eval_points


def test_rs_too_many_erasures_fails():
    code = RSCode(get_field(4), 15, 9)
    word = code.encode(range(9))
    word[:7] = ERASED
    with pytest.raises(DecodeFailure):
        code.decode(word)


@given(st.floats(0, 1))
def test_inverse_entropy_roundtrip(y):
    x = inverse_binary_entropy(y)
    assert 0 <= x <= 0.5
    assert abs(binary_entropy(x) - y) < 1e-9
    assert x >= y * y / 4


def test_inverse_entropy_half():
    assert math.floor(16 * inverse_binary_entropy(0.5)) == 1
    assert justesen_distance_bound(8, 8) == 1


@pytest.mark.parametrize("m,s", [(4, 4), (6, 3), (8, 8)])
def test_justesen_search_certificate_and_linearity(m, s):
    inner = justesen_inner_search(m, s)
    words = [int(w) for w in inner.codewords]
    assert words[0] == 0
    assert min(bin(w).count("1") for w in words[1:]) == inner.min_weight > inner.e
    for x, y in itertools.product(range(2**m), repeat=2):
        assert words[x ^ y] == words[x] ^ words[y]


def test_justesen_zero_bound_accepts_first_alpha():
    # with e = 0 any alpha giving an injective map is fine; alpha = 0 still has weight-m messages
    inner = justesen_inner_search(2, 1)
    assert inner.e == justesen_distance_bound(2, 1)
    assert inner.min_weight > inner.e


@pytest.fixture(scope="module")
def concat_code():
    inner = justesen_inner_search(8, 8)
    return ConcatCode(RSCode(inner.field, 20, 16), inner)


def test_concat_roundtrip_and_single_flip(concat_code):
    msg = np.arange(16) * 11 % 256
    word = concat_code.encode(msg)
    assert word.size == concat_code.length == 20 * 16
    assert concat_code.decode(word).tolist() == msg.tolist()
    zero = concat_code.encode(np.zeros(16, dtype=np.int64))
    zero[37] ^= 1
    assert not concat_code.decode(zero).any()


def test_concat_guaranteed_budget(concat_code):
    rng = np.random.default_rng(1)
    budget = concat_code.guaranteed_budget
    for _ in range(1000):
        msg = rng.integers(0, 256, 16)
        word = concat_code.encode(msg)
        flips = rng.choice(word.size, size=budget - 1, replace=False)
        word[flips] ^= 1
        assert concat_code.decode(word).tolist() == msg.tolist()


def test_concat_pad_and_serialization(concat_code):
    padded = ConcatCode(concat_code.outer, concat_code.inner, pad=5)
    msg = list(range(16))
    word = padded.encode(msg)
    assert word.size == padded.length and not word[-5:].any()
    assert padded.decode(word).tolist() == msg


def test_justesen_parameter_helper():
    p = justesen_parameters(10**6, 0.3)
    assert p.m > 12 / 0.3
    assert p.m * 2**p.m >= 10**6
    assert p.m / (p.m + p.s) >= 1 - 0.1
    assert p.outer_n * (p.m + p.s) + p.pad == 10**6
