import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import indel_distance, insdel_corrupt, naive_sync_violation

from tracecode.channel import apply_bdc
from tracecode.errors import ConstructionError, ParameterError
from tracecode.syncstr import (
    BOTTOM,
    SyncString,
    count_misdecodings,
    default_alphabet_size,
    gen_sync,
    id_distance,
    index_deletion_only,
    index_insdel,
    lcs_length,
    lcs_table,
    verify_sync,
)

small_strings = st.lists(st.integers(0, 3), max_size=20)


@pytest.fixture(scope="module")
def sync200():
    return gen_sync(200, 0.5, 256, np.random.default_rng(2024))


def test_id_distance_examples():
    assert id_distance([1, 2, 3], [1, 2, 3]) == 0
    assert id_distance([0, 1, 2], [3, 4, 5, 6]) == 7
    assert id_distance([0, 1], [1]) == 1


@given(small_strings, small_strings)
def test_id_distance_matches_recurrence(a, b):
    assert id_distance(a, b) == indel_distance(a, b)


@given(small_strings, small_strings)
def test_lcs_table_corner_matches(a, b):
    assert lcs_table(a, b)[len(a), len(b)] == lcs_length(a, b)


def test_id_distance_is_a_metric():
    words = [w for L in range(5) for w in itertools.product(range(3), repeat=L)]
    for a in words:
        assert id_distance(a, a) == 0
    for a, b in itertools.product(words, repeat=2):
        assert id_distance(a, b) == id_distance(b, a)
        assert (id_distance(a, b) == 0) == (a == b)
    sample = words[::3]
    for a, b, c in itertools.product(sample, repeat=3):
        assert id_distance(a, c) <= id_distance(a, b) + id_distance(b, c)


def test_verify_examples():
    assert verify_sync([0, 1, 2, 3], 0.3)
    check = verify_sync([5, 5], 0.5)
    assert not check and check.violation == (1, 2, 3)
    with pytest.raises(ParameterError):
        verify_sync([1, 2], 1.0)


@settings(max_examples=150)
@given(st.lists(st.integers(0, 3), max_size=9), st.sampled_from([0.25, 1 / 3, 0.5, 0.7]))
def test_verify_matches_naive_triple_scan(s, eta):
    check = verify_sync(s, eta)
    assert check.violation == naive_sync_violation(s, eta)
    assert check.ok == (check.violation is None)


def test_restriction_closure():
    rng = np.random.default_rng(3)
    s = gen_sync(40, 0.5, 64, rng).symbols
    for i in range(0, 40, 7):
        for j in range(i + 1, 41, 9):
            assert verify_sync(s[i:j], 0.5)


def test_default_alphabet():
    assert default_alphabet_size(0.5) == 256
    assert default_alphabet_size(1 / 3) == 576


@pytest.mark.parametrize("method", ["greedy", "rejection", "distinct"])
def test_generated_strings_verify(method):
    rng = np.random.default_rng(4)
    s = gen_sync(24, 0.5, 64, rng, method=method)
    assert len(s) == 24 and s.verified
    assert verify_sync(s.symbols, 0.5)
    assert s.symbols.max() < 64


def test_distinct_always_succeeds_and_checks_size():
    rng = np.random.default_rng(5)
    for n in (1, 10, 64):
        assert verify_sync(gen_sync(n, 0.9, 64, rng, method="distinct").symbols, 0.9)
    with pytest.raises(ParameterError):
        gen_sync(65, 0.5, 64, rng, method="distinct")


def test_rejection_gives_up_on_impossible_request():
    with pytest.raises(ConstructionError):
        gen_sync(6, 0.5, 2, np.random.default_rng(0), max_attempts=5, method="rejection")


def test_generation_at_n200_within_ten_attempts(sync200):
    # n=200, eta=0.5, 256 symbols within 10 attempts
    s = gen_sync(200, 0.5, 256, np.random.default_rng(11), max_attempts=10)
    assert verify_sync(s.symbols, 0.5)
    assert verify_sync(sync200.symbols, 0.5)


def test_serialization_verifies():
    s = gen_sync(16, 0.5, 64, np.random.default_rng(6))
    again = SyncString.from_dict(s.to_dict())
    assert again.symbols.tolist() == s.symbols.tolist() and again.verified
    bad = dict(s.to_dict(), symbols=[1, 1, 1])
    with pytest.raises(ParameterError):
        SyncString.from_dict(bad)


def test_deletion_only_identity_and_distinct(sync200):
    assert index_deletion_only(sync200, sync200.symbols) == list(range(200))
    rng = np.random.default_rng(7)
    s = np.arange(30)
    tr = apply_bdc(s, 0.5, rng, instrumented=True)
    assert index_deletion_only(s, tr.payload) == tr.pattern.tolist()


def test_deletion_only_non_subsequence_gives_bottoms():
    assert index_deletion_only([0, 1, 2], [2, 0]) == [BOTTOM, BOTTOM]


def test_deletion_only_never_misdecodes(sync200):
    rng = np.random.default_rng(8)
    for _ in range(200):
        tr = apply_bdc(sync200.symbols, 0.75, rng, instrumented=True)
        out = index_deletion_only(sync200, tr.payload)
        assert all(a is BOTTOM or a == t for a, t in zip(out, tr.pattern.tolist()))


def test_insdel_identity(sync200):
    assert index_insdel(sync200, sync200.symbols) == list(range(200))


def test_insdel_single_substitution_exhaustive():
    s = gen_sync(8, 0.5, 16, np.random.default_rng(9))
    for pos in range(8):
        rec = s.symbols.copy()
        rec[pos] = 999
        out = index_insdel(s, rec)
        for j, a in enumerate(out):
            if j == pos:
                assert a in (BOTTOM, j)
            else:
                assert a == j


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_insdel_output_is_increasing_partial_map(seed):
    rng = np.random.default_rng(seed)
    s = gen_sync(30, 0.5, 64, rng)
    rec, _ = insdel_corrupt(s.symbols, 8, 64, rng)
    out = [a for a in index_insdel(s, rec) if a is not BOTTOM]
    assert all(0 <= a < 30 for a in out)
    assert all(b > a for a, b in zip(out, out[1:]))


def test_insdel_misdecoding_bound(sync200):
    rng = np.random.default_rng(10)
    n, eta, delta = 200, 0.5, 0.2
    bound = 2 * n * delta / (1 - eta)
    for _ in range(200):
        rec, truth = insdel_corrupt(sync200.symbols, int(delta * n), 256, rng)
        assert count_misdecodings(index_insdel(sync200, rec), truth) <= bound


def test_count_misdecodings():
    assert count_misdecodings([0, 5, None, 3], [0, 1, 2, None]) == 2
    assert count_misdecodings([None, None], [0, None]) == 0
