import random

import pytest
from hypothesis import given, strategies as st

from gqprof.errors import InvalidParameterError
from gqprof.fingerprint import MERSENNE_61, hash_string, make_params, roll


def egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = egcd(b, a % b)
    return g, y, x - (a // b) * y


def test_params_are_deterministic():
    a = make_params(3, seed=1)
    assert a.window == 2
    assert make_params(3, seed=1) == a
    assert make_params(3, seed=2) != a


def test_window_one_power_is_base():
    params = make_params(2, seed=7)
    assert params.window == 1
    assert params.b_pow_window == params.b


def test_inverse_matches_extended_gcd():
    params = make_params(5, seed=42)
    g, x, _ = egcd(params.b, params.p)
    assert g == 1
    assert x % params.p == params.b_inv
    assert params.b * params.b_inv % params.p == 1
    assert 2 <= params.b <= params.p - 2
    assert params.p == MERSENNE_61


@pytest.mark.parametrize("q", [0, 1, -3])
def test_rejects_small_q(q):
    with pytest.raises(InvalidParameterError):
        make_params(q, seed=0)


@pytest.mark.parametrize("modulus", [4, 9, 1 << 20, 3])
def test_rejects_bad_modulus(modulus):
    with pytest.raises(InvalidParameterError):
        make_params(3, seed=0, modulus=modulus)


def test_small_prime_modulus_allowed():
    params = make_params(3, seed=0, modulus=5)
    assert params.p == 5 and params.b in (2, 3)


def test_hash_formula():
    params = make_params(3, seed=11)
    b, p = params.b, params.p
    assert hash_string(params, b"aa") == (97 * b + 97 * b * b) % p
    assert hash_string(params, b"ab") == (97 * b + 98 * b * b) % p


def test_hash_distinguishes_order():
    params = make_params(3, seed=11)
    assert hash_string(params, b"ab") != hash_string(params, b"ba")


def test_hash_length_mismatch():
    params = make_params(3, seed=1)
    with pytest.raises(InvalidParameterError):
        hash_string(params, b"abc")


def test_roll_examples():
    params = make_params(3, seed=3)
    h = lambda s: hash_string(params, s)
    assert roll(params, h(b"ab"), ord("a"), ord("a")) == h(b"ba")
    assert roll(params, h(b"aa"), ord("a"), ord("a")) == h(b"aa")


def test_sliding_over_running_example():
    params = make_params(3, seed=3)
    text = b"ababbbab"
    fp = hash_string(params, text[:2])
    windows = [fp]
    for i in range(2, len(text)):
        fp = roll(params, fp, text[i - 2], text[i])
        windows.append(fp)
    assert len(windows) == 7
    assert windows == [hash_string(params, text[i : i + 2]) for i in range(7)]


@given(st.binary(min_size=1, max_size=60), st.integers(2, 9), st.integers(0, 2**63))
def test_roll_rehash_consistency(data, q, seed):
    params = make_params(q, seed)
    w = q - 1
    if len(data) < w:
        data = data * (w // len(data) + 1)
    fp = hash_string(params, data[:w])
    for i in range(1, len(data) - w + 1):
        fp = roll(params, fp, data[i - 1], data[i + w - 1])
        assert fp == hash_string(params, data[i : i + w])


@given(st.binary(min_size=4, max_size=4), st.integers(0, 2**32))
def test_equal_strings_hash_equal(s, seed):
    a, b = make_params(5, seed), make_params(5, seed)
    assert hash_string(a, s) == hash_string(b, bytes(s))


def test_small_field_collides_by_pigeonhole():
    params = make_params(3, seed=0, modulus=5)
    grams = [bytes(p) for p in (b"ab", b"bc", b"cd", b"de", b"ef", b"fg")]
    values = {hash_string(params, g) for g in grams}
    assert len(values) < len(grams)
