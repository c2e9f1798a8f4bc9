import itertools
import random

import pytest
from hypothesis import given, strategies as st

from procverify.errors import BadGenerator, LengthMismatch
from procverify.frames import (CRC32_IEEE802, G_15_14_0, X_PLUS_1, CrcVerdict, Gf2Poly, burst,
                               crc_check, crc_encode, crc_message, hamming_ball, hamming_bound,
                               hamming_decode, hamming_encode, hamming_lengths, hamming_syndrome,
                               parity_bit, parity_ok)

MESSAGES = list(itertools.product((0, 1), repeat=4))


def flip(word, pos):
    w = list(word)
    w[pos - 1] ^= 1
    return tuple(w)


def naive_encode(m, msg):
    # oracle: fill info bits, then each control bit 2^j makes its group even
    n = 2 ** m - 1
    w = [0] * (n + 1)
    info = iter(msg)
    for i in range(1, n + 1):
        if i & (i - 1):
            w[i] = next(info)
    for j in range(m):
        w[1 << j] = sum(w[i] for i in range(1, n + 1) if i >> j & 1 and i != 1 << j) % 2
    return tuple(w[1:])


def test_lengths_and_bound():
    assert hamming_lengths(3) == (4, 7)
    for m in range(2, 8):
        k, n = hamming_lengths(m)
        assert hamming_bound(k, m) and not hamming_bound(k, m - 1)


def test_zero_message():
    assert hamming_encode(3, (0, 0, 0, 0)) == (0,) * 7


@pytest.mark.parametrize("m", [2, 3, 4])
def test_encode_matches_oracle(m):
    k, _ = hamming_lengths(m)
    for msg in itertools.islice(itertools.product((0, 1), repeat=k), 64):
        assert hamming_encode(m, msg) == naive_encode(m, msg)


def test_single_errors_corrected():
    cases = 0
    for msg in MESSAGES:
        c = hamming_encode(3, msg)
        assert hamming_decode(3, c) == (msg, None)
        for pos in range(1, 8):
            got, where = hamming_decode(3, flip(c, pos))
            assert got == msg and where == pos
            cases += 1
    assert cases + len(MESSAGES) == 16 * 8


def test_control_bit_flip():
    c = hamming_encode(3, (1, 0, 1, 1))
    for j in range(3):
        assert hamming_decode(3, flip(c, 1 << j)) == ((1, 0, 1, 1), 1 << j)
        assert hamming_syndrome(3, flip(c, 1 << j)) == 1 << j


def test_balls_disjoint():
    balls = [hamming_ball(hamming_encode(3, msg)) for msg in MESSAGES]
    assert all(len(b) == 8 for b in balls)
    assert len(set().union(*balls)) == 16 * 8 == 2 ** 7


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        hamming_encode(3, (0, 1))
    with pytest.raises(LengthMismatch):
        hamming_decode(3, (0,) * 6)


def test_parity():
    assert parity_bit((1, 1, 0, 1)) == 1
    assert parity_ok((1, 1, 0, 1, 1)) and not parity_ok((1, 1, 0, 1, 0))


# ---------------------------------------------------------------- GF(2)

polys = st.integers(0, 2 ** 40).map(Gf2Poly)
gens = st.integers(1, 2 ** 20).map(lambda v: Gf2Poly(v << 1 | 1))


def test_poly_basics():
    p = Gf2Poly.from_bits((1, 0, 1, 1))
    assert str(p) == "x^3 + x + 1" and p.degree == 3 and p.weight == 3
    assert p.bits == (1, 0, 1, 1)
    assert Gf2Poly().degree == -1 and Gf2Poly().bits == (0,)
    assert str(CRC32_IEEE802).startswith("x^32 + x^26") and CRC32_IEEE802.degree == 32
    assert G_15_14_0 == Gf2Poly.from_exponents([15, 14, 0])


@given(polys, gens)
def test_divmod_multiply_back(a, g):
    q, r = a.divmod(g)
    assert q * g + r == a
    assert r.degree < g.degree


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a + a == Gf2Poly()


def test_bad_generator():
    with pytest.raises(BadGenerator):
        crc_encode(Gf2Poly(1), Gf2Poly(0b10))
    with pytest.raises(BadGenerator):
        crc_check(Gf2Poly(1), Gf2Poly(1))


def test_crc_zero():
    assert crc_encode(Gf2Poly(), G_15_14_0) == Gf2Poly()


@given(polys, gens)
def test_crc_round_trip(m, g):
    t = crc_encode(m, g)
    assert crc_check(t, g) is CrcVerdict.PASS
    assert crc_message(t, g) == m


@given(polys, gens, polys)
def test_crc_linearity(m, g, e):
    t = crc_encode(m, g)
    assert crc_check(t + e, g) == crc_check(e, g)


@given(polys, gens)
def test_multiples_pass(q, g):
    assert crc_check(g * q, g)


@given(polys, st.integers(0, 60))
def test_single_flip_with_x_plus_1(m, i):
    t = crc_encode(m, X_PLUS_1)
    assert crc_check(t + Gf2Poly.from_exponents([i]), X_PLUS_1) is CrcVerdict.FAIL


def test_bursts_detected_ieee802():
    rng = random.Random(7)
    for _ in range(2000):
        k = rng.randint(1, 32)
        e = burst(rng.randint(0, 200), k)
        assert crc_check(e, CRC32_IEEE802) is CrcVerdict.FAIL


@given(gens.filter(lambda g: g.degree <= 12), st.integers(0, 100), st.data())
def test_bursts_up_to_degree(g, start, data):
    k = data.draw(st.integers(1, g.degree))
    assert not crc_check(burst(start, k), g)


def test_undetected_rate_trend():
    # long bursts slip through about 2^-r of the time
    rng = random.Random(3)
    g = Gf2Poly.from_exponents([8, 2, 1, 0])
    trials = 20000
    missed = 0
    for _ in range(trials):
        k = rng.randint(10, 40)
        e = Gf2Poly((1 << (k - 1)) | rng.getrandbits(k - 2) << 1 | 1)
        missed += crc_check(e, g) is CrcVerdict.PASS
    assert missed / trials < 2 * 2 ** -8
