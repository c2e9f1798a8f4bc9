"""Frame coding: single-error-correcting Hamming codes and CRC over GF(2).

Bit vectors are tuples of 0/1.  For Hamming codes position 1 is the first
element.  Polynomials are stored as Python ints with bit ``i`` holding the
coefficient of ``x**i``; ``Gf2Poly.bits`` lists coefficients highest degree
first.
"""
from __future__ import annotations

import enum
from typing import Optional, Sequence, Tuple

from .errors import BadGenerator, LengthMismatch

BitVec = Tuple[int, ...]


def as_bits(bits: Sequence[int]) -> BitVec:
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError("bits must be 0 or 1")
    return out


# ---------------------------------------------------------------- Hamming

def hamming_lengths(m: int) -> tuple:
    """``(k, n)``: message and codeword lengths for ``m`` control bits."""
    if m < 2:
        raise ValueError("m must be at least 2")
    n = 2 ** m - 1
    return n - m, n


def hamming_bound(k: int, r: int) -> bool:
    """Whether ``r`` control bits can correct one error in ``k`` data bits."""
    return k + r + 1 <= 2 ** r


def _is_control(pos: int) -> bool:
    return pos & (pos - 1) == 0


def hamming_encode(m: int, message: Sequence[int]) -> BitVec:
    k, n = hamming_lengths(m)
    message = as_bits(message)
    if len(message) != k:
        raise LengthMismatch(f"message has {len(message)} bits, expected {k}")
    word = [0] * (n + 1)
    data = iter(message)
    for pos in range(1, n + 1):
        if not _is_control(pos):
            word[pos] = next(data)
    for j in range(m):
        c = 1 << j
        word[c] = sum(word[pos] for pos in range(1, n + 1) if pos & c and pos != c) % 2
    return tuple(word[1:])


def hamming_syndrome(m: int, word: Sequence[int]) -> int:
    _, n = hamming_lengths(m)
    word = as_bits(word)
    if len(word) != n:
        raise LengthMismatch(f"word has {len(word)} bits, expected {n}")
    syn = 0
    for j in range(m):
        c = 1 << j
        if sum(word[pos - 1] for pos in range(1, n + 1) if pos & c) % 2:
            syn |= c
    return syn


def hamming_decode(m: int, word: Sequence[int]) -> Tuple[BitVec, Optional[int]]:
    """Return the message and the corrected position (None if none)."""
    syn = hamming_syndrome(m, word)
    fixed = list(as_bits(word))
    if syn:
        fixed[syn - 1] ^= 1
    msg = tuple(fixed[pos - 1] for pos in range(1, len(fixed) + 1) if not _is_control(pos))
    return msg, (syn or None)


def hamming_ball(word: Sequence[int]) -> set:
    """The word together with all its single-bit flips."""
    word = as_bits(word)
    ball = {word}
    for i in range(len(word)):
        w = list(word)
        w[i] ^= 1
        ball.add(tuple(w))
    return ball


def parity_bit(bits: Sequence[int]) -> int:
    """Even parity: the bit that makes the total number of ones even."""
    return sum(as_bits(bits)) % 2


def parity_ok(bits: Sequence[int]) -> bool:
    return sum(as_bits(bits)) % 2 == 0


# ---------------------------------------------------------------- GF(2) polynomials

class Gf2Poly:
    __slots__ = ("value",)

    def __init__(self, value: int = 0):
        if value < 0:
            raise ValueError("negative polynomial code")
        self.value = value

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Gf2Poly":
        v = 0
        for b in as_bits(bits):
            v = (v << 1) | b
        return cls(v)

    @classmethod
    def from_exponents(cls, exps) -> "Gf2Poly":
        v = 0
        for e in exps:
            v ^= 1 << e
        return cls(v)

    @property
    def bits(self) -> BitVec:
        if not self.value:
            return (0,)
        return tuple((self.value >> i) & 1 for i in range(self.degree, -1, -1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.value.bit_length() - 1

    @property
    def weight(self) -> int:
        return bin(self.value).count("1")

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        a, b, r = self.value, other.value, 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        return Gf2Poly(r)

    def shift(self, k: int) -> "Gf2Poly":
        """Multiply by ``x**k``."""
        return Gf2Poly(self.value << k)

    def divmod(self, other: "Gf2Poly") -> tuple:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = 0, self.value
        dg = other.degree
        while r and r.bit_length() - 1 >= dg:
            s = r.bit_length() - 1 - dg
            q ^= 1 << s
            r ^= other.value << s
        return Gf2Poly(q), Gf2Poly(r)

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return self.divmod(other)[0]

    def __eq__(self, other):
        return isinstance(other, Gf2Poly) and self.value == other.value

    def __hash__(self):
        return hash(("gf2", self.value))

    def __repr__(self):
        return f"Gf2Poly({self})"

    def __str__(self):
        if not self.value:
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            if (self.value >> e) & 1:
                terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(terms)


X_PLUS_1 = Gf2Poly(0b11)
# x^32 + x^26 + x^23 + x^22 + x^16 + x^12 + x^11 + x^10 + x^8 + x^7 + x^5 + x^4 + x^2 + x + 1
CRC32_IEEE802 = Gf2Poly(0x104C11DB7)
# x^15 + x^14 + 1
G_15_14_0 = Gf2Poly.from_exponents((15, 14, 0))


class CrcVerdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"

    def __bool__(self):
        return self is CrcVerdict.PASS


def _check_generator(g: Gf2Poly):
    if g.degree < 1 or not g.value & 1:
        raise BadGenerator(f"generator {g} must have degree >= 1 and constant term 1")


def crc_encode(message: Gf2Poly, g: Gf2Poly) -> Gf2Poly:
    """``x^r M(x)`` plus its remainder modulo ``g``; divisible by ``g``."""
    _check_generator(g)
    shifted = message.shift(g.degree)
    return shifted + shifted % g


def crc_check(word: Gf2Poly, g: Gf2Poly) -> CrcVerdict:
    _check_generator(g)
    return CrcVerdict.PASS if (word % g).is_zero() else CrcVerdict.FAIL


def crc_message(word: Gf2Poly, g: Gf2Poly) -> Gf2Poly:
    """Recover the message from a codeword by dropping the check bits."""
    _check_generator(g)
    return Gf2Poly(word.value >> g.degree)


def burst(start: int, length: int) -> Gf2Poly:
    """Error polynomial ``x^start (x^(length-1) + ... + 1)``."""
    if length < 1:
        raise ValueError("burst length must be positive")
    return Gf2Poly(((1 << length) - 1) << start)


__all__ = ["BitVec", "as_bits", "hamming_lengths", "hamming_bound", "hamming_encode",
           "hamming_decode", "hamming_syndrome", "hamming_ball", "parity_bit", "parity_ok",
           "Gf2Poly", "X_PLUS_1", "CRC32_IEEE802", "G_15_14_0", "CrcVerdict", "crc_encode",
           "crc_check", "crc_message", "burst"]
