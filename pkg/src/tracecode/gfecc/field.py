"""Arithmetic in GF(2^b) through exp/log tables.

Elements are ints in ``[0, 2**b)`` whose bits are polynomial-basis
coordinates. Scalar methods take ints; the ``v*`` methods take numpy arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import ParameterError

# primitive polynomials, bit i = coefficient of x^i
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _clmul_mod(a: int, b: int, poly: int, b_deg: int) -> int:
    out = 0
    top = 1 << b_deg
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return out


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every binary polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, cand) == 0:
                return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class GF2m:
    """The field GF(2^b) defined by an irreducible reduction polynomial."""

    def __init__(self, b: int, reduction_poly: int | None = None):
        if not 1 <= b <= 16:
            raise ParameterError("supported extension degrees are 1..16")
        poly = DEFAULT_POLYS[b] if reduction_poly is None else int(reduction_poly)
        if poly.bit_length() - 1 != b or not is_irreducible(poly):
            raise ParameterError(f"{poly:#x} is not an irreducible polynomial of degree {b}")
        self.b = b
        self.reduction_poly = poly
        self.order = 1 << b
        q1 = self.order - 1
        self.generator = self._find_generator()
        exp = np.zeros(2 * q1 + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = _clmul_mod(x, self.generator, poly, b)
        exp[q1 : 2 * q1] = exp[:q1]
        exp[2 * q1] = exp[0]
        self.exp_table = exp
        self.log_table = log
        self._exp = exp.tolist()
        self._log = log.tolist()

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self._slow_pow(g, q1 // p) != 1 for p in factors):
                return g
        raise ParameterError("no generator found")  # unreachable for a field

    def _slow_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = _clmul_mod(out, a, self.reduction_poly, self.b)
            a = _clmul_mod(a, a, self.reduction_poly, self.b)
            e >>= 1
        return out

    def __repr__(self) -> str:
        return f"GF2m(b={self.b}, reduction_poly={self.reduction_poly:#x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF2m) and (self.b, self.reduction_poly) == (other.b, other.reduction_poly)

    def __hash__(self) -> int:
        return hash((self.b, self.reduction_poly))

    # scalar ops
    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def alpha_pow(self, e: int) -> int:
        return self._exp[e % (self.order - 1)]

    # vector ops
    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.exp_table[(self.order - 1 - self.log_table[a]) % (self.order - 1)]

    # polynomials: lists of coefficients, lowest degree first
    def poly_eval(self, p, x: int) -> int:
        out = 0
        for c in reversed(p):
            out = self.mul(out, x) ^ c
        return out

    def poly_mul(self, p, r) -> list[int]:
        out = [0] * (len(p) + len(r) - 1)
        for i, a in enumerate(p):
            if a:
                for j, b in enumerate(r):
                    out[i + j] ^= self.mul(a, b)
        return out


@lru_cache(maxsize=None)
def get_field(b: int, reduction_poly: int | None = None) -> GF2m:
    return GF2m(b, reduction_poly)
