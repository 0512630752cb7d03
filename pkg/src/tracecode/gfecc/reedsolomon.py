"""Reed-Solomon codes as polynomial evaluation codes, with errors-and-erasures decoding.

A message is the coefficient vector of a polynomial of degree < k; its
codeword is the polynomial evaluated at ``n`` distinct nonzero points. The
decoder computes generalized syndromes (the dual code carries column
multipliers), runs Berlekamp-Massey seeded with the erasure locator, finds
roots among the evaluation points and applies Forney's formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from ..channel import ERASED
from ..errors import DecodeFailure, ParameterError
from .field import GF2m, get_field


@dataclass(frozen=True, eq=False)
class RSCode:
    field: GF2m
    n: int
    k: int
    eval_points: tuple[int, ...] = ()
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        gf = self.field
        if not 1 <= self.k <= self.n:
            raise ParameterError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.n > gf.order - 1:
            raise ParameterError(f"n={self.n} exceeds the {gf.order - 1} nonzero points of GF(2^{gf.b})")
        pts = tuple(int(p) for p in self.eval_points) or tuple(gf.alpha_pow(i) for i in range(self.n))
        if len(pts) != self.n or len(set(pts)) != self.n or any(not 0 < p < gf.order for p in pts):
            raise ParameterError("evaluation points must be n distinct nonzero field elements")
        object.__setattr__(self, "eval_points", pts)
        a = np.array(pts, dtype=np.int64)
        loga = gf.log_table[a]
        q1 = gf.order - 1
        # log of a_i^j for encoding (n x k) and syndromes (r x n)
        self._cache["enc_log"] = (loga[:, None] * np.arange(self.k)[None, :]) % q1
        self._cache["syn_log"] = (np.arange(self.n - self.k)[:, None] * loga[None, :]) % q1
        # dual column multipliers v_i = 1 / prod_{j != i} (a_i - a_j)
        v = []
        for i, ai in enumerate(pts):
            prod = 1
            for j, aj in enumerate(pts):
                if j != i:
                    prod = gf.mul(prod, ai ^ aj)
            v.append(gf.inv(prod))
        self._cache["v"] = np.array(v, dtype=np.int64)
        self._cache["a_inv"] = gf.vinv(a)

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    def _vmul_log(self, x: np.ndarray, logs: np.ndarray) -> np.ndarray:
        gf = self.field
        return np.where(x == 0, 0, gf.exp_table[gf.log_table[x] + logs])

    def encode(self, msg: Sequence[int]) -> np.ndarray:
        m = np.asarray(msg, dtype=np.int64).ravel()
        if m.size != self.k:
            raise ParameterError(f"message must have {self.k} symbols, got {m.size}")
        if m.size and (m.min() < 0 or m.max() >= self.field.order):
            raise ParameterError("message symbol outside the field")
        terms = self._vmul_log(np.broadcast_to(m, (self.n, self.k)), self._cache["enc_log"])
        return np.bitwise_xor.reduce(terms, axis=1)

    def syndromes(self, word: np.ndarray) -> list[int]:
        y = self.field.vmul(self._cache["v"], word)
        r = self.n - self.k
        terms = self._vmul_log(np.broadcast_to(y, (r, self.n)), self._cache["syn_log"])
        return np.bitwise_xor.reduce(terms, axis=1).tolist()

    def decode(self, word: Sequence[int]) -> np.ndarray:
        """Message from ``n`` cells (field elements or ``ERASED``); raises :class:`DecodeFailure`.

        Succeeds whenever ``2 * errors + erasures <= n - k``.
        """
        gf = self.field
        w = np.asarray(word, dtype=np.int64).ravel()
        if w.size != self.n:
            raise ParameterError(f"word must have {self.n} cells, got {w.size}")
        erased = np.flatnonzero(w == ERASED)
        r = self.n - self.k
        if erased.size > r:
            raise DecodeFailure(f"{erased.size} erasures exceed the redundancy {r}")
        y = np.where(w == ERASED, 0, w)
        if np.any(y >= gf.order) or np.any(y < 0):
            raise ParameterError("cell value outside the field")
        S = self.syndromes(y)
        pts = self.eval_points
        f = int(erased.size)
        if f == 0 and not any(S):
            return self._interpolate(y)

        gamma = [1]
        for i in erased.tolist():
            gamma = gf.poly_mul(gamma, [1, pts[i]])
        lam = self._berlekamp_massey(S, gamma, f)
        deg = len(lam) - 1
        while deg > 0 and lam[deg] == 0:
            deg -= 1
        lam = lam[: deg + 1]
        if 2 * (deg - f) + f > r:
            raise DecodeFailure("error locator degree exceeds the correction radius")

        a_inv = self._cache["a_inv"].tolist()
        roots = [i for i in range(self.n) if gf.poly_eval(lam, a_inv[i]) == 0]
        if len(roots) != deg:
            raise DecodeFailure("error locator roots are inconsistent")

        omega = gf.poly_mul(S, lam)[:r]
        dlam = [lam[i] if i % 2 == 1 else 0 for i in range(1, len(lam))]
        corrected = y.copy()
        v = self._cache["v"].tolist()
        for i in roots:
            xi_inv = a_inv[i]
            denom = gf.poly_eval(dlam, xi_inv)
            if denom == 0:
                raise DecodeFailure("repeated root in error locator")
            big_y = gf.mul(pts[i], gf.div(gf.poly_eval(omega, xi_inv), denom))
            corrected[i] ^= gf.div(big_y, v[i])
        if any(self.syndromes(corrected)):
            raise DecodeFailure("correction did not reach a codeword")
        return self._interpolate(corrected)

    def _berlekamp_massey(self, S: list[int], gamma: list[int], f: int) -> list[int]:
        gf = self.field
        r = len(S)
        lam = list(gamma) + [0] * (r + 1)
        B = list(gamma) + [0] * (r + 1)
        L = f
        for step in range(f, r):
            delta = 0
            for i in range(L + 1):
                if i <= step and lam[i]:
                    delta ^= gf.mul(lam[i], S[step - i])
            B = [0] + B[:-1]
            if delta == 0:
                continue
            T = [li ^ gf.mul(delta, bi) for li, bi in zip(lam, B)]
            if 2 * L <= step + f:
                L = step + 1 + f - L
                dinv = gf.inv(delta)
                B = [gf.mul(dinv, li) for li in lam]
            lam = T
        return lam[: r + 1]

    def _interpolate(self, codeword: np.ndarray) -> np.ndarray:
        """Coefficients of the degree-<k polynomial through the first k points, then a full check."""
        gf = self.field
        k = self.k
        xs = np.array(self.eval_points[:k], dtype=np.int64)
        ys = np.asarray(codeword[:k], dtype=np.int64)
        # master polynomial P(x) = prod (x - x_j), lowest degree first
        P = [1]
        for xj in xs.tolist():
            P = gf.poly_mul(P, [xj, 1])
        # N_i = P / (x - x_i) for all i at once by synthetic division
        N = np.zeros((k, k), dtype=np.int64)
        N[:, k - 1] = P[k]
        for d in range(k - 1, 0, -1):
            N[:, d - 1] = P[d] ^ gf.vmul(xs, N[:, d])
        # weights y_i / N_i(x_i)
        val = np.zeros(k, dtype=np.int64)
        for d in range(k - 1, -1, -1):
            val = gf.vmul(val, xs) ^ N[:, d]
        w = gf.vmul(ys, gf.vinv(val))
        coeffs = np.bitwise_xor.reduce(gf.vmul(w[:, None], N), axis=0)
        if not np.array_equal(self.encode(coeffs), codeword):
            raise DecodeFailure("decoded word is not a codeword")
        return coeffs

    def to_dict(self) -> dict:
        return {
            "b": self.field.b,
            "reduction_poly": self.field.reduction_poly,
            "n": self.n,
            "k": self.k,
            "eval_points": list(self.eval_points),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RSCode":
        gf = get_field(int(data["b"]), int(data["reduction_poly"]))
        return cls(gf, int(data["n"]), int(data["k"]), tuple(data.get("eval_points", ())))


def rs_encode(code: RSCode, msg) -> np.ndarray:
    return code.encode(msg)


def rs_decode(code: RSCode, word) -> np.ndarray:
    return code.decode(word)
