"""The two concrete platforms: Z_p^* with ``h -> h**k``, and 3x3 matrices
over Z_7[A5] with conjugation by an invertible matrix H."""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass, field

import numpy as np

from .algebra import GRMatrix, mat_aug, mat_pow
from .semidirect import Endomorphism


@dataclass(frozen=True)
class ToyParams(Endomorphism):
    """Z_p^* with ``phi(h) = h**k``.

    ``is_automorphism`` records whether ``gcd(k, p - 1) == 1``; plain
    endomorphisms are accepted too.
    """

    p: int
    g: int
    k: int
    is_automorphism: bool = field(init=False)

    def __post_init__(self):
        from sympy import isprime

        if not isprime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if not 1 < self.g < self.p:
            raise ValueError("need 1 < g < p")
        if self.k <= 1:
            raise ValueError("need k > 1")
        object.__setattr__(self, "is_automorphism", math.gcd(self.k, self.p - 1) == 1)

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def apply(self, s: int, x: int) -> int:
        return toy_apply(self, s, x)

    @classmethod
    def random(cls, rng: random.Random, bits: int = 31, k: int | None = None) -> "ToyParams":
        """Largest prime below a random draw from ``[5, 2**bits)``, random ``g``
        and (unless given) random ``k`` in ``[2, 16)``."""
        from sympy import prevprime

        p = prevprime(rng.randrange(6, 1 << bits))
        g = rng.randrange(2, p)
        if k is None:
            k = rng.randrange(2, 16)
        return cls(p, g, k)


def toy_apply(params: ToyParams, s: int, h: int) -> int:
    """``h**(k**s) mod p``; the exponent is reduced mod ``p - 1``."""
    if h % params.p == 0:
        raise ValueError("0 is not a unit mod p")
    if s < 0:
        raise ValueError("endomorphism power must be non-negative")
    return pow(h, pow(params.k, s, params.p - 1), params.p)


def geometric_exponent(k: int, m: int) -> int:
    """``(k**m - 1) // (k - 1)`` computed exactly."""
    if k <= 1 or m < 1:
        raise ValueError("need k > 1 and m >= 1")
    return (k**m - 1) // (k - 1)


def toy_closed_form(g: int, k: int, p: int, m: int) -> int:
    """``g**((k**m - 1)/(k - 1)) mod p``.

    The exponent is only needed mod ``p - 1``: reducing ``k**m`` mod
    ``(k - 1)(p - 1)`` keeps the division by ``k - 1`` exact, so huge ``m``
    costs O(log m).
    """
    if k <= 1 or m < 1:
        raise ValueError("need k > 1 and m >= 1")
    big = (k - 1) * (p - 1)
    residue = (pow(k, m, big) - 1) % big
    return pow(g, residue // (k - 1), p)


class MatrixParams(Endomorphism):
    """Public matrices ``M`` and invertible ``H`` with ``phi(X) = H^-1 X H``.

    Construction validates that ``H_inv`` is a two-sided inverse, that every
    entry of ``M`` has augmentation 0 and that ``H`` does not commute with
    ``H M``.  Invalid parameters raise ``ValueError``.

    Powers ``H**(2**i)`` and ``H_inv**(2**i)`` are cached on first use.
    """

    def __init__(self, M: GRMatrix, H: GRMatrix, H_inv: GRMatrix, validate: bool = True):
        self.M = M
        self.H = H
        self.H_inv = H_inv
        self._ladder = [(H, H_inv)]
        self._lock = threading.Lock()
        if validate:
            self.validate()

    def validate(self):
        ident = GRMatrix.identity()
        if self.H @ self.H_inv != ident or self.H_inv @ self.H != ident:
            raise ValueError("H_inv is not a two-sided inverse of H")
        if mat_aug(self.M).any():
            raise ValueError("M has an entry with nonzero augmentation")
        HM = self.H @ self.M
        if self.H @ HM == HM @ self.H:
            raise ValueError("H commutes with HM")

    def __eq__(self, other):
        if not isinstance(other, MatrixParams):
            return NotImplemented
        return self.M == other.M and self.H == other.H and self.H_inv == other.H_inv

    __hash__ = None

    def _power_of_two(self, i: int) -> tuple[GRMatrix, GRMatrix]:
        ladder = self._ladder
        if i >= len(ladder):
            with self._lock:
                while len(ladder) <= i:
                    h, h_inv = ladder[-1]
                    ladder.append((h @ h, h_inv @ h_inv))
        return ladder[i]

    def h_powers(self, s: int) -> tuple[GRMatrix, GRMatrix]:
        """``(H**s, H**-s)`` assembled from the cached ladder."""
        if s < 0:
            raise ValueError("power must be non-negative")
        pos = neg = None
        i = 0
        while s:
            if s & 1:
                h, h_inv = self._power_of_two(i)
                pos = h if pos is None else pos @ h
                neg = h_inv if neg is None else h_inv @ neg
            s >>= 1
            i += 1
        if pos is None:
            ident = GRMatrix.identity()
            return ident, ident
        return pos, neg

    def mul(self, x: GRMatrix, y: GRMatrix) -> GRMatrix:
        return x @ y

    def apply(self, s: int, x: GRMatrix) -> GRMatrix:
        return matrix_apply(self, s, x)


def matrix_apply(params: MatrixParams, s: int, X: GRMatrix) -> GRMatrix:
    """``H**-s X H**s``."""
    if s == 0:
        return X
    pos, neg = params.h_powers(s)
    return neg @ X @ pos


def matrix_closed_form(params: MatrixParams, m: int) -> GRMatrix:
    """``H**-m (H M)**m`` with both powers by square-and-multiply.

    Deliberately avoids the cached ladder so it stays an independent check on
    the generic powering path.
    """
    if m < 1:
        raise ValueError("exponent must be a positive integer")
    return mat_pow(params.H_inv, m) @ mat_pow(params.H @ params.M, m)


def matrix_shared_key(params: MatrixParams, own_exp: int, received: GRMatrix, own_outbound: GRMatrix) -> GRMatrix:
    return matrix_apply(params, own_exp, received) @ own_outbound


def is_augmentation_zero(X: GRMatrix) -> bool:
    return not np.any(mat_aug(X))
