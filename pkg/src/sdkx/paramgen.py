"""Key and public-parameter generation.

All samplers take a ``random.Random``-compatible stream: a seeded
``random.Random`` for reproducible runs, ``random.SystemRandom`` for real use.
"""

from __future__ import annotations

import logging
import random
import struct
from dataclasses import dataclass

import numpy as np

from .algebra import DIM, MATRIX_BYTES, MODULUS, ORDER, GRMatrix, GroupRingElem, INVERSE, mat_mul
from .platforms import MatrixParams

log = logging.getLogger(__name__)

PARAM_MAGIC = b"SDKX"
PARAM_VERSION = 1
PARAM_FILE_BYTES = len(PARAM_MAGIC) + 1 + 2 + 3 * MATRIX_BYTES

MAX_RESAMPLES = 100


@dataclass(frozen=True)
class SecurityParams:
    t: int = 64
    factor_count: int = 20

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("security parameter t must be at least 2")
        if self.factor_count < 1:
            raise ValueError("factor_count must be at least 1")


@dataclass(frozen=True)
class TriangularFactor:
    """Upper or lower triangular matrix with group elements on the diagonal.

    ``diagonal`` holds A5 indices; ``off_diagonal`` holds the three strictly
    triangular entries in reading order, i.e. positions (0,1), (0,2), (1,2)
    for an upper factor and (1,0), (2,0), (2,1) for a lower one.
    """

    upper: bool
    diagonal: tuple[int, int, int]
    off_diagonal: tuple[GroupRingElem, GroupRingElem, GroupRingElem]

    def positions(self) -> list[tuple[int, int]]:
        if self.upper:
            return [(0, 1), (0, 2), (1, 2)]
        return [(1, 0), (2, 0), (2, 1)]

    def matrix(self) -> GRMatrix:
        arr = np.zeros((DIM, DIM, ORDER), dtype=np.int64)
        for i, g in enumerate(self.diagonal):
            arr[i, i, g] = 1
        for (i, j), u in zip(self.positions(), self.off_diagonal):
            arr[i, j] = u.coeffs
        return GRMatrix(arr)


def sample_exponent(t: int, rng: random.Random) -> int:
    """Uniform over ``[2**(t-1), 2**t)``: exactly ``t`` bits long."""
    if t < 2:
        raise ValueError("security parameter t must be at least 2")
    return rng.randrange(1 << (t - 1), 1 << t)


def sample_gre(rng: random.Random) -> GroupRingElem:
    return GroupRingElem([rng.randrange(MODULUS) for _ in range(ORDER)])


def sample_gre_aug_zero(rng: random.Random) -> GroupRingElem:
    """Uniform coefficients, then one random coefficient shifted so the sum is 0 mod 7."""
    coeffs = [rng.randrange(MODULUS) for _ in range(ORDER)]
    pos = rng.randrange(ORDER)
    coeffs[pos] = (coeffs[pos] - sum(coeffs)) % MODULUS
    return GroupRingElem(coeffs)


def sample_M(rng: random.Random) -> GRMatrix:
    return GRMatrix([[sample_gre_aug_zero(rng) for _ in range(DIM)] for _ in range(DIM)])


def sample_matrix(rng: random.Random) -> GRMatrix:
    """Matrix with every coefficient uniform over Z_7 (no augmentation constraint)."""
    return GRMatrix([[sample_gre(rng) for _ in range(DIM)] for _ in range(DIM)])


def sample_factor(rng: random.Random, upper: bool) -> TriangularFactor:
    diagonal = tuple(rng.randrange(ORDER) for _ in range(DIM))
    off = tuple(sample_gre(rng) for _ in range(DIM))
    return TriangularFactor(upper, diagonal, off)


def triangular_inverse(f: TriangularFactor) -> GRMatrix:
    """Exact inverse of a triangular factor by back-substitution.

    For upper ``U = D + N`` the inverse ``V`` satisfies ``V[i][i] = d_i^-1`` and,
    for ``i < j``, ``V[i][j] = -d_i^-1 * sum_{i<k<=j} U[i][k] V[k][j]``.  The
    lower case is the mirror image.
    """
    U = f.matrix()
    inv_diag = [GroupRingElem.monomial(int(INVERSE[g])) for g in f.diagonal]
    V = [[GroupRingElem.zero() for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        V[i][i] = inv_diag[i]
    if f.upper:
        for j in range(DIM):
            for i in range(j - 1, -1, -1):
                acc = GroupRingElem.zero()
                for k in range(i + 1, j + 1):
                    acc = acc + U[i, k] * V[k][j]
                V[i][j] = -(inv_diag[i] * acc)
    else:
        for j in range(DIM):
            for i in range(j + 1, DIM):
                acc = GroupRingElem.zero()
                for k in range(j, i):
                    acc = acc + U[i, k] * V[k][j]
                V[i][j] = -(inv_diag[i] * acc)
    return GRMatrix(V)


def sample_H(rng: random.Random, factor_count: int = 20) -> tuple[GRMatrix, GRMatrix]:
    """Product of ``factor_count`` random triangular factors, alternating
    upper, lower, upper, ..., together with its exact inverse."""
    if factor_count < 1:
        raise ValueError("factor_count must be at least 1")
    H = H_inv = None
    for i in range(factor_count):
        f = sample_factor(rng, upper=(i % 2 == 0))
        F, F_inv = f.matrix(), triangular_inverse(f)
        H = F if H is None else mat_mul(H, F)
        H_inv = F_inv if H_inv is None else mat_mul(F_inv, H_inv)
    return H, H_inv


def generate_params(rng: random.Random, factor_count: int = 20) -> MatrixParams:
    """Sample ``M`` then ``H``, resampling ``H`` while it commutes with ``HM``."""
    M = sample_M(rng)
    for attempt in range(1, MAX_RESAMPLES + 1):
        H, H_inv = sample_H(rng, factor_count)
        HM = H @ M
        if H @ HM != HM @ H:
            if attempt > 1:
                log.info("H accepted after %d samples", attempt)
            return MatrixParams(M, H, H_inv, validate=False)
        log.info("sampled H commutes with HM, resampling (attempt %d)", attempt)
    raise RuntimeError(f"no non-commuting H found in {MAX_RESAMPLES} attempts")


def dump_params(params: MatrixParams, t: int) -> bytes:
    """``SDKX`` | version | t (u16 BE) | M | H | H_inv."""
    if not 2 <= t < 1 << 16:
        raise ValueError("t must fit in two bytes")
    return (
        PARAM_MAGIC
        + struct.pack(">BH", PARAM_VERSION, t)
        + params.M.to_bytes()
        + params.H.to_bytes()
        + params.H_inv.to_bytes()
    )


def load_params(data: bytes) -> tuple[MatrixParams, int]:
    """Parse and validate a parameter file; raises ``ValueError`` on any defect."""
    if len(data) != PARAM_FILE_BYTES:
        raise ValueError(f"parameter file must be {PARAM_FILE_BYTES} bytes, got {len(data)}")
    if data[:4] != PARAM_MAGIC:
        raise ValueError("bad magic")
    version, t = struct.unpack(">BH", data[4:7])
    if version != PARAM_VERSION:
        raise ValueError(f"unsupported parameter file version {version}")
    if t < 2:
        raise ValueError("security parameter t must be at least 2")
    body = data[7:]
    M, H, H_inv = (GRMatrix.from_bytes(body[i * MATRIX_BYTES:(i + 1) * MATRIX_BYTES]) for i in range(3))
    return MatrixParams(M, H, H_inv), t
