"""Exact arithmetic for A5, the group ring Z_7[A5] and 3x3 matrices over it.

Group elements are indexed 0..59 in a fixed canonical order: all
permutations of ``(0, 1, 2, 3, 4)`` in lexicographic one-line order, keeping
only the even ones.  Index 0 is the identity.  Permutations compose as
functions, ``(a * b)(x) == a(b(x))``, so ``b`` is applied first.

Group-ring elements are length-60 coefficient vectors mod 7 and matrices are
``(3, 3, 60)`` arrays.  Every value is immutable (backing arrays are marked
read-only) and every coefficient is kept reduced to ``0..6``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

MODULUS = 7
ORDER = 60
DIM = 3

ELEM_BYTES = ORDER
MATRIX_BYTES = DIM * DIM * ORDER


def _parity(images: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(images)) for j in range(i + 1, len(images)) if images[i] > images[j]
    )
    return inversions % 2


@dataclass(frozen=True, order=True)
class Perm5:
    """An even permutation of five points in one-line notation."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != [0, 1, 2, 3, 4]:
            raise ValueError(f"not a permutation of 5 points: {images}")
        if _parity(images):
            raise ValueError(f"odd permutation is not in A5: {images}")

    @classmethod
    def identity(cls) -> "Perm5":
        return cls((0, 1, 2, 3, 4))

    @classmethod
    def from_cycles(cls, *cycles: Sequence[int]) -> "Perm5":
        """Build from disjoint cycles, e.g. ``Perm5.from_cycles((0, 1, 2))``."""
        images = list(range(5))
        for cycle in cycles:
            for pos, point in enumerate(cycle):
                images[point] = cycle[(pos + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def index(self) -> int:
        return _INDEX[self.images]

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm5") -> "Perm5":
        return perm_compose(self, other)

    def __repr__(self):
        return f"Perm5({self.images})"


def perm_compose(a: Perm5, b: Perm5) -> Perm5:
    """Return ``a o b``, i.e. apply ``b`` first and then ``a``."""
    return Perm5(tuple(a.images[b.images[x]] for x in range(5)))


def perm_inverse(a: Perm5) -> Perm5:
    inv = [0] * 5
    for point, image in enumerate(a.images):
        inv[image] = point
    return Perm5(tuple(inv))


ELEMENTS: tuple[Perm5, ...] = tuple(
    Perm5(p) for p in permutations(range(5)) if not _parity(p)
)
_INDEX = {p.images: i for i, p in enumerate(ELEMENTS)}


def _build_cayley_table() -> np.ndarray:
    table = np.empty((ORDER, ORDER), dtype=np.intp)
    for i, a in enumerate(ELEMENTS):
        for j, b in enumerate(ELEMENTS):
            table[i, j] = _INDEX[tuple(a.images[b.images[x]] for x in range(5))]
    # Latin square with identity at index 0, otherwise the ordering is broken.
    full = np.arange(ORDER)
    if not (np.array_equal(table[0], full) and np.array_equal(table[:, 0], full)):
        raise RuntimeError("A5 Cayley table: index 0 is not the identity")
    for k in range(ORDER):
        if not (np.array_equal(np.sort(table[k]), full) and np.array_equal(np.sort(table[:, k]), full)):
            raise RuntimeError("A5 Cayley table is not a Latin square")
    table.setflags(write=False)
    return table


CAYLEY = _build_cayley_table()
INVERSE = np.array([int(np.flatnonzero(CAYLEY[i] == 0)[0]) for i in range(ORDER)], dtype=np.intp)
INVERSE.setflags(write=False)

# _LEFT_DIV[h, i] is the index of g_i^{-1} g_h, so that
# (x * y)[h] = sum_i x[i] * y[_LEFT_DIV[h, i]].
_LEFT_DIV = CAYLEY[INVERSE][:, :].T.copy()

# Gather map turning a flattened (3, 3, 60) right factor Q into the
# (180, 180) block matrix Y with Y[(k, i), (j, h)] = Q[k, j, _LEFT_DIV[h, i]];
# then (P @ Q)[i, j, h] = (P.reshape(3, 180) @ Y)[i, (j, h)].
_GATHER = np.empty((DIM, ORDER, DIM, ORDER), dtype=np.intp)
for _k in range(DIM):
    for _j in range(DIM):
        _GATHER[_k, :, _j, :] = ((_k * DIM + _j) * ORDER + _LEFT_DIV).T
_GATHER = _GATHER.reshape(DIM * ORDER, DIM * ORDER)
del _k, _j


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class GroupRingElem:
    """Element of Z_7[A5] as 60 coefficients in canonical element order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] | np.ndarray):
        arr = np.array(coeffs, dtype=np.int64).reshape(-1)
        if arr.shape != (ORDER,):
            raise ValueError(f"expected {ORDER} coefficients, got {arr.size}")
        self.coeffs = _frozen(arr % MODULUS)

    @classmethod
    def zero(cls) -> "GroupRingElem":
        return cls(np.zeros(ORDER, dtype=np.int64))

    @classmethod
    def one(cls) -> "GroupRingElem":
        return cls.monomial(0)

    @classmethod
    def monomial(cls, element: Perm5 | int, coeff: int = 1) -> "GroupRingElem":
        """``coeff * g`` for a single group element ``g`` (a Perm5 or an index)."""
        idx = element.index if isinstance(element, Perm5) else int(element)
        arr = np.zeros(ORDER, dtype=np.int64)
        arr[idx] = coeff
        return cls(arr)

    @classmethod
    def from_terms(cls, terms: dict) -> "GroupRingElem":
        arr = np.zeros(ORDER, dtype=np.int64)
        for element, coeff in terms.items():
            idx = element.index if isinstance(element, Perm5) else int(element)
            arr[idx] += coeff
        return cls(arr)

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        return gre_add(self, other)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(-self.coeffs)

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return GroupRingElem(self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupRingElem):
            return gre_mul(self, other)
        if isinstance(other, (int, np.integer)):
            return GroupRingElem(self.coeffs * int(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return GroupRingElem(self.coeffs * int(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        terms = [f"{c}*g{i}" for i, c in enumerate(self.coeffs) if c]
        return "GroupRingElem(" + (" + ".join(terms) if terms else "0") + ")"

    def augmentation(self) -> int:
        return augmentation(self)

    def to_bytes(self) -> bytes:
        return self.coeffs.astype(np.uint8).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GroupRingElem":
        if len(data) != ELEM_BYTES:
            raise ValueError(f"group ring element needs {ELEM_BYTES} bytes, got {len(data)}")
        arr = np.frombuffer(data, dtype=np.uint8)
        if (arr >= MODULUS).any():
            raise ValueError("coefficient byte out of range 0..6")
        return cls(arr.astype(np.int64))


def gre_add(x: GroupRingElem, y: GroupRingElem) -> GroupRingElem:
    return GroupRingElem(x.coeffs + y.coeffs)


def gre_mul(x: GroupRingElem, y: GroupRingElem) -> GroupRingElem:
    """Convolution over A5: coefficient of h is sum over g*g' = h of x[g]*y[g']."""
    return GroupRingElem((y.coeffs[_LEFT_DIV] * x.coeffs[None, :]).sum(axis=1))


def augmentation(x: GroupRingElem) -> int:
    """Image under the map sending every group element to 1."""
    return int(x.coeffs.sum() % MODULUS)


class GRMatrix:
    """3x3 matrix over Z_7[A5], stored as a read-only ``(3, 3, 60)`` array."""

    __slots__ = ("data",)

    def __init__(self, data):
        if isinstance(data, np.ndarray):
            arr = np.array(data, dtype=np.int64)
        else:
            rows = [
                [e.coeffs if isinstance(e, GroupRingElem) else np.asarray(e) for e in row]
                for row in data
            ]
            arr = np.array(rows, dtype=np.int64)
        if arr.shape != (DIM, DIM, ORDER):
            raise ValueError(f"expected shape {(DIM, DIM, ORDER)}, got {arr.shape}")
        self.data = _frozen(arr % MODULUS)

    @classmethod
    def zero(cls) -> "GRMatrix":
        return cls(np.zeros((DIM, DIM, ORDER), dtype=np.int64))

    @classmethod
    def identity(cls) -> "GRMatrix":
        arr = np.zeros((DIM, DIM, ORDER), dtype=np.int64)
        for i in range(DIM):
            arr[i, i, 0] = 1
        return cls(arr)

    def __getitem__(self, ij: tuple[int, int]) -> GroupRingElem:
        return GroupRingElem(self.data[ij])

    def entries(self) -> list[list[GroupRingElem]]:
        return [[self[i, j] for j in range(DIM)] for i in range(DIM)]

    def __add__(self, other: "GRMatrix") -> "GRMatrix":
        return mat_add(self, other)

    def __matmul__(self, other: "GRMatrix") -> "GRMatrix":
        return mat_mul(self, other)

    __mul__ = __matmul__

    def __pow__(self, n: int) -> "GRMatrix":
        return mat_pow(self, n)

    def __eq__(self, other):
        if not isinstance(other, GRMatrix):
            return NotImplemented
        return np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash(self.to_bytes())

    def __repr__(self):
        nnz = int(np.count_nonzero(self.data))
        return f"GRMatrix(<{nnz} nonzero coefficients>)"

    def to_bytes(self) -> bytes:
        """540 bytes: entries row-major, each entry's 60 coefficients in order."""
        return self.data.astype(np.uint8).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GRMatrix":
        if len(data) != MATRIX_BYTES:
            raise ValueError(f"matrix needs {MATRIX_BYTES} bytes, got {len(data)}")
        arr = np.frombuffer(data, dtype=np.uint8)
        if (arr >= MODULUS).any():
            raise ValueError("coefficient byte out of range 0..6")
        return cls(arr.astype(np.int64).reshape(DIM, DIM, ORDER))


def mat_add(P: GRMatrix, Q: GRMatrix) -> GRMatrix:
    return GRMatrix(P.data + Q.data)


def mat_mul(P: GRMatrix, Q: GRMatrix) -> GRMatrix:
    # Largest partial sum is 3 * 60 * 36 = 6480, exact in float64.
    right = Q.data.reshape(-1).astype(np.float64)[_GATHER]
    prod = P.data.reshape(DIM, DIM * ORDER).astype(np.float64) @ right
    return GRMatrix(np.rint(prod).astype(np.int64).reshape(DIM, DIM, ORDER))


def mat_pow(P: GRMatrix, n: int) -> GRMatrix:
    """``P**n`` by square-and-multiply; ``n = 0`` gives the identity."""
    if n < 0:
        raise ValueError("negative matrix powers need an explicit inverse")
    result = None
    base = P
    while n:
        if n & 1:
            result = base if result is None else result @ base
        n >>= 1
        if n:
            base = base @ base
    return GRMatrix.identity() if result is None else result


def mat_aug(P: GRMatrix) -> np.ndarray:
    """Entry-wise augmentation: a 3x3 integer matrix over Z_7."""
    return P.data.sum(axis=2) % MODULUS
