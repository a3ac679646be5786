"""A walk through the ring Z_7[A5] and 3x3 matrices over it.

Run: python3 demos/01_algebra_tour.py
"""

import random

from sdkx.algebra import ELEMENTS, GRMatrix, GroupRingElem, Perm5, mat_aug

# A5 has 60 elements; index 0 is the identity permutation.
print(f"|A5| = {len(ELEMENTS)}, identity = {ELEMENTS[0].images}")

# A 3-cycle composed with itself three times is the identity.
c = Perm5.from_cycles((0, 1, 2))
print(f"(0 1 2) has images {c.images}; cubed is identity: {c * c * c == Perm5.identity()}")

# Group ring elements are formal sums of permutations with coefficients mod 7.
x = GroupRingElem.from_terms({c: 3, Perm5.identity(): 5})
y = GroupRingElem.monomial(c)
print(f"augmentation of x = {x.augmentation()} (sum of coefficients mod 7)")
print(f"augmentation is multiplicative: {(x * y).augmentation() == x.augmentation() * y.augmentation() % 7}")

# Matrices: the augmentation map sends a matrix to a 3x3 matrix over Z_7.
r = random.Random(1)
M = GRMatrix([[[r.randrange(7) for _ in range(60)] for _ in range(3)] for _ in range(3)])
print("mat_aug(M) =")
print(mat_aug(M))
print(f"M^5 == M @ M @ M @ M @ M: {M ** 5 == M @ M @ M @ M @ M}")
print(f"serialized size of a matrix: {len(M.to_bytes())} bytes")
