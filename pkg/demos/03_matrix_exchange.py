"""Key exchange on 3x3 matrices over Z_7[A5] with conjugation by H.

Run: python3 demos/03_matrix_exchange.py
"""

import random

from sdkx.algebra import mat_aug
from sdkx.paramgen import generate_params, sample_exponent
from sdkx.semidirect import MulCounter, ProtocolSession, Role, sd_pow
from sdkx.wire import key_fingerprint

rng = random.Random(3)
params = generate_params(rng)
m, n = sample_exponent(64, rng), sample_exponent(64, rng)

alice = ProtocolSession(Role.INITIATOR, params.M, params, m)
bob = ProtocolSession(Role.RESPONDER, params.M, params, n)
k_a = alice.receive(bob.outbound)
k_b = bob.receive(alice.outbound)

print(f"64-bit private exponents; keys agree: {k_a == k_b}")
print(f"key fingerprint {key_fingerprint(k_a.to_bytes())}")
print(f"augmentation of the transmitted matrix is zero: {not mat_aug(alice.outbound).any()}")

# Square-and-multiply keeps the number of semidirect multiplications logarithmic.
counter = MulCounter()
sd_pow(params.M, params, m, counter)
print(f"sd_mul calls for one 64-bit power: {counter.count}")
