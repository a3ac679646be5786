"""Key exchange over Z_p^* with the endomorphism h -> h^k, and why it is weak.

Run: python3 demos/02_toy_exchange.py
"""

import random

from sdkx.cryptanalysis import toy_break_key
from sdkx.platforms import ToyParams, toy_closed_form
from sdkx.semidirect import derive_shared, sd_pow

params = ToyParams(p=10007, g=5, k=3)
rng = random.Random(2)
m, n = rng.randrange(2, 10**12), rng.randrange(2, 10**12)

a = sd_pow(params.g, params, m)   # Alice publishes a
b = sd_pow(params.g, params, n)   # Bob publishes b
print(f"p={params.p} g={params.g} k={params.k}")
print(f"a = {a} (closed form agrees: {a == toy_closed_form(params.g, params.k, params.p, m)})")
print(f"b = {b}")

key_a = derive_shared(b, m, a, params)
key_b = derive_shared(a, n, b, params)
print(f"Alice's key {key_a}, Bob's key {key_b}, equal: {key_a == key_b}")

# An eavesdropper takes two discrete logarithms and recovers the key.
attack = toy_break_key(params, a, b)
print(f"eavesdropper recovers {attack.recovered} after {attack.ops} group operations")
