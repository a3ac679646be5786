"""Baseline attacks: exhaustive exponent search and power-loop detection.

Run: python3 demos/06_attacks.py
"""

import random

from sdkx.cryptanalysis import brute_force_exponent, detect_loop, results_csv
from sdkx.paramgen import generate_params
from sdkx.platforms import matrix_closed_form

rng = random.Random(6)
params = generate_params(rng)

# A small exponent falls to exhaustive search.
A = matrix_closed_form(params, 1234)
small = brute_force_exponent(params.H, params.M, A, 2**12, params.H_inv)

# Generic M has no short cycle of powers, so the loop search runs out of budget.
loop = detect_loop(params.M, 2000)
print(results_csv([small, loop]), end="")
print(f"recovered m = {small.recovered}; loop found within budget: {loop.found}")
