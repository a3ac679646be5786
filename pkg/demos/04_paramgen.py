"""Generating public parameters and writing them to a file.

Run: python3 demos/04_paramgen.py
"""

import random
import tempfile
from pathlib import Path

from sdkx.algebra import GRMatrix
from sdkx.paramgen import dump_params, generate_params, load_params, sample_H

rng = random.Random(4)

# H is a product of 20 alternating upper and lower triangular factors,
# so its inverse comes for free from the factor inverses.
H, H_inv = sample_H(rng)
print(f"H @ H_inv is the identity: {H @ H_inv == GRMatrix.identity()}")

params = generate_params(rng)
data = dump_params(params, 64)
path = Path(tempfile.mkdtemp()) / "params.sdkx"
path.write_bytes(data)
loaded, t = load_params(path.read_bytes())
print(f"wrote {len(data)} bytes to {path}; reloaded t={t}, identical: {loaded == params}")
