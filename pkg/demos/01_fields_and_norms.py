"""
Coefficient fields and Besov sequence norms
===========================================

A field is a truncated pyramid of nonnegative coefficient magnitudes:
layer j holds m_j entries and carries the dyadic weight
2^(j*(s + n/2 - n/p)).  The Besov norm takes l^p within each layer and
a weighted l^q across layers.
"""

import numpy as np

from besovk import (BesovIndex, CoeffField, GridSpec, besov_norm, generate,
                    layer_weight, read_field, write_field)

# a 1-d grid with three layers of sizes 1, 2, 4
spec = GridSpec(n=1, J=3, layer_sizes=(1, 2, 4))
print("grid:", spec, "total coeffs:", spec.total_coeffs)

# build a field by hand
field = CoeffField(spec, [np.array([1.0]),
                          np.array([0.5, 0.25]),
                          np.array([0.1, 0.0, 0.2, 0.05])])

idx = BesovIndex(0.5, 2.0, 1.0)   # smoothness 0.5, p = 2, q = 1
print("\nlayer weights for", idx)
for j in range(spec.J):
    print(f"  j={j}  2^(j*(s+n/2-n/p)) = {layer_weight(spec, idx, j):.6g}")

print("\nbesov_norm:", besov_norm(field, idx))

# the same field scaled by 3 scales the norm by 3 (exact homogeneity)
print("scaled by 3:", besov_norm(field.scaled(3.0), idx))

# built-in generators produce reproducible test fields
for kind in ("single-spike", "lacunary", "geometric-decay", "uniform-random"):
    g = generate(spec, kind, seed=42)
    print(f"{kind:16s} max={g.max_abs():.4f}  norm={besov_norm(g, idx):.6f}")

# fields round-trip through a small JSON document
g = generate(spec, "lacunary", seed=7)
write_field(g, "/tmp/demo_field.json")
back = read_field("/tmp/demo_field.json")
print("\nround trip equal:",
      all(np.array_equal(a, b) for a, b in zip(g.layers, back.layers)))
