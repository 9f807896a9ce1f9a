"""Nonincreasing rearrangements, threshold splits, and Lorentz norms.

These are the order statistics that drive the shared-index K formulas:
sorting magnitudes, integrating the largest entries up to a count
threshold, and the Lorentz refinement of l^p that grades a sequence by
its rearrangement.
"""

import numpy as np

from besovk import (BesovIndex, CoeffField, GridSpec, besov_lorentz_norm,
                    besov_norm, rearrangement)
from besovk.norms import lorentz_seq_norm
from besovk.rearrange import (distribution_count, partial_power_integral,
                              tail_power_integral, threshold_split)

v = np.array([0.3, 2.0, 0.0, 1.1, 0.7])
r = rearrangement(v)
print("values       :", v)
print("rearrangement:", r)

# distribution_count(v, lam) counts entries strictly above lam
for lam in (0.0, 0.7, 1.5):
    print(f"count above {lam}: {distribution_count(v, lam)}")

# partial/tail power integrals split sum(r_i^p) at a fractional index T
p, T = 1.0, 2.5
head = partial_power_integral(r, p, T)
tail = tail_power_integral(r, p, T)
print(f"\nhead({T}) = {head},  tail({T}) = {tail},  total = {head + tail}")
print("full sum     =", float(np.sum(r ** p)))

big, small, frac = threshold_split(v, 1.0)
print("\nsplit at 1.0: big idx", big, " small idx", small, " frac", frac)

# Lorentz sequence norm, normalized so a single entry has norm c
print("\nlorentz(p=1, q=2) of [c]:", lorentz_seq_norm([1.7], 1.0, 2.0))
print("lorentz(p=2, q=2) == l^2:", lorentz_seq_norm(v, 2.0, 2.0),
      "vs", float(np.sqrt(np.sum(v ** 2))))

# the layered Besov-Lorentz norm refines besov_norm in its fine index
spec = GridSpec(n=1, J=2, layer_sizes=(2, 3))
field = CoeffField(spec, [np.array([1.0, 0.4]), np.array([0.2, 0.6, 0.1])])
idx = BesovIndex(0.3, 2.0, 1.0)
print("\nbesov_norm         :", besov_norm(field, idx))
for rr in (1.0, 2.0, np.inf):
    print(f"besov_lorentz r={rr:<4}:",
          besov_lorentz_norm(field, idx.s, idx.p, idx.q, rr))
