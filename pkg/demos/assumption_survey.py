"""
How large is E_a(beta, gamma)?
==============================

Soundness of confirmation leans on this set being large. At sizes small
enough to enumerate, we count it for many seeded instances.
"""

import numpy as np

from braidsig.analysis import estimate_assumption31

for n, l in [(6, 1), (6, 2), (7, 1), (7, 2), (8, 1), (8, 2)]:
    hits = np.array([estimate_assumption31(n, l, seed=s).hits for s in range(30)])
    space = estimate_assumption31(n, l, seed=0).space_size
    print(f"n={n} l={l} |RB_n(l)|={space:4d}  nonempty in {np.count_nonzero(hits):2d}/30  max |E_a|={hits.max()}")

# a full report replays from its seed
print(estimate_assumption31(6, 1, seed=5).to_text())
