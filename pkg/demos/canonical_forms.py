"""
Solving the word problem with left canonical forms
==================================================

Two braid words are equal exactly when their left canonical forms agree.
"""

import numpy as np

from braidsig.braid import delta, full_group, normalize, parse_word, random_braid

# the braid relation s1 s2 s1 = s2 s1 s2, seen through the normal form
lhs = normalize(parse_word("s1 s2 s1", 3))
rhs = normalize(parse_word("s2 s1 s2", 3))
print(lhs, "==", rhs, "->", lhs == rhs)
print("both are the half twist:", lhs == delta(3))

# a negative letter becomes a power of delta times positive factors
x = normalize(parse_word("s1^-1 s2 s1^-1", 4))
print("inf, sup, len:", x.inf, x.sup, x.length)
for f in x.permutation_factors():
    print("  factor", f.table)

# products and inverses never leave canonical form
rng = np.random.default_rng(0)
a = random_braid(full_group(6), 3, rng)
b = random_braid(full_group(6), 3, rng)
print("a*b*b^-1 == a:", a * b * b.inverse() == a)
print("a^5 has", (a ** 5).length, "factors")
