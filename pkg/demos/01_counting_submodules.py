#!/usr/bin/env python3
"""Counting finite-codimension submodules, two ways.

The number of submodules of the rank-k Laurent module with F_p-codimension
a has the closed form p^(a*k) - p^((a-1)*k) (and 1 for a = 0).  This script
enumerates the actual canonical matrices for a small grid and compares:
the diagonal entries are monic with nonzero constant term (the Laurent
units are normalized away) and their degrees sum to the codimension.
"""

from lampirs import count_submodules, submodules_of_codimension
from lampirs.formats import format_vector

print(f"{'p':>2} {'k':>2} {'a':>2} {'formula':>9} {'enumerated':>10}")
for p in (2, 3):
    for k in (1, 2):
        for a in range(0, 3):
            subs = submodules_of_codimension(p, k, a)
            formula = count_submodules(p, k, a)
            flag = "ok" if len(subs) == formula else "MISMATCH"
            print(f"{p:>2} {k:>2} {a:>2} {formula:>9} {len(subs):>10}  {flag}")

print()
print("the two codimension-2 submodules of the rank-1 module over F_2:")
for U in submodules_of_codimension(2, 1, 2):
    print("   generated by", ", ".join(format_vector(g) for g in U.gens))
