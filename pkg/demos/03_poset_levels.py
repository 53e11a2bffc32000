#!/usr/bin/env python3
"""Derivative levels of the divisor-product order are unbounded.

Pairs (t, r) are ordered by (t', r') < (t, r) iff t' | t and t'r' < tr.
Repeatedly deleting minimal elements assigns each pair a level; on any
downward-closed truncation the level of (t, r) comes out as exactly t*r
(0 when r = 0), and along the chain (2, 1), (4, 1), (8, 1), ... the levels
grow without bound.  That chain is the finite certificate that the
derivative process does not stop at any finite stage.
"""

from lampirs import cb_levels, level_closed_form, truncation, unbounded_rank_certificate

poset = truncation(8, 12)
levels = cb_levels(poset)

print("levels on the truncation t <= 8, t*r <= 12 (rows t, columns r):")
print("      " + " ".join(f"{r:>3}" for r in range(0, 7)))
for t in range(1, 9):
    row = []
    for r in range(0, 7):
        row.append(f"{levels[(t, r)]:>3}" if (t, r) in levels else "  .")
    print(f"t={t:>2}: " + " ".join(row))

mismatch = [pt for pt, lv in levels.items() if lv != level_closed_form(pt)]
print()
print(f"closed form t*r matches the direct iteration: {not mismatch}")

cert = unbounded_rank_certificate([2, 4, 8, 16])
print("chain levels along (2^i, 1):")
for stage in cert["stages"]:
    print(f"  bound {stage['bound']:>3}: {stage['chain_levels']}")
print(f"strictly increasing: {cert['chain_strictly_increasing']}")
