#!/usr/bin/env python3
"""Approximating shift-invariant measures by block averages, exactly.

Any shift-invariant measure on lamp subgroups is approximated by laying
independent blocks of length m side by side (law: the measure's window
marginal on m consecutive sites) and averaging over the m phases.  The
window distance between the approximant and the original is an exact
rational and is bounded by 2(j+1)/m on the window [0, j]; it halves each
time m doubles for the mixtures below.
"""

from fractions import Fraction

from lampirs import SubgroupMeasure, Submodule, convergence_report
from lampirs.irs import block_average_marginal

half = Fraction(1, 2)
mix = SubgroupMeasure.mixture(
    [(half, Submodule.full(1, 2)), (half, Submodule.zero(1, 2))]
)

print("even mixture of the full lamp group and the trivial subgroup")
print(f"{'m':>3} {'j':>2} {'distance':>9} {'2j/m':>6} {'2(j+1)/m':>9}")
for j in (1, 2):
    for m in (2, 4, 8, 16):
        rep = convergence_report(mix, m, j)
        print(
            f"{m:>3} {j:>2} {str(rep['tv']):>9} {str(rep['literal_bound']):>6} "
            f"{str(rep['conservative_bound']):>9}"
        )

print()
print("the m = 2 approximant on the two-site window, exact atoms:")
for ws, prob in block_average_marginal(mix, 2, 0, 1).sorted_items():
    label = [" ".join(str(c) for c in row) for row in ws.rows] or ["(trivial)"]
    print(f"  prob {str(prob):>4}  basis {label}")
