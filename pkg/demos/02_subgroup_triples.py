#!/usr/bin/env python3
"""Subgroup triples: encoding, membership, and conjugation.

A subgroup of the lamplighter group that surjects onto s*Z is pinned down
by three pieces of data: s, its intersection U with the lamp group, and a
companion configuration v with (v, s) in the subgroup.  Everything else
(membership of arbitrary elements, containment between subgroups, the
conjugation action) is decided exactly from the triple.
"""

from lampirs import GroupElement, SubgroupTriple, Submodule, delta_site
from lampirs.formats import format_triple
from lampirs.submodules import LaurentVector, invariant_report

p = 2

# U = all even-shift translates of the lamp at site 0.
U = Submodule(1, p, 2, [LaurentVector.unit(1, p, 0)])
v = U.reduce_vector(delta_site(1, p, 1))
V = SubgroupTriple(2, U, v)

print("the triple file for V:")
print(format_triple(V))

rep = invariant_report(U, V.s)
print(f"lamp-part invariants: minimal period e = {rep.e}, rank = {rep.rank},")
print(f"deficiency = {rep.deficiency};  encoding (t, r) = {V.poset_encoding()}")
print()

marker = GroupElement(V.v, V.s)
probes = [
    ("the marker (v, s)", marker),
    ("its inverse square", GroupElement.identity(1, p)),
    ("a lamp generator", GroupElement(U.gens[0], 0)),
    ("an odd-site lamp", GroupElement(delta_site(1, p, 1), 0)),
    ("a unit shift", GroupElement(LaurentVector.zero(1, p), 1)),
]
for label, g in probes:
    print(f"{label:22s} member: {V.contains_element(g)}")

print()
g = GroupElement(delta_site(1, p, 2), 3)
C = V.conjugated(g)
print("conjugating by (lamp at 2, shift 3) preserves the projection and the")
print(f"encoding: s = {C.s}, (t, r) = {C.poset_encoding()}")
