"""
Nice contractions and their equivalence classes
===============================================

For a target graph tau we enumerate the nice contractions whose source has
vertex degrees at most E, then group them under the relation generated by
factoring through one another.
"""

from ratcurves.agraph import canonical_form, invariants, tau
from ratcurves.contraction import (
    enumerate_nice_contractions, equivalence_classes, leq, normalize_to_path,
)

# %%
# Degree-one sources onto tau_0(e) are unlabeled trees on e vertices.
for e in range(1, 8):
    s = enumerate_nice_contractions(tau(0, e), 1)
    print("e =", e, "contractions", len(s), "classes", len(equivalence_classes(s)))

# %%
# Two elements for e = 4: the path and the star.  Neither factors through the
# other, so they are linked only through degree-two sources.
s = enumerate_nice_contractions(tau(0, 4), 1)
for a in s:
    print(canonical_form(a.source).decode(), "diameter", invariants(a.source).diameter)
a, b = s.elements
print("a <= b:", leq(a, b) is not None, "b <= a:", leq(b, a) is not None)
s2 = enumerate_nice_contractions(tau(0, 4), 2)
links = [c for c in s2 if leq(a, c) is not None and leq(b, c) is not None]
print("common coarsenings in S_2:", [canonical_form(c.source).decode() for c in links])

# %%
# Every degree-one tree can be moved to the path, one step of diameter at a time.
for a in enumerate_nice_contractions(tau(0, 6), 1):
    chain = normalize_to_path(a)
    diams = [invariants(c.source).diameter for c in chain.elements[::2]]
    print(canonical_form(a.source).decode(), "moves", chain.moves, "diameters", diams)
