"""
Strata of genus-zero stable maps
================================

Each stratum is indexed by a stable A-graph.  We list the graphs for a few
(tails, degree) pairs and attach expected dimensions for a quadric fourfold.
"""

from ratcurves.agraph import canonical_form, invariants
from ratcurves.strata import (
    TargetDescriptor, bend_break_bound, stratification_poset, stratify, threshold,
)

# %%
# The quadric in P^5 has Fano index 4, so its threshold is E = 1 and E' = 2.
x = TargetDescriptor.parse("5:2")
print(x, "fano index", x.fano_index, "thresholds", threshold(x))

# %%
# Degree two, no marked points: the main stratum and one boundary divisor.
for s in stratify(0, 2, x):
    print(canonical_form(s.graph).decode(), "dim", s.expected_dim, "codim", s.codim_in_main)

# %%
# Number of strata grows quickly with the degree.
for e in range(1, 7):
    print("degree", e, "strata", len(stratify(0, e)))

# %%
# Bend and break: an irreducible family of dimension above the bound must
# degenerate.  Compare the bound with the main stratum for a few targets.
for text in ["5:2", "7:2,2", "9:4"]:
    y = TargetDescriptor.parse(text)
    print(text, [bend_break_bound(y, e) for e in range(1, 5)])

# %%
# The poset of strata, coarse to fine, as DOT.
poset = stratification_poset(0, 3)
print(poset.to_dot())
print({canonical_form(s.graph).decode(): invariants(s.graph).diameter for s in poset.strata})
