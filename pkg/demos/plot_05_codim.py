"""
Codimension counts
==================

Compare the number of conditions for a point to be bad against the number
needed to exceed the expected dimension, across n.
"""

from ratcurves.hyperlines import codim_formulas

# %%
for n in range(3, 13):
    rows = [codim_formulas(n, d, 1) for d in range(1, n - 1)]
    print(n, [r[1] for r in rows], all(r[2] for r in rows))
