"""
Oversized intersections of random tuples
========================================

For random forms (X_1, ..., X_d) of degrees 1..d in n variables the common
zero set is expected to have dimension n - 1 - d.  We estimate how often a
random tuple over F_p exceeds that.
"""

from ratcurves.forms import Form
from ratcurves.gf import gf
from ratcurves.hyperlines import classify_tuple, tuple_audit

# %%
# A forced degenerate tuple: x0 and x0*x1 share the line x0 = 0.
print(classify_tuple([Form.parse("x0", 3, 7), Form.parse("x0*x1", 3, 7)], gf(7)))

# %%
# Degree one alone is never degenerate.
print(tuple_audit(3, 1, 5, samples=100, seed=0)["fraction"])

# %%
# Frequencies for a few shapes.  They shrink as p grows.
for n, d, p in [(3, 2, 5), (3, 2, 11), (4, 2, 7), (4, 3, 7)]:
    rep = tuple_audit(n, d, p, samples=200, seed=1)
    print(n, d, p, rep["fraction"], rep["dim_histogram"])
