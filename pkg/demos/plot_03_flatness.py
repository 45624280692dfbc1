"""
Lines through points of a hypersurface
======================================

At a point p of X = {phi = 0} in P^n the lines on X through p are cut out by
the pieces phi_1, ..., phi_d of phi expanded at p.  Over a finite field we count
them and compare the fiber dimension with the expected n - 1 - d.  This is
evidence over F_q, not a proof over the complex numbers.
"""

import numpy as np

from ratcurves.forms import Form
from ratcurves.gf import gf
from ratcurves.hyperlines import (
    decompose_at_point, flatness_audit, jacobian_singular, lines_through_point, quadric_rank,
)

f5 = gf(5)

# %%
# The smooth quadric surface: two lines through every point.
quadric = Form.parse("x0*x3 - x1*x2", 4, 5)
p = (0, 0, 0, 1)
print([str(part) for part in decompose_at_point(quadric, p)])
print([ln.rows for ln in lines_through_point(quadric, p, f5)])
print(flatness_audit(quadric)["verdict"])

# %%
# A quadric cone: the vertex sees a whole conic of lines.
cone = Form.parse("x0*x1 - x2^2", 4, 5)
rep = flatness_audit(cone)
print(rep["verdict"], rep["failures"])

# %%
# Random quadrics in P^4 over F_7: the audit fails exactly at singular points.
rng = np.random.default_rng(0)
for _ in range(5):
    phi = Form.random(5, 2, 7, rng)
    rep = flatness_audit(phi, cross_check=2, seed=1)
    bad = [row["point"] for row in rep["points"] if row["verdict"] == "FAIL"]
    print("rank", quadric_rank(phi), "failures", len(bad),
          "all singular", all(jacobian_singular(phi, q) for q in bad))

# %%
# A singular quadric in P^4 for contrast: the vertex is flagged.
phi = Form.parse("x0*x1 + x2*x3", 5, 7)
rep = flatness_audit(phi)
print("rank", quadric_rank(phi), rep["verdict"], rep["failures"])
