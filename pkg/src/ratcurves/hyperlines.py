"""Lines on hypersurfaces over finite fields.

For a point ``p`` of ``X = V(phi)`` in P^n, expanding ``phi`` in powers of the
coordinate dual to ``p`` gives forms ``phi_1, ..., phi_d`` on P^{n-1} whose
common zeros are the directions of lines through ``p`` inside ``X``.  This
module computes that expansion, scans for lines by brute force, and audits
fiber dimensions by counting points.  Everything here is finite-field
evidence for statements about general complex hypersurfaces, not proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .forms import Form
from .gf import FiniteField, gf

__all__ = [
    "PointNotOnHypersurface", "FieldTooLarge", "PreconditionError",
    "DEFAULT_BUDGET", "EVIDENCE_NOTE",
    "projective_points", "count_projective_points", "normalize", "Line",
    "decompose_at_point", "change_of_basis", "direction_point",
    "lines_through_point", "fiber_points", "point_counts", "dimension_estimate",
    "jacobian_singular", "quadric_rank", "flatness_audit", "codim_formulas",
    "classify_tuple", "tuple_audit", "rref",
]

DEFAULT_BUDGET = 10 ** 6
EVIDENCE_NOTE = ("finite-field evidence: point counts over small fields support, "
                 "but do not prove, statements about general complex hypersurfaces")


class PointNotOnHypersurface(ValueError):
    pass


class FieldTooLarge(RuntimeError):
    """A scan would exceed the point budget."""


class PreconditionError(ValueError):
    pass


# -- points, lines, linear algebra -------------------------------------------------

def count_projective_points(m: int, q: int) -> int:
    """``|P^m(F_q)|``."""
    return (q ** (m + 1) - 1) // (q - 1) if m >= 0 else 0


def projective_points(m: int, field: FiniteField, budget: int | None = DEFAULT_BUDGET) -> np.ndarray:
    """All normalized points of P^m over ``field``, one per row.

    Rows are grouped by the position of the leading 1 (first the points with
    ``x_0 = 1``), then ordered lexicographically.
    """
    q = field.q
    total = count_projective_points(m, q)
    if budget is not None and total > budget:
        raise FieldTooLarge(f"|P^{m}(F_{q})| = {total} exceeds the budget {budget}")
    blocks = []
    for lead in range(m + 1):
        free = m - lead
        tail = np.indices((q,) * free).reshape(free, -1).T if free else np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((len(tail), m + 1), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        blocks.append(block)
    return np.concatenate(blocks)


def normalize(point, field: FiniteField) -> tuple:
    """Scale so that the first nonzero coordinate is 1."""
    v = np.asarray(point, dtype=np.int64)
    nz = np.flatnonzero(v)
    if len(nz) == 0:
        raise ValueError("the zero vector is not a projective point")
    return tuple(int(x) for x in field.mul(v, field.inv(v[nz[0]])))


def _normalize_rows(rows: np.ndarray, field: FiniteField) -> np.ndarray:
    lead = (rows != 0).argmax(axis=1)
    scale = field.inv(rows[np.arange(len(rows)), lead])
    return field.mul(rows, scale[:, None])


def rref(rows, field: FiniteField) -> tuple[tuple, list]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    m = [list(map(int, r)) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots, r = [], 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        m[r] = [int(x) for x in field.mul(m[r], field.inv(m[r][c]))]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [int(x) for x in field.sub(m[i], field.mul(f, m[r]))]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in m[:r]), pivots


def _kernel(rows, ncols: int, field: FiniteField) -> np.ndarray:
    """Basis of the right kernel as the columns of an ``ncols x m`` matrix."""
    if not rows:
        return np.eye(ncols, dtype=np.int64)
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for row, pc in zip(red, pivots):
            basis[pc, j] = int(field.neg(row[f]))
    return basis


@dataclass(frozen=True)
class Line:
    """A line in P^n, stored as the 2 x (n+1) reduced row echelon matrix."""
    rows: tuple

    @classmethod
    def through(cls, a, b, field: FiniteField) -> "Line":
        red, _ = rref([a, b], field)
        if len(red) != 2:
            raise ValueError("points coincide")
        return cls(red)

    def contains(self, point, field: FiniteField) -> bool:
        red, _ = rref([*self.rows, point], field)
        return len(red) == 2

    def points(self, field: FiniteField) -> np.ndarray:
        a, b = (np.asarray(r, dtype=np.int64) for r in self.rows)
        s = field.elements()
        pts = field.add(field.mul(s[:, None], a[None, :]), b[None, :])
        return np.concatenate([a[None, :], _normalize_rows(pts, field)])

    def to_json(self):
        return [list(r) for r in self.rows]


# -- the expansion around a point ------------------------------------------------------

def change_of_basis(p: Sequence[int]) -> tuple[int, list]:
    """Pivot and complementary coordinates for the basis ``e_{c_0}, ...,
    e_{c_{n-1}}, p``, where the pivot is the first nonzero coordinate of the
    normalized point ``p``."""
    p = list(p)
    pivot = next(i for i, x in enumerate(p) if x)
    if p[pivot] != 1:
        raise ValueError(f"point {p} is not normalized")
    return pivot, [i for i in range(len(p)) if i != pivot]


def decompose_at_point(phi: Form, p: Sequence[int]) -> list[Form]:
    """Forms ``[phi_1, ..., phi_d]`` in ``n`` variables with
    ``phi = phi_d + phi_{d-1} y_n + ... + phi_1 y_n^{d-1}`` after the change
    of coordinates ``x = sum_j y_j e_{c_j} + y_n p``.

    ``p`` must be a normalized point with coordinates in the prime field.
    """
    field = gf(phi.p)
    p = tuple(int(x) for x in p)
    if len(p) != phi.nvars:
        raise ValueError(f"point has {len(p)} coordinates, form has {phi.nvars} variables")
    if any(not 0 <= x < phi.p for x in p):
        raise ValueError("point coordinates must lie in the prime field")
    if phi(p, field) != 0:
        raise PointNotOnHypersurface(f"phi{list(p)} != 0")
    pivot, comp = change_of_basis(p)
    m = phi.nvars
    images = [None] * m
    for j, c in enumerate(comp):
        images[c] = Form.variable(j, m, phi.p) + Form.variable(m - 1, m, phi.p) * p[c]
    images[pivot] = Form.variable(m - 1, m, phi.p)
    parts = phi.substitute(images).split_last()
    assert parts[-1].is_zero()
    return parts[-2::-1]


def direction_point(p: Sequence[int], y: Sequence[int], field: FiniteField) -> tuple:
    """Image in P^{n-1} of the line through ``p`` and ``y``."""
    pivot, comp = change_of_basis(p)
    y = np.asarray(y, dtype=np.int64)
    pc = np.asarray([p[c] for c in comp], dtype=np.int64)
    return normalize(field.sub(y[comp], field.mul(y[pivot], pc)), field)


def lines_through_point(phi: Form, p: Sequence[int], field: FiniteField,
                        budget: int | None = DEFAULT_BUDGET) -> set[Line]:
    """Every ``field``-rational line through ``p`` contained in ``V(phi)``.

    Each line through ``p`` meets the hyperplane ``x_pivot = 0`` once; the
    line is kept when ``phi`` vanishes at all of its ``q + 1`` points, which
    forces the restriction to vanish identically since ``q + 1 > d``.
    """
    p = tuple(int(x) for x in p)
    if field.q + 1 <= phi.degree:
        raise PreconditionError(f"q + 1 = {field.q + 1} points cannot certify a degree-{phi.degree} restriction")
    if phi(p, field) != 0:
        raise PointNotOnHypersurface(f"phi{list(p)} != 0")
    pivot, comp = change_of_basis(p)
    n = phi.nvars - 1
    if budget is not None and count_projective_points(n - 1, field.q) * field.q > budget:
        raise FieldTooLarge("line scan exceeds the point budget")
    dirs = projective_points(n - 1, field, budget=None)
    ys = np.zeros((len(dirs), n + 1), dtype=np.int64)
    ys[:, comp] = dirs
    pv = np.asarray(p, dtype=np.int64)
    ok = np.ones(len(dirs), dtype=bool)
    for s in field.elements():
        pts = field.add(ys, field.mul(int(s), pv)[None, :])
        ok &= phi.evaluate(pts, field) == 0
    return {Line.through(p, y, field) for y in ys[ok]}


# -- zero sets and point counting ---------------------------------------------------------

def _reduce_linear(forms: Iterable[Form], nvars: int, field: FiniteField):
    """Solve the linear equations among ``forms``: returns ``(basis, rest)``
    with ``x = basis @ z`` parametrizing their common zeros and ``rest`` the
    other forms pulled back to ``z``.  ``basis`` may have zero columns."""
    forms = [f for f in forms if not f.is_zero()]
    linear = [[f.terms.get(tuple(int(i == j) for j in range(nvars)), 0) for i in range(nvars)]
              for f in forms if f.degree == 1]
    basis = _kernel(linear, nvars, field)
    m = basis.shape[1]
    rest = []
    for f in forms:
        if f.degree == 0:
            # a nonzero constant has no zeros at all
            return np.zeros((nvars, 0), dtype=np.int64), []
        if f.degree > 1:
            if m == 0:
                continue
            images = [Form(m, 1, f.p, {tuple(int(i == j) for j in range(m)): int(basis[k, i]) for i in range(m)})
                      for k in range(nvars)]
            g = f.substitute(images)
            if not g.is_zero():
                rest.append(g)
    return basis, rest


def _zero_mask(forms, pts, field):
    ok = np.ones(len(pts), dtype=bool)
    for f in forms:
        ok &= f.evaluate(pts, field) == 0
    return ok


def fiber_points(forms: Sequence[Form], field: FiniteField, k: int = 1, nvars: int | None = None,
                 budget: int | None = DEFAULT_BUDGET) -> set[tuple]:
    """Common zeros of ``forms`` in P^{nvars-1} over the degree-``k``
    extension of ``field``.

    Linear equations are solved first, so only the linear subspace they cut
    out is scanned; the budget applies to that scan.
    """
    if nvars is None:
        if not forms:
            raise ValueError("nvars is required when there are no forms")
        nvars = forms[0].nvars
    ext = gf(field.p, field.k * k)
    basis, rest = _reduce_linear(forms, nvars, ext)
    m = basis.shape[1]
    if m == 0:
        return set()
    pts = projective_points(m - 1, ext, budget)
    pts = pts[_zero_mask(rest, pts, ext)]
    if not len(pts):
        return set()
    # x = basis @ z, computed over the field
    xs = np.zeros((len(pts), nvars), dtype=np.int64)
    for j in range(m):
        xs = ext.add(xs, ext.mul(pts[:, j:j + 1], basis[:, j][None, :]))
    return {tuple(int(v) for v in row) for row in _normalize_rows(xs, ext)}


def point_counts(forms: Sequence[Form], field: FiniteField, k_max: int = 2, nvars: int | None = None,
                 budget: int | None = DEFAULT_BUDGET) -> list[int]:
    """``[N_1, ..., N_kmax]``, the numbers of common zeros over ``F_{q^k}``."""
    if nvars is None:
        nvars = forms[0].nvars
    counts = []
    for k in range(1, k_max + 1):
        ext = gf(field.p, field.k * k)
        basis, rest = _reduce_linear(forms, nvars, ext)
        m = basis.shape[1]
        if m == 0:
            counts.append(0)
            continue
        pts = projective_points(m - 1, ext, budget)
        counts.append(int(_zero_mask(rest, pts, ext).sum()))
    return counts


def dimension_estimate(forms: Sequence[Form], field: FiniteField, k_max: int = 2, nvars: int | None = None,
                       budget: int | None = DEFAULT_BUDGET) -> int:
    """Dimension of ``V(forms)`` guessed from point counts: ``-1`` when no
    ``F_{q^k}`` point exists for ``k <= k_max``, otherwise
    ``round(log N / log Q)`` with ``N`` the count over ``F_Q``, ``Q = q^k_max``.

    A heuristic: tiny fields can misreport.  ``k_max = 2`` sees conjugate
    pairs of points that are invisible over the base field.
    """
    if not 1 <= k_max <= 3:
        raise ValueError("k_max must be in 1..3")
    if field.k * k_max > 4:
        raise ValueError(f"F_{field.q}^{k_max} is beyond the supported extension degrees")
    counts = point_counts(forms, field, k_max, nvars, budget)
    if not any(counts):
        return -1
    n = counts[-1]
    if n == 0:
        # only possible when F_{q^2} is not a subfield of F_{q^3}
        k, n = max((i + 1, c) for i, c in enumerate(counts) if c)
    else:
        k = k_max
    return int(round(math.log(n) / math.log(field.q ** k)))


# -- singularities -----------------------------------------------------------------------

def jacobian_singular(phi: Form, point, field: FiniteField | None = None) -> bool:
    """True when every partial derivative of ``phi`` vanishes at ``point``."""
    field = field or gf(phi.p)
    return all(phi.partial(i)(point, field) == 0 for i in range(phi.nvars))


def quadric_rank(phi: Form) -> int:
    """Rank of the symmetric matrix of a quadratic form (odd characteristic)."""
    if phi.degree != 2 or phi.p == 2:
        raise ValueError("needs a quadratic form in odd characteristic")
    field = gf(phi.p)
    n = phi.nvars
    half = pow(2, -1, phi.p)
    mat = [[0] * n for _ in range(n)]
    for exp, c in phi.terms.items():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        i, j = idx
        if i == j:
            mat[i][i] = c
        else:
            mat[i][j] = mat[j][i] = c * half % phi.p
    return len(rref(mat, field)[0])


# -- audits ---------------------------------------------------------------------------------

def _check_degree_range(n, d):
    if not 1 <= d <= n - 1:
        raise PreconditionError(f"need 1 <= d <= n - 1, got n={n}, d={d}")


def flatness_audit(phi: Form, field: FiniteField | None = None, k_max: int = 2,
                   cross_check: int | None = None, seed: int = 0,
                   budget: int | None = DEFAULT_BUDGET) -> dict:
    """Fiber dimension of the pointed-line map at every rational point of
    ``X = V(phi)``, judged against ``n - d - 1``.

    ``cross_check`` limits how many points (a seeded sample, all when
    ``None``) also get the set comparison between line directions and
    fiber points.
    """
    field = field or gf(phi.p)
    if field.k != 1:
        raise PreconditionError("audits run over the prime field; use k_max for extensions")
    n, d = phi.nvars - 1, phi.degree
    _check_degree_range(n, d)
    expected = n - d - 1
    pts = projective_points(n, field, budget)
    on_x = pts[phi.evaluate(pts, field) == 0]
    rows = []
    for pt in on_x:
        pt = tuple(int(v) for v in pt)
        fib = decompose_at_point(phi, pt)
        dim = dimension_estimate(fib, field, k_max, nvars=n, budget=budget)
        rows.append({"point": list(pt), "fiber_dim": dim,
                     "verdict": "PASS" if dim == expected else "FAIL"})
    if cross_check is None or cross_check >= len(rows):
        chosen = range(len(rows))
    else:
        rng = np.random.default_rng(seed)
        chosen = sorted(rng.choice(len(rows), size=cross_check, replace=False).tolist())
    checks = []
    for i in chosen:
        pt = tuple(rows[i]["point"])
        lines = lines_through_point(phi, pt, field, budget)
        dirs = {direction_point(pt, _other_point(ln, pt, field), field) for ln in lines}
        fib = set(fiber_points(decompose_at_point(phi, pt), field, nvars=n, budget=budget))
        checks.append({"point": list(pt), "lines": len(lines), "fiber_points": len(fib),
                       "verdict": "PASS" if dirs == fib else "FAIL"})
    failures = [r["point"] for r in rows if r["verdict"] == "FAIL"]
    bad_checks = [c["point"] for c in checks if c["verdict"] == "FAIL"]
    return {
        "kind": "flatness_audit",
        "evidence": EVIDENCE_NOTE,
        "field": {"p": field.p, "k": field.k},
        "n": n, "d": d, "k_max": k_max, "seed": seed,
        "phi": phi.to_json(),
        "expected_fiber_dim": expected,
        "points": rows,
        "cross_checks": checks,
        "failures": failures,
        "cross_check_failures": bad_checks,
        "verdict": "PASS" if not failures and not bad_checks else "FAIL",
    }


def _other_point(line: Line, p, field) -> np.ndarray:
    """A point of ``line`` different from ``p``."""
    for row in line.rows:
        if normalize(row, field) != tuple(p):
            return np.asarray(row, dtype=np.int64)
    raise AssertionError("a line has two distinct rows")  # pragma: no cover


def codim_formulas(n: int, d: int, j: int) -> tuple[int, int, bool]:
    """``(C(n-1+j, n-1), C(n, d+1), C(n, d+1) > n-1)``."""
    if j < 1 or n < 1 or d < 1:
        raise ValueError("need n, d, j >= 1")
    by = math.comb(n, d + 1)
    return math.comb(n - 1 + j, n - 1), by, by > n - 1


def classify_tuple(forms: Sequence[Form], field: FiniteField, k_max: int = 2,
                   budget: int | None = DEFAULT_BUDGET) -> dict:
    """Dimension of ``X_1 cap ... cap X_d`` in P^{n-1} and whether it exceeds
    the expected ``n - d - 1``."""
    n, d = forms[0].nvars, len(forms)
    dim = dimension_estimate(forms, field, k_max, nvars=n, budget=budget)
    return {"dim": dim, "expected": n - d - 1, "degenerate": dim > n - d - 1}


def tuple_audit(n: int, d: int, p: int, samples: int, seed: int, k_max: int = 2,
                max_fraction: float = 0.01, budget: int | None = DEFAULT_BUDGET) -> dict:
    """Sample tuples ``(X_1, ..., X_d)`` with ``deg X_i = i`` in P^{n-1}
    over F_p and report how often the intersection is too large."""
    _check_degree_range(n, d)
    field = gf(p)
    seq = np.random.SeedSequence(seed)
    hits, dims = 0, {}
    for child in seq.spawn(samples):
        rng = np.random.default_rng(child)
        forms = [Form.random(n, i, p, rng) for i in range(1, d + 1)]
        res = classify_tuple(forms, field, k_max, budget)
        dims[res["dim"]] = dims.get(res["dim"], 0) + 1
        hits += res["degenerate"]
    fraction = hits / samples if samples else 0.0
    return {
        "kind": "tuple_audit",
        "evidence": EVIDENCE_NOTE,
        "n": n, "d": d, "field": {"p": p, "k": 1}, "k_max": k_max,
        "samples": samples, "seed": seed,
        "degenerate": hits, "fraction": fraction,
        "dim_histogram": {str(k): v for k, v in sorted(dims.items())},
        "max_fraction": max_fraction,
        "verdict": "PASS" if fraction <= max_fraction else "FAIL",
    }
