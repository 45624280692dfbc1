"""The acceptance suite: one test per criterion, each at its stated tolerance
and time limit.  ``pytest tests/test_acceptance.py`` prints a PASS/FAIL line
per criterion at the end of the run."""
import itertools
import json
import time

import pytest

from oracles import brute_isomorphic, brute_stable_graphs, prufer_trees
from ratcurves.agraph import (
    AGraph, break_edge, canonical_form, invariants, is_stable, sigma, tau, tau2,
)
from ratcurves.contraction import (
    compose, enumerate_nice_contractions, equivalence_classes, leq,
    normalize_to_path, validate_contraction,
)
from ratcurves.forms import Form
from ratcurves.gf import gf
from ratcurves.hyperlines import (
    codim_formulas, decompose_at_point, direction_point, fiber_points,
    flatness_audit, lines_through_point, projective_points, tuple_audit,
)
from ratcurves.strata import (
    TargetDescriptor, bend_break_bound, diagram2_uniqueness, enumerate_strata,
    expected_dim, hypersurface, stratify, threshold,
)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


DESCRIPTORS = [
    TargetDescriptor(3, ()), TargetDescriptor(4, (2,)), TargetDescriptor(5, (2,)),
    TargetDescriptor(5, (3,)), TargetDescriptor(6, (2, 2)), TargetDescriptor(7, (2, 2)),
    TargetDescriptor(7, (3, 2)), TargetDescriptor(9, (4,)), TargetDescriptor(10, (2, 2, 2)),
    TargetDescriptor(12, (5, 3)),
]


@pytest.mark.criterion(1, "dimension formula for tau_0(e) on low-degree hypersurfaces")
def test_dimension_formula():
    with Timer(1.0):
        checked = 0
        for n in range(3, 9):
            for d in range(1, n + 1):
                if not d < (n + 1) / 2:
                    continue
                for e in range(1, 7):
                    assert expected_dim(hypersurface(n, d), tau(0, e)) == (n + 1 - d) * e + (n - 4)
                    checked += 1
        assert checked == 6 * (1 + 2 + 2 + 3 + 3 + 4)


@pytest.mark.criterion(2, "edge-break additivity of expected dimension")
def test_edge_break_additivity():
    params = [(r, e) for r in range(5) for e in range(6) if (e > 0 or r >= 3) and 2 * e + r <= 9]
    with Timer(10.0):
        graphs = [g for r, e in params for g in enumerate_strata(r, e) if len(g.vertices) <= 7]
        assert max(len(g.vertices) for g in graphs) == 7
        cuts = 0
        for g in graphs:
            for edge in g.edges:
                t1, t2 = break_edge(g, edge)
                for x in DESCRIPTORS:
                    assert expected_dim(x, t1) + expected_dim(x, t2) - x.dim == expected_dim(x, g)
                    cuts += 1
        assert cuts > 1000


@pytest.mark.criterion(3, "threshold degrees and the bend-and-break bound")
def test_threshold_and_bound():
    with Timer(1.0):
        for n in range(3, 31):
            for d in range(1, n + 1):
                if not d < (n + 1) / 2:
                    continue
                x = hypersurface(n, d)
                E, E2 = threshold(x)
                assert (E, E2) == (1, 2)
                for e in range(E + 1, 11):
                    assert bend_break_bound(x, e)
        for x in DESCRIPTORS:
            if x.fano_index > 0:
                E, _ = threshold(x)
                for e in range(E + 1, 11):
                    assert bend_break_bound(x, e), (str(x), e)


@pytest.mark.criterion(4, "stratum counts against a brute-force oracle and the golden file")
def test_strata_counts(golden):
    with Timer(30.0):
        expected = {(0, 2): 2, (0, 3): 4, (1, 1): 1, (0, 4): 11}
        for (r, e), count in expected.items():
            ours = enumerate_strata(r, e)
            oracle = brute_stable_graphs(r, e)
            assert len(ours) == len(oracle) == count
            assert {canonical_form(g) for g in ours} == {canonical_form(g) for g in oracle}
        frozen = json.loads((golden / "strata_0_4.json").read_text())
        assert [s.to_json() for s in stratify(0, 4)] == frozen


@pytest.mark.criterion(5, "a unique graph forgets its second tail onto tau_1(e)")
def test_diagram2_uniqueness():
    for e in range(1, 6):
        assert diagram2_uniqueness(e) == 1


@pytest.mark.criterion(6, "S_1 and S_2 over tau_0(e) form one class; path normalization")
def test_equivalence_collapse():
    with Timer(60.0):
        for e in range(2, 7):
            s1 = enumerate_nice_contractions(tau(0, e), 1)
            s2 = enumerate_nice_contractions(tau(0, e), 2)
            assert len(equivalence_classes(s1)) == 1
            assert len(equivalence_classes(s2)) == 1
            path_code = canonical_form(sigma(e))
            for a in s1:
                chain = normalize_to_path(a)
                assert chain.validate()
                assert canonical_form(chain.elements[-1].source) == path_code
                diam = invariants(a.source).diameter
                assert chain.moves <= e - diam
                diams = [invariants(c.source).diameter for c in chain.elements[::2]]
                assert diams == list(range(diam, diam + chain.moves + 1))


@pytest.mark.criterion(7, "pointed lines on the quadric match the fiber exactly")
def test_lines_match_fiber():
    f5 = gf(5)
    phi = Form.parse("x0*x3 - x1*x2", 4, 5)
    with Timer(5.0):
        p = (0, 0, 0, 1)
        lines = lines_through_point(phi, p, f5)
        assert len(lines) == 2
        dirs = {direction_point(p, ln.rows[0], f5) for ln in lines}
        want = fiber_points([Form.parse("x0", 3, 5), Form.parse("x1*x2", 3, 5)], f5)
        assert dirs == want == {(0, 0, 1), (0, 1, 0)}
        pts = projective_points(3, f5)
        on_x = [tuple(map(int, q)) for q in pts[phi.evaluate(pts, f5) == 0]]
        assert len(on_x) == 36
        for q in on_x:
            lines = lines_through_point(phi, q, f5)
            dirs = set()
            for ln in lines:
                other = next(r for r in ln.rows if tuple(r) != q)
                dirs.add(direction_point(q, other, f5))
            assert len(dirs) == len(lines) == 2
            assert dirs == fiber_points(decompose_at_point(phi, q), f5)


@pytest.mark.criterion(8, "flatness audit: smooth quadric passes, cone fails at its vertex")
def test_flatness_audit():
    with Timer(10.0):
        smooth = flatness_audit(Form.parse("x0*x3 - x1*x2", 4, 5))
        assert smooth["verdict"] == "PASS"
        assert {r["fiber_dim"] for r in smooth["points"]} == {0} and smooth["expected_fiber_dim"] == 0
        cone = flatness_audit(Form.parse("x0*x1 - x2^2", 4, 5))
        assert cone["verdict"] == "FAIL"
        bad = [r for r in cone["points"] if r["verdict"] == "FAIL"]
        assert bad == [{"point": [0, 0, 0, 1], "fiber_dim": 1, "verdict": "FAIL"}]
        assert not cone["cross_check_failures"]


def _pascal(rows):
    tri = [[1]]
    for n in range(1, rows + 1):
        prev = tri[-1]
        tri.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return tri


@pytest.mark.criterion(9, "codimension binomials on the grid n <= 30")
def test_codim_formulas():
    tri = _pascal(80)
    for n in range(1, 31):
        for d in range(1, n + 1):
            for j in range(1, 31):
                delta, by, exceeds = codim_formulas(n, d, j)
                assert delta == tri[n - 1 + j][n - 1]
                assert by == (tri[n][d + 1] if d + 1 <= n else 0)
                if d + 1 <= n - 1:
                    assert exceeds
                    assert delta >= n - 1 + j


@pytest.mark.criterion(10, "oversized tuple intersections are rare; none for d=1")
def test_tuple_statistics():
    with Timer(30.0):
        rep = tuple_audit(3, 2, 7, samples=500, seed=20240601)
        assert rep["samples"] == 500 and rep["seed"] == 20240601
        assert rep["fraction"] <= 0.01
        rep1 = tuple_audit(3, 1, 7, samples=500, seed=20240601)
        assert rep1["fraction"] == 0


def _small_stable_graphs():
    """Every labeled stable graph with at most 6 flags and degree at most 3."""
    out = []
    for k in range(1, 5):
        for edges in prufer_trees(k):
            for r in range(0, 7 - 2 * (k - 1)):
                for placement in itertools.product(range(k), repeat=r):
                    for betas in itertools.product(range(4), repeat=k):
                        if sum(betas) > 3:
                            continue
                        g = AGraph.build(dict(enumerate(betas)), edges, placement)
                        if is_stable(g):
                            out.append(g)
    return out


@pytest.mark.criterion(11, "canonical form agrees with brute-force isomorphism; leq witnesses compose")
def test_oracle_equivalence():
    with Timer(60.0):
        graphs = _small_stable_graphs()
        assert all(len(g.flags) <= 6 for g in graphs)
        groups = {}
        for g in graphs:
            groups.setdefault((len(g.vertices), g.n_tails, g.beta_total), []).append(g)
        for members in groups.values():
            reps, brute_class = [], []
            for g in members:
                idx = next((i for i, h in enumerate(reps) if brute_isomorphic(g, h)), None)
                if idx is None:
                    reps.append(g)
                    idx = len(reps) - 1
                brute_class.append(idx)
            codes = [canonical_form(g) for g in members]
            for (c1, b1), (c2, b2) in itertools.combinations(zip(codes, brute_class), 2):
                assert (c1 == c2) == (b1 == b2)
        targets = [tau(0, e) for e in range(2, 6)] + [tau(2, 2), tau(1, 3), tau2(1, 1, 1, 1), tau2(2, 2, 0, 0)]
        witnesses = 0
        for target in targets:
            s = enumerate_nice_contractions(target, 2)
            for a, b in itertools.permutations(s, 2):
                eps = leq(a, b)
                if eps is not None:
                    validate_contraction(eps)
                    assert compose(eps, b).vertex_map == a.vertex_map
                    witnesses += 1
        assert witnesses > 20


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
