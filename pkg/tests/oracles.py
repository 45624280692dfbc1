"""Independent brute-force references used to pin down expected values.

Nothing here uses the canonical-form machinery of the package: trees come
from Prüfer sequences, isomorphism from trying every vertex bijection, and
lines from scanning all pairs of points.
"""
from __future__ import annotations

import itertools
from collections import Counter

import numpy as np

from ratcurves.agraph import AGraph


def prufer_trees(k):
    """Edge lists of every labeled tree on vertices ``0..k-1``."""
    if k == 1:
        yield []
        return
    if k == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(k), repeat=k - 2):
        degree = [1] * k
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(v for v in range(k) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(k) if degree[v] == 1]
        edges.append((u, w))
        yield edges


def _signature(g: AGraph):
    return Counter((g.beta[v], g.valence(v), g.tails_at(v)) for v in g.vertices)


def brute_isomorphic(g: AGraph, h: AGraph) -> bool:
    """Try every vertex bijection preserving degree labels, valence and tails."""
    if len(g.vertices) != len(h.vertices) or _signature(g) != _signature(h):
        return False
    gv, hv = list(g.vertices), list(h.vertices)
    g_adj = {frozenset(e) for e in g.vertex_edges()}
    h_adj = {frozenset(e) for e in h.vertex_edges()}
    label = lambda x, v: (x.beta[v], x.valence(v), x.tails_at(v))
    for perm in itertools.permutations(hv):
        m = dict(zip(gv, perm))
        if any(label(g, v) != label(h, m[v]) for v in gv):
            continue
        if {frozenset(m[v] for v in e) for e in g_adj} == h_adj:
            return True
    return False


def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_stable_graphs(r, e, max_vertices=None):
    """Stable graphs with ``r`` tails and degree ``e`` up to isomorphism.

    Every labeled tree, degree assignment and tail placement is generated,
    filtered by stability and deduplicated by :func:`brute_isomorphic`.
    """
    kmax = max_vertices or max(1, 2 * e + r - 2)
    reps = []
    for k in range(1, kmax + 1):
        for edges in prufer_trees(k):
            for betas in _weak_compositions(e, k):
                for placement in itertools.product(range(k), repeat=r):
                    g = AGraph.build(dict(enumerate(betas)), edges, placement)
                    if not all(g.beta[v] > 0 or g.valence(v) >= 3 for v in g.vertices):
                        continue
                    if not any(brute_isomorphic(g, h) for h in reps):
                        reps.append(g)
    return reps


def smooth_and_prune(beta, edges, tails):
    """Replay the two stabilization rules on a plain adjacency description.

    ``tails`` maps tail label -> vertex.  Returns ``(beta, edges, tails)``.
    """
    beta, edges, tails = dict(beta), [tuple(e) for e in edges], dict(tails)
    while True:
        for v in sorted(beta):
            if beta[v]:
                continue
            inc = [e for e in edges if v in e]
            tl = [lab for lab, w in tails.items() if w == v]
            if len(inc) + len(tl) >= 3:
                continue
            if len(inc) == 1 and not tl:
                edges.remove(inc[0])
            elif len(inc) == 1 and len(tl) == 1:
                (a, b), = inc
                edges.remove(inc[0])
                tails[tl[0]] = b if a == v else a
            elif len(inc) == 2:
                ends = [b if a == v else a for a, b in inc]
                for x in inc:
                    edges.remove(x)
                edges.append(tuple(ends))
            else:
                raise ValueError("unstabilizable")
            del beta[v]
            break
        else:
            return beta, edges, tails


def all_lines(n, field):
    """Every line of P^n over ``field`` as a frozenset of normalized points."""
    from ratcurves.hyperlines import projective_points
    pts = [tuple(map(int, p)) for p in projective_points(n, field)]
    seen, out = set(), []
    elements = [int(x) for x in field.elements()]
    for a, b in itertools.combinations(pts, 2):
        if (a, b) in seen:
            continue
        line = {a, b}
        av, bv = np.array(a), np.array(b)
        for s in elements:
            v = np.asarray(field.add(field.mul(s, av), bv))
            lead = next(x for x in v if x)
            line.add(tuple(int(x) for x in field.mul(v, field.inv(lead))))
        line = frozenset(line)
        seen.update(itertools.permutations(line, 2))
        out.append(line)
    return out


def lines_on(phi, n, field):
    """Lines of P^n contained in V(phi), by evaluating phi at every point."""
    return [ln for ln in all_lines(n, field)
            if all(phi(pt, field) == 0 for pt in ln)]
