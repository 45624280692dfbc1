"""Contractions between stable A-graphs and the equivalence of nice ones.

A contraction ``sigma -> tau`` is a surjection on vertices whose fibers are
connected subtrees, such that the edges of ``sigma`` that are not collapsed
correspond one-to-one to the edges of ``tau``, degrees add up over fibers
and tails keep their labels.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import networkx as nx
from scipy.cluster.hierarchy import DisjointSet

from .agraph import (
    AGraph, canonical_form, canonical_order, collapse_edges, idkey,
    is_stable, isomorphism, longest_path, sigma, tau,
)

__all__ = [
    "Contraction", "ContractionSet", "WitnessChain", "ContractionError",
    "FiberDisconnected", "BetaMismatch", "EdgeMismatch", "TailMismatch",
    "UnstableEndpoint", "NotComposable", "TargetMismatch", "UnstableTarget",
    "BoundTooSmall", "NotBasic", "NotDegreeZeroFree", "CapExceeded",
    "validate_contraction", "is_nice", "compose", "canonical_contraction",
    "enumerate_nice_contractions", "leq", "equivalence_classes",
    "normalize_to_path", "contraction_key", "identity",
]

DEFAULT_VERTEX_CAP = 10


class ContractionError(ValueError):
    pass


class FiberDisconnected(ContractionError):
    pass


class BetaMismatch(ContractionError):
    pass


class EdgeMismatch(ContractionError):
    pass


class TailMismatch(ContractionError):
    pass


class UnstableEndpoint(ContractionError):
    pass


class NotComposable(ContractionError):
    pass


class TargetMismatch(ContractionError):
    pass


class UnstableTarget(ContractionError):
    pass


class BoundTooSmall(ContractionError):
    pass


class NotBasic(ContractionError):
    pass


class NotDegreeZeroFree(ContractionError):
    pass


class CapExceeded(ContractionError):
    pass


@dataclass(frozen=True)
class Contraction:
    source: AGraph
    target: AGraph
    vertex_map: Mapping
    tail_map: Mapping = None

    def __post_init__(self):
        tmap = self.tail_map
        if tmap is None:
            tmap = {lab: lab for lab in self.source.tail_labels.values()}
        object.__setattr__(self, "vertex_map", MappingProxyType(dict(self.vertex_map)))
        object.__setattr__(self, "tail_map", MappingProxyType(dict(tmap)))
        _check(self)

    def fibers(self) -> dict:
        out = {w: [] for w in self.target.vertices}
        for v in self.source.vertices:
            out[self.vertex_map[v]].append(v)
        return out

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "vertex_map": {str(v): str(w) for v, w in self.vertex_map.items()},
            "tail_map": {str(a): b for a, b in sorted(self.tail_map.items())},
        }

    @classmethod
    def from_json(cls, raw: Mapping) -> "Contraction":
        source = AGraph.from_json(raw["source"])
        target = AGraph.from_json(raw["target"])
        vmap = dict(raw["vertex_map"])
        tmap = {int(a): int(b) for a, b in raw.get("tail_map", {}).items()}
        return cls(source, target, vmap, tmap)


def identity(g: AGraph) -> Contraction:
    return Contraction(g, g, {v: v for v in g.vertices})


def _check(c: Contraction):
    src, tgt, vmap, tmap = c.source, c.target, c.vertex_map, c.tail_map
    for g, name in ((src, "source"), (tgt, "target")):
        if not is_stable(g):
            raise UnstableEndpoint(f"{name} {g!r} is not stable")
    if set(vmap) != set(src.vertices) or not set(vmap.values()) <= set(tgt.vertices):
        raise FiberDisconnected("vertex map must send every source vertex to a target vertex")
    fibers = c.fibers()
    for w, fiber in fibers.items():
        if not fiber:
            raise FiberDisconnected(f"empty fiber over {w!r}")
        inside = set(fiber)
        seen, todo = {fiber[0]}, [fiber[0]]
        while todo:
            v = todo.pop()
            for _, u in src.neighbors(v):
                if u in inside and u not in seen:
                    seen.add(u)
                    todo.append(u)
        if seen != inside:
            raise FiberDisconnected(f"fiber over {w!r} is not connected")
        total = sum(src.beta[v] for v in fiber)
        if total != tgt.beta[w]:
            raise BetaMismatch(f"fiber over {w!r} has degree {total}, target has {tgt.beta[w]}")
    target_edges = {frozenset((a, b)) for a, b in tgt.vertex_edges()}
    hit = []
    for a, b in src.vertex_edges():
        wa, wb = vmap[a], vmap[b]
        if wa == wb:
            continue
        if frozenset((wa, wb)) not in target_edges:
            raise EdgeMismatch(f"edge {a!r}-{b!r} maps to a non-edge {wa!r}-{wb!r}")
        hit.append(frozenset((wa, wb)))
    if len(hit) != len(set(hit)) or set(hit) != target_edges:
        raise EdgeMismatch("surviving edges do not match the target edges one to one")
    src_labels = {src.tail_labels[f]: src.boundary[f] for f in src.tails}
    tgt_labels = {tgt.tail_labels[f]: tgt.boundary[f] for f in tgt.tails}
    if set(tmap) != set(src_labels) or sorted(tmap.values()) != sorted(tgt_labels):
        raise TailMismatch("tail map must be a bijection between tail labels")
    for a, b in tmap.items():
        if a != b:
            raise TailMismatch(f"tail {a} mapped to label {b}")
        if vmap[src_labels[a]] != tgt_labels[b]:
            raise TailMismatch(f"tail {a} lands on the wrong target vertex")


def validate_contraction(c) -> Contraction:
    """Check every contraction invariant; accepts a ``Contraction`` or its JSON."""
    if isinstance(c, Contraction):
        _check(c)
        return c
    return Contraction.from_json(c)


def is_nice(c: Contraction) -> bool:
    """Degree-0 fibers are single vertices and no degree-0 vertex is absorbed."""
    for w, fiber in c.fibers().items():
        if c.target.beta[w] == 0:
            if len(fiber) != 1:
                return False
        elif any(c.source.beta[v] == 0 for v in fiber):
            return False
    return True


def compose(e: Contraction, a: Contraction) -> Contraction:
    """``a o e``.  ``e.target`` may differ from ``a.source`` by an isomorphism."""
    if e.target == a.source:
        iso = {v: v for v in a.source.vertices}
    else:
        iso = isomorphism(e.target, a.source)
        if iso is None:
            raise NotComposable("target of the first contraction is not the source of the second")
    vmap = {v: a.vertex_map[iso[w]] for v, w in e.vertex_map.items()}
    tmap = {lab: a.tail_map[m] for lab, m in e.tail_map.items()}
    return Contraction(e.source, a.target, vmap, tmap)


def canonical_contraction(g: AGraph) -> Contraction:
    """The contraction of ``g`` onto ``tau_r(e)`` collapsing everything."""
    r, e = g.n_tails, g.beta_total
    if e == 0 and r < 3:
        raise UnstableTarget(f"tau_{r}({e}) is unstable")
    target = tau(r, e)
    (w,) = target.vertices
    return Contraction(g, target, {v: w for v in g.vertices})


def contraction_key(c: Contraction) -> bytes:
    """Canonical form of the source decorated with the target vertex of each
    source vertex.  Equal keys mean isomorphic over the (fixed) target."""
    colors = {v: repr(idkey(w)) for v, w in c.vertex_map.items()}
    return canonical_form(c.source, colors)


# -- nice refinements -----------------------------------------------------------

def _trees(k: int):
    if k == 1:
        yield []
        return
    for t in nx.nonisomorphic_trees(k):
        yield sorted(t.edges())


def _compositions(total: int, parts: int, lo: int, hi: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, min(hi, total - lo * (parts - 1)) + 1):
        for rest in _compositions(total - first, parts - 1, lo, hi):
            yield (first,) + rest


def _fiber_options(b: int, ports: list, bound: int) -> list:
    """Trees of positive-degree vertices with degrees <= ``bound`` summing to
    ``b``, with the ``ports`` distributed over the vertices, up to isomorphism
    fixing the ports.  Each option is ``(betas, edges, port_owner)``."""
    out, seen = [], set()
    kmin = -(-b // bound)
    for k in range(kmin, b + 1):
        for edges in _trees(k):
            for betas in _compositions(b, k, 1, bound):
                for owner in itertools.product(range(k), repeat=len(ports)):
                    tails = {i: [] for i in range(k)}
                    for port, i in zip(ports, owner):
                        tails[i].append(port)
                    code = _fiber_code(k, edges, betas, tails)
                    if code in seen:
                        continue
                    seen.add(code)
                    out.append((betas, edges, dict(zip(ports, owner))))
    return out


def _fiber_code(k, edges, betas, tails):
    beta = {i: betas[i] for i in range(k)}
    g = AGraph.build(beta, edges)
    colors = {i: ",".join(sorted(tails[i])) for i in range(k)}
    return canonical_form(g, colors) if k > 1 else (str(betas[0]) + "|" + colors[0]).encode()


@dataclass(frozen=True)
class ContractionSet:
    """Nice contractions onto a fixed target with bounded component degree."""
    target: AGraph
    bound_E: int
    elements: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def enumerate_nice_contractions(target: AGraph, E: int) -> ContractionSet:
    """All nice contractions ``sigma -> target`` with ``E(sigma) <= E``, one
    per isomorphism class over the target, sorted by :func:`contraction_key`."""
    if E < 1:
        raise BoundTooSmall(f"bound E={E} admits no refinement of positive-degree vertices")
    if not is_stable(target):
        raise UnstableEndpoint(f"target {target!r} is not stable")
    # ports are the target flags at each vertex, named by their sort position
    fname = {f: f"{i:04d}" for i, f in enumerate(target.flags)}
    per_vertex = []
    for w in target.vertices:
        ports = [fname[f] for f in target.flags_at(w)]
        if target.beta[w] == 0:
            per_vertex.append([((0,), [], {p: 0 for p in ports})])
        else:
            per_vertex.append(_fiber_options(target.beta[w], ports, E))
    by_name = {n: f for f, n in fname.items()}
    elements = []
    for choice in itertools.product(*per_vertex):
        beta, edges, vmap, owner = {}, [], {}, {}
        for w, (betas, fedges, port_owner) in zip(target.vertices, choice):
            base = len(beta)
            for i, b in enumerate(betas):
                beta[base + i] = b
                vmap[base + i] = w
            edges.extend((base + a, base + b) for a, b in fedges)
            for port, i in port_owner.items():
                owner[by_name[port]] = base + i
        for f, h in target.edges:
            edges.append((owner[f], owner[h]))
        tails = [owner[f] for f in target.tails]
        source = AGraph.build(beta, edges, tails)
        elements.append(Contraction(source, target, vmap))
    elements.sort(key=contraction_key)
    return ContractionSet(target, E, tuple(elements))


# -- the relation <= ------------------------------------------------------------

def leq(a: Contraction, a2: Contraction, cap: int = DEFAULT_VERTEX_CAP) -> Contraction | None:
    """A contraction ``eps: source(a) -> source(a2)`` with ``a == a2 o eps``.

    Searches every set of collapsible edges of ``source(a)`` and tests the
    quotient for isomorphism with ``source(a2)`` over the common target.
    """
    if a.target != a2.target:
        raise TargetMismatch("contractions have different targets")
    n1, n2 = len(a.source.vertices), len(a2.source.vertices)
    if n1 > cap or n2 > cap:
        raise CapExceeded(f"sources exceed the vertex cap {cap}")
    if n1 < n2:
        return None
    if n1 == n2 and a.source == a2.source and a.vertex_map == a2.vertex_map:
        return identity(a.source)
    colors2 = {v: repr(idkey(w)) for v, w in a2.vertex_map.items()}
    code2, order2 = canonical_order(a2.source, colors2)
    candidates = [e for e in a.source.edges
                  if len({a.vertex_map[v] for v in a.source.edge_endpoints(e)}) == 1]
    for subset in itertools.combinations(candidates, n1 - n2):
        quotient, qmap = collapse_edges(a.source, subset)
        colors = {qmap[v]: repr(idkey(a.vertex_map[v])) for v in a.source.vertices}
        code, order = canonical_order(quotient, colors)
        if code != code2:
            continue
        iso = dict(zip(order, order2))
        return Contraction(a.source, a2.source, {v: iso[qmap[v]] for v in a.source.vertices})
    return None


def equivalence_classes(s: ContractionSet, closure_bound: int | None = None,
                        cap: int = DEFAULT_VERTEX_CAP) -> list[list[Contraction]]:
    """Partition ``s`` under the equivalence generated by ``<=``.

    The relation is generated inside ``S_B(target)`` with
    ``B = closure_bound``, by default ``max(s.bound_E, 2)`` (the modified
    threshold degree), and then restricted to the members of ``s``.  Pass
    ``closure_bound=s.bound_E`` to close up inside ``s`` alone.
    """
    bound = max(s.bound_E, 2) if closure_bound is None else closure_bound
    ambient = s if bound == s.bound_E else enumerate_nice_contractions(s.target, bound)
    keys = [contraction_key(c) for c in ambient.elements]
    ds = DisjointSet(range(len(keys)))
    size = [len(c.source.vertices) for c in ambient.elements]
    for i, j in itertools.combinations(range(len(keys)), 2):
        if ds.connected(i, j) or size[i] == size[j]:
            continue
        lo, hi = (i, j) if size[i] > size[j] else (j, i)
        if leq(ambient.elements[lo], ambient.elements[hi], cap) is not None:
            ds.merge(i, j)
    wanted = {contraction_key(c) for c in s.elements}
    classes = []
    for group in ds.subsets():
        members = sorted((i for i in group if keys[i] in wanted), key=keys.__getitem__)
        if members:
            classes.append([ambient.elements[i] for i in members])
    classes.sort(key=lambda cls: contraction_key(cls[0]))
    return classes


# -- path normalization -----------------------------------------------------------

@dataclass(frozen=True)
class WitnessChain:
    """``elements[i]`` and ``elements[i+1]`` related by ``steps[i]``.

    A step ``("<=", eps)`` means ``elements[i] == elements[i+1] o eps``;
    ``(">=", eps)`` means ``elements[i+1] == elements[i] o eps``.
    """
    elements: tuple
    steps: tuple

    @property
    def moves(self) -> int:
        return len(self.steps) // 2

    def validate(self) -> bool:
        for (direction, eps), left, right in zip(self.steps, self.elements, self.elements[1:]):
            validate_contraction(eps)
            small, big = (left, right) if direction == "<=" else (right, left)
            if eps.source != small.source or eps.target != big.source:
                return False
            if compose(eps, big).vertex_map != small.vertex_map:
                return False
        return True

    def to_json(self) -> list:
        return [{"dir": d, "witness": eps.to_json()} for d, eps in self.steps]


def _canonical_longest_path(g: AGraph) -> list:
    n = len(longest_path(g))
    best = None
    for u, w in itertools.combinations(g.vertices, 2):
        p = _tree_path(g, u, w)
        if len(p) == n:
            for cand in (p, p[::-1]):
                key = [idkey(v) for v in cand]
                if best is None or key < best[0]:
                    best = (key, cand)
    return best[1] if best else list(g.vertices)


def _tree_path(g: AGraph, u, w) -> list:
    prev, todo = {u: None}, [u]
    while todo:
        v = todo.pop()
        for _, x in g.neighbors(v):
            if x not in prev:
                prev[x] = v
                todo.append(x)
    out = [w]
    while out[-1] != u:
        out.append(prev[out[-1]])
    return out[::-1]


def _fresh(used, count):
    out, i = [], 0
    while len(out) < count:
        if i not in used:
            out.append(i)
        i += 1
    return out


def normalize_to_path(a: Contraction) -> WitnessChain:
    """Connect a basic nice contraction onto ``tau_0(e)`` to ``sigma_e -> tau_0(e)``.

    Each move contracts an off-path edge at a branching vertex of a longest
    path (giving a degree-2 vertex) and then splits that vertex into two
    adjacent degree-1 vertices lengthening the path.  Every move raises the
    diameter by exactly one.
    """
    src, tgt = a.source, a.target
    e = src.beta_total
    if len(tgt.vertices) != 1 or tgt.n_tails or tgt.beta_total != e:
        raise ContractionError("target must be tau_0(e)")
    if any(b == 0 for b in src.beta.values()):
        raise NotDegreeZeroFree("source has degree-0 vertices")
    if src.max_degree != 1:
        raise NotBasic(f"source has maximum component degree {src.max_degree}")
    (t,) = tgt.vertices
    elements, steps = [a], []
    alpha = a
    while True:
        s = alpha.source
        gamma = _canonical_longest_path(s)
        if len(gamma) == len(s.vertices):
            break
        v1 = next(v for v in gamma if s.valence(v) >= 3)
        on_path = set(gamma)
        off = sorted((w for _, w in s.neighbors(v1) if w not in on_path), key=idkey)
        v2 = off[0]
        edge = next((f, s.involution[f]) for f in s.flags_at(v1)
                    if s.involution[f] != f and s.boundary[s.involution[f]] == v2)
        rho, qmap = collapse_edges(s, [edge])
        eps = Contraction(s, rho, qmap)
        alpha_rho = Contraction(rho, tgt, {v: t for v in rho.vertices})
        v = qmap[v1]
        i = gamma.index(v1)
        prev_v, next_v = qmap[gamma[i - 1]], qmap[gamma[i + 1]]
        w1, w2 = _fresh(set(rho.vertices), 2)
        beta = {x: rho.beta[x] for x in rho.vertices if x != v}
        beta[w1] = beta[w2] = 1
        edges = []
        for x, y in rho.vertex_edges():
            if v not in (x, y):
                edges.append((x, y))
                continue
            other = y if x == v else x
            edges.append((w2 if other == next_v else w1, other))
        edges.append((w1, w2))
        new = AGraph.build(beta, edges)
        eps2 = Contraction(new, rho, {x: (v if x in (w1, w2) else x) for x in new.vertices})
        alpha_new = Contraction(new, tgt, {x: t for x in new.vertices})
        elements.extend([alpha_rho, alpha_new])
        steps.extend([("<=", eps), (">=", eps2)])
        alpha = alpha_new
    if canonical_form(alpha.source) != canonical_form(sigma(e)):
        raise ContractionError("normalization did not reach the path")  # pragma: no cover
    return WitnessChain(tuple(elements), tuple(steps))
