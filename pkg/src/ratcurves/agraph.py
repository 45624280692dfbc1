"""Stable A-graphs: genus-0 trees of flags with a degree on every vertex.

A graph is stored the way it is defined combinatorially: a set of flags
(half-edges), a set of vertices, an involution on flags and a boundary map
from flags to vertices.  Tails are the fixed points of the involution and
edges are its 2-orbits.  Every tail carries a label in ``1..r``.

All graphs are immutable and validated on construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

__all__ = [
    "AGraph", "GraphInvariants", "GraphError", "NonInvolution", "NotATree",
    "DanglingFlag", "NegativeDegree", "BadTailLabels", "Unstabilizable",
    "NotAnEdge", "NotATail", "UnstableRequest", "validate", "is_stable",
    "stabilize", "remove_tails", "forget_tail", "break_edge", "glue",
    "collapse_edges", "canonical_form", "canonical_order", "invariants",
    "standard_graph", "tau", "tau2", "sigma", "empty", "star", "path",
    "isomorphism", "longest_path", "relabel_vertices", "idkey",
]


class GraphError(ValueError):
    """Base class for malformed or unsuitable graphs.

    ``element`` names the offending flag, vertex or label when there is one.
    """

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class NonInvolution(GraphError):
    pass


class NotATree(GraphError):
    pass


class DanglingFlag(GraphError):
    pass


class NegativeDegree(GraphError):
    pass


class BadTailLabels(GraphError):
    pass


class Unstabilizable(GraphError):
    pass


class NotAnEdge(GraphError):
    pass


class NotATail(GraphError):
    pass


class UnstableRequest(GraphError):
    pass


def idkey(x):
    """Sort key that orders ints before everything else, then by ``str``."""
    if isinstance(x, bool):
        return (1, str(x))
    if isinstance(x, int):
        return (0, x, "")
    return (1, str(x))


@dataclass(frozen=True)
class AGraph:
    vertices: tuple
    flags: tuple
    involution: Mapping[Hashable, Hashable]
    boundary: Mapping[Hashable, Hashable]
    beta: Mapping[Hashable, int]
    tail_labels: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("vertices", "flags"):
            object.__setattr__(self, name, tuple(sorted(set(getattr(self, name)), key=idkey)))
        for name in ("involution", "boundary", "beta", "tail_labels"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))
        self._check()

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, beta: Mapping, edges: Iterable = (), tails: Iterable = ()) -> "AGraph":
        """Build a graph from vertex degrees, an edge list and tail positions.

        ``tails`` lists the vertex carrying tail 1, tail 2, ... in order.
        Flags are numbered: edge ``i`` owns flags ``2i`` and ``2i+1``, tails
        follow.
        """
        involution, boundary, labels = {}, {}, {}
        edges = list(edges)
        for i, (u, v) in enumerate(edges):
            involution[2 * i], involution[2 * i + 1] = 2 * i + 1, 2 * i
            boundary[2 * i], boundary[2 * i + 1] = u, v
        base = 2 * len(edges)
        for i, v in enumerate(tails):
            f = base + i
            involution[f] = f
            boundary[f] = v
            labels[f] = i + 1
        return cls(tuple(beta), tuple(boundary), involution, boundary, beta, labels)

    def _check(self):
        vset = set(self.vertices)
        if set(self.beta) != vset:
            missing = vset.symmetric_difference(self.beta)
            raise NegativeDegree(f"beta must be defined exactly on the vertices: {sorted(missing, key=idkey)}",
                                 next(iter(missing)))
        for v in self.vertices:
            b = self.beta[v]
            if not isinstance(b, int) or b < 0:
                raise NegativeDegree(f"vertex {v!r} has degree {b!r}", v)
        for f in self.flags:
            if f not in self.boundary or self.boundary[f] not in vset:
                raise DanglingFlag(f"flag {f!r} is not attached to a vertex", f)
        if set(self.boundary) - set(self.flags):
            f = next(iter(set(self.boundary) - set(self.flags)))
            raise DanglingFlag(f"boundary defined on unknown flag {f!r}", f)
        fset = set(self.flags)
        for f in self.flags:
            g = self.involution.get(f)
            if g not in fset or self.involution.get(g) != f:
                raise NonInvolution(f"flag {f!r} is not mapped back by the involution", f)
        # tree: connected with #edges == #vertices - 1
        if self.vertices:
            n_edges = sum(1 for f in self.flags if self.involution[f] != f) // 2
            if n_edges != len(self.vertices) - 1:
                raise NotATree(f"{n_edges} edges on {len(self.vertices)} vertices")
            seen = self._component(self.vertices[0])
            if len(seen) != len(self.vertices):
                v = next(v for v in self.vertices if v not in seen)
                raise NotATree(f"vertex {v!r} is disconnected", v)
        tails = [f for f in self.flags if self.involution[f] == f]
        if set(self.tail_labels) != set(tails):
            bad = set(self.tail_labels).symmetric_difference(tails)
            raise BadTailLabels("tail labels must be given exactly on the tails", next(iter(bad)))
        if sorted(self.tail_labels.values()) != list(range(1, len(tails) + 1)):
            raise BadTailLabels(f"tail labels {sorted(self.tail_labels.values())} are not 1..{len(tails)}")

    def _component(self, start, banned=frozenset()):
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for f, w in self.neighbors(v):
                if f in banned or w in seen:
                    continue
                seen.add(w)
                todo.append(w)
        return seen

    # -- derived structure ---------------------------------------------------

    @cached_property
    def _flags_at(self):
        at = {v: [] for v in self.vertices}
        for f in self.flags:
            at[self.boundary[f]].append(f)
        return {v: tuple(fs) for v, fs in at.items()}

    @cached_property
    def tails(self) -> tuple:
        """Tail flags ordered by label."""
        return tuple(sorted(self.tail_labels, key=self.tail_labels.__getitem__))

    @cached_property
    def edges(self) -> tuple:
        """Edges as flag pairs ``(f, j(f))`` with ``f`` the smaller flag."""
        out = []
        for f in self.flags:
            g = self.involution[f]
            if g != f and idkey(f) < idkey(g):
                out.append((f, g))
        return tuple(out)

    def flags_at(self, v) -> tuple:
        return self._flags_at[v]

    def valence(self, v) -> int:
        return len(self._flags_at[v])

    def neighbors(self, v):
        """``(flag, vertex)`` for every edge-flag at ``v``."""
        out = []
        for f in self._flags_at[v]:
            g = self.involution[f]
            if g != f:
                out.append((f, self.boundary[g]))
        return out

    def tails_at(self, v) -> tuple:
        return tuple(sorted(self.tail_labels[f] for f in self._flags_at[v] if self.involution[f] == f))

    def tail_flag(self, label: int):
        for f, lab in self.tail_labels.items():
            if lab == label:
                return f
        raise NotATail(f"no tail with label {label}", label)

    def is_tail(self, f) -> bool:
        return f in self.tail_labels

    def edge_endpoints(self, edge) -> tuple:
        f, g = edge
        return self.boundary[f], self.boundary[g]

    @property
    def n_tails(self) -> int:
        return len(self.tail_labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def beta_total(self) -> int:
        return sum(self.beta.values())

    @property
    def max_degree(self) -> int:
        return max(self.beta.values(), default=0)

    def is_empty(self) -> bool:
        return not self.vertices

    def vertex_edges(self):
        """Edges as vertex pairs."""
        return [self.edge_endpoints(e) for e in self.edges]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": str(v), "beta": self.beta[v]} for v in self.vertices],
            "edges": [[str(u), str(w)] for u, w in self.vertex_edges()],
            "tails": [{"at": str(self.boundary[f]), "label": self.tail_labels[f]} for f in self.tails],
        }

    @classmethod
    def from_json(cls, raw: Mapping) -> "AGraph":
        beta = {}
        for item in raw.get("vertices", []):
            if item["id"] in beta:
                raise NotATree(f"duplicate vertex id {item['id']!r}", item["id"])
            beta[item["id"]] = item["beta"]
        edges = [tuple(e) for e in raw.get("edges", [])]
        for e in edges:
            if len(e) != 2:
                raise NotATree(f"edge {e!r} must have two endpoints", e)
        tails = sorted(raw.get("tails", []), key=lambda t: t["label"])
        labels = [t["label"] for t in tails]
        if labels != list(range(1, len(labels) + 1)):
            raise BadTailLabels(f"tail labels {labels} are not 1..{len(labels)}")
        return cls.build(beta, edges, [t["at"] for t in tails])

    def __repr__(self):
        return (f"AGraph(beta={dict(self.beta)}, edges={self.vertex_edges()}, "
                f"tails={[self.boundary[f] for f in self.tails]})")


@dataclass(frozen=True)
class GraphInvariants:
    beta_total: int
    max_component_degree: int
    n_tails: int
    n_edges: int
    n_vertices: int
    diameter: int
    degree_zero_vertex_set: frozenset


def validate(raw) -> AGraph:
    """Parse and validate a graph description.

    Accepts either the JSON graph format (``vertices``/``edges``/``tails``)
    or a flag-level description with keys ``flags``, ``vertices``,
    ``involution`` (mapping or list of pairs), ``boundary``, ``beta`` and
    ``tail_labels``.  Raises a :class:`GraphError` subclass naming the
    offending element.
    """
    if isinstance(raw, AGraph):
        raw._check()
        return raw
    if "flags" not in raw:
        return AGraph.from_json(raw)
    inv = raw.get("involution", {})
    if not isinstance(inv, Mapping):
        pairs = inv
        inv = {}
        for a, b in pairs:
            inv[a], inv[b] = b, a
    vertices = raw.get("vertices", list(raw.get("beta", {})))
    return AGraph(tuple(vertices), tuple(raw["flags"]), inv, raw.get("boundary", {}),
                  raw.get("beta", {}), raw.get("tail_labels", {}))


def is_stable(g: AGraph) -> bool:
    return all(g.beta[v] > 0 or g.valence(v) >= 3 for v in g.vertices)


# -- rewriting ------------------------------------------------------------------

class _Draft:
    """Mutable copy of a graph used while rewriting."""

    def __init__(self, g: AGraph):
        self.beta = dict(g.beta)
        self.inv = dict(g.involution)
        self.bd = dict(g.boundary)
        self.labels = dict(g.tail_labels)

    def flags_at(self, v):
        return [f for f, w in self.bd.items() if w == v]

    def drop_flag(self, f):
        del self.inv[f], self.bd[f]
        self.labels.pop(f, None)

    def freeze(self, relabel=False) -> AGraph:
        labels = self.labels
        if relabel:
            order = sorted(labels, key=labels.__getitem__)
            labels = {f: i + 1 for i, f in enumerate(order)}
        return AGraph(tuple(self.beta), tuple(self.bd), self.inv, self.bd, self.beta, labels)


def stabilize(g: AGraph) -> AGraph:
    """Contract unstable degree-0 vertices until the graph is stable.

    A degree-0 leaf is deleted together with its edge; a degree-0 vertex of
    valence 2 is smoothed, merging its two flags' partners into one edge (or
    into a tail keeping the tail's label).  Vertices are visited in id order.
    """
    if g.is_empty():
        return g
    d = _Draft(g)
    while True:
        for v in sorted(d.beta, key=idkey):
            if d.beta[v] > 0:
                continue
            fs = d.flags_at(v)
            if len(fs) >= 3:
                continue
            edge_fs = [f for f in fs if d.inv[f] != f]
            tail_fs = [f for f in fs if d.inv[f] == f]
            if not edge_fs:
                raise Unstabilizable(f"stabilizing {g!r} leaves the empty graph", v)
            if len(fs) == 1:
                (f,) = fs
                d.drop_flag(d.inv[f])
                d.drop_flag(f)
            elif tail_fs:
                (f,), (t,) = edge_fs, tail_fs
                partner, label = d.inv[f], d.labels[t]
                d.drop_flag(f)
                d.drop_flag(t)
                d.inv[partner] = partner
                d.labels[partner] = label
            else:
                f, h = edge_fs
                pf, ph = d.inv[f], d.inv[h]
                d.drop_flag(f)
                d.drop_flag(h)
                d.inv[pf], d.inv[ph] = ph, pf
            del d.beta[v]
            break
        else:
            return d.freeze()


def _strip_tails(g: AGraph, doomed) -> AGraph:
    d = _Draft(g)
    for f in doomed:
        d.drop_flag(f)
    return d.freeze(relabel=True)


def remove_tails(g: AGraph, mode: str = "all") -> AGraph:
    """Remove tails at positive-degree vertices, degree-0 vertices, or both.

    ``mode="zero"`` and ``mode="all"`` stabilize afterwards.  Surviving tails
    are relabeled ``1..r`` in their previous order.
    """
    if mode not in ("positive", "zero", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    doomed = []
    for f in g.tails:
        positive = g.beta[g.boundary[f]] > 0
        if mode == "all" or (mode == "positive") == positive:
            doomed.append(f)
    out = _strip_tails(g, doomed)
    return out if mode == "positive" else stabilize(out)


def forget_tail(g: AGraph, label: int) -> AGraph:
    """Remove the tail with the given label and stabilize."""
    return stabilize(_strip_tails(g, [g.tail_flag(label)]))


def break_edge(g: AGraph, edge) -> tuple[AGraph, AGraph]:
    """Cut ``edge = (f1, f2)``; ``f1`` becomes the last tail of the first part."""
    f1, f2 = edge
    if f1 not in g.involution or g.involution[f1] != f2 or f1 == f2:
        raise NotAnEdge(f"{edge!r} is not an edge", edge)
    side = g._component(g.boundary[f1], banned={f1, f2})
    parts = []
    for cut, keep in ((f1, side), (f2, None)):
        vs = keep if keep is not None else set(g.vertices) - side
        flags = [f for f in g.flags if g.boundary[f] in vs]
        inv = {f: g.involution[f] for f in flags}
        inv[cut] = cut
        old = sorted((f for f in flags if f in g.tail_labels), key=g.tail_labels.__getitem__)
        labels = {f: i + 1 for i, f in enumerate(old)}
        labels[cut] = len(old) + 1
        parts.append(AGraph(tuple(vs), tuple(flags), inv, {f: g.boundary[f] for f in flags},
                            {v: g.beta[v] for v in vs}, labels))
    return parts[0], parts[1]


def glue(g1: AGraph, f1, g2: AGraph, f2) -> AGraph:
    """Join tail ``f1`` of ``g1`` to tail ``f2`` of ``g2`` into an edge.

    Vertices and flags are renumbered (``g1`` first); the remaining tails are
    relabeled ``1..r``, those of ``g1`` before those of ``g2``.
    """
    for g, f in ((g1, f1), (g2, f2)):
        if not g.is_tail(f):
            raise NotATail(f"{f!r} is not a tail", f)
    vmap, fmap = {}, {}
    for tag, g in ((0, g1), (1, g2)):
        for v in g.vertices:
            vmap[tag, v] = len(vmap)
        for f in g.flags:
            fmap[tag, f] = len(fmap)
    inv, bd, beta, labels = {}, {}, {}, {}
    for tag, g in ((0, g1), (1, g2)):
        for v in g.vertices:
            beta[vmap[tag, v]] = g.beta[v]
        for f in g.flags:
            inv[fmap[tag, f]] = fmap[tag, g.involution[f]]
            bd[fmap[tag, f]] = vmap[tag, g.boundary[f]]
    a, b = fmap[0, f1], fmap[1, f2]
    inv[a], inv[b] = b, a
    for tag, g, cut in ((0, g1, f1), (1, g2, f2)):
        for f in g.tails:
            if f != cut:
                labels[fmap[tag, f]] = len(labels) + 1
    return AGraph(tuple(beta), tuple(bd), inv, bd, beta, labels)


def collapse_edges(g: AGraph, edges) -> tuple[AGraph, dict]:
    """Contract the given edges.

    Returns the quotient graph and the vertex map onto it.  Each quotient
    vertex is named after the least vertex of its fiber; degrees add up.
    """
    edges = list(edges)
    doomed = set()
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for f, h in edges:
        if g.involution.get(f) != h or f == h:
            raise NotAnEdge(f"{(f, h)!r} is not an edge", (f, h))
        doomed.update((f, h))
        a, b = find(g.boundary[f]), find(g.boundary[h])
        parent[a] = b
    groups = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    vmap = {}
    for members in groups.values():
        rep = min(members, key=idkey)
        for v in members:
            vmap[v] = rep
    beta = {}
    for v in g.vertices:
        beta[vmap[v]] = beta.get(vmap[v], 0) + g.beta[v]
    flags = [f for f in g.flags if f not in doomed]
    q = AGraph(tuple(beta), tuple(flags), {f: g.involution[f] for f in flags},
               {f: vmap[g.boundary[f]] for f in flags}, beta,
               {f: g.tail_labels[f] for f in flags if f in g.tail_labels})
    return q, vmap


# -- canonical forms -------------------------------------------------------------

def _bfs_far(g: AGraph, start):
    dist = {start: 0}
    prev = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for _, w in sorted(g.neighbors(v), key=lambda fw: idkey(fw[1])):
            if w not in dist:
                dist[w] = dist[v] + 1
                prev[w] = v
                queue.append(w)
    best = max(dist.values())
    far = min((v for v in g.vertices if dist[v] == best), key=idkey)
    return far, dist, prev


def longest_path(g: AGraph) -> list:
    """One longest path, as a list of vertices."""
    if g.is_empty():
        return []
    a, _, _ = _bfs_far(g, g.vertices[0])
    b, _, prev = _bfs_far(g, a)
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path


def _centers(g: AGraph) -> list:
    path = longest_path(g)
    n = len(path)
    if n % 2:
        return [path[n // 2]]
    return [path[n // 2 - 1], path[n // 2]]


def _vertex_label(g, v, colors, labeled_tails):
    if labeled_tails:
        tails = ",".join(map(str, g.tails_at(v)))
    else:
        tails = str(len(g.tails_at(v)))
    label = f"{g.beta[v]}:{tails}"
    if colors is not None:
        label += "|" + str(colors[v])
    return label


def _encode(g, root, colors, labeled_tails):
    """AHU encoding of the tree rooted at ``root`` plus its preorder."""
    parent = {root: None}
    order = [root]
    for v in order:
        for _, w in g.neighbors(v):
            if w != parent[v]:
                parent[w] = v
                order.append(w)
    code, seq = {}, {}
    for v in reversed(order):
        kids = sorted((w for _, w in g.neighbors(v) if w != parent[v]), key=lambda w: code[w])
        code[v] = "(" + _vertex_label(g, v, colors, labeled_tails) + "".join(code[w] for w in kids) + ")"
        seq[v] = [v] + [u for w in kids for u in seq[w]]
    return code[root], seq[root]


def canonical_order(g: AGraph, colors: Mapping | None = None, labeled_tails: bool = True):
    """Canonical encoding and the matching vertex order.

    Two graphs with equal encodings are isomorphic, and pairing their vertex
    orders position by position gives an isomorphism.
    """
    if g.is_empty():
        return b"", []
    best = min(_encode(g, c, colors, labeled_tails) for c in _centers(g))
    return best[0].encode(), best[1]


def canonical_form(g: AGraph, colors: Mapping | None = None, labeled_tails: bool = True) -> bytes:
    """Isomorphism invariant byte string (degrees, incidence and tail labels).

    ``colors`` adds an extra label per vertex; ``labeled_tails=False``
    forgets which label each tail carries.
    """
    return canonical_order(g, colors, labeled_tails)[0]


def isomorphism(g: AGraph, h: AGraph, g_colors=None, h_colors=None) -> dict | None:
    """A vertex bijection ``g -> h`` preserving all structure, or ``None``."""
    cg, og = canonical_order(g, g_colors)
    ch, oh = canonical_order(h, h_colors)
    if cg != ch:
        return None
    return dict(zip(og, oh))


def invariants(g: AGraph) -> GraphInvariants:
    return GraphInvariants(
        beta_total=g.beta_total,
        max_component_degree=g.max_degree,
        n_tails=g.n_tails,
        n_edges=g.n_edges,
        n_vertices=len(g.vertices),
        diameter=len(longest_path(g)),
        degree_zero_vertex_set=frozenset(v for v in g.vertices if g.beta[v] == 0),
    )


# -- standard graphs ---------------------------------------------------------------

def empty() -> AGraph:
    return AGraph((), (), {}, {}, {}, {})


def tau(r: int, e: int) -> AGraph:
    """One vertex of degree ``e`` carrying ``r`` tails."""
    if r < 0 or e < 0:
        raise UnstableRequest(f"negative parameters ({r}, {e})")
    if e == 0 and r < 3:
        raise UnstableRequest(f"tau_{r}({e}) is unstable")
    return AGraph.build({0: e}, (), [0] * r)


def tau2(r1: int, r2: int, e1: int, e2: int) -> AGraph:
    """Two vertices joined by an edge, tails ``1..r1`` on the first."""
    if min(r1, r2, e1, e2) < 0:
        raise UnstableRequest("negative parameters")
    for r, e in ((r1, e1), (r2, e2)):
        if e == 0 and r + 1 < 3:
            raise UnstableRequest(f"tau_({r1},{r2})({e1},{e2}) is unstable")
    return AGraph.build({0: e1, 1: e2}, [(0, 1)], [0] * r1 + [1] * r2)


def sigma(e: int) -> AGraph:
    """The path on ``e`` vertices of degree 1."""
    if e < 1:
        raise UnstableRequest("sigma_e needs e >= 1")
    return AGraph.build({i: 1 for i in range(e)}, [(i, i + 1) for i in range(e - 1)])


def standard_graph(kind: str, *params) -> AGraph:
    kinds = {"tau_r_e": tau, "tau_r1r2_e1e2": tau2, "path_sigma_e": sigma, "empty": empty}
    if kind not in kinds:
        raise ValueError(f"unknown kind {kind!r}")
    return kinds[kind](*params)


def star(center_beta: int, leaf_betas: Iterable[int]) -> AGraph:
    """A center vertex joined to one leaf per entry of ``leaf_betas``."""
    leaf_betas = list(leaf_betas)
    beta = {0: center_beta}
    beta.update({i + 1: b for i, b in enumerate(leaf_betas)})
    return AGraph.build(beta, [(0, i + 1) for i in range(len(leaf_betas))])


def path(betas: Iterable[int]) -> AGraph:
    betas = list(betas)
    return AGraph.build(dict(enumerate(betas)), [(i, i + 1) for i in range(len(betas) - 1)])


def relabel_vertices(g: AGraph, mapping: Mapping) -> AGraph:
    """Rename vertices through ``mapping`` (flags are kept)."""
    return AGraph(tuple(mapping[v] for v in g.vertices), g.flags, g.involution,
                  {f: mapping[v] for f, v in g.boundary.items()},
                  {mapping[v]: b for v, b in g.beta.items()}, g.tail_labels)
