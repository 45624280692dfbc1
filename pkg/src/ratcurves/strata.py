"""Dimension bookkeeping for complete intersections and the stratification of
the space of stable maps by stable A-graphs."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import networkx as nx

from .agraph import (
    AGraph, UnstableRequest, canonical_form, collapse_edges, forget_tail,
    is_stable, tau,
)

__all__ = [
    "TargetDescriptor", "Stratum", "StratificationPoset", "NotFano",
    "expected_dim", "threshold", "obstruction_rank", "bend_break_bound",
    "enumerate_strata", "stratify", "diagram2_uniqueness", "stratification_poset",
    "hypersurface", "projective_space",
]


class NotFano(ValueError):
    pass


@dataclass(frozen=True)
class TargetDescriptor:
    """A complete intersection of hypersurfaces of the given degrees in P^N.

    An empty ``degrees`` tuple describes P^N itself.
    """
    N: int
    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"degrees must be positive: {self.degrees}")
        if self.dim <= 0:
            raise ValueError(f"X in P^{self.N} cut out by {len(self.degrees)} equations has dim {self.dim} <= 0")

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def dim(self) -> int:
        return self.N - self.r

    @property
    def fano_index(self) -> int:
        """``N + 1 - sum(d_i)``, i.e. ``-m`` for ``K_X = m H``."""
        return self.N + 1 - sum(self.degrees)

    def ambient(self) -> "TargetDescriptor":
        return TargetDescriptor(self.N, ())

    @classmethod
    def parse(cls, text: str) -> "TargetDescriptor":
        """``"N:d1,d2,..."``; ``"N"`` or ``"N:"`` is projective space."""
        n, _, rest = text.partition(":")
        degrees = tuple(int(d) for d in rest.split(",") if d.strip())
        return cls(int(n), degrees)

    def __str__(self):
        return f"{self.N}:{','.join(map(str, self.degrees))}"


def hypersurface(n: int, d: int) -> TargetDescriptor:
    return TargetDescriptor(n, (d,))


def projective_space(n: int) -> TargetDescriptor:
    return TargetDescriptor(n, ())


def expected_dim(x: TargetDescriptor, g: AGraph) -> int:
    """Expected dimension of the stratum of maps with dual graph ``g``."""
    if g.is_empty():
        return x.dim
    return x.fano_index * g.beta_total + g.n_tails - g.n_edges + x.dim - 3


def threshold(x: TargetDescriptor) -> tuple[int, int]:
    """Threshold degree ``E`` and modified threshold ``max(E, 2)``."""
    if x.fano_index <= 0:
        raise NotFano(f"{x} has N + 1 - sum(d) = {x.fano_index} <= 0")
    E = (x.N + 2 - x.r) // x.fano_index
    return E, max(E, 2)


def obstruction_rank(x: TargetDescriptor, g: AGraph) -> int:
    """Rank of the bundle whose section cuts the maps to X out of the maps to
    the ambient space: ``sum(d_i) * beta + r``."""
    rank = sum(x.degrees) * g.beta_total + x.r
    assert rank == expected_dim(x.ambient(), g) - expected_dim(x, g)
    return rank


def bend_break_bound(x: TargetDescriptor, e: int) -> bool:
    """Whether ``expected_dim(x, tau_1(e)) >= 2 dim X``."""
    return expected_dim(x, tau(1, e)) >= 2 * x.dim


# -- enumeration -------------------------------------------------------------------

def _positive_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first,) + rest


def _shapes(k):
    if k == 1:
        yield []
    else:
        for t in nx.nonisomorphic_trees(k):
            yield sorted(t.edges())


def enumerate_strata(r: int, e: int) -> list[AGraph]:
    """Every stable A-graph with ``r`` labeled tails and total degree ``e``, up
    to isomorphism, sorted by (number of edges, canonical form).

    These index the strata of the space of ``r``-pointed degree-``e`` stable
    maps: each graph contracts canonically onto ``tau_r(e)``.
    """
    if r < 0 or e < 0:
        raise UnstableRequest(f"negative parameters ({r}, {e})")
    if e == 0 and r < 3:
        raise UnstableRequest(f"tau_{r}({e}) is unstable")
    # a stable tree has at most (#positive vertices + r - 2) degree-0 vertices
    kmax = max(1, 2 * e + r - 2)
    found = {}
    for k in range(1, kmax + 1):
        for edges in _shapes(k):
            deg = [0] * k
            for a, b in edges:
                deg[a] += 1
                deg[b] += 1
            for placement in itertools.product(range(k), repeat=r):
                valence = list(deg)
                for v in placement:
                    valence[v] += 1
                eligible = [v for v in range(k) if valence[v] >= 3]
                for nz in range(max(0, k - e), len(eligible) + 1):
                    for zeros in itertools.combinations(eligible, nz):
                        positive = [v for v in range(k) if v not in zeros]
                        if e == 0 and positive:
                            continue
                        for betas in _positive_compositions(e, len(positive)):
                            beta = {v: 0 for v in zeros}
                            beta.update(zip(positive, betas))
                            g = AGraph.build(beta, edges, placement)
                            found.setdefault(canonical_form(g), g)
    return sorted(found.values(), key=lambda g: (g.n_edges, canonical_form(g)))


@dataclass(frozen=True)
class Stratum:
    graph: AGraph
    expected_dim: int | None
    codim_in_main: int

    @property
    def key(self) -> str:
        return canonical_form(self.graph).hex()

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "canonical_form": self.key,
                "dim": self.expected_dim, "codim": self.codim_in_main}


def stratify(r: int, e: int, x: TargetDescriptor | None = None) -> list[Stratum]:
    """Strata for ``(r, e)``, with expected dimensions when ``x`` is given."""
    out = []
    for g in enumerate_strata(r, e):
        dim = expected_dim(x, g) if x is not None else None
        out.append(Stratum(g, dim, g.n_edges))
    if x is not None:
        main = expected_dim(x, tau(r, e))
        assert all(main - s.expected_dim == s.codim_in_main for s in out)
    return out


def diagram2_uniqueness(e: int) -> int:
    """Count stable graphs with two tails and degree ``e``, other than
    ``tau_2(e)``, that become ``tau_1(e)`` after forgetting tail 2."""
    if e < 1:
        raise ValueError("e must be positive")
    target = canonical_form(tau(1, e))
    skip = canonical_form(tau(2, e))
    count = 0
    for g in enumerate_strata(2, e):
        code = canonical_form(g)
        if code != skip and canonical_form(forget_tail(g, 2)) == target:
            count += 1
    return count


@dataclass(frozen=True)
class StratificationPoset:
    """Strata as nodes; an arrow ``u -> v`` when ``v`` contracts onto ``u`` by
    collapsing a single edge."""
    strata: tuple
    arrows: tuple

    def to_json(self) -> dict:
        return {
            "nodes": [s.to_json() for s in self.strata],
            "edges": [list(a) for a in self.arrows],
        }

    def to_dot(self) -> str:
        lines = ["digraph strata {", "  rankdir=TB;"]
        for s in self.strata:
            g = s.graph
            betas = ",".join(str(g.beta[v]) for v in g.vertices)
            label = f"beta=({betas}) tails={g.n_tails} codim={s.codim_in_main}"
            if s.expected_dim is not None:
                label += f" dim={s.expected_dim}"
            lines.append(f'  "{s.key}" [label="{label}"];')
        for u, v in self.arrows:
            lines.append(f'  "{u}" -> "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def stratification_poset(r: int, e: int, x: TargetDescriptor | None = None) -> StratificationPoset:
    strata = stratify(r, e, x)
    index = {s.key: s for s in strata}
    arrows = set()
    for s in strata:
        for edge in s.graph.edges:
            coarser, _ = collapse_edges(s.graph, [edge])
            assert is_stable(coarser)
            arrows.add((canonical_form(coarser).hex(), s.key))
    assert all(u in index for u, _ in arrows)
    return StratificationPoset(tuple(strata), tuple(sorted(arrows)))
