"""Orbital graphs: pair-orbit digraphs of a permutation group.

An orbital graph is the digraph on the domain whose arc set is the orbit
of one ordered pair of distinct points under the group.  Some of these
graphs carry no information beyond the orbit partition itself (we call
them *futile*): their only component with at least two vertices is a
complete digraph or a complete bipartite digraph, so the full symmetric
groups on the orbits already act as graph automorphisms.  Futile graphs
can be recognized from orbit sizes alone, without building them, which is
what :func:`orbital_base` exploits.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import kernels
from .groups import (
    PermGroup,
    StabilizerChain,
    is_2_transitive,
    orbits,
    point_stabilizer,
    stabilizer_chain,
)
from .perms import Perm


class OrbitalGraph:
    """Digraph whose arcs are one pair orbit; keeps both adjacency
    directions plus the combined (either-direction) neighbour table used
    by equitable refinement."""

    __slots__ = ("degree", "base_pair", "arcs", "out_adj", "in_adj", "combined_adj")

    def __init__(self, degree: int, base_pair: tuple[int, int], arcs: Iterable[tuple[int, int]]):
        arcs = tuple(sorted(arcs))
        out_adj = [[] for _ in range(degree)]
        in_adj = [[] for _ in range(degree)]
        seen = set()
        for u, v in arcs:
            if u == v:
                raise ValueError("loops are not allowed")
            if (u, v) in seen:
                raise ValueError("duplicate arc")
            seen.add((u, v))
            out_adj[u].append(v)
            in_adj[v].append(u)
        if base_pair not in seen:
            raise ValueError("base pair must be an arc")
        combined = tuple(
            tuple(sorted(set(out_adj[x]) | set(in_adj[x]))) for x in range(degree)
        )
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "base_pair", base_pair)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "out_adj", tuple(tuple(a) for a in out_adj))
        object.__setattr__(self, "in_adj", tuple(tuple(a) for a in in_adj))
        object.__setattr__(self, "combined_adj", combined)

    def __setattr__(self, name, value):
        raise AttributeError("OrbitalGraph is immutable")

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def arc_set(self) -> frozenset:
        return frozenset(self.arcs)

    def relabel(self, g: Perm) -> "OrbitalGraph":
        """The graph with every vertex renamed through ``g``."""
        imgs = g.images
        a, b = self.base_pair
        return OrbitalGraph(
            self.degree, (imgs[a], imgs[b]), [(imgs[u], imgs[v]) for u, v in self.arcs]
        )

    def isolated_vertices(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.degree) if not self.combined_adj[x])

    def components(self) -> list[tuple[int, ...]]:
        """Weakly connected components with at least one arc, as sorted
        vertex tuples ordered by minimum vertex."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.arcs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups: dict[int, list[int]] = {}
        for x in range(self.degree):
            if self.combined_adj[x]:
                groups.setdefault(find(x), []).append(x)
        return sorted((tuple(sorted(m)) for m in groups.values()), key=lambda t: t[0])

    def dump(self) -> str:
        """One arc per line, ``u -> v`` with 1-based points, sorted."""
        return "\n".join(f"{u + 1} -> {v + 1}" for u, v in self.arcs)

    def __eq__(self, other) -> bool:
        return isinstance(other, OrbitalGraph) and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash(self.arcs)

    def __repr__(self) -> str:
        a, b = self.base_pair
        return f"OrbitalGraph(base=({a + 1},{b + 1}), arcs={self.arc_count})"


def orbital_graph(group: PermGroup, alpha: int, beta: int) -> OrbitalGraph:
    """The orbital graph of ``group`` with base pair ``(alpha, beta)``."""
    if alpha == beta:
        raise ValueError("base pair points must be distinct")
    gens = [g.images for g in group.generators]
    arcs = kernels.pair_orbit(group.degree, gens, alpha, beta)
    return OrbitalGraph(group.degree, (alpha, beta), arcs)


def _futile_sizes(beta_in_alpha_orbit: bool, inner: int, alpha_orbit: int, beta_orbit: int) -> bool:
    # complete digraph on the orbit, or complete bipartite between orbits
    if beta_in_alpha_orbit:
        return inner == alpha_orbit - 1
    return inner == beta_orbit


def is_futile_by_counts(chain: StabilizerChain, alpha: int, beta: int) -> bool:
    """Futility from orbit sizes only, without building the graph."""
    if alpha == beta:
        raise ValueError("base pair points must be distinct")
    group = PermGroup(chain.degree, chain.generators)
    gens = [g.images for g in group.generators]
    alpha_orbit = kernels.orbit_points(chain.degree, gens, [alpha])
    beta_orbit = kernels.orbit_points(chain.degree, gens, [beta])
    stab = point_stabilizer(chain, [alpha])
    sgens = [g.images for g in stab.generators]
    inner = kernels.orbit_points(chain.degree, sgens, [beta])
    return _futile_sizes(
        beta in set(alpha_orbit), len(inner), len(alpha_orbit), len(beta_orbit)
    )


def is_futile_by_definition(group: PermGroup, graph: OrbitalGraph) -> bool:
    """Reference futility test: every transposition of two points from the
    same group orbit must map arcs to arcs.  Exhaustive; meant for small
    degrees and as the oracle for the counting shortcut."""
    arcs = graph.arc_set()
    for orb in orbits(group):
        for i, x in enumerate(orb):
            for y in orb[i + 1 :]:
                swap = {x: y, y: x}
                for u, v in arcs:
                    if (swap.get(u, u), swap.get(v, v)) not in arcs:
                        return False
    return True


def is_futile_by_shape(graph: OrbitalGraph) -> bool:
    """Structural futility test: a single component of size >= 2 that is a
    complete digraph, or a complete bipartite digraph with disjoint source
    and target sides."""
    comps = graph.components()
    if len(comps) != 1:
        return False
    verts = comps[0]
    k = len(verts)
    sources = {u for u, _ in graph.arcs}
    targets = {v for _, v in graph.arcs}
    if sources == targets == set(verts):
        return graph.arc_count == k * (k - 1)
    if sources & targets:
        return False
    if sources | targets != set(verts):
        return False
    return graph.arc_count == len(sources) * len(targets)


def pair_orbit_representatives(
    group: PermGroup, chain: StabilizerChain | None = None
) -> list[tuple[int, int, int, int, int]]:
    """One base pair per pair orbit of the group.

    For each orbit take its minimum ``alpha``; for each orbit of the
    stabilizer of ``alpha`` (other than the fixed point itself) take its
    minimum ``beta``.  Yields tuples ``(alpha, beta, arc_count,
    inner_size, futile)`` covering every orbit of ordered distinct pairs
    exactly once.  Pairs starting at a point the whole group fixes are
    included for completeness; they are always futile.
    """
    if chain is None:
        chain = stabilizer_chain(group)
    orbs = orbits(group)
    orbit_size = {}
    for orb in orbs:
        for x in orb:
            orbit_size[x] = len(orb)
    out = []
    for orb in orbs:
        alpha = orb[0]
        stab = group if len(orb) == 1 else point_stabilizer(chain, [alpha])
        for inner in orbits(stab):
            beta = inner[0]
            if beta == alpha:
                continue
            futile = _futile_sizes(
                beta in set(orb), len(inner), len(orb), orbit_size[beta]
            )
            out.append((alpha, beta, len(orb) * len(inner), len(inner), futile))
    return out


def orbital_base(
    group: PermGroup,
    size_limit: int | None = None,
    chain: StabilizerChain | None = None,
) -> list[OrbitalGraph]:
    """All orbital graphs worth building: one per pair orbit, skipping
    futile ones and any above ``size_limit`` arcs.

    Returns an empty list for 2-transitive groups, where every orbital
    graph is complete and therefore futile.
    """
    n = group.degree
    if n >= 2 and is_2_transitive(group, chain):
        return []
    out = []
    for alpha, beta, arc_count, _, futile in pair_orbit_representatives(group, chain):
        if futile:
            continue
        if size_limit is not None and arc_count > size_limit:
            continue
        out.append(orbital_graph(group, alpha, beta))
    return out
