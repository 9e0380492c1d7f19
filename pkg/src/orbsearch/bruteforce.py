"""Brute-force ground truth for small groups.

Everything here enumerates explicitly and never consults the search code
paths it is meant to check; the stabilizer chain is used only as a size
pre-check before enumeration.  Intended for tests and the self-test
command, not for real problem sizes.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import kernels
from .groups import PermGroup, stabilizer_chain
from .partitions import OrderedPartition
from .perms import Perm

DEFAULT_CAP = 10**6


class EnumerationCapError(RuntimeError):
    """The group is too large to enumerate explicitly."""


def enumerate_elements(group: PermGroup, cap: int = DEFAULT_CAP) -> list[Perm]:
    """Every element of the group, sorted by image tuple."""
    order = stabilizer_chain(group).order()
    if order > cap:
        raise EnumerationCapError(f"group order {order} exceeds cap {cap}")
    gens = [g.images for g in group.generators]
    identity = tuple(range(group.degree))
    elems = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for e in frontier:
            for g in gens:
                c = kernels.compose(e, g)
                if c not in elems:
                    elems.add(c)
                    fresh.append(c)
        frontier = fresh
    assert len(elems) == order
    return [Perm._wrap(e) for e in sorted(elems)]


def brute_set_stabilizer(group: PermGroup, points: Iterable[int],
                         cap: int = DEFAULT_CAP) -> list[Perm]:
    target = set(points)
    return [
        p for p in enumerate_elements(group, cap)
        if {p.images[x] for x in target} == target
    ]


def brute_partition_stabilizer(group: PermGroup, partition: OrderedPartition,
                               cap: int = DEFAULT_CAP) -> list[Perm]:
    cells = [set(c) for c in partition.cells]
    return [
        p for p in enumerate_elements(group, cap)
        if all({p.images[x] for x in cell} == cell for cell in cells)
    ]


def brute_intersection(group: PermGroup, other: PermGroup,
                       cap: int = DEFAULT_CAP) -> list[Perm]:
    if group.degree != other.degree:
        raise ValueError("degree mismatch")
    first = {p.images for p in enumerate_elements(group, cap)}
    return [p for p in enumerate_elements(other, cap) if p.images in first]


def brute_pair_orbits(group: PermGroup) -> list[tuple[tuple[int, int], ...]]:
    """Orbits of ordered pairs of distinct points, each sorted, ordered by
    smallest pair."""
    n = group.degree
    gens = [g.images for g in group.generators]
    seen = set()
    out = []
    for x in range(n):
        for y in range(n):
            if x == y or (x, y) in seen:
                continue
            orb = kernels.pair_orbit(n, gens, x, y)
            seen.update(orb)
            out.append(tuple(orb))
    return out


def group_from_elements(degree: int, elements: Sequence[Perm]) -> PermGroup:
    return PermGroup(degree, list(elements))
