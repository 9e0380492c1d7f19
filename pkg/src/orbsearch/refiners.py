"""Partition refiners.

Two layers live here.  The bottom layer is equitable refinement against
digraphs: split cells until every cell has uniform adjacency counts (arcs
in either direction) into every other cell.  The top layer is the four
refiner modes used by the backtrack search:

* ``Fixed``        - meet with an orbit partition of the stabilizer of the
                     currently fixed points,
* ``PreOrbital``   - Fixed plus equitable refinement against the group's
                     orbital graphs, built once,
* ``DeepOrbital``  - Fixed plus orbital graphs of the stabilizer of the
                     fixed points, rebuilt as points get fixed,
* ``FirstOrbital`` - DeepOrbital until the first non-empty graph set
                     appears, which is then frozen and reused.

Each refiner f satisfies f(P) finer-or-equal P, and commutes with the
group action: f(P^g) == f(P)^g for g in the property group.  The search
exploits the second law by recording refinement on its leftmost branch
(side "left") and replaying the recorded structures against other
branches (side "right"), mapped through a witness element that carries
the recorded fixed points to the current ones.  Any witness with the
right images yields the same result, because two such witnesses differ
by an element of the stabilizer being replayed.
"""

from __future__ import annotations

from typing import Callable, Sequence

from . import kernels
from .groups import (
    PermGroup,
    StabilizerChain,
    stabilizer_chain,
    trace_mapping,
)
from .orbitals import OrbitalGraph, orbital_base
from .partitions import OrderedPartition
from .perms import Perm

MODES = ("Fixed", "PreOrbital", "DeepOrbital", "FirstOrbital")

TraceFn = Callable[[tuple, list, int], None]


def equalizer(
    graph: OrbitalGraph,
    partition: OrderedPartition,
    trace: TraceFn | None = None,
    graph_index: int = 0,
) -> OrderedPartition:
    """Coarsest refinement of ``partition`` that is equitable for ``graph``.

    Worklist algorithm: cells are processed first-in-first-out, every cell
    is split by the number of neighbours its points have inside the
    splitter cell, and fragments replace their cell in place ordered by
    ascending count.  Count-based ordering is invariant under graph
    automorphisms, which keeps the refiner equivariant.
    """
    n = partition.degree
    adjacency = graph.combined_adj
    cells = [list(c) for c in partition.cells]
    queue = [tuple(c) for c in cells]
    head = 0
    while head < len(queue) and len(cells) < n:
        splitter = queue[head]
        head += 1
        counts = kernels.splitter_counts(n, adjacency, splitter)
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            by_count: dict[int, list[int]] = {}
            for x in cell:
                by_count.setdefault(counts[x], []).append(x)
            if len(by_count) == 1:
                new_cells.append(cell)
                continue
            fragments = [by_count[c] for c in sorted(by_count)]
            new_cells.extend(fragments)
            queue.extend(tuple(f) for f in fragments)
            if trace is not None:
                trace(tuple(cell), fragments, graph_index)
        cells = new_cells
    return OrderedPartition(cells)


def equitable(
    graphs: Sequence[OrbitalGraph],
    partition: OrderedPartition,
    trace: TraceFn | None = None,
) -> OrderedPartition:
    """Joint refinement against a graph family.

    Each round computes the equalizer of the current partition for every
    graph in list order and folds them together with meet; rounds repeat
    until nothing changes, so the result is equitable for every graph.
    """
    if not graphs:
        return partition
    current = partition
    while True:
        merged = None
        for k, graph in enumerate(graphs):
            refined = equalizer(graph, current, trace, k)
            merged = refined if merged is None else merged.meet(refined)
        if merged == current:
            return current
        current = merged


class _CacheEntry:
    """Structures recorded for one set of fixed points: a chain of the
    property group based at those points (for witness lookups), the
    stabilizer's canonical orbit partition, and lazily its orbital graphs."""

    __slots__ = ("key", "hint", "chain", "fixed_levels", "stab_gens", "orbit_partition", "graphs")

    def __init__(self, key, hint, chain, fixed_levels, stab_gens, orbit_partition):
        self.key = key
        self.hint = hint
        self.chain = chain
        self.fixed_levels = fixed_levels
        self.stab_gens = stab_gens
        self.orbit_partition = orbit_partition
        self.graphs: list[OrbitalGraph] | None = None


class RefinerContext:
    """Per-property, per-search refiner state.

    Holds the property group's stabilizer chain, the cache of structures
    recorded along the leftmost branch (keyed by the set of fixed points),
    the static orbital graphs for PreOrbital, and the frozen graph set for
    FirstOrbital.  Recording mutates the context; replay only reads it.
    """

    def __init__(
        self,
        group: PermGroup,
        mode: str = "PreOrbital",
        size_limit: int | None = None,
        on_graphs_built: Callable[[int], None] | None = None,
    ):
        if mode not in MODES:
            raise ValueError(f"unknown refiner mode {mode!r}, expected one of {MODES}")
        self.group = group
        self.mode = mode
        self.size_limit = size_limit
        self.chain = stabilizer_chain(group)
        self.cache: dict[tuple[int, ...], _CacheEntry] = {}
        self._last: _CacheEntry | None = None
        self._static_graphs: list[OrbitalGraph] | None = None
        self.frozen_graphs: list[OrbitalGraph] | None = None
        self.frozen_fixed: tuple[int, ...] | None = None
        self._on_graphs_built = on_graphs_built

    def _built(self, graphs: list[OrbitalGraph]) -> None:
        if self._on_graphs_built is not None and graphs:
            self._on_graphs_built(len(graphs))

    @property
    def static_graphs(self) -> list[OrbitalGraph]:
        if self._static_graphs is None:
            self._static_graphs = orbital_base(
                self.group, size_limit=self.size_limit, chain=self.chain
            )
            self._built(self._static_graphs)
        return self._static_graphs

    def entry(self, fixed: Sequence[int]) -> _CacheEntry:
        """Cache entry for the given fixed points, creating it if needed.

        New chains reuse the previous entry when its fixed set is a subset:
        the shared prefix levels are kept and only the remaining stabilizer
        is rebuilt, so a branch of nested fixings costs about one chain.
        """
        key = tuple(sorted(set(fixed)))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        parent = self._last
        if parent is not None and set(parent.key) <= set(key):
            new_pts = [p for p in key if p not in set(parent.key)]
            hint = parent.hint + tuple(new_pts)
            prefix = parent.chain.levels[: parent.fixed_levels]
            tail_group = PermGroup(self.group.degree, parent.stab_gens)
            tail = stabilizer_chain(tail_group, base_hint=new_pts)
            chain = StabilizerChain(
                self.group.degree, self.group.generators, hint, prefix + tail.levels
            )
        else:
            hint = key
            chain = stabilizer_chain(self.group, base_hint=hint)
        fixed_set = set(key)
        fixed_levels = 0
        while fixed_levels < len(chain.levels) and chain.levels[fixed_levels].point in fixed_set:
            fixed_levels += 1
        stab_gens = chain.stabilizer_generators(fixed_levels)
        entry = _CacheEntry(
            key, hint, chain, fixed_levels, stab_gens, self._orbit_partition(stab_gens)
        )
        self.cache[key] = entry
        self._last = entry
        return entry

    def _orbit_partition(self, gens: Sequence[Perm]) -> OrderedPartition:
        n = self.group.degree
        raw = [g.images for g in gens]
        cells = []
        seen = [False] * n
        for x in range(n):
            if seen[x]:
                continue
            orb = kernels.orbit_points(n, raw, [x])
            for y in orb:
                seen[y] = True
            cells.append(orb)
        return OrderedPartition(cells)

    def entry_graphs(self, entry: _CacheEntry) -> list[OrbitalGraph]:
        if entry.graphs is None:
            stab = PermGroup(self.group.degree, entry.stab_gens)
            suffix = StabilizerChain(
                self.group.degree,
                entry.stab_gens,
                (),
                entry.chain.levels[entry.fixed_levels :],
            )
            entry.graphs = orbital_base(stab, size_limit=self.size_limit, chain=suffix)
            self._built(entry.graphs)
        return entry.graphs

    def find_witness(self, fixed: Sequence[int], targets: Sequence[int]) -> Perm | None:
        """Group element carrying each fixed point to its target, if any."""
        entry = self.entry(fixed)
        raw = trace_mapping(entry.chain, dict(zip(fixed, targets)))
        return None if raw is None else Perm._wrap(raw)

    def freeze(self, fixed: tuple[int, ...], graphs: list[OrbitalGraph]) -> None:
        self.frozen_graphs = graphs
        self.frozen_fixed = fixed


def _recorded_fixed(ctx: RefinerContext, partition: OrderedPartition, witness: Perm | None):
    """Right side: recover the recorded fixed points from the current ones
    through the witness, then fetch the cache entry."""
    targets = partition.singletons()
    inv = witness.inverse().images
    fixed = tuple(inv[t] for t in targets)
    key = tuple(sorted(set(fixed)))
    entry = ctx.cache.get(key)
    if entry is None:
        raise KeyError("right-side refinement without a recorded left side")
    return entry, fixed


def refine_fixed(
    ctx: RefinerContext,
    partition: OrderedPartition,
    side: str = "left",
    witness: Perm | None = None,
) -> OrderedPartition | None:
    """Meet with an orbit partition of the stabilizer of the fixed points.

    On the left the orbit partition is recorded (cells ordered by minimum
    point, then fixed for good); on the right the recorded partition is
    mapped through the witness.  A missing witness prunes the branch.
    """
    if side == "left":
        entry = ctx.entry(partition.singletons())
        return partition.meet(entry.orbit_partition)
    if witness is None:
        return None
    entry, _ = _recorded_fixed(ctx, partition, witness)
    return partition.meet(entry.orbit_partition.apply(witness))


def refine_orb(ctx: RefinerContext, partition: OrderedPartition,
               trace: TraceFn | None = None) -> OrderedPartition:
    """Equitable refinement against the group's own orbital graphs.

    Identical on both sides: every group element is an automorphism of
    every one of these graphs, so no witness is needed.
    """
    return equitable(ctx.static_graphs, partition, trace)


def refine_deeporb(
    ctx: RefinerContext,
    partition: OrderedPartition,
    side: str = "left",
    witness: Perm | None = None,
    trace: TraceFn | None = None,
) -> OrderedPartition | None:
    """Equitable refinement against the orbital graphs of the stabilizer
    of the fixed points; graphs are rebuilt whenever new points are fixed
    and replayed through the witness on the right."""
    if side == "left":
        entry = ctx.entry(partition.singletons())
        return equitable(ctx.entry_graphs(entry), partition, trace)
    if witness is None:
        return None
    entry, _ = _recorded_fixed(ctx, partition, witness)
    graphs = entry.graphs or []
    if graphs and not witness.is_identity():
        graphs = [g.relabel(witness) for g in graphs]
    return equitable(graphs, partition, trace)


def refine_firstorbital(
    ctx: RefinerContext,
    partition: OrderedPartition,
    side: str = "left",
    witness: Perm | None = None,
    trace: TraceFn | None = None,
) -> OrderedPartition | None:
    """DeepOrbital until the first application that yields graphs, whose
    graph set is then frozen and used for every later application."""
    if ctx.frozen_graphs is None:
        if side == "left":
            fixed = partition.singletons()
            entry = ctx.entry(fixed)
            graphs = ctx.entry_graphs(entry)
            if graphs:
                ctx.freeze(fixed, graphs)
            return equitable(graphs, partition, trace)
        return refine_deeporb(ctx, partition, side, witness, trace)
    if side == "left":
        return equitable(ctx.frozen_graphs, partition, trace)
    if witness is None:
        return None
    graphs = ctx.frozen_graphs
    if not witness.is_identity():
        graphs = [g.relabel(witness) for g in graphs]
    return equitable(graphs, partition, trace)
