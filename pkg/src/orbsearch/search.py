"""Partition backtrack search.

The driver alternates refinement and branching over pairs of ordered
partitions.  The leftmost branch is executed once and recorded (the
"R-base"): every refiner application is stored with the structures it
used, plus the branch cell and point per level.  Every other branch then
carries only its own partition and replays the recorded steps against it:

* a step that used fixed-point structures looks up a witness group
  element mapping the recorded fixed points to the current ones, and maps
  the recorded structures through it; no witness means no solution in
  this branch,
* after every step the cell sizes must match the recorded left partition,
  otherwise the branch is pruned,
* a discrete pair determines exactly one candidate permutation, which is
  verified against all properties before being accepted.

Solutions are accumulated into a stabilizer chain, which deduplicates
generators and yields the order.  Two classical savings are applied: at
the root, branch values in the orbit of an already-explored value under
the solutions found so far are skipped; and after any solution, search
resumes at the shallowest level where the current branch left the
recorded one, since the skipped subtrees only contain known-coset
elements.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import kernels
from .groups import PermGroup, StabilizerChain, stabilizer_chain
from .partitions import OrderedPartition, partition_of_set
from .perms import Perm
from .refiners import (
    MODES,
    RefinerContext,
    equitable,
    refine_deeporb,
    refine_firstorbital,
    refine_fixed,
    refine_orb,
)


@dataclass(frozen=True)
class InGroup:
    group: PermGroup


@dataclass(frozen=True)
class StabilizesSet:
    points: frozenset[int]


@dataclass(frozen=True)
class StabilizesPartition:
    partition: OrderedPartition


Property = InGroup | StabilizesSet | StabilizesPartition


@dataclass(frozen=True)
class Problem:
    degree: int
    properties: tuple[Property, ...]
    mode: str = "FirstOrbital"

    def __post_init__(self):
        if not self.properties:
            raise ValueError("a problem needs at least one property")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        for prop in self.properties:
            if isinstance(prop, InGroup) and prop.group.degree != self.degree:
                raise ValueError("property degree mismatch")
            if isinstance(prop, StabilizesSet) and any(
                not 0 <= x < self.degree for x in prop.points
            ):
                raise ValueError("set point out of range")
            if (
                isinstance(prop, StabilizesPartition)
                and prop.partition.degree != self.degree
            ):
                raise ValueError("property degree mismatch")


@dataclass
class SearchStats:
    nodes_visited: int = 0
    solutions_found: int = 0
    prunes_by_shape: int = 0
    prunes_by_witness: int = 0
    prunes_by_orbit: int = 0
    graphs_built: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "nodes_visited": self.nodes_visited,
            "solutions_found": self.solutions_found,
            "prunes_by_shape": self.prunes_by_shape,
            "prunes_by_witness": self.prunes_by_witness,
            "prunes_by_orbit": self.prunes_by_orbit,
            "graphs_built": self.graphs_built,
            "max_depth": self.max_depth,
        }


@dataclass
class SearchResult:
    generators: list[Perm]
    order: int
    stats: SearchStats


class NodeLimitExceeded(RuntimeError):
    """Raised when the search visits more nodes than allowed."""

    def __init__(self, limit: int, stats: SearchStats):
        super().__init__(f"node limit {limit} exceeded")
        self.limit = limit
        self.stats = stats


class _Step:
    """One recorded refiner application.

    kind "meet":   meet with a fixed partition, identical on both sides.
    kind "fixed":  meet with a recorded orbit partition, witness-mapped.
    kind "graphs": equitable refinement against recorded orbital graphs,
                   witness-mapped when ``witness_fixed`` is set.
    """

    __slots__ = ("kind", "ctx", "meet_with", "orbit_partition", "graphs",
                 "witness_fixed", "left_singles", "left_shape")

    def __init__(self, kind, ctx=None, meet_with=None, orbit_partition=None,
                 graphs=None, witness_fixed=None, left_singles=(), left_shape=()):
        self.kind = kind
        self.ctx = ctx
        self.meet_with = meet_with
        self.orbit_partition = orbit_partition
        self.graphs = graphs
        self.witness_fixed = witness_fixed
        self.left_singles = left_singles
        self.left_shape = left_shape


@dataclass
class RBase:
    """Recorded leftmost branch: refinement steps at the root and per
    branch level, plus the final (discrete) left partition."""

    root_steps: list[_Step]
    levels: list[tuple[int, int, list[_Step]]]  # (cell index, branch point, steps)
    final: OrderedPartition
    contexts: dict[int, RefinerContext]

    @property
    def depth(self) -> int:
        return len(self.levels)


class _FixedRefiner:
    def __init__(self, ctx: RefinerContext):
        self.ctx = ctx

    def record(self, partition):
        fixed = partition.singletons()
        refined = refine_fixed(self.ctx, partition, "left")
        entry = self.ctx.entry(fixed)
        if not fixed:
            if len(entry.orbit_partition.cells) == 1:
                return partition, None
            step = _Step("meet", meet_with=entry.orbit_partition)
        else:
            step = _Step("fixed", ctx=self.ctx,
                         orbit_partition=entry.orbit_partition, witness_fixed=fixed)
        return refined, step


class _OrbRefiner:
    def __init__(self, ctx: RefinerContext, trace=None):
        self.ctx = ctx
        self.trace = trace

    def record(self, partition):
        graphs = self.ctx.static_graphs
        if not graphs:
            return partition, None
        refined = refine_orb(self.ctx, partition, self.trace)
        return refined, _Step("graphs", ctx=self.ctx, graphs=graphs)


class _DeepOrbRefiner:
    def __init__(self, ctx: RefinerContext, trace=None):
        self.ctx = ctx
        self.trace = trace

    def record(self, partition):
        fixed = partition.singletons()
        refined = refine_deeporb(self.ctx, partition, "left", trace=self.trace)
        graphs = self.ctx.entry(fixed).graphs
        if not graphs:
            return partition, None
        return refined, _Step("graphs", ctx=self.ctx, graphs=graphs,
                              witness_fixed=fixed or None)


class _FirstOrbRefiner:
    def __init__(self, ctx: RefinerContext, trace=None):
        self.ctx = ctx
        self.trace = trace

    def record(self, partition):
        refined = refine_firstorbital(self.ctx, partition, "left", trace=self.trace)
        graphs = self.ctx.frozen_graphs
        if not graphs:
            return partition, None
        return refined, _Step("graphs", ctx=self.ctx, graphs=graphs,
                              witness_fixed=self.ctx.frozen_fixed or None)


class _MeetRefiner:
    def __init__(self, partition: OrderedPartition):
        self.partition = partition

    def record(self, current):
        if len(self.partition.cells) == 1:
            return current, None
        return current.meet(self.partition), _Step("meet", meet_with=self.partition)


def _build_refiners(problem: Problem, stats: SearchStats, trace=None):
    refiners = []
    contexts: dict[int, RefinerContext] = {}

    def on_built(k):
        stats.graphs_built += k

    for idx, prop in enumerate(problem.properties):
        if isinstance(prop, InGroup):
            ctx = RefinerContext(prop.group, problem.mode, on_graphs_built=on_built)
            contexts[idx] = ctx
            refiners.append(_FixedRefiner(ctx))
            if problem.mode == "PreOrbital":
                refiners.append(_OrbRefiner(ctx, trace))
            elif problem.mode == "DeepOrbital":
                refiners.append(_DeepOrbRefiner(ctx, trace))
            elif problem.mode == "FirstOrbital":
                refiners.append(_FirstOrbRefiner(ctx, trace))
        elif isinstance(prop, StabilizesSet):
            refiners.append(
                _MeetRefiner(partition_of_set(sorted(prop.points), problem.degree))
            )
        else:
            refiners.append(_MeetRefiner(prop.partition))
    return refiners, contexts


def _record_node(partition, refiners, steps):
    """Refine to a fixpoint on the leftmost branch, recording every step.

    The final full pass over all refiners is recorded as well even though
    it does not change the left partition: replaying it on the right can
    still split, which the shape comparison turns into a prune.
    """
    while True:
        changed = False
        for refiner in refiners:
            refined, step = refiner.record(partition)
            if step is not None:
                step.left_singles = partition.singletons()
                step.left_shape = refined.cell_sizes()
                steps.append(step)
            if refined != partition:
                changed = True
                partition = refined
        if not changed:
            return partition


def _choose_branch_cell(partition) -> int:
    best = -1
    best_size = None
    for k, cell in enumerate(partition.cells):
        if len(cell) >= 2 and (best_size is None or len(cell) < best_size):
            best, best_size = k, len(cell)
    return best


def build_rbase(problem: Problem, stats: SearchStats | None = None, trace=None) -> RBase:
    """Execute and record the leftmost branch of the search."""
    stats = stats if stats is not None else SearchStats()
    refiners, contexts = _build_refiners(problem, stats, trace)
    partition = OrderedPartition.trivial(problem.degree)
    root_steps: list[_Step] = []
    partition = _record_node(partition, refiners, root_steps)
    levels = []
    while not partition.is_discrete():
        cell_index = _choose_branch_cell(partition)
        point = partition.cells[cell_index][0]
        partition = partition.split(cell_index, point)
        steps: list[_Step] = []
        partition = _record_node(partition, refiners, steps)
        levels.append((cell_index, point, steps))
    return RBase(root_steps, levels, partition, contexts)


def _replay(steps, partition, stats, witness_memo):
    """Apply recorded steps to a right-side partition; None means prune."""
    for step in steps:
        witness = None
        if step.witness_fixed is not None:
            singles = partition.singletons()
            pair = dict(zip(step.left_singles, singles))
            targets = tuple(pair[p] for p in step.witness_fixed)
            key = (id(step.ctx), step.witness_fixed, targets)
            if key in witness_memo:
                witness = witness_memo[key]
            else:
                witness = step.ctx.find_witness(step.witness_fixed, targets)
                witness_memo[key] = witness
            if witness is None:
                stats.prunes_by_witness += 1
                return None
        if step.kind == "meet":
            partition = partition.meet(step.meet_with)
        elif step.kind == "fixed":
            partition = partition.meet(step.orbit_partition.apply(witness))
        else:
            graphs = step.graphs
            if witness is not None and not witness.is_identity():
                graphs = [g.relabel(witness) for g in graphs]
            partition = equitable(graphs, partition)
        if partition.cell_sizes() != step.left_shape:
            stats.prunes_by_shape += 1
            return None
    return partition


def verify(problem: Problem, perm: Perm,
           chains: dict[int, StabilizerChain] | None = None) -> bool:
    """Check a permutation against every property of the problem."""
    if perm.degree != problem.degree:
        return False
    imgs = perm.images
    for idx, prop in enumerate(problem.properties):
        if isinstance(prop, InGroup):
            chain = chains.get(idx) if chains else None
            if chain is None:
                chain = stabilizer_chain(prop.group)
            if not chain.contains(perm):
                return False
        elif isinstance(prop, StabilizesSet):
            if {imgs[x] for x in prop.points} != prop.points:
                return False
        else:
            for cell in prop.partition.cells:
                if {imgs[x] for x in cell} != set(cell):
                    return False
    return True


def solve(problem: Problem, node_limit: int | None = None, trace=None) -> SearchResult:
    """Find the subgroup of all permutations satisfying every property."""
    stats = SearchStats()
    rbase = build_rbase(problem, stats, trace)
    chains = {idx: ctx.chain for idx, ctx in rbase.contexts.items()}
    n = problem.degree
    left_final_singles = rbase.final.singletons()

    solution_gens: list[Perm] = []
    solution_chain: StabilizerChain | None = None
    explored_root: list[int] = []
    witness_memo: dict = {}

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))

    def known(perm: Perm) -> bool:
        if solution_chain is None:
            return perm.is_identity()
        return solution_chain.contains(perm)

    def root_orbit_pruned(value: int) -> bool:
        if not solution_gens or not explored_root:
            return False
        raw = [g.images for g in solution_gens]
        orbit = kernels.orbit_points(n, raw, [value])
        explored = set(explored_root)
        return any(x in explored for x in orbit)

    def leaf(partition, first_off_base):
        nonlocal solution_chain
        images = [0] * n
        for src, dst in zip(left_final_singles, partition.singletons()):
            images[src] = dst
        candidate = Perm._wrap(tuple(images))
        if not verify(problem, candidate, chains):
            return None
        stats.solutions_found += 1
        if not known(candidate):
            solution_gens.append(candidate)
            solution_chain = stabilizer_chain(PermGroup(n, solution_gens))
        return first_off_base

    def descend(depth, partition, first_off_base):
        if depth == rbase.depth:
            return leaf(partition, first_off_base)
        cell_index, base_point, steps = rbase.levels[depth]
        for value in partition.cells[cell_index]:
            if depth == 0 and root_orbit_pruned(value):
                stats.prunes_by_orbit += 1
                continue
            if node_limit is not None and stats.nodes_visited >= node_limit:
                raise NodeLimitExceeded(node_limit, stats)
            stats.nodes_visited += 1
            stats.max_depth = max(stats.max_depth, depth + 1)
            child = _replay(steps, partition.split(cell_index, value),
                            stats, witness_memo)
            if child is not None:
                off = first_off_base
                if off is None and value != base_point:
                    off = depth
                jump = descend(depth + 1, child, off)
                if jump is not None and jump < depth:
                    return jump
            if depth == 0:
                explored_root.append(value)
        return None

    if node_limit is not None and node_limit < 1:
        raise NodeLimitExceeded(node_limit, stats)
    stats.nodes_visited += 1
    root = _replay(rbase.root_steps, OrderedPartition.trivial(n), stats, witness_memo)
    if root is not None:
        descend(0, root, None)

    order = 1 if solution_chain is None else solution_chain.order()
    for g in solution_gens:
        if not verify(problem, g, chains):
            raise RuntimeError(f"internal error: generator {g} fails verification")
    return SearchResult(solution_gens, order, stats)


def set_stabilizer(group: PermGroup, points: Sequence[int],
                   mode: str = "FirstOrbital", **kwargs) -> SearchResult:
    """Stabilizer of a point set inside the group."""
    prob = Problem(
        group.degree,
        (InGroup(group), StabilizesSet(frozenset(points))),
        mode,
    )
    return solve(prob, **kwargs)


def partition_stabilizer(group: PermGroup, partition: OrderedPartition,
                         mode: str = "FirstOrbital", **kwargs) -> SearchResult:
    """Cell-wise stabilizer of an ordered partition inside the group."""
    prob = Problem(
        group.degree,
        (InGroup(group), StabilizesPartition(partition)),
        mode,
    )
    return solve(prob, **kwargs)


def intersection(group: PermGroup, other: PermGroup,
                 mode: str = "FirstOrbital", **kwargs) -> SearchResult:
    """The intersection of two groups of equal degree."""
    if group.degree != other.degree:
        raise ValueError("degree mismatch")
    prob = Problem(group.degree, (InGroup(group), InGroup(other)), mode)
    return solve(prob, **kwargs)
