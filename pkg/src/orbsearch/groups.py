"""Permutation groups given by generators.

Provides orbits, stabilizer chains (deterministic Schreier-Sims, with an
optional seeded randomised warm-up), membership sifting, pointwise
stabilizers, elements mapping one point tuple to another, transitivity
tests, and constructors for grid groups, wreath products and conjugates.

Conventions: a permutation acts on the right, ``x^p = p.images[x]``, and
``p * q`` applies ``p`` first.  Chain internals work on raw image tuples.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from . import kernels
from .perms import Perm


class PermGroup:
    """A subgroup of Sym({0..n-1}) described by a generator list.

    An empty generator list is the trivial group.  Immutable.
    """

    __slots__ = ("degree", "generators")

    def __init__(self, degree: int, generators: Iterable[Perm] = ()):
        gens = tuple(g for g in generators if not g.is_identity())
        for g in gens:
            if g.degree != degree:
                raise ValueError(
                    f"generator degree {g.degree} does not match group degree {degree}"
                )
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", gens)

    def __setattr__(self, name, value):
        raise AttributeError("PermGroup is immutable")

    def is_trivial(self) -> bool:
        return not self.generators

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, <{gens}>)"


def orbits(group: PermGroup) -> list[tuple[int, ...]]:
    """Orbits as sorted point tuples, ordered by their minimum element."""
    gens = [g.images for g in group.generators]
    out = []
    seen = [False] * group.degree
    for x in range(group.degree):
        if seen[x]:
            continue
        orb = kernels.orbit_points(group.degree, gens, [x])
        for y in orb:
            seen[y] = True
        out.append(tuple(orb))
    return out


class _Level:
    """One stabilizer chain level: base point, the strong generators that
    fix all earlier base points, and a transversal of the base orbit."""

    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point, gens, transversal):
        self.point = point
        self.gens = gens
        self.transversal = transversal


class StabilizerChain:
    """Base-and-strong-generators structure for a PermGroup.

    ``levels[k]`` holds the k-th base point, the generators of the k-th
    stabilizer subgroup and an explicit transversal (orbit point -> image
    tuple mapping the base point there).  Immutable once built.
    """

    __slots__ = ("degree", "generators", "base_hint", "levels")

    def __init__(self, degree, generators, base_hint, levels):
        self.degree = degree
        self.generators = generators
        self.base_hint = base_hint
        self.levels = levels

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lvl.point for lvl in self.levels)

    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.transversal)
        return out

    def sift(self, p: Perm) -> tuple[Perm, bool]:
        """Factor ``p`` through the transversals.

        Returns the residue and a membership flag; the residue is the
        identity exactly when ``p`` belongs to the group.
        """
        if p.degree != self.degree:
            raise ValueError("degree mismatch")
        r, stuck = self._sift_raw(p.images, 0)
        del stuck
        return Perm._wrap(r), all(i == x for i, x in enumerate(r))

    def contains(self, p: Perm) -> bool:
        return self.sift(p)[1]

    def _sift_raw(self, images, start_level):
        """Sift an image tuple through levels from ``start_level`` on.

        Returns (residue, level index where sifting stopped); the index is
        ``len(levels)`` when every level consumed its base image.
        """
        r = images
        for k in range(start_level, len(self.levels)):
            lvl = self.levels[k]
            y = r[lvl.point]
            u = lvl.transversal.get(y)
            if u is None:
                return r, k
            r = kernels.compose(r, kernels.invert(u))
        return r, len(self.levels)

    def random_element(self, rng: random.Random) -> Perm:
        """Uniformly random group element: one transversal pick per level."""
        acc = tuple(range(self.degree))
        for lvl in self.levels:
            y = rng.choice(sorted(lvl.transversal))
            acc = kernels.compose(lvl.transversal[y], acc)
        return Perm._wrap(acc)

    def stabilizer_generators(self, depth: int) -> tuple[Perm, ...]:
        """Generators of the subgroup fixing the first ``depth`` base points."""
        if depth >= len(self.levels):
            return ()
        return tuple(Perm._wrap(g) for g in self.levels[depth].gens)


def stabilizer_chain(
    group: PermGroup,
    base_hint: Sequence[int] = (),
    rng: random.Random | None = None,
) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    The base starts with the hint points (in order, dropping any that end
    up fixed by their level subgroup) and is extended as needed.  Passing
    ``rng`` seeds the chain with random products first, which can shrink
    the deterministic completion phase; the result is still exact and
    reproducible for a fixed seed.
    """
    n = group.degree
    raw_gens = [g.images for g in group.generators]
    identity = tuple(range(n))

    base: list[int] = []
    seen_hint = set()
    for h in base_hint:
        if not 0 <= h < n:
            raise ValueError(f"base hint point {h} out of range")
        if h not in seen_hint:
            seen_hint.add(h)
            base.append(h)

    # strong generators with the index of the first base point they move
    strong: list[tuple[tuple, int]] = []

    def first_moved_level(g) -> int:
        for k, b in enumerate(base):
            if g[b] != b:
                return k
        moved = min(i for i, x in enumerate(g) if x != i)
        base.append(moved)
        return len(base) - 1

    def register(g) -> int:
        k = first_moved_level(g)
        strong.append((g, k))
        return k

    for g in raw_gens:
        register(g)
    if rng is not None and raw_gens:
        # randomised warm-up: register a few random words up front
        for _ in range(8):
            w = identity
            for _ in range(rng.randrange(2, 6)):
                w = kernels.compose(w, rng.choice(raw_gens))
            if w != identity:
                register(w)

    transversals: list[dict] = [dict() for _ in base]

    def level_gens(k) -> list:
        return [g for (g, lv) in strong if lv >= k]

    def recompute(k):
        transversals[k] = kernels.orbit_transversal(n, level_gens(k), base[k])

    def sift_from(images, start):
        r = images
        for k in range(start, len(base)):
            u = transversals[k].get(r[base[k]])
            if u is None:
                return r, k
            r = kernels.compose(r, kernels.invert(u))
        return r, len(base)

    # Verify levels deepest-first.  A Schreier generator that fails to sift
    # becomes a strong generator at the first base point it moves; the loop
    # then drops back down to that level and re-verifies upward.  At every
    # loop top all levels below i are complete.
    i = len(base) - 1
    while i >= 0:
        recompute(i)
        gens_i = level_gens(i)
        trans = transversals[i]
        failed_level = None
        for y in sorted(trans):
            u = trans[y]
            for s in gens_i:
                h = kernels.compose(kernels.compose(u, s), kernels.invert(trans[s[y]]))
                if h == identity:
                    continue
                r, _ = sift_from(h, i + 1)
                if r == identity:
                    continue
                failed_level = register(r)
                while len(transversals) < len(base):
                    transversals.append(dict())
                break
            if failed_level is not None:
                break
        if failed_level is not None:
            i = failed_level
        else:
            i -= 1

    levels = []
    for k, b in enumerate(base):
        if len(transversals[k]) == 1:
            continue
        levels.append(
            _Level(b, tuple(level_gens(k)), dict(transversals[k]))
        )
    return StabilizerChain(n, group.generators, tuple(base_hint), tuple(levels))


def point_stabilizer(chain: StabilizerChain, points: Sequence[int]) -> PermGroup:
    """The pointwise stabilizer of ``points`` as a generated group."""
    pts = list(points)
    if not pts:
        return PermGroup(chain.degree, chain.generators)
    use = chain
    if tuple(chain.base_hint[: len(pts)]) != tuple(pts):
        use = stabilizer_chain(PermGroup(chain.degree, chain.generators), base_hint=pts)
    ptset = set(pts)
    k = 0
    while k < len(use.levels) and use.levels[k].point in ptset:
        k += 1
    return PermGroup(chain.degree, use.stabilizer_generators(k))


def element_mapping_tuple(
    chain: StabilizerChain, frm: Sequence[int], to: Sequence[int]
) -> Perm | None:
    """Some group element g with ``frm[i]^g == to[i]`` for all i, or None.

    The chain must have been built with ``base_hint`` starting with
    ``frm``, so that the constrained points head the base.
    """
    if len(frm) != len(to):
        raise ValueError("tuple length mismatch")
    if tuple(chain.base_hint[: len(frm)]) != tuple(frm):
        raise ValueError("chain base hint does not start with the source tuple")
    raw = trace_mapping(chain, dict(zip(frm, to)))
    return None if raw is None else Perm._wrap(raw)


def trace_mapping(chain: StabilizerChain, pairs: dict[int, int]) -> tuple | None:
    """Image tuple of a group element realizing ``pairs`` (point -> image),
    or None when no such element exists.

    Requires every constrained point that occurs in the base to appear
    before any unconstrained base point, which chains built with a hint
    covering the constraint set guarantee.
    """
    n = chain.degree
    acc = tuple(range(n))
    remaining = dict(pairs)
    for lvl in chain.levels:
        if not remaining:
            break
        if lvl.point not in remaining:
            continue
        t = remaining.pop(lvl.point)
        target = kernels.invert(acc)[t]
        u = lvl.transversal.get(target)
        if u is None:
            return None
        acc = kernels.compose(u, acc)
    for p, t in remaining.items():
        # points dropped from the base are fixed by their level subgroup
        if acc[p] != t:
            return None
    return acc


def is_2_transitive(group: PermGroup, chain: StabilizerChain | None = None) -> bool:
    """Transitive with a point stabilizer transitive on the rest."""
    n = group.degree
    if n < 2:
        raise ValueError("2-transitivity needs at least 2 points")
    gens = [g.images for g in group.generators]
    if len(kernels.orbit_points(n, gens, [0])) != n:
        return False
    if chain is None or tuple(chain.base_hint[:1]) != (0,):
        chain = stabilizer_chain(group, base_hint=[0])
    stab = point_stabilizer(chain, [0])
    sgens = [g.images for g in stab.generators]
    return len(kernels.orbit_points(n, sgens, [1])) == n - 1


def _sym_gen_images(m: int) -> list[tuple]:
    """Image tuples of the standard generators of Sym({0..m-1})."""
    if m < 2:
        return []
    swap = list(range(m))
    swap[0], swap[1] = 1, 0
    if m == 2:
        return [tuple(swap)]
    cycle = list(range(1, m)) + [0]
    return [tuple(swap), tuple(cycle)]


def symmetric_group(n: int) -> PermGroup:
    return PermGroup(n, [Perm(g) for g in _sym_gen_images(n)])


def grid_group(m: int) -> PermGroup:
    """Rows-and-columns group on the m*m grid.

    Two copies of Sym(m) act independently on row and column indices;
    grid point (i, j) is encoded as ``i*m + j``.  Order ``(m!)**2``.
    """
    if m < 1:
        raise ValueError("grid size must be at least 1")
    n = m * m
    gens = []
    for s in _sym_gen_images(m):
        gens.append(Perm([s[i] * m + j for i in range(m) for j in range(m)]))
        gens.append(Perm([i * m + s[j] for i in range(m) for j in range(m)]))
    return PermGroup(n, gens)


def wreath_product(a: int, b: int) -> PermGroup:
    """Imprimitive wreath product on ``a*b`` points: b blocks of size a,
    Sym(a) inside the first block plus Sym(b) permuting blocks rigidly.
    Order ``(a!)**b * b!``."""
    if a < 1 or b < 1:
        raise ValueError("block size and block count must be at least 1")
    n = a * b
    gens = []
    for s in _sym_gen_images(a):
        gens.append(Perm([s[x] if x < a else x for x in range(n)]))
    for s in _sym_gen_images(b):
        gens.append(Perm([s[x // a] * a + (x % a) for x in range(n)]))
    return PermGroup(n, gens)


def conjugate_group(group: PermGroup, p: Perm) -> PermGroup:
    """The group generated by ``p^-1 g p`` for each generator g."""
    if p.degree != group.degree:
        raise ValueError("degree mismatch")
    pinv = p.inverse()
    return PermGroup(group.degree, [pinv * g * p for g in group.generators])


def random_perm(degree: int, rng: random.Random) -> Perm:
    images = list(range(degree))
    rng.shuffle(images)
    return Perm(images)
