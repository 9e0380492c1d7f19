"""Permutations on a fixed domain {0..n-1}, with cycle notation I/O.

Internally everything is 0-based; cycle notation (parsing, formatting) is
1-based.  A :class:`Perm` wraps an image tuple and is immutable and
hashable, so permutations can live in sets and dict keys.  Hot loops work
on raw image tuples via :mod:`orbsearch.kernels` and wrap only at the API
boundary.
"""

from __future__ import annotations

import re
from typing import Iterable

from . import kernels


class CycleParseError(ValueError):
    """Malformed cycle notation; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Perm:
    """A bijection on {0..n-1}, stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images do not form a permutation of 0..n-1")
        object.__setattr__(self, "images", imgs)

    @staticmethod
    def identity(degree: int) -> "Perm":
        p = Perm.__new__(Perm)
        object.__setattr__(p, "images", tuple(range(degree)))
        return p

    @staticmethod
    def _wrap(images: tuple) -> "Perm":
        """Wrap a known-valid image tuple without re-validating."""
        p = Perm.__new__(Perm)
        object.__setattr__(p, "images", images)
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    def apply(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition: ``(p * q)`` applies ``p`` first, then ``q``."""
        if not isinstance(other, Perm):
            return NotImplemented
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch in composition")
        return Perm._wrap(kernels.compose(self.images, other.images))

    def inverse(self) -> "Perm":
        return Perm._wrap(kernels.invert(self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def moved_points(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, ordered
        by smallest moved point."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Perm[{self.degree}] {format_cycles(self)}"


_TOKEN = re.compile(r"\s*(\(|\)|,|\d+)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse disjoint cycle notation with 1-based points.

    Cycles are parenthesised, points separated by commas or whitespace;
    ``()`` or an empty string denotes the identity.
    """
    images = list(range(degree))
    used = [False] * degree
    pos = 0
    depth = 0
    cycle: list[int] = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise CycleParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1)
        if tok == "(":
            if depth:
                raise CycleParseError("nested parenthesis", pos)
            depth = 1
            cycle = []
        elif tok == ")":
            if not depth:
                raise CycleParseError("unbalanced ')'", pos)
            depth = 0
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        elif tok == ",":
            if not depth:
                raise CycleParseError("',' outside cycle", pos)
        else:
            if not depth:
                raise CycleParseError("point outside cycle", pos)
            value = int(tok)
            if not 1 <= value <= degree:
                raise CycleParseError(f"point {value} out of range 1..{degree}", pos)
            if used[value - 1]:
                raise CycleParseError(f"repeated point {value}", pos)
            used[value - 1] = True
            cycle.append(value - 1)
        pos = m.end()
    if depth:
        raise CycleParseError("unclosed '('", len(text))
    return Perm(images)


def format_cycles(p: Perm) -> str:
    """Canonical 1-based cycle notation; identity prints as ``()``."""
    cycs = p.cycles()
    if not cycs:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycs)
