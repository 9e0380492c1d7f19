"""Ordered partitions of {0..n-1}.

An ordered partition is an ordered list of disjoint non-empty cells whose
union is the whole domain.  Cell order matters for equality; order inside
a cell does not (cells are stored sorted, so equality is structural).
Values are immutable: every operation returns a new partition.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .perms import Perm


class OrderedPartition:
    __slots__ = ("cells", "cell_of")

    def __init__(self, cells: Iterable[Iterable[int]], degree: int | None = None):
        canon = tuple(tuple(sorted(c)) for c in cells)
        n = sum(len(c) for c in canon)
        if degree is not None and degree != n:
            raise ValueError(f"cells cover {n} points, expected degree {degree}")
        cell_of = [-1] * n
        for k, cell in enumerate(canon):
            if not cell:
                raise ValueError("empty cell")
            for x in cell:
                if not 0 <= x < n or cell_of[x] != -1:
                    raise ValueError("cells must disjointly cover 0..n-1")
                cell_of[x] = k
        object.__setattr__(self, "cells", canon)
        object.__setattr__(self, "cell_of", tuple(cell_of))

    @staticmethod
    def _from_canonical(cells: tuple, cell_of: tuple) -> "OrderedPartition":
        p = OrderedPartition.__new__(OrderedPartition)
        object.__setattr__(p, "cells", cells)
        object.__setattr__(p, "cell_of", cell_of)
        return p

    @staticmethod
    def trivial(degree: int) -> "OrderedPartition":
        return OrderedPartition([range(degree)])

    @staticmethod
    def discrete(degree: int) -> "OrderedPartition":
        return OrderedPartition([(i,) for i in range(degree)])

    def __setattr__(self, name, value):
        raise AttributeError("OrderedPartition is immutable")

    @property
    def degree(self) -> int:
        return len(self.cell_of)

    def is_discrete(self) -> bool:
        return len(self.cells) == self.degree

    def cell_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def sym_order(self) -> int:
        """Order of the direct product of symmetric groups on the cells."""
        out = 1
        for c in self.cells:
            out *= math.factorial(len(c))
        return out

    def finer_than(self, other: "OrderedPartition") -> bool:
        """True when every cell of self lies inside a single cell of other.

        Reflexive; ignores cell order on both sides.
        """
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return all(
            len({other.cell_of[x] for x in cell}) == 1 for cell in self.cells
        )

    def meet(self, other: "OrderedPartition") -> "OrderedPartition":
        """Common refinement; cells ordered lexicographically by the pair
        (cell index in self, cell index in other)."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        buckets: dict[tuple[int, int], list[int]] = {}
        for x in range(self.degree):
            buckets.setdefault((self.cell_of[x], other.cell_of[x]), []).append(x)
        cells = tuple(tuple(buckets[k]) for k in sorted(buckets))
        cell_of = [0] * self.degree
        for k, cell in enumerate(cells):
            for x in cell:
                cell_of[x] = k
        return OrderedPartition._from_canonical(cells, tuple(cell_of))

    def apply(self, g: Perm) -> "OrderedPartition":
        """Image partition: cell k maps to the image of cell k, order kept."""
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        imgs = g.images
        cells = tuple(tuple(sorted(imgs[x] for x in cell)) for cell in self.cells)
        cell_of = [0] * self.degree
        for k, cell in enumerate(cells):
            for x in cell:
                cell_of[x] = k
        return OrderedPartition._from_canonical(cells, tuple(cell_of))

    def singletons(self) -> tuple[int, ...]:
        """Points in singleton cells, in cell order."""
        return tuple(c[0] for c in self.cells if len(c) == 1)

    def split(self, cell_index: int, point: int) -> "OrderedPartition":
        """Move ``point`` out of cell ``cell_index`` into a new singleton
        cell appended at the end."""
        cell = self.cells[cell_index]
        if point not in cell:
            raise ValueError(f"point {point} not in cell {cell_index}")
        if len(cell) < 2:
            raise ValueError("cannot split a singleton cell")
        rest = tuple(x for x in cell if x != point)
        cells = (
            self.cells[:cell_index] + (rest,) + self.cells[cell_index + 1 :] + ((point,),)
        )
        cell_of = list(self.cell_of)
        cell_of[point] = len(cells) - 1
        return OrderedPartition._from_canonical(cells, tuple(cell_of))

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderedPartition) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.cells)

    def __str__(self) -> str:
        return format_partition(self)

    def __repr__(self) -> str:
        return f"OrderedPartition {format_partition(self)}"


def parse_partition(text: str, degree: int) -> OrderedPartition:
    """Parse the 1-based text form ``[1,5 | 8 | 6,10]``."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    cells = []
    for chunk in body.split("|"):
        pts = [int(tok) - 1 for tok in chunk.replace(",", " ").split()]
        if not pts:
            raise ValueError(f"empty cell in partition {text!r}")
        cells.append(pts)
    return OrderedPartition(cells, degree=degree)


def format_partition(p: OrderedPartition) -> str:
    return "[" + " | ".join(",".join(str(x + 1) for x in c) for c in p.cells) + "]"


def partition_of_set(points: Sequence[int], degree: int) -> OrderedPartition:
    """``[S | rest]`` with S first; trivial when S is empty or everything."""
    s = sorted(set(points))
    rest = [x for x in range(degree) if x not in set(s)]
    if not s or not rest:
        return OrderedPartition.trivial(degree)
    return OrderedPartition([s, rest])
