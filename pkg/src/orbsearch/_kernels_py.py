"""Pure Python permutation kernels.

`orbsearch.kernels` selects between this module and the compiled twin
``_kernels_c`` at import time.  Permutations are image tuples: ``p[i]`` is
the image of point ``i``.  Every function here must stay bit-for-bit
deterministic and identical to the compiled backend, including BFS and
iteration order.
"""

from __future__ import annotations

BACKEND = "python"


def compose(p, q):
    """Image tuple of applying ``p`` first, then ``q``."""
    return tuple(q[x] for x in p)


def invert(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def orbit_points(n, gens, seeds):
    """Sorted union of the orbits of the seed points under ``gens``."""
    seen = bytearray(n)
    queue = []
    for s in seeds:
        if not seen[s]:
            seen[s] = 1
            queue.append(s)
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in gens:
            y = g[x]
            if not seen[y]:
                seen[y] = 1
                queue.append(y)
    queue.sort()
    return queue


def orbit_transversal(n, gens, start):
    """BFS orbit of ``start`` with witness permutations.

    Returns a dict mapping each orbit point ``y`` to an image tuple ``u``
    with ``u[start] == y``.  FIFO order with generators applied in list
    order is part of the contract shared with the compiled backend.
    """
    trans = {start: tuple(range(n))}
    queue = [start]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        u = trans[x]
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = compose(u, g)
                queue.append(y)
    return trans


def pair_orbit(n, gens, a, b):
    """Sorted orbit of the ordered pair ``(a, b)`` under pointwise action."""
    seen = bytearray(n * n)
    start = a * n + b
    seen[start] = 1
    queue = [start]
    head = 0
    while head < len(queue):
        code = queue[head]
        head += 1
        x, y = code // n, code % n
        for g in gens:
            c = g[x] * n + g[y]
            if not seen[c]:
                seen[c] = 1
                queue.append(c)
    queue.sort()
    return [(c // n, c % n) for c in queue]


def splitter_counts(n, adjacency, splitter):
    """Per point, the number of its neighbours inside the splitter cell.

    ``adjacency`` must be a symmetric neighbour table (point ``y`` appears
    in ``adjacency[x]`` exactly when ``x`` appears in ``adjacency[y]``).
    """
    counts = [0] * n
    for x in splitter:
        for y in adjacency[x]:
            counts[y] += 1
    return counts
