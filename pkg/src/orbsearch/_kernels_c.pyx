# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled permutation kernels.

Mirror of ``_kernels_py``; see there for the contract.  The pure module is
the reference: outputs must match it exactly, element for element.
"""

from cpython.list cimport PyList_GET_ITEM
from cpython.tuple cimport PyTuple_GET_ITEM
from libc.stdlib cimport free, malloc

BACKEND = "c"


cdef inline Py_ssize_t _item(object seq, Py_ssize_t i):
    return <Py_ssize_t> (<object> PyTuple_GET_ITEM(seq, i))


def compose(tuple p, tuple q):
    """Image tuple of applying ``p`` first, then ``q``."""
    cdef Py_ssize_t n = len(p)
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <object> PyTuple_GET_ITEM(q, _item(p, i))
    return tuple(out)


def invert(tuple p):
    cdef Py_ssize_t n = len(p)
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[_item(p, i)] = i
    return tuple(out)


def orbit_points(Py_ssize_t n, list gens, seeds):
    cdef unsigned char *seen = <unsigned char *> malloc(n)
    if seen == NULL:
        raise MemoryError()
    cdef list queue = []
    cdef Py_ssize_t head = 0, x, y, s
    cdef tuple g
    try:
        for i in range(n):
            seen[i] = 0
        for s in seeds:
            if not seen[s]:
                seen[s] = 1
                queue.append(s)
        while head < len(queue):
            x = <Py_ssize_t> (<object> PyList_GET_ITEM(queue, head))
            head += 1
            for g in gens:
                y = _item(g, x)
                if not seen[y]:
                    seen[y] = 1
                    queue.append(y)
        queue.sort()
        return queue
    finally:
        free(seen)


def orbit_transversal(Py_ssize_t n, list gens, Py_ssize_t start):
    cdef dict trans = {start: tuple(range(n))}
    cdef list queue = [start]
    cdef Py_ssize_t head = 0, x, y
    cdef tuple g, u
    while head < len(queue):
        x = <Py_ssize_t> (<object> PyList_GET_ITEM(queue, head))
        head += 1
        u = trans[x]
        for g in gens:
            y = _item(g, x)
            if y not in trans:
                trans[y] = compose(u, g)
                queue.append(y)
    return trans


def pair_orbit(Py_ssize_t n, list gens, Py_ssize_t a, Py_ssize_t b):
    cdef unsigned char *seen = <unsigned char *> malloc(n * n)
    if seen == NULL:
        raise MemoryError()
    cdef list queue = [a * n + b]
    cdef Py_ssize_t head = 0, code, x, y, c
    cdef tuple g
    try:
        for i in range(n * n):
            seen[i] = 0
        seen[a * n + b] = 1
        while head < len(queue):
            code = <Py_ssize_t> (<object> PyList_GET_ITEM(queue, head))
            head += 1
            x = code // n
            y = code % n
            for g in gens:
                c = _item(g, x) * n + _item(g, y)
                if not seen[c]:
                    seen[c] = 1
                    queue.append(c)
        queue.sort()
        return [(c // n, c % n) for c in queue]
    finally:
        free(seen)


def splitter_counts(Py_ssize_t n, tuple adjacency, splitter):
    cdef list counts = [0] * n
    cdef Py_ssize_t x, y, k, m
    cdef tuple row
    for x in splitter:
        row = <tuple> PyTuple_GET_ITEM(adjacency, x)
        m = len(row)
        for k in range(m):
            y = _item(row, k)
            counts[y] = <object> PyList_GET_ITEM(counts, y) + 1
    return counts
