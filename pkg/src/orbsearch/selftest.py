"""Built-in correctness sweep for the selftest CLI command.

A cut-down version of the test suite: golden values plus a small random
cross-check of the solver against brute force.  Returns a process exit
code so the CLI can forward it.
"""

from __future__ import annotations

import random

from .bruteforce import brute_intersection, brute_set_stabilizer
from .groups import PermGroup, grid_group, random_perm, stabilizer_chain
from .orbitals import orbital_base, orbital_graph
from .partitions import parse_partition
from .perms import parse_cycles
from .refiners import MODES, equalizer
from .search import intersection, set_stabilizer


def run(verbose: bool = True) -> int:
    failures = 0

    def check(name, ok):
        nonlocal failures
        if verbose or not ok:
            print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures += 1

    d10 = PermGroup(
        10,
        [
            parse_cycles("(1,2,3,4,5,6,7,8,9,10)", 10),
            parse_cycles("(2,10)(3,9)(4,8)(5,7)", 10),
        ],
    )
    check("cyclic-plus-flip group has order 20", stabilizer_chain(d10).order() == 20)

    P = parse_partition("[1,2,3,4|5,6,7]", 7)
    Q = parse_partition("[1,2|5,3|7,4,6]", 7)
    check(
        "meet example",
        P.meet(Q) == parse_partition("[1,2|3|4|5|6,7]", 7)
        and Q.meet(P) == parse_partition("[1,2|3|5|4|6,7]", 7),
    )

    graph = orbital_graph(d10, 0, 1)
    refined = equalizer(graph, parse_partition("[1,6|2,3,4,5,7,8,9,10]", 10))
    check("cycle-graph refinement", refined == parse_partition("[1,6|3,4,8,9|2,5,7,10]", 10))

    r = set_stabilizer(d10, [0, 4], "PreOrbital")
    check("stabilizer of {1,5} has order 2", r.order == 2)
    r = set_stabilizer(d10, [0, 5], "PreOrbital")
    check("stabilizer of {1,6} has order 4", r.order == 4)

    check("grid 3 orbital base has 3 graphs", len(orbital_base(grid_group(3))) == 3)

    rng = random.Random(1)
    ok = True
    for _ in range(15):
        n = rng.randrange(4, 8)
        G = PermGroup(n, [random_perm(n, rng) for _ in range(2)])
        S = rng.sample(range(n), rng.randrange(1, n))
        want = len(brute_set_stabilizer(G, S))
        ok = ok and all(set_stabilizer(G, S, m).order == want for m in MODES)
        H = PermGroup(n, [random_perm(n, rng)])
        want = len(brute_intersection(G, H))
        ok = ok and all(intersection(G, H, m).order == want for m in MODES)
    check("random solver instances agree with brute force", ok)

    if failures:
        print(f"{failures} check(s) failed")
        return 1
    if verbose:
        print("all checks passed")
    return 0
