"""Permutation group search: partition backtrack with orbital-graph refiners."""

from .groups import (
    PermGroup,
    StabilizerChain,
    conjugate_group,
    element_mapping_tuple,
    grid_group,
    is_2_transitive,
    orbits,
    point_stabilizer,
    stabilizer_chain,
    symmetric_group,
    wreath_product,
)
from .kernels import BACKEND as kernel_backend
from .orbitals import (
    OrbitalGraph,
    is_futile_by_counts,
    is_futile_by_definition,
    is_futile_by_shape,
    orbital_base,
    orbital_graph,
    pair_orbit_representatives,
)
from .partitions import OrderedPartition, format_partition, parse_partition
from .perms import CycleParseError, Perm, format_cycles, parse_cycles
from .refiners import (
    MODES,
    RefinerContext,
    equalizer,
    equitable,
    refine_deeporb,
    refine_firstorbital,
    refine_fixed,
    refine_orb,
)
from .search import (
    InGroup,
    NodeLimitExceeded,
    Problem,
    RBase,
    SearchResult,
    SearchStats,
    StabilizesPartition,
    StabilizesSet,
    build_rbase,
    intersection,
    partition_stabilizer,
    set_stabilizer,
    solve,
    verify,
)

__version__ = "0.1.0"
