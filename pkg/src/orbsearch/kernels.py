"""Kernel backend selection.

Imports the compiled extension when it is available, otherwise the pure
Python fallback.  Set ``ORBSEARCH_PURE=1`` to force the fallback (used by
the kernel benchmark and for debugging).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ORBSEARCH_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
compose = _impl.compose
invert = _impl.invert
orbit_points = _impl.orbit_points
orbit_transversal = _impl.orbit_transversal
pair_orbit = _impl.pair_orbit
splitter_counts = _impl.splitter_counts
