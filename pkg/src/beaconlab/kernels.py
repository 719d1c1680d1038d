"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set BEACONLAB_PURE_PYTHON=1 to force the fallback; the parity tests and the
benchmark's comparison mode rely on this.
"""

import os
import warnings

if os.environ.get("BEACONLAB_PURE_PYTHON") == "1":
    from . import _kernels_py as impl
else:
    try:
        from . import _kernels as impl  # type: ignore[attr-defined]
    except ImportError:
        warnings.warn("compiled kernels unavailable, using the pure Python fallback")
        from . import _kernels_py as impl

IMPLEMENTATION = impl.IMPLEMENTATION

signed_area = impl.signed_area
ray_edge_hits = impl.ray_edge_hits
min_edge_distance = impl.min_edge_distance
point_locate = impl.point_locate
triangulate_monotone = impl.triangulate_monotone
