"""Backend dispatch for the triangle-violation kernels.

Prefers the compiled extension; falls back to the NumPy implementation
when the extension is unavailable or MUTCLUST_PURE_PYTHON is set.  Both
backends compute identical violation values, so ordering and results do
not depend on which one is active.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("MUTCLUST_PURE_PYTHON"):
    from . import _tricheck_py as _backend
else:
    try:
        from . import _tricheck as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _tricheck_py as _backend

BACKEND = "compiled" if _backend.COMPILED else "python"


def _as_dense(x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64)


def violating_triangles(
    x: np.ndarray, threshold: float, limit: int | None = None
) -> list[tuple[int, int, int, float]]:
    """Triples (u, v, z) with x[u,v] - x[u,z] - x[z,v] > threshold,
    sorted by violation descending, ties by (u, v, z) ascending, cut to
    `limit` entries when given.
    """
    us, vs, zs, viols = _backend.scan(_as_dense(x), threshold)
    if us.size == 0:
        return []
    order = np.lexsort((zs, vs, us, -viols))
    if limit is not None:
        order = order[:limit]
    return [
        (int(us[i]), int(vs[i]), int(zs[i]), float(viols[i])) for i in order
    ]


def max_triangle_violation(x: np.ndarray) -> float:
    """Largest triangle-inequality violation in x (0.0 when n < 3)."""
    return float(_backend.max_violation(_as_dense(x)))
