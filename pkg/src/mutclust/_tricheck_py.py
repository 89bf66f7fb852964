"""NumPy fallback for the triangle-violation kernels.

Arithmetic matches the compiled kernel operation for operation
(x[u,v] - x[u,z] - x[z,v], left associative), so both backends produce
bit-identical violation values and therefore identical sort orders.
"""

import numpy as np

COMPILED = False


def scan(x: np.ndarray, threshold: float):
    """All triples (u, v, z) with u < v, z distinct, and
    x[u,v] - x[u,z] - x[z,v] > threshold.  Returned unordered.
    """
    n = x.shape[0]
    xt = x.T
    out_u, out_v, out_z, out_viol = [], [], [], []
    for u in range(n):
        row = x[u]
        viol = (row[:, None] - row[None, :]) - xt
        viol[: u + 1, :] = -np.inf  # keep v > u
        viol[:, u] = -np.inf  # z != u
        np.fill_diagonal(viol, -np.inf)  # z != v
        vs, zs = np.nonzero(viol > threshold)
        if vs.size:
            out_u.append(np.full(vs.size, u, dtype=np.int32))
            out_v.append(vs.astype(np.int32))
            out_z.append(zs.astype(np.int32))
            out_viol.append(viol[vs, zs])
    if not out_u:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty.copy(), empty.copy(), np.empty(0)
    return (
        np.concatenate(out_u),
        np.concatenate(out_v),
        np.concatenate(out_z),
        np.concatenate(out_viol),
    )


def max_violation(x: np.ndarray) -> float:
    """Largest x[u,v] - x[u,z] - x[z,v] over valid triples; 0.0 if n < 3."""
    n = x.shape[0]
    if n < 3:
        return 0.0
    xt = x.T
    best = -np.inf
    for u in range(n):
        row = x[u]
        viol = (row[:, None] - row[None, :]) - xt
        viol[: u + 1, :] = -np.inf
        viol[:, u] = -np.inf
        np.fill_diagonal(viol, -np.inf)
        m = viol.max()
        if m > best:
            best = m
    return float(best)
