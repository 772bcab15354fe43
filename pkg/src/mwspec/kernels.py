"""Hot assembly kernels with a numba fast path and a pure-numpy fallback.

Set MWSPEC_NO_NUMBA=1 to force the numpy path (useful for debugging and for
the kernel benchmark). The distance fill is the only O(n^2 s^2) loop in the
package; everything downstream is LAPACK-bound.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("MWSPEC_NO_NUMBA", "") not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False


def build_csr(n: int, edges_uv: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Undirected adjacency in CSR form: (indptr, neighbor, edge_index)."""
    m = len(edges_uv)
    deg = np.zeros(n, dtype=np.int64)
    for u, v in edges_uv:
        deg[u] += 1
        deg[v] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbr = np.empty(2 * m, dtype=np.int64)
    eid = np.empty(2 * m, dtype=np.int64)
    fill = indptr[:-1].copy()
    for k, (u, v) in enumerate(edges_uv):
        nbr[fill[u]] = v
        eid[fill[u]] = k
        fill[u] += 1
        nbr[fill[v]] = u
        eid[fill[v]] = k
        fill[v] += 1
    return indptr, nbr, eid


def _distance_fill_numpy(indptr, nbr, eid, weights, n, s):
    out = np.zeros((n * s, n * s))
    stack = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=np.bool_)
    for r in range(n):
        visited[:] = False
        visited[r] = True
        stack[0] = r
        top = 1
        while top > 0:
            top -= 1
            u = stack[top]
            ru = out[r * s:(r + 1) * s, u * s:(u + 1) * s]
            for k in range(indptr[u], indptr[u + 1]):
                v = nbr[k]
                if not visited[v]:
                    visited[v] = True
                    out[r * s:(r + 1) * s, v * s:(v + 1) * s] = ru + weights[eid[k]]
                    stack[top] = v
                    top += 1
    return out


if NUMBA_ENABLED:

    @njit(cache=True)
    def _distance_fill_numba(indptr, nbr, eid, weights, n, s):  # pragma: no cover - jitted
        out = np.zeros((n * s, n * s))
        stack = np.empty(n, dtype=np.int64)
        visited = np.zeros(n, dtype=np.bool_)
        for r in range(n):
            visited[:] = False
            visited[r] = True
            stack[0] = r
            top = 1
            while top > 0:
                top -= 1
                u = stack[top]
                for k in range(indptr[u], indptr[u + 1]):
                    v = nbr[k]
                    if not visited[v]:
                        visited[v] = True
                        w = weights[eid[k]]
                        for a in range(s):
                            for b in range(s):
                                out[r * s + a, v * s + b] = (
                                    out[r * s + a, u * s + b] + w[a, b]
                                )
                        stack[top] = v
                        top += 1
        return out


def distance_fill(indptr, nbr, eid, weights, n: int, s: int) -> np.ndarray:
    """ns x ns tree distance matrix from per-root traversals.

    Block (r, v) accumulates edge weights along the unique r-v path.
    """
    weights = np.ascontiguousarray(weights, dtype=float)
    if NUMBA_ENABLED:
        return _distance_fill_numba(indptr, nbr, eid, weights, n, s)
    return _distance_fill_numpy(indptr, nbr, eid, weights, n, s)
