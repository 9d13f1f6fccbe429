"""Union-find labeling kernels for sign grids (numba)."""

import numba
import numpy as np


@numba.njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@numba.njit(cache=True)
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra != rb:
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


@numba.njit(cache=True)
def label_signs(values, periodic, degenerate_tol=1e-12):
    """Label sign components of ``values``.

    Returns ``(labels, count)`` with labels in ``0..count-1``. Nonnegative
    values form the positive phase. Cells with a checkerboard sign pattern are
    resolved by the sign of the mean of their four corners.
    """
    n, m = values.shape
    pos = values >= 0.0
    parent = np.arange(n * m)
    for i in range(n):
        for j in range(m):
            here = i * m + j
            if j + 1 < m:
                if pos[i, j] == pos[i, j + 1]:
                    _union(parent, here, here + 1)
            elif periodic and pos[i, j] == pos[i, 0]:
                _union(parent, here, i * m)
            if i + 1 < n:
                if pos[i, j] == pos[i + 1, j]:
                    _union(parent, here, here + m)
            elif periodic and pos[i, j] == pos[0, j]:
                _union(parent, here, j)

    ni = n if periodic else n - 1
    mj = m if periodic else m - 1
    for i in range(ni):
        i1 = (i + 1) % n
        for j in range(mj):
            j1 = (j + 1) % m
            a = pos[i, j]
            d = pos[i1, j1]
            b = pos[i, j1]
            c = pos[i1, j]
            if a == d and b == c and a != b:
                v00 = values[i, j]
                v01 = values[i, j1]
                v10 = values[i1, j]
                v11 = values[i1, j1]
                centre = 0.25 * (v00 + v01 + v10 + v11)
                scale = max(max(abs(v00), abs(v01)), max(abs(v10), abs(v11)))
                if abs(centre) <= degenerate_tol * scale:
                    continue
                if (centre >= 0.0) == a:
                    _union(parent, i * m + j, i1 * m + j1)
                else:
                    _union(parent, i * m + j1, i1 * m + j)

    labels = np.empty((n, m), dtype=np.int64)
    remap = np.full(n * m, -1, dtype=np.int64)
    count = 0
    for i in range(n):
        for j in range(m):
            r = _find(parent, i * m + j)
            if remap[r] < 0:
                remap[r] = count
                count += 1
            labels[i, j] = remap[r]
    return labels, count
