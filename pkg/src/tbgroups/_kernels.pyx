# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled permutation kernels; see _pykernels for the reference versions."""
import numpy as np

BACKEND = "cython"


cdef Py_ssize_t _sift_inplace(int[::1] h, int[::1] tmp, const int[::1] base,
                              const int[:, ::1] pos, const int[:, ::1] inv_store,
                              Py_ssize_t start) noexcept nogil:
    cdef Py_ssize_t n = h.shape[0], nlev = base.shape[0], level = start, x
    cdef int row
    while level < nlev:
        row = pos[level, h[base[level]]]
        if row < 0:
            return level
        for x in range(n):
            tmp[x] = inv_store[row, h[x]]
        for x in range(n):
            h[x] = tmp[x]
        level += 1
    return nlev


def sift(g, base, pos, inv_store, Py_ssize_t start):
    h = np.array(g, dtype=np.int32)
    tmp = np.empty_like(h)
    cdef Py_ssize_t level = _sift_inplace(h, tmp, base, pos, inv_store, start)
    return h, level


cdef bint _is_identity(const int[::1] h) noexcept nogil:
    cdef Py_ssize_t x
    for x in range(h.shape[0]):
        if h[x] != x:
            return False
    return True


def schreier_scan(Py_ssize_t level, const int[::1] base, const int[:, ::1] pos,
                  const int[:, ::1] fwd_store, const int[:, ::1] inv_store,
                  const int[::1] orbit, const int[:, ::1] gens,
                  Py_ssize_t skip_rows, Py_ssize_t skip_gens):
    cdef Py_ssize_t n = pos.shape[1], t, r, r0, x, lev
    cdef int beta, ru, rw
    h_arr = np.empty(n, dtype=np.int32)
    tmp_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] h = h_arr
    cdef int[::1] tmp = tmp_arr
    for t in range(gens.shape[0]):
        r0 = skip_rows if t < skip_gens else 0
        for r in range(r0, orbit.shape[0]):
            beta = orbit[r]
            ru = pos[level, beta]
            rw = pos[level, gens[t, beta]]
            with nogil:
                for x in range(n):
                    h[x] = inv_store[rw, gens[t, fwd_store[ru, x]]]
                if _is_identity(h):
                    continue
                lev = _sift_inplace(h, tmp, base, pos, inv_store, level + 1)
                if _is_identity(h):
                    continue
            return h_arr.copy(), lev
    return None


cdef inline int _find(int[::1] parent, int x) noexcept nogil:
    cdef int root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def minimal_block(const int[:, ::1] gens, int a, int b):
    cdef Py_ssize_t n = gens.shape[1], k = gens.shape[0], t, top = 0
    parent_arr = np.arange(n, dtype=np.int32)
    qx_arr = np.empty(n, dtype=np.int32)
    qy_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef int[::1] qx = qx_arr
    cdef int[::1] qy = qy_arr
    cdef int x, y, rx, ry
    with nogil:
        rx = _find(parent, a)
        ry = _find(parent, b)
        if rx != ry:
            if rx < ry:
                parent[ry] = rx
            else:
                parent[rx] = ry
            qx[0] = a
            qy[0] = b
            top = 1
        # at most n - 1 merges, so the stack never exceeds n
        while top > 0:
            top -= 1
            x = qx[top]
            y = qy[top]
            for t in range(k):
                rx = _find(parent, gens[t, x])
                ry = _find(parent, gens[t, y])
                if rx != ry:
                    if rx < ry:
                        parent[ry] = rx
                    else:
                        parent[rx] = ry
                    qx[top] = rx
                    qy[top] = ry
                    top += 1
        for x in range(n):
            parent[x] = _find(parent, x)
    return parent_arr
