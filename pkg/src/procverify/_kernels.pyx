# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bisimulation kernels; same contract as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int64_t idx_t


cdef inline bint _answered(Py_ssize_t i, Py_ssize_t j, const unsigned char[:, :] mu,
                           const idx_t[:] c_off, const idx_t[:] c_lab, const idx_t[:] c_dst,
                           const idx_t[:] r_off, const idx_t[:] r_lab, const idx_t[:] r_dst,
                           bint transpose) noexcept nogil:
    cdef Py_ssize_t k, m
    cdef idx_t a, t1, t2
    cdef bint found
    for k in range(c_off[i], c_off[i + 1]):
        a = c_lab[k]
        t1 = c_dst[k]
        found = False
        for m in range(r_off[j], r_off[j + 1]):
            if r_lab[m] == a:
                t2 = r_dst[m]
                if transpose:
                    if mu[t2, t1]:
                        found = True
                        break
                else:
                    if mu[t1, t2]:
                        found = True
                        break
            elif r_lab[m] > a:
                break
        if not found:
            return False
    return True


def _arr(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def refine_step(mu, c1, r1, c2, r2):
    cdef const unsigned char[:, :] m = np.ascontiguousarray(mu, dtype=np.uint8)
    cdef const idx_t[:] c1o = _arr(c1[0]), c1l = _arr(c1[1]), c1d = _arr(c1[2])
    cdef const idx_t[:] r1o = _arr(r1[0]), r1l = _arr(r1[1]), r1d = _arr(r1[2])
    cdef const idx_t[:] c2o = _arr(c2[0]), c2l = _arr(c2[1]), c2d = _arr(c2[2])
    cdef const idx_t[:] r2o = _arr(r2[0]), r2l = _arr(r2[1]), r2d = _arr(r2[2])
    cdef Py_ssize_t n1 = m.shape[0], n2 = m.shape[1], i, j
    res = np.zeros((n1, n2), dtype=np.uint8)
    cdef unsigned char[:, :] out = res
    with nogil:
        for i in range(n1):
            for j in range(n2):
                if _answered(i, j, m, c1o, c1l, c1d, r2o, r2l, r2d, False) and \
                        _answered(j, i, m, c2o, c2l, c2d, r1o, r1l, r1d, True):
                    out[i, j] = 1
    return res


def greatest_fixpoint(mu0, c1, r1, c2, r2):
    cdef const idx_t[:] c1o = _arr(c1[0]), c1l = _arr(c1[1]), c1d = _arr(c1[2])
    cdef const idx_t[:] r1o = _arr(r1[0]), r1l = _arr(r1[1]), r1d = _arr(r1[2])
    cdef const idx_t[:] c2o = _arr(c2[0]), c2l = _arr(c2[1]), c2d = _arr(c2[2])
    cdef const idx_t[:] r2o = _arr(r2[0]), r2l = _arr(r2[1]), r2d = _arr(r2[2])
    cur = np.array(mu0, dtype=np.uint8, order="C")
    nxt = np.zeros_like(cur)
    cdef unsigned char[:, :] a
    cdef unsigned char[:, :] b
    cdef Py_ssize_t n1 = cur.shape[0], n2 = cur.shape[1], i, j
    cdef long steps = 0
    cdef bint changed
    cdef bint full = bool(cur.all())
    while True:
        a = cur
        b = nxt
        changed = False
        with nogil:
            for i in range(n1):
                for j in range(n2):
                    # starting from the full relation the sequence only shrinks
                    if full and not a[i, j]:
                        b[i, j] = 0
                        continue
                    if _answered(i, j, a, c1o, c1l, c1d, r2o, r2l, r2d, False) and \
                            _answered(j, i, a, c2o, c2l, c2d, r1o, r1l, r1d, True):
                        b[i, j] = 1
                    else:
                        b[i, j] = 0
                    if b[i, j] != a[i, j]:
                        changed = True
        if not changed:
            return cur, steps
        cur, nxt = nxt, cur
        steps += 1


def tau_closure(Py_ssize_t n, off, dst):
    cdef const idx_t[:] o = _arr(off)
    cdef const idx_t[:] d = _arr(dst)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[idx_t, ndim=1] stack = np.zeros(max(n, 1), dtype=np.int64)
    cdef cnp.ndarray[idx_t, ndim=1] found = np.zeros(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t i, top, nf, k, u, v
    out_off = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    total = 0
    for i in range(n):
        top = 0
        nf = 0
        stack[top] = i
        top += 1
        seen[i] = 1
        found[nf] = i
        nf += 1
        while top > 0:
            top -= 1
            u = stack[top]
            for k in range(o[u], o[u + 1]):
                v = d[k]
                if not seen[v]:
                    seen[v] = 1
                    stack[top] = v
                    top += 1
                    found[nf] = v
                    nf += 1
        part = np.sort(found[:nf])
        for k in range(nf):
            seen[part[k]] = 0
        chunks.append(part)
        total += nf
        out_off[i + 1] = total
    out_dst = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return out_off, out_dst.astype(np.int64)
