# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops (mirror of ``_pykernels``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cosh, acosh, exp, fabs

cnp.import_array()

OBS_ONE = 0
OBS_BUMP = 1
OBS_EXP = 2


def eval_words(double[:, ::1] gens, long long[::1] letters,
               long long[::1] offsets):
    cdef Py_ssize_t m = offsets.shape[0] - 1
    out_arr = np.empty((m, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef long long x
    cdef double a, b, c, d, e, f, h, q, na, nb, nc, nd
    for j in range(m):
        a = 1.0; b = 0.0; c = 0.0; d = 1.0
        for k in range(offsets[j], offsets[j + 1]):
            x = letters[k]
            e = gens[x, 0]; f = gens[x, 1]; h = gens[x, 2]; q = gens[x, 3]
            na = a * e + b * h
            nb = a * f + b * q
            nc = c * e + d * h
            nd = c * f + d * q
            a = na; b = nb; c = nc; d = nd
        out[j, 0] = a
        out[j, 1] = b
        out[j, 2] = c
        out[j, 3] = d
    return out_arr


cdef int _reduce(double* g, double[:, ::1] mv, double skip_s, long max_iter,
                 list path) except -1:
    cdef double a = g[0], b = g[1], c = g[2], d = g[3]
    cdef double s = a * a + b * b + c * c + d * d
    cdef double thr, best_s, e, f, h, q, na, nb, nc, nd, ns
    cdef Py_ssize_t k, best
    cdef Py_ssize_t nm = mv.shape[0]
    cdef long it = 0
    while s > skip_s:
        thr = 2.0 * cosh(acosh(0.5 * s) - 1e-12)
        best = -1
        best_s = thr
        for k in range(nm):
            e = mv[k, 0]; f = mv[k, 1]; h = mv[k, 2]; q = mv[k, 3]
            na = e * a + f * c
            nb = e * b + f * d
            nc = h * a + q * c
            nd = h * b + q * d
            ns = na * na + nb * nb + nc * nc + nd * nd
            if ns < best_s:
                best_s = ns
                best = k
        if best < 0:
            break
        e = mv[best, 0]; f = mv[best, 1]; h = mv[best, 2]; q = mv[best, 3]
        na = e * a + f * c
        nb = e * b + f * d
        nc = h * a + q * c
        nd = h * b + q * d
        a = na; b = nb; c = nc; d = nd
        s = a * a + b * b + c * c + d * d
        if path is not None:
            path.append(best)
        it += 1
        if it > max_iter:
            raise RuntimeError("iteration limit reached in domain reduction")
    g[0] = a; g[1] = b; g[2] = c; g[3] = d
    return 0


def reduce_point(g, double[:, ::1] moves, double skip_s, long max_iter):
    cdef double buf[4]
    buf[0] = g[0]; buf[1] = g[1]; buf[2] = g[2]; buf[3] = g[3]
    path = []
    _reduce(buf, moves, skip_s, max_iter, path)
    return (np.array([buf[0], buf[1], buf[2], buf[3]]),
            np.array(path, dtype=np.int64))


cdef inline double _observe(int obs, double s):
    cdef double r, half
    if obs == 0:
        return 1.0
    half = 0.5 * s
    if half < 1.0:
        half = 1.0
    r = acosh(half)
    if obs == 1:
        r = 1.0 - 0.5 * r
        return r if r > 0.0 else 0.0
    return exp(-r)


def flow_series(g, double[:, ::1] moves, double dt, Py_ssize_t nsteps,
                int obs, double skip_s, long max_iter):
    cdef double buf[4]
    cdef double e = exp(0.5 * dt)
    cdef double ie = 1.0 / e
    cdef double det, s
    cdef Py_ssize_t k
    buf[0] = g[0]; buf[1] = g[1]; buf[2] = g[2]; buf[3] = g[3]
    _reduce(buf, moves, skip_s, max_iter, None)
    vals_arr = np.empty(nsteps, dtype=np.float64)
    cdef double[::1] vals = vals_arr
    for k in range(nsteps):
        vals[k] = _observe(obs, buf[0] * buf[0] + buf[1] * buf[1]
                           + buf[2] * buf[2] + buf[3] * buf[3])
        buf[0] = buf[0] * e
        buf[1] = buf[1] * ie
        buf[2] = buf[2] * e
        buf[3] = buf[3] * ie
        det = buf[0] * buf[3] - buf[1] * buf[2]
        s = sqrt(det)
        buf[0] = buf[0] / s; buf[1] = buf[1] / s
        buf[2] = buf[2] / s; buf[3] = buf[3] / s
        _reduce(buf, moves, skip_s, max_iter, None)
    return vals_arr, np.array([buf[0], buf[1], buf[2], buf[3]])


def linked_axes(double[:, ::1] gens, long long[::1] inverse, S, p, q,
                int depth):
    cdef Py_ssize_t ngen = gens.shape[0]
    cdef double p0 = p[0], p1 = p[1], q0 = q[0], q1 = q[1]
    cdef Py_ssize_t cap = 64 * (depth + 1) * ngen + 64
    # explicit DFS stack: a, b, c, d per entry plus level and last letter
    cdef double[:, ::1] st = np.empty((cap, 4), dtype=np.float64)
    cdef long long[:, ::1] meta = np.empty((cap, 2), dtype=np.int64)
    cdef Py_ssize_t top = 0, k
    cdef double a, b, c, d, e, f, h, w, e0, e1, f0, f1, u, v, au, av, lo, hi
    cdef long long level, last, ban
    rows = []
    st[0, 0] = S[0]; st[0, 1] = S[1]; st[0, 2] = S[2]; st[0, 3] = S[3]
    meta[0, 0] = 0; meta[0, 1] = -1
    top = 1
    while top > 0:
        top -= 1
        a = st[top, 0]; b = st[top, 1]; c = st[top, 2]; d = st[top, 3]
        level = meta[top, 0]; last = meta[top, 1]
        e0 = a * p0 + b * p1
        e1 = c * p0 + d * p1
        f0 = a * q0 + b * q1
        f1 = c * q0 + d * q1
        if e1 != 0.0 and f1 != 0.0:
            u = e0 / e1
            v = f0 / f1
            au = fabs(u)
            av = fabs(v)
            if au < av:
                lo = au; hi = av
            else:
                lo = av; hi = au
            if u * v < 0.0 and not (lo < 1e-9 and hi > 1e9):
                rows.append((u, v, <double>level, a * a + b * b + c * c + d * d))
        if level == depth:
            continue
        ban = inverse[last] if last >= 0 else -1
        for k in range(ngen - 1, -1, -1):
            if k == ban:
                continue
            e = gens[k, 0]; f = gens[k, 1]; h = gens[k, 2]; w = gens[k, 3]
            st[top, 0] = a * e + b * h
            st[top, 1] = a * f + b * w
            st[top, 2] = c * e + d * h
            st[top, 3] = c * f + d * w
            meta[top, 0] = level + 1
            meta[top, 1] = k
            top += 1
    if not rows:
        return np.empty((0, 4), dtype=np.float64)
    return np.array(rows, dtype=np.float64)
