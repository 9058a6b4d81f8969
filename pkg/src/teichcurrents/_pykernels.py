"""Pure-Python inner loops.

Reference implementation of the routines in ``_ckernels.pyx``. Both follow
the same floating-point operation order so the two backends agree bit for bit
on the same platform.

Matrices are flattened row-major ``(a, b, c, d)``.
"""
import math

import numpy as np

OBS_ONE = 0
OBS_BUMP = 1
OBS_EXP = 2


def _renorm(a, b, c, d):
    det = a * d - b * c
    s = math.sqrt(det)
    return a / s, b / s, c / s, d / s


def eval_words(gens, letters, offsets):
    """Products of generator images for a batch of words.

    ``letters[offsets[j]:offsets[j + 1]]`` are the generator indices of word
    ``j``; the product is taken left to right. The determinant is not
    renormalized: for long products ``ad - bc`` is far less accurate than the
    entries themselves.
    """
    g = gens.tolist()
    lt = letters.tolist()
    off = offsets.tolist()
    m = len(off) - 1
    out = np.empty((m, 4), dtype=np.float64)
    for j in range(m):
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
        for k in range(off[j], off[j + 1]):
            e, f, h, q = g[lt[k]]
            a, b, c, d = (a * e + b * h, a * f + b * q,
                          c * e + d * h, c * f + d * q)
        out[j, 0] = a
        out[j, 1] = b
        out[j, 2] = c
        out[j, 3] = d
    return out


def _reduce(a, b, c, d, mv, skip_s, max_iter, path):
    s = a * a + b * b + c * c + d * d
    it = 0
    while s > skip_s:
        thr = 2.0 * math.cosh(math.acosh(0.5 * s) - 1e-12)
        best = -1
        best_s = thr
        for k in range(len(mv)):
            e, f, h, q = mv[k]
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
        e, f, h, q = mv[best]
        a, b, c, d = (e * a + f * c, e * b + f * d,
                      h * a + q * c, h * b + q * d)
        s = a * a + b * b + c * c + d * d
        if path is not None:
            path.append(best)
        it += 1
        if it > max_iter:
            raise RuntimeError("iteration limit reached in domain reduction")
    return a, b, c, d


def reduce_point(g, moves, skip_s, max_iter):
    """Greedy descent of ``g . i`` towards ``i`` by left multiplication."""
    mv = moves.tolist()
    path = []
    a, b, c, d = _reduce(g[0], g[1], g[2], g[3], mv, skip_s, max_iter, path)
    return np.array([a, b, c, d]), np.array(path, dtype=np.int64)


def _observe(obs, s):
    if obs == OBS_ONE:
        return 1.0
    r = math.acosh(max(0.5 * s, 1.0))
    if obs == OBS_BUMP:
        return max(0.0, 1.0 - 0.5 * r)
    return math.exp(-r)


def flow_series(g, moves, dt, nsteps, obs, skip_s, max_iter):
    """Observable values along a discretized geodesic-flow orbit.

    Entry ``k`` is the observable at time ``k * dt``; the frame is
    renormalized and reduced after every step, so the update has no hidden
    state and restarting from a returned frame continues the same orbit bit
    for bit. Returns the values and the final reduced frame.
    """
    mv = moves.tolist()
    e = math.exp(0.5 * dt)
    ie = 1.0 / e
    a, b, c, d = _reduce(float(g[0]), float(g[1]), float(g[2]), float(g[3]),
                         mv, skip_s, max_iter, None)
    vals = np.empty(nsteps, dtype=np.float64)
    for k in range(nsteps):
        vals[k] = _observe(obs, a * a + b * b + c * c + d * d)
        a, b, c, d = _renorm(a * e, b * ie, c * e, d * ie)
        a, b, c, d = _reduce(a, b, c, d, mv, skip_s, max_iter, None)
    return vals, np.array([a, b, c, d])


def linked_axes(gens, inverse, S, p, q, depth):
    """Translates of an axis by the Cayley ball that link the imaginary axis.

    ``S`` normalizes the reference axis to ``(0, inf)``. For every reduced
    word ``g`` of length at most ``depth`` the endpoints ``S g p`` and
    ``S g q`` are formed; when they lie on opposite sides of 0 (and the
    translate is not the reference axis itself) the row
    ``(u, v, word length, |S g|_F^2)`` is recorded. The last column bounds
    the relative rounding error of ``u`` and ``v``.
    """
    gl = gens.tolist()
    inv = inverse.tolist()
    ngen = len(gl)
    p0, p1 = float(p[0]), float(p[1])
    q0, q1 = float(q[0]), float(q[1])
    rows = []

    def visit(a, b, c, d, level):
        e0 = a * p0 + b * p1
        e1 = c * p0 + d * p1
        f0 = a * q0 + b * q1
        f1 = c * q0 + d * q1
        if e1 != 0.0 and f1 != 0.0:
            u = e0 / e1
            v = f0 / f1
            au = abs(u)
            av = abs(v)
            lo = au if au < av else av
            hi = av if au < av else au
            if u * v < 0.0 and not (lo < 1e-9 and hi > 1e9):
                rows.append((u, v, float(level), a * a + b * b + c * c + d * d))

    stack = [(S[0], S[1], S[2], S[3], 0, -1)]
    while stack:
        a, b, c, d, level, last = stack.pop()
        visit(a, b, c, d, level)
        if level == depth:
            continue
        ban = inv[last] if last >= 0 else -1
        for k in range(ngen - 1, -1, -1):
            if k == ban:
                continue
            e, f, h, w = gl[k]
            stack.append((a * e + b * h, a * f + b * w,
                          c * e + d * h, c * f + d * w, level + 1, k))
    if not rows:
        return np.empty((0, 4), dtype=np.float64)
    return np.array(rows, dtype=np.float64)
