"""Hot inner loops, each with a numba kernel and a pure-numpy twin.

The numba path is used when numba imports cleanly and the environment
variable ``SIGWIND_DISABLE_NUMBA`` is unset (or set to ``0``). Both paths
return the same values up to floating-point summation order; the test suite
runs the shared contract against each of them.

Public callables resolved at import time (and re-bound by :func:`set_backend`):

``chen_signature(increments, depth)``
    Flat truncated signature of a piecewise-linear path given its segment
    increments, shape ``(nseg, d)``.
``loewner_points(driver, dt, indices)``
    Trace points of the discretised Loewner chain at the requested step
    indices, as a complex array.
``winding_and_distance(vx, vy, px, py)``
    Crossing-rule winding numbers of points about a closed polyline, plus the
    distance from each point to the polyline.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_ENV_FLAG = "SIGWIND_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(_ENV_FLAG, "0").strip().lower() not in ("1", "true", "yes", "on")


def _level_offsets(d, depth):
    off = np.zeros(depth + 2, dtype=np.int64)
    for k in range(depth + 1):
        off[k + 1] = off[k] + d**k
    return off


# --------------------------------------------------------------------------
# pure numpy implementations
# --------------------------------------------------------------------------


def _batch_segment_exp(increments, depth):
    """Per-level arrays ``(nseg, d**k)`` of exp(increment) for every segment."""
    nseg, d = increments.shape
    levels = [np.ones((nseg, 1))]
    for k in range(1, depth + 1):
        prev = levels[-1]
        levels.append((prev[:, :, None] * increments[:, None, :]).reshape(nseg, -1) / k)
    return levels


def _batch_mul(a, b, depth):
    out = []
    for n in range(depth + 1):
        acc = a[0] * b[n] if n else a[0] * b[0]
        for i in range(1, n + 1):
            ai, bj = a[i], b[n - i]
            acc = acc + (ai[:, :, None] * bj[:, None, :]).reshape(ai.shape[0], -1)
        out.append(acc)
    return out


def chen_signature_numpy(increments, depth):
    increments = np.ascontiguousarray(increments, dtype=np.float64)
    nseg, d = increments.shape
    if nseg == 0:
        flat = np.zeros(int(_level_offsets(d, depth)[-1]))
        flat[0] = 1.0
        return flat
    levels = _batch_segment_exp(increments, depth)
    # ordered pairwise reduction; an odd tail is carried to the next round
    while levels[0].shape[0] > 1:
        count = levels[0].shape[0]
        even = count - (count % 2)
        left = [lv[0:even:2] for lv in levels]
        right = [lv[1:even:2] for lv in levels]
        merged = _batch_mul(left, right, depth)
        if count % 2:
            merged = [np.concatenate([m, lv[-1:]], axis=0) for m, lv in zip(merged, levels)]
        levels = merged
    return np.concatenate([lv[0] for lv in levels])


def _slit_inverse_numpy(z, u, four_dt):
    p = z - u
    w = p * p - four_dt
    s = np.sqrt(w)
    flip = (s.imag < 0) | ((s.imag == 0) & (s.real * p.real < 0))
    s = np.where(flip, -s, s)
    return u + s


def loewner_points_numpy(driver, dt, indices):
    driver = np.asarray(driver, dtype=np.float64)
    indices = np.asarray(indices, dtype=np.int64)
    order = np.argsort(indices, kind="stable")
    idx = indices[order]
    z = driver[idx - 1] + 2j * math.sqrt(dt)
    four_dt = 4.0 * dt
    top = int(idx[-1]) if idx.size else 0
    for i in range(top - 1, 0, -1):
        start = np.searchsorted(idx, i, side="right")
        if start == idx.size:
            continue
        z[start:] = _slit_inverse_numpy(z[start:], driver[i - 1], four_dt)
    out = np.empty_like(z)
    out[order] = z
    return out


def winding_and_distance_numpy(vx, vy, px, py, chunk=4096):
    vx = np.asarray(vx, dtype=np.float64)
    vy = np.asarray(vy, dtype=np.float64)
    px = np.asarray(px, dtype=np.float64).ravel()
    py = np.asarray(py, dtype=np.float64).ravel()
    x0, y0, x1, y1 = vx[:-1], vy[:-1], vx[1:], vy[1:]
    ex, ey = x1 - x0, y1 - y0
    len2 = ex * ex + ey * ey
    safe = np.where(len2 > 0, len2, 1.0)
    wn = np.zeros(px.size, dtype=np.int64)
    dist = np.empty(px.size)
    for lo in range(0, px.size, chunk):
        qx = px[lo:lo + chunk, None]
        qy = py[lo:lo + chunk, None]
        cross = ex * (qy - y0) - (qx - x0) * ey
        up = (y0 <= qy) & (y1 > qy) & (cross > 0)
        down = (y0 > qy) & (y1 <= qy) & (cross < 0)
        wn[lo:lo + chunk] = up.sum(axis=1) - down.sum(axis=1)
        t = np.clip(((qx - x0) * ex + (qy - y0) * ey) / safe, 0.0, 1.0)
        dx = x0 + t * ex - qx
        dy = y0 + t * ey - qy
        dist[lo:lo + chunk] = np.sqrt((dx * dx + dy * dy).min(axis=1))
    return wn, dist


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _chen_signature_nb(increments, depth):
        nseg, d = increments.shape
        off = np.zeros(depth + 2, dtype=np.int64)
        for k in range(depth + 1):
            off[k + 1] = off[k] + d**k
        S = np.zeros(off[depth + 1])
        E = np.zeros(off[depth + 1])
        S[0] = 1.0
        E[0] = 1.0
        for s in range(nseg):
            zero = True
            for q in range(d):
                if increments[s, q] != 0.0:
                    zero = False
            if zero:
                continue
            for k in range(1, depth + 1):
                width = d ** (k - 1)
                for p in range(width):
                    e = E[off[k - 1] + p] / k
                    base = off[k] + p * d
                    for q in range(d):
                        E[base + q] = e * increments[s, q]
            for n in range(depth, 0, -1):
                for i in range(n):
                    m = n - i
                    dm = d**m
                    for p in range(d**i):
                        a = S[off[i] + p]
                        if a == 0.0:
                            continue
                        base = off[n] + p * dm
                        for q in range(dm):
                            S[base + q] += a * E[off[m] + q]
        return S

    @numba.njit(cache=True, nogil=True)
    def _loewner_points_nb(driver, dt, indices):
        out = np.empty(indices.shape[0], dtype=np.complex128)
        height = 2.0 * math.sqrt(dt)
        four_dt = 4.0 * dt
        for j in range(indices.shape[0]):
            m = indices[j]
            x = driver[m - 1]
            y = height
            for i in range(m - 1, 0, -1):
                u = driver[i - 1]
                p = x - u
                a = p * p - y * y - four_dt
                b = 2.0 * p * y
                mod = math.sqrt(a * a + b * b)
                if a >= 0.0:
                    sx = math.sqrt(0.5 * (mod + a))
                    sy = abs(b) / (2.0 * sx) if sx > 0.0 else 0.0
                    if b < 0.0 or (b == 0.0 and p < 0.0):
                        sx = -sx
                else:
                    sy = math.sqrt(0.5 * (mod - a))
                    sx = b / (2.0 * sy)
                x = u + sx
                y = sy
            out[j] = complex(x, y)
        return out

    @numba.njit(cache=True, nogil=True)
    def _winding_and_distance_nb(vx, vy, px, py):
        npts = px.shape[0]
        nv = vx.shape[0]
        wn = np.zeros(npts, dtype=np.int64)
        dist = np.empty(npts)
        for j in range(npts):
            qx = px[j]
            qy = py[j]
            w = 0
            best = np.inf
            for e in range(nv - 1):
                x0 = vx[e]
                y0 = vy[e]
                ex = vx[e + 1] - x0
                ey = vy[e + 1] - y0
                cross = ex * (qy - y0) - (qx - x0) * ey
                if y0 <= qy:
                    if vy[e + 1] > qy and cross > 0.0:
                        w += 1
                elif vy[e + 1] <= qy and cross < 0.0:
                    w -= 1
                len2 = ex * ex + ey * ey
                t = 0.0
                if len2 > 0.0:
                    t = ((qx - x0) * ex + (qy - y0) * ey) / len2
                    t = min(max(t, 0.0), 1.0)
                dx = x0 + t * ex - qx
                dy = y0 + t * ey - qy
                dd = dx * dx + dy * dy
                if dd < best:
                    best = dd
            wn[j] = w
            dist[j] = math.sqrt(best)
        return wn, dist

    def chen_signature_numba(increments, depth):
        return _chen_signature_nb(np.ascontiguousarray(increments, dtype=np.float64), int(depth))

    def loewner_points_numba(driver, dt, indices):
        return _loewner_points_nb(
            np.ascontiguousarray(driver, dtype=np.float64),
            float(dt),
            np.ascontiguousarray(indices, dtype=np.int64),
        )

    def winding_and_distance_numba(vx, vy, px, py):
        return _winding_and_distance_nb(
            np.ascontiguousarray(vx, dtype=np.float64),
            np.ascontiguousarray(vy, dtype=np.float64),
            np.ascontiguousarray(px, dtype=np.float64).ravel(),
            np.ascontiguousarray(py, dtype=np.float64).ravel(),
        )


_IMPLS = {
    "numpy": (chen_signature_numpy, loewner_points_numpy, winding_and_distance_numpy),
}
if numba is not None:
    _IMPLS["numba"] = (chen_signature_numba, loewner_points_numba, winding_and_distance_numba)

BACKEND = None
chen_signature = loewner_points = winding_and_distance = None


def available_backends():
    return sorted(_IMPLS)


def set_backend(name):
    """Re-bind the module-level kernels to ``"numba"`` or ``"numpy"``."""
    global BACKEND, chen_signature, loewner_points, winding_and_distance
    if name not in _IMPLS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    chen_signature, loewner_points, winding_and_distance = _IMPLS[name]
    BACKEND = name


set_backend("numba" if numba is not None and _numba_requested() else "numpy")
