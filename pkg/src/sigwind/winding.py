"""Winding numbers and winding-number moments of closed planar polylines.

Moments are ``M(n, k) = integral of x^n y^k * wind(p - p0, (x, y)) dx dy``,
always taken on the curve translated so that its first vertex is the
origin unless ``translate=False`` is passed. They are evaluated exactly by
Green's theorem, ``M(n, k) = contour integral of x^(n+1) y^k / (n+1) dy``,
with a Gauss-Legendre rule per segment that is exact for the polynomial
integrand. A midpoint-grid sum of the crossing-rule winding number serves
as an independent check.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import DomainError, PointOnCurveError
from .lyndon import lie_to_lyndon, lyndon_bracket
from .paths import PolyLine, concatenate_all, polyline_signature, segment
from .tensor import TruncatedTensor, tensor_log, word_coefficient

ON_CURVE_REL_EPS = 1e-12


def _require_closed(p):
    if not p.closed:
        raise DomainError("operation needs a closed polyline (first vertex == last vertex)")
    if p.d != 2:
        raise DomainError(f"winding numbers need a planar curve, got d={p.d}")


def _on_curve_eps(p, eps):
    if eps is not None:
        return eps
    lo, hi = p.vertices.min(axis=0), p.vertices.max(axis=0)
    return ON_CURVE_REL_EPS * float(np.hypot(*(hi - lo)))


def winding_numbers(p, points, eps=None, on_curve="raise"):
    """Integer winding numbers of ``p`` about each row of ``points``.

    ``on_curve`` is ``"raise"`` (default) or ``"mask"``; with ``"mask"`` a
    boolean array flagging points within ``eps`` of the curve is returned
    alongside the winding numbers.
    """
    _require_closed(p)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    wn, dist = _kernels.winding_and_distance(p.vertices[:, 0], p.vertices[:, 1], pts[:, 0], pts[:, 1])
    near = dist <= _on_curve_eps(p, eps)
    if on_curve == "mask":
        return wn, near
    if np.any(near):
        bad = pts[np.argmax(near)]
        raise PointOnCurveError(f"point ({bad[0]:.17g}, {bad[1]:.17g}) lies on the curve")
    return wn


def winding_number(p, z, eps=None):
    return int(winding_numbers(p, [z], eps=eps)[0])


# -- exact moments ------------------------------------------------------------


def moment_exact(p, n, k, translate=True):
    _require_closed(p)
    if n < 0 or k < 0:
        raise DomainError("moment orders must be nonnegative")
    v = p.vertices - p.vertices[0] if translate else p.vertices
    nodes, weights = np.polynomial.legendre.leggauss(math.ceil((n + k + 2) / 2))
    t = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    a, b = v[:-1], v[1:]
    x = a[:, 0:1] + t * (b[:, 0:1] - a[:, 0:1])
    y = a[:, 1:2] + t * (b[:, 1:2] - a[:, 1:2])
    per_segment = (x ** (n + 1) * y**k) @ w * (b[:, 1] - a[:, 1]) / (n + 1)
    return float(np.sum(per_segment))


@dataclass
class MomentTable:
    """Winding moments ``M(n, k)`` for all ``n + k + 2 <= N``."""

    N: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, nk):
        try:
            return self.values[tuple(nk)]
        except KeyError:
            raise DomainError(f"moment {tuple(nk)} not in table (N={self.N})") from None

    def max_abs_diff(self, other):
        keys = set(self.values) & set(other.values)
        return max((abs(self.values[key] - other.values[key]) for key in keys), default=0.0)

    def to_dict(self):
        return {f"{n},{k}": v for (n, k), v in sorted(self.values.items())}


def moment_pairs(N):
    return [(n, s - n) for s in range(0, N - 1) for n in range(s, -1, -1)]


def moment_table(p, N, translate=True):
    return MomentTable(N, {(n, k): moment_exact(p, n, k, translate) for n, k in moment_pairs(N)})


# -- grid oracle --------------------------------------------------------------


def _grid(p, resolution, translate=True):
    if resolution < 16:
        raise DomainError("grid resolution must be >= 16")
    v = p.vertices - p.vertices[0] if translate else p.vertices
    lo, hi = v.min(axis=0), v.max(axis=0)
    span = np.maximum(hi - lo, 1e-300)
    hx, hy = span / resolution
    xs = lo[0] + hx * (np.arange(resolution) + 0.5)
    ys = lo[1] + hy * (np.arange(resolution) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    shifted = PolyLine(v)
    wn, near = winding_numbers(shifted, np.column_stack([X.ravel(), Y.ravel()]), on_curve="mask")
    wn = np.where(near, 0, wn)
    return X.ravel(), Y.ravel(), wn, hx * hy


def moment_grid(p, n, k, resolution, translate=True):
    """Midpoint-rule estimate of ``M(n, k)`` on a ``resolution^2`` grid."""
    _require_closed(p)
    X, Y, wn, cell = _grid(p, resolution, translate)
    return float(np.sum(X**n * Y**k * wn) * cell)


def moment_grid_abs(p, n, k, resolution, translate=True):
    """Grid estimate of ``integral |x^n y^k| |wind|``; a scale for relative errors."""
    _require_closed(p)
    X, Y, wn, cell = _grid(p, resolution, translate)
    return float(np.sum(np.abs(X**n * Y**k * wn)) * cell)


# -- signature-side routes ----------------------------------------------------


def moment_word(n, k):
    return (1,) * (n + 1) + (2,) * (k + 1)


def verify_theorem1(p, N, tol=1e-9):
    """Compare three routes to the moment coefficients of a closed polyline.

    For each ``n + k + 2 <= N``:

    * ``lyndon``: Lyndon coordinate of ``log S`` at word ``1^(n+1) 2^(k+1)``;
    * ``word``: raw signature coefficient of that word;
    * ``moment``: ``(-1)^k / (n! k!) * M(n, k)``.

    Returns a dict with the per-word table and the maximum discrepancy
    between any two routes.
    """
    _require_closed(p)
    if N < 2:
        raise DomainError("need N >= 2")
    sig = polyline_signature(p, N)
    expansion = lie_to_lyndon(tensor_log(sig))
    table = []
    worst = worst_alg = 0.0
    for n, k in moment_pairs(N):
        w = moment_word(n, k)
        lyn = expansion[w]
        raw = word_coefficient(sig, w)
        mom = (-1) ** k / (math.factorial(n) * math.factorial(k)) * moment_exact(p, n, k)
        err = max(abs(lyn - mom), abs(raw - mom), abs(lyn - raw))
        worst = max(worst, err)
        worst_alg = max(worst_alg, abs(lyn - raw))
        table.append({"n": n, "k": k, "word": "".join(map(str, w)), "lyndon": lyn, "word_coefficient": raw, "moment": mom, "abs_error": err})
    return {
        "N": N,
        "max_abs_error": worst,
        "max_abs_error_algebraic": worst_alg,
        "lyndon_residual": expansion.residual,
        "passed": worst <= tol,
        "tolerance": tol,
        "per_word_table": table,
    }


MOMENT_BRACKET_WORDS = ((1, 2), (1, 1, 2), (1, 2, 2), (1, 1, 1, 2), (1, 1, 2, 2), (1, 2, 2, 2))


def fourth_level_from_winding(m):
    """Level-4 log-signature of a closed curve rebuilt from its moments.

    Coefficients on the brackets of 12, 112, 122, 1112, 1122, 1222 are
    ``M00, M10, -M01, M20/2, -M11, M02/2``.
    """
    needed = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    for nk in needed:
        if nk not in m.values:
            raise DomainError(f"moment table lacks M{nk}")
    coeffs = (m[0, 0], m[1, 0], -m[0, 1], 0.5 * m[2, 0], -m[1, 1], 0.5 * m[0, 2])
    out = TruncatedTensor.zero(2, 4)
    for w, c in zip(MOMENT_BRACKET_WORDS, coeffs):
        out = out + c * lyndon_bracket(w, 4, 2)
    return out


def sharpness_pair():
    """Two 8-step unit-segment loops with equal winding numbers everywhere.

    Both wind once around ``[0,1]^2`` and ``[-1,0]^2`` (traversed in opposite
    order) yet their signatures differ at word 12121.
    """
    e1, e2 = segment((1.0, 0.0)), segment((0.0, 1.0))
    m1, m2 = segment((-1.0, 0.0)), segment((0.0, -1.0))
    gamma = concatenate_all(e1, e2, m1, m2, m1, m2, e1, e2)
    gamma_tilde = concatenate_all(m1, m2, e1, e2, e1, e2, m1, m2)
    return gamma, gamma_tilde


def sharpness_report(N=5):
    g, gt = sharpness_pair()
    word = (1, 2, 1, 2, 1)
    sg, sgt = polyline_signature(g, N), polyline_signature(gt, N)
    mg, mgt = moment_table(g, N + 1), moment_table(gt, N + 1)
    return {
        "word": "12121",
        "gamma": word_coefficient(sg, word),
        "gamma_tilde": word_coefficient(sgt, word),
        "moment_table_max_abs_diff": mg.max_abs_diff(mgt),
        "moments_gamma": mg.to_dict(),
        "moments_gamma_tilde": mgt.to_dict(),
    }


# -- isoperimetric check -----------------------------------------------------


def lsq_winding_norm(p, resolution):
    """Grid estimate of the L2 norm of the winding-number function."""
    _require_closed(p)
    _, _, wn, cell = _grid(p, resolution, translate=False)
    return math.sqrt(float(np.sum(wn.astype(float) ** 2) * cell))


def isoperimetric_report(p, resolution):
    norm = lsq_winding_norm(p, resolution)
    length = p.length()
    lhs = 4 * math.pi * norm**2
    rhs = length**2
    return {
        "l2_norm_sq": norm**2,
        "length": length,
        "lhs": lhs,
        "rhs": rhs,
        "ratio": lhs / rhs if rhs > 0 else 0.0,
    }
