"""Catalan's constant, the hypergeometric kernel G, and the four-fold integral A.

``A`` is the integral over two points of the upper half-plane of the SLE(8/3)
two-point function pulled back to the disc ``(1 + D) / 2`` by
``f(w) = w / (w + i)``; in polar coordinates ``w = r e^{i theta}`` the
Jacobian weight is ``r / (r^2 + 2 r sin(theta) + 1)^2`` per point.
"""

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConvergenceError, DomainError

# -- Catalan's constant -------------------------------------------------------


def catalan_constant():
    """Catalan's constant ``sum_{k>=0} (-1)^k / (2k+1)^2``.

    Uses the rapidly convergent representation
    ``K = pi/8 * log(2 + sqrt 3) + 3/8 * sum_k 1 / ((2k+1)^2 * C(2k, k))``,
    whose terms shrink by roughly a factor 4 each.
    """
    terms = []
    binom = 1
    for k in range(60):
        if k:
            binom = binom * (2 * k) * (2 * k - 1) // (k * k)
        terms.append(1.0 / ((2 * k + 1) ** 2 * binom))
    return math.pi / 8 * math.log(2 + math.sqrt(3)) + 3 / 8 * math.fsum(terms)


def catalan_partial_sum(n):
    """Partial sum of the first ``n`` terms of the alternating series."""
    k = np.arange(n, dtype=np.float64)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    return math.fsum(signs / (2 * k + 1) ** 2)


# -- Gauss hypergeometric function -------------------------------------------


def _series(a, b, c, z, tol=1e-17, max_terms=2000):
    z = np.asarray(z, dtype=np.float64)
    total = np.ones_like(z)
    term = np.ones_like(z)
    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1))) * z
        total = total + term
        if np.all(np.abs(term) <= tol * np.abs(total)):
            return total
    raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms", best=total)


def _near_one(a, b, c, z):
    # connection formula in 1 - z; needs c - a - b non-integer
    s = c - a - b
    w = 1.0 - z
    g1 = math.gamma(c) * math.gamma(s) / (math.gamma(c - a) * math.gamma(c - b))
    g2 = math.gamma(c) * math.gamma(-s) / (math.gamma(a) * math.gamma(b))
    return g1 * _series(a, b, 1 - s, w) + g2 * w**s * _series(c - a, c - b, 1 + s, w)


def hyp2f1(a, b, c, z):
    """Real ``2F1(a, b; c; z)`` for ``z < 1``, vectorised over ``z``.

    Regions: power series for ``|z| <= 1/2``; the ``1 - z`` connection formula
    for ``1/2 < z < 1``; the Pfaff transformation ``z -> z / (z - 1)`` for
    ``z < -1/2``, itself continued through the connection formula when the
    transformed argument exceeds 3/4.
    """
    z = np.asarray(z, dtype=np.float64)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(z >= 1.0):
        raise DomainError("hyp2f1 is only evaluated for z < 1")
    out = np.empty_like(z)
    mid = np.abs(z) <= 0.5
    hi = z > 0.5
    lo = z < -0.5
    if mid.any():
        out[mid] = _series(a, b, c, z[mid])
    if hi.any():
        out[hi] = _near_one(a, b, c, z[hi])
    if lo.any():
        zl = z[lo]
        t = zl / (zl - 1.0)
        inner = np.empty_like(t)
        small = t <= 0.75
        if small.any():
            inner[small] = _series(a, c - b, c, t[small])
        if (~small).any():
            inner[~small] = _near_one(a, c - b, c, t[~small])
        out[lo] = (1.0 - zl) ** (-a) * inner
    return out[0] if scalar else out


def _G(s):
    # s >= 0; G(0) = 1 is the limit at coinciding points
    s = np.asarray(s, dtype=np.float64)
    out = np.ones_like(s)
    pos = s > 0
    if pos.any():
        out[pos] = 1.0 - s[pos] * hyp2f1(1.0, 4.0 / 3.0, 5.0 / 3.0, 1.0 - s[pos])
    return out


def hyp_G(sigma):
    """``G(s) = 1 - s * 2F1(1, 4/3; 5/3; 1 - s)`` for ``s > 0``."""
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(~(s > 0)) or np.any(~np.isfinite(s)):
        raise DomainError("G needs sigma > 0")
    out = _G(np.atleast_1d(s))
    return float(out[0]) if s.ndim == 0 else out


def sigma_ratio(r1, t1, r2, t2):
    """``|w1 - w2|^2 / |w1 - conj(w2)|^2`` in polar coordinates, cancellation-free."""
    dr2 = (r1 - r2) ** 2
    num = dr2 + 4.0 * r1 * r2 * np.sin(0.5 * (t1 - t2)) ** 2
    den = dr2 + 4.0 * r1 * r2 * np.sin(0.5 * (t1 + t2)) ** 2
    return num / den


# -- the quadruple integral ---------------------------------------------------

VARIANTS = ("corrected", "printed")


def integrand_A(r1, t1, r2, t2, variant="corrected"):
    """Integrand of ``A`` in polar coordinates ``(r1, theta1, r2, theta2)``.

    ``"corrected"`` uses the two-point function
    ``[(1 + cos t1)(1 + cos t2) + sin t1 sin t2 G(sigma)] / 4``, which reduces
    to the one-point function ``(1 + cos t)/2`` when the points coincide.
    ``"printed"`` additionally divides by ``(1 + cos t1)(1 + cos t2)``.
    """
    c1, c2 = np.cos(t1), np.cos(t2)
    s1, s2 = np.sin(t1), np.sin(t2)
    g = _G(sigma_ratio(r1, t1, r2, t2))
    q1 = r1 * r1 + 2.0 * r1 * s1 + 1.0
    q2 = r2 * r2 + 2.0 * r2 * s2 + 1.0
    num = r1 * r2 * ((1.0 + c1) * (1.0 + c2) + s1 * s2 * g)
    den = 4.0 * q1 * q1 * q2 * q2
    if variant == "printed":
        den = den * (1.0 + c1) * (1.0 + c2)
    elif variant != "corrected":
        raise DomainError(f"unknown integrand variant {variant!r}")
    return num / den


@dataclass
class QuadratureSpec:
    """Tensor-product Gauss-Legendre settings for :func:`quad_integral_A`.

    Each radial axis uses ``r = u / (1 - u)`` on ``u in (0, 1)``. Every axis
    is split into ``panels`` equal panels carrying ``nodes_r`` (radial) or
    ``nodes_theta`` (angular) Gauss points. Refinement multiplies ``panels``
    by ``refine_factor`` until the relative change drops below ``tol``.
    """

    nodes_r: int = 8
    nodes_theta: int = 8
    panels: int = 3
    tol: float = 1e-3
    refine_factor: int = 2
    max_refinements: int = 3
    variant: str = "corrected"
    chunk: int = 2_000_000

    def validate(self):
        if min(self.nodes_r, self.nodes_theta) < 4:
            raise DomainError("node counts must be >= 4")
        if self.tol <= 0 or self.panels < 1 or self.refine_factor < 2:
            raise DomainError("invalid quadrature settings")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")


def _composite_gauss(a, b, panels, nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    xs = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return xs, ws


def _point_rule(spec, panels):
    u, wu = _composite_gauss(0.0, 1.0, panels, spec.nodes_r)
    r = u / (1.0 - u)
    wr = wu / (1.0 - u) ** 2
    t, wt = _composite_gauss(0.0, math.pi, panels, spec.nodes_theta)
    R, T = np.meshgrid(r, t, indexing="ij")
    W = np.outer(wr, wt)
    return R.ravel(), T.ravel(), W.ravel()


def _tensor_sum(spec, panels):
    r, t, w = _point_rule(spec, panels)
    n = r.size
    rows = max(1, spec.chunk // n)
    partial = []
    for lo in range(0, n, rows):
        sl = slice(lo, lo + rows)
        f = integrand_A(r[sl, None], t[sl, None], r[None, :], t[None, :], spec.variant)
        partial.append(float(np.sum(w[sl] * (f @ w))))
    return math.fsum(partial), n * n


def quad_integral_A(spec=None, return_info=False):
    """Nested Gauss-Legendre value of ``A`` with a refinement error estimate.

    Returns ``(value, error_estimate)``; with ``return_info`` a third item
    reports the node count and wall time. Raises :class:`ConvergenceError`
    (carrying the best estimate) if ``spec.max_refinements`` is exhausted.
    """
    spec = spec or QuadratureSpec()
    spec.validate()
    start = time.perf_counter()
    panels = spec.panels
    prev, used = _tensor_sum(spec, panels)
    history = [prev]
    for _ in range(spec.max_refinements):
        panels *= spec.refine_factor
        value, n = _tensor_sum(spec, panels)
        used += n
        history.append(value)
        err = abs(value - prev)
        if err <= spec.tol * abs(value):
            info = {"nodes_used": used, "wall_time": time.perf_counter() - start, "history": history, "spec": asdict(spec)}
            return (value, err, info) if return_info else (value, err)
        prev = value
    raise ConvergenceError(
        f"A did not reach relative tolerance {spec.tol} in {spec.max_refinements} refinements",
        best=history[-1],
        error_estimate=abs(history[-1] - history[-2]),
    )


def qmc_integral_A(n_points=2**22, replicates=16, seed=0, variant="corrected", chunk=2**18):
    """Randomised quasi-Monte-Carlo estimate of ``A`` and its standard error.

    ``n_points`` are split across ``replicates`` independently scrambled
    Sobol sequences; the spread of the replicate means gives the error bar.
    """
    from scipy.stats import qmc

    per = n_points // replicates
    if per & (per - 1):
        raise DomainError("n_points / replicates must be a power of two")
    rng = np.random.default_rng(seed)
    means = []
    for _ in range(replicates):
        sampler = qmc.Sobol(d=4, scramble=True, seed=rng)
        acc = []
        for _ in range(0, per, chunk):
            u = sampler.random(min(chunk, per))
            u1, u2 = u[:, 0], u[:, 2]
            r1, r2 = u1 / (1 - u1), u2 / (1 - u2)
            jac = math.pi**2 / ((1 - u1) ** 2 * (1 - u2) ** 2)
            f = integrand_A(r1, math.pi * u[:, 1], r2, math.pi * u[:, 3], variant) * jac
            acc.append(float(np.sum(f)))
        means.append(math.fsum(acc) / per)
    means = np.array(means)
    return float(means.mean()), float(means.std(ddof=1) / math.sqrt(replicates))


# -- Monte Carlo cross-check of A --------------------------------------------


def two_point_moment_mc_check(estimate, A=None, A_error=0.0, rel_tol=0.15):
    """Compare the Monte Carlo two-point integral with the quadrature value of A.

    The per-sample quantity is ``2 * (S_1212 - L_1212)`` where ``L`` is the
    level-4 Lie part rebuilt from the same sample's moments; for a simple
    loop it equals the squared enclosed area, whose mean is ``A``.
    """
    from .sle import PI_OVER_8, area_squared_samples

    report = {"samples": int(getattr(estimate, "count", 0))}
    if report["samples"] < 2 or getattr(estimate, "samples", None) is None:
        report["status"] = "insufficient samples"
        return report
    vals = area_squared_samples(estimate)
    mc = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(vals.size))
    area_mean = estimate.antisymmetric_area()
    report.update(
        {
            "A_mc": mc,
            "A_mc_se": se,
            "zero_moment_mc": area_mean[0],
            "zero_moment_se": area_mean[1],
            "zero_moment_target": PI_OVER_8,
        }
    )
    if A is None:
        report["status"] = "no quadrature value supplied"
        return report
    allowance = max(3.0 * math.hypot(se, A_error), rel_tol * abs(A))
    report.update(
        {
            "A_quadrature": A,
            "A_quadrature_error": A_error,
            "abs_diff": abs(mc - A),
            "allowance": allowance,
            "status": "pass" if abs(mc - A) <= allowance else "fail",
        }
    )
    return report
