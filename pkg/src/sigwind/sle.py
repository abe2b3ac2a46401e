"""Chordal SLE traces, closed loops in the disc ``(1 + D)/2``, and expected signatures.

Traces are built from a piecewise-constant driver by composing inverse
vertical-slit maps ``phi_i(z) = U_i + sqrt((z - U_i)^2 - 4 dt)``; the trace
point at step ``n`` is ``phi_1(...phi_{n-1}(U_n + 2i sqrt(dt)))``. The
half-plane trace is carried to the disc by ``w -> w / (w + i)`` and closed
with a chord to 1 and the counter-clockwise upper boundary arc back to 0.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .exceptions import DomainError, NumericalInstabilityError, SigwindError
from .lyndon import lyndon_bracket
from .paths import PolyLine, sample_parametric
from .tensor import TruncatedTensor, bracket, level_offsets, tensor_exp, tensor_mul, word_index

PI_OVER_8 = math.pi / 8
MAX_FAILURE_FRACTION = 0.01


def default_threads():
    env = os.environ.get("SIGWIND_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class SLEConfig:
    kappa: float = 8.0 / 3.0
    steps: int = 20000
    T: float = 16.0
    samples: int = 1000
    seed: int = 7
    N: int = 4
    arc_points: int = 512
    # trace vertices kept per sample, spaced uniformly in sqrt(capacity)
    vertices: int = 1000

    @property
    def dt(self):
        return self.T / self.steps

    def validate(self):
        if not 0.0 <= self.kappa <= 4.0:
            raise DomainError(f"kappa must lie in [0, 4], got {self.kappa}")
        if self.steps < 1 or self.samples < 0 or self.T <= 0:
            raise DomainError("need steps >= 1, samples >= 0 and T > 0")
        if self.arc_points < 2 or self.vertices < 1:
            raise DomainError("need arc_points >= 2 and vertices >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        return self


def sample_driver(cfg, sample_index):
    """Driver ``W_0..W_steps`` with independent N(0, kappa dt) increments.

    The random stream is keyed by ``(seed, sample_index)`` only.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(cfg.seed), int(sample_index)]))
    inc = rng.standard_normal(cfg.steps) * math.sqrt(cfg.kappa * cfg.dt)
    return np.concatenate([[0.0], np.cumsum(inc)])


def trace_indices(steps, vertices):
    """Step indices whose trace points are kept: all, or ~``vertices`` spaced in sqrt(t)."""
    if vertices >= steps:
        return np.arange(1, steps + 1, dtype=np.int64)
    j = np.arange(1, vertices + 1)
    idx = np.ceil(steps * (j / vertices) ** 2).astype(np.int64)
    return np.unique(np.clip(idx, 1, steps))


def loewner_trace(driver, dt, indices=None):
    """Half-plane trace as a PolyLine starting at the origin."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    driver = np.asarray(driver, dtype=np.float64)
    steps = driver.size - 1
    if steps < 1:
        raise DomainError("driver needs at least two values")
    if indices is None:
        indices = np.arange(1, steps + 1, dtype=np.int64)
    z = _kernels.loewner_points(driver, dt, indices)
    if not np.all(np.isfinite(z)) or np.any(z.imag < 0):
        raise NumericalInstabilityError("slit-map composition left the closed upper half-plane")
    pts = np.column_stack([np.concatenate([[0.0], z.real]), np.concatenate([[0.0], z.imag])])
    return PolyLine(pts)


def map_to_disc(p):
    """Image of a half-plane polyline under ``w -> w / (w + i)``."""
    w = p.vertices[:, 0] + 1j * p.vertices[:, 1]
    den = w + 1j
    if np.any(den == 0):
        raise DomainError("vertex at -i is a pole of the disc map")
    f = w / den
    return PolyLine(np.column_stack([f.real, f.imag]))


def close_curve_phi(p, arc_points=512):
    """Close a disc trace from 0 with a chord to 1 and the upper arc back to 0."""
    v = [p.vertices]
    if not np.array_equal(p.vertices[-1], (1.0, 0.0)):
        v.append(np.array([[1.0, 0.0]]))
    theta = np.linspace(0.0, math.pi, arc_points)[1:]
    arc = np.column_stack([0.5 + 0.5 * np.cos(theta), 0.5 * np.sin(theta)])
    arc[-1] = (0.0, 0.0)
    v.append(arc)
    return PolyLine(np.vstack(v))


def sample_trace(cfg, sample_index):
    return loewner_trace(sample_driver(cfg, sample_index), cfg.dt, trace_indices(cfg.steps, cfg.vertices))


def sample_loop(cfg, sample_index):
    return close_curve_phi(map_to_disc(sample_trace(cfg, sample_index)), cfg.arc_points)


def sample_signature(cfg, sample_index):
    loop = sample_loop(cfg, sample_index)
    return _kernels.chen_signature(loop.increments, cfg.N)


# -- Monte Carlo ------------------------------------------------------------------


@dataclass
class MCEstimate:
    """Per-word Monte Carlo mean and standard error of loop signatures."""

    N: int
    mean: np.ndarray
    se: np.ndarray
    count: int
    failures: int = 0
    config: dict = field(default_factory=dict)
    samples: np.ndarray = None
    d: int = 2

    def _pos(self, w):
        return level_offsets(self.d, self.N)[len(w)] + word_index(tuple(int(c) for c in w), self.d)

    def mean_of(self, w):
        return float(self.mean[self._pos(w)])

    def se_of(self, w):
        return float(self.se[self._pos(w)])

    def linear(self, weights):
        """Mean and standard error of ``sum_w c_w S_w`` from the raw samples."""
        coef = np.zeros_like(self.mean)
        for w, c in weights.items():
            coef[self._pos(w)] += c
        vals = self.samples @ coef
        se = vals.std(ddof=1) / math.sqrt(vals.size) if vals.size > 1 else float("nan")
        return float(vals.mean()), float(se)

    def antisymmetric_area(self):
        return self.linear({"12": 0.5, "21": -0.5})

    def mean_tensor(self):
        return TruncatedTensor(self.d, self.N, self.mean)

    def to_dict(self, include_samples=True):
        from .tensor import index_word, word_str

        words = {}
        off = level_offsets(self.d, self.N)
        for k in range(self.N + 1):
            for i in range(self.d**k):
                words[word_str(index_word(i, k, self.d))] = {
                    "mean": float(self.mean[off[k] + i]),
                    "se": float(self.se[off[k] + i]),
                }
        out = {
            "schema": 1,
            "d": self.d,
            "N": self.N,
            "count": self.count,
            "failures": self.failures,
            "config": self.config,
            "words": words,
        }
        if include_samples and self.samples is not None:
            out["samples"] = self.samples.tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        d, N = int(data["d"]), int(data["N"])
        off = level_offsets(d, N)
        mean = np.zeros(off[-1])
        se = np.zeros(off[-1])
        from .tensor import as_word

        for key, val in data["words"].items():
            w = as_word(key, d)
            pos = off[len(w)] + word_index(w, d)
            mean[pos], se[pos] = val["mean"], val["se"]
        samples = np.array(data["samples"]) if data.get("samples") is not None else None
        return cls(N, mean, se, int(data["count"]), int(data.get("failures", 0)), data.get("config", {}), samples, d)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class MonteCarloAbort(SigwindError):
    """Too many SLE samples failed numerically."""


def _try_sample(cfg, i):
    try:
        return sample_signature(cfg, i)
    except NumericalInstabilityError:
        return None


def mc_expected_signature(cfg, threads=None):
    """Mean and standard error of loop-signature coefficients over ``cfg.samples`` loops.

    Samples run on a thread pool (the kernels release the GIL); results are
    reduced in sample-index order so the estimate does not depend on the
    worker count.
    """
    cfg.validate()
    size = level_offsets(2, cfg.N)[-1]
    threads = threads or default_threads()
    if cfg.samples == 0:
        return MCEstimate(cfg.N, np.zeros(size), np.zeros(size), 0, 0, asdict(cfg), np.zeros((0, size)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _try_sample(cfg, i), range(cfg.samples)))
    else:
        results = [_try_sample(cfg, i) for i in range(cfg.samples)]
    good = [r for r in results if r is not None]
    failures = len(results) - len(good)
    if failures > MAX_FAILURE_FRACTION * cfg.samples:
        raise MonteCarloAbort(f"{failures} of {cfg.samples} samples failed")
    samples = np.vstack(good)
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / math.sqrt(len(good)) if len(good) > 1 else np.zeros(size)
    return MCEstimate(cfg.N, mean, se, len(good), failures, asdict(cfg), samples)


def moments_from_signature(flat, N=4):
    """Winding moments of a closed loop (anchored at its start) from its signature.

    Inverts the moment identity ``S(1^(n+1) 2^(k+1)) = (-1)^k/(n! k!) M(n, k)``.
    """
    off = level_offsets(2, N)
    out = {}
    for s in range(N - 1):
        for n in range(s, -1, -1):
            k = s - n
            w = (1,) * (n + 1) + (2,) * (k + 1)
            val = flat[..., off[len(w)] + word_index(w, 2)]
            out[(n, k)] = val * (-1) ** k * math.factorial(n) * math.factorial(k)
    return out


def area_squared_samples(estimate):
    """Per-sample ``2 (S_1212 - L_1212)``, the squared loop area."""
    S = estimate.samples
    m = moments_from_signature(S, estimate.N)
    lie = _lie4_1212_weights()
    l1212 = sum(c * m[nk] for nk, c in lie.items())
    pos = level_offsets(2, estimate.N)[4] + word_index((1, 2, 1, 2), 2)
    return 2.0 * (S[:, pos] - l1212)


def _lie4_1212_weights():
    # coefficient of word 1212 in the level-4 brackets weighted as in the moment Lie element
    idx = word_index((1, 2, 1, 2), 2)
    weights = {}
    for nk, w, c in (((2, 0), (1, 1, 1, 2), 0.5), ((1, 1), (1, 1, 2, 2), -1.0), ((0, 2), (1, 2, 2, 2), 0.5)):
        weights[nk] = c * lyndon_bracket(w, 4, 2).level(4)[idx]
    return weights


# -- closed forms around the semicircle and the SLE(8/3) fourth level -----------


def _letters(N):
    e1 = TruncatedTensor.from_words(2, N, {(1,): 1.0})
    e2 = TruncatedTensor.from_words(2, N, {(2,): 1.0})
    return e1, e2


def semicircle_signature(N=4):
    """Closed-form signature (levels <= 4) of the clockwise half-disc loop of radius 1/2."""
    if N > 4:
        from .exceptions import RangeError

        raise RangeError("closed form only known through level 4")
    e1, e2 = _letters(4)
    b = bracket(e1, e2)
    out = (
        TruncatedTensor.identity(2, 4)
        - PI_OVER_8 * b
        - (1 / 12) * bracket(e2, b)
        - (math.pi / 16) * bracket(e1, b)
        - (5 * math.pi / 256) * bracket(e1, bracket(e1, b))
        - (math.pi / 256) * bracket(bracket(b, e2), e2)
        + (math.pi**2 / 128) * tensor_mul(b, b)
        - (1 / 24) * bracket(e1, bracket(e2, b))
    )
    return out.truncate(N)


def semicircle_point(t):
    """Clockwise arc from (-1/2, 0) over the top to (1/2, 0), then the diameter back.

    ``t`` runs over ``[0, 1 + pi]``.
    """
    if t <= math.pi:
        return (-0.5 * math.cos(t), 0.5 * math.sin(t))
    return (0.5 + math.pi - t, 0.0)


def semicircle_polyline(m):
    """Polygonal half-disc loop with ``m`` intervals uniform in the arc-length parameter."""
    top = 1.0 + math.pi
    return sample_parametric(lambda s: semicircle_point(s * top), m, closed=True)


def expected_loop_signature(m00, m10, m01, m20, m11, m02, A):
    """Level-4 expected loop signature from one-point moments and the two-point integral."""
    e1, e2 = _letters(4)
    b = bracket(e1, e2)
    lie = (
        m00 * b
        + m10 * bracket(e1, b)
        + m01 * bracket(e2, b)
        + 0.5 * m20 * bracket(e1, bracket(e1, b))
        + 0.5 * m11 * (bracket(e1, bracket(e2, b)) + bracket(e2, bracket(e1, b)))
        + 0.5 * m02 * bracket(e2, bracket(e2, b))
    )
    return TruncatedTensor.identity(2, 4) + lie + (0.5 * A) * tensor_mul(b, b)


def sle83_one_point_moments(K):
    """Known one-point moments ``(m00, m01, m11)`` for SLE(8/3) in the disc."""
    return PI_OVER_8, (1.5 - K) / 8, (3 - 2 * K) / 32


def theorem6_assemble(K, A, free_moments=(0.0, 0.0, 0.0)):
    """Level-4 expected signature of SLE(8/3) from 0 to 1 in ``(1 + D)/2``.

    ``free_moments`` are the x, x^2 and y^2 one-point moments; they only
    reach words with an odd number of 2s.
    """
    m10, m20, m02 = free_moments
    m00, m01, m11 = sle83_one_point_moments(K)
    loop = expected_loop_signature(m00, m10, m01, m20, m11, m02, A)
    e1, _ = _letters(4)
    return tensor_mul(tensor_mul(loop, semicircle_signature(4)), tensor_exp(e1))


def theorem6_display(K, A):
    """The level-4 closed form as a sum of four bracket terms."""
    e1, e2 = _letters(4)
    b = bracket(e1, e2)
    b122 = bracket(b, e2)
    return (
        (1 / 24) * tensor_mul(tensor_mul(e1, e1), tensor_mul(e1, e1))
        - (5 / 96 - K / 16) * bracket(e1, b122)
        - (1 / 8) * (5 / 6 - K) * tensor_mul(b122, e1)
        + (math.pi**2 / 128 + A / 2) * tensor_mul(b, b)
    )


def even_two_projection(t, level=4):
    """Level-``level`` part of ``t`` restricted to words with an even number of 2s."""
    from .tensor import index_word

    lv = np.array(t.level(level))
    for i in range(lv.size):
        if index_word(i, level, t.d).count(2) % 2:
            lv[i] = 0.0
    c = np.zeros_like(t.coeffs)
    off = level_offsets(t.d, t.N)
    c[off[level]:off[level + 1]] = lv
    return TruncatedTensor(t.d, t.N, c)


MC_TARGETS = {
    # word: (target function of K, relative allowance)
    "12-21": (lambda K: PI_OVER_8, 0.10),
    "122": (lambda K: -(1.5 - K) / 8, 0.10),
    "1122": (lambda K: -(3 - 2 * K) / 32, 0.15),
}


def mc_target_report(estimate, K):
    """Compare the Monte Carlo loop signature against the SLE(8/3) moment values."""
    rows = []
    for key, (target, rel) in MC_TARGETS.items():
        if key == "12-21":
            mean, se = estimate.antisymmetric_area()
        else:
            mean, se = estimate.mean_of(key), estimate.se_of(key)
        tgt = target(K)
        allowance = max(3 * se, rel * abs(tgt))
        rows.append(
            {
                "word": key,
                "mean": mean,
                "se": se,
                "target": tgt,
                "abs_diff": abs(mean - tgt),
                "allowance": allowance,
                "passed": abs(mean - tgt) <= allowance,
            }
        )
    return rows
