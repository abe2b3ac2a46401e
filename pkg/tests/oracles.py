"""Independent reference implementations used by the tests.

Nothing here imports sigwind; each oracle is deliberately naive.
"""

import math
from fractions import Fraction
from itertools import combinations, product


def exact_signature(vertices, N):
    """Signature of a polyline with rational vertices as ``{word: Fraction}``.

    Chen's identity over segment exponentials, all in exact arithmetic.
    """
    verts = [tuple(Fraction(c) for c in v) for v in vertices]
    d = len(verts[0])
    sig = {w: Fraction(0) for k in range(1, N + 1) for w in product(range(1, d + 1), repeat=k)}
    sig[()] = Fraction(1)
    for a, b in zip(verts, verts[1:]):
        inc = [bi - ai for ai, bi in zip(a, b)]
        seg = {(): Fraction(1)}
        for k in range(1, N + 1):
            for w in product(range(1, d + 1), repeat=k):
                val = Fraction(1, math.factorial(k))
                for letter in w:
                    val *= inc[letter - 1]
                seg[w] = val
        new = {}
        for k in range(N + 1):
            for w in product(range(1, d + 1), repeat=k):
                new[w] = sum(sig[w[:i]] * seg[w[i:]] for i in range(k + 1))
        sig = new
    return sig


def iterated_integral(points, word):
    """Iterated integral along a densely sampled path by the trapezoid rule."""
    n = len(points)
    prev = [1.0] * n
    for letter in word:
        cur = [0.0] * n
        for j in range(1, n):
            dx = points[j][letter - 1] - points[j - 1][letter - 1]
            cur[j] = cur[j - 1] + 0.5 * (prev[j] + prev[j - 1]) * dx
        prev = cur
    return prev[-1]


def shuffles(u, v):
    """All interleavings of ``u`` and ``v``, with repetition, by choosing positions."""
    n = len(u) + len(v)
    out = {}
    for pos in combinations(range(n), len(u)):
        w, iu, iv = [], 0, 0
        chosen = set(pos)
        for i in range(n):
            if i in chosen:
                w.append(u[iu])
                iu += 1
            else:
                w.append(v[iv])
                iv += 1
        out[tuple(w)] = out.get(tuple(w), 0) + 1
    return out


def is_lyndon_by_rotation(w):
    """Lyndon iff strictly smaller than every nontrivial rotation."""
    w = tuple(w)
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_by_enumeration(d, N):
    words = [w for k in range(1, N + 1) for w in product(range(1, d + 1), repeat=k) if is_lyndon_by_rotation(w)]
    return sorted(words)


def shoelace_area(vertices):
    s = 0.0
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def catalan_slow(n_terms=10**7):
    """Alternating-series partial sums with the average of two consecutive sums.

    The average cancels the leading error term, leaving O(n^-3).
    """
    import numpy as np

    k = np.arange(n_terms, dtype=np.float64)
    terms = np.where(k % 2 == 0, 1.0, -1.0) / (2 * k + 1) ** 2
    # sum the small tail first to keep rounding low
    s_n = float(np.sum(terms[::-1]))
    s_next = s_n + (-1) ** n_terms / (2 * n_terms + 1) ** 2
    return 0.5 * (s_n + s_next)


def hyp2f1_series(a, b, c, z, terms=500):
    """Term-by-term series with Euler averaging of the last partial sums."""
    total, term = 1.0, 1.0
    partial = [1.0]
    for n in range(terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        partial.append(total)
    return 0.5 * (partial[-1] + partial[-2]) if z < 0 else partial[-1]


def segments_cross(p1, p2, q1, q2):
    """Proper crossing test for two segments (shared endpoints excluded)."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0
