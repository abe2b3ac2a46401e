"""Lyndon words, their bracket polynomials, and coordinates of Lie elements.

Letters are ordered ``1 < 2 < ... < d``; a proper prefix is smaller than the
word it starts, and otherwise the first differing letter decides. That is
exactly Python tuple comparison, which is what :func:`word_less` uses.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, NotLieError, RangeError
from .tensor import (
    TruncatedTensor,
    as_word,
    bracket,
    level_offsets,
    word_index,
    word_str,
)

DEFAULT_RESIDUAL_TOL = 1e-9


def word_less(u, v):
    return as_word(u) < as_word(v)


def is_lyndon(w):
    w = as_word(w)
    if not w:
        raise DomainError("the empty word is not a candidate Lyndon word")
    return all(w < w[i:] for i in range(1, len(w)))


def _duval(d, N):
    # Duval's algorithm emits Lyndon words of length <= N in lexicographic order
    w = [0]
    while w:
        yield tuple(x + 1 for x in w)
        m = len(w)
        while len(w) < N:
            w.append(w[len(w) - m])
        while w and w[-1] == d - 1:
            w.pop()
        if w:
            w[-1] += 1


@lru_cache(maxsize=None)
def _lyndon_words_cached(d, N):
    return tuple(sorted(_duval(d, N)))


def lyndon_words(d, N):
    """All Lyndon words of degree ``<= N`` over ``1..d``, increasing."""
    if d < 1 or N < 1:
        raise DomainError(f"need d >= 1 and N >= 1, got d={d}, N={N}")
    return list(_lyndon_words_cached(int(d), int(N)))


def standard_factorization(w):
    """Split a Lyndon word as ``u + v`` with ``v`` its smallest proper Lyndon suffix."""
    w = as_word(w)
    if len(w) < 2 or not is_lyndon(w):
        raise DomainError(f"{word_str(w)} is not a Lyndon word of degree >= 2")
    v = min(w[i:] for i in range(1, len(w)) if is_lyndon(w[i:]))
    return w[: len(w) - len(v)], v


def bracket_expression(w):
    """Nested-list bracketing of a Lyndon word, e.g. ``[[1, 2], 2]`` for 122."""
    w = as_word(w)
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return [bracket_expression(u), bracket_expression(v)]


def format_bracket(expr):
    if isinstance(expr, int):
        return f"e{expr}"
    return f"[{format_bracket(expr[0])},{format_bracket(expr[1])}]"


@lru_cache(maxsize=None)
def _bracket_cached(w, d, N):
    if len(w) == 1:
        return TruncatedTensor.from_words(d, N, {w: 1.0})
    u, v = standard_factorization(w)
    return bracket(_bracket_cached(u, d, N), _bracket_cached(v, d, N))


def lyndon_bracket(w, N, d=None):
    """Tensor expansion of the Lyndon bracket ``P_w`` in ``T^N(R^d)``.

    ``d`` defaults to the largest letter of ``w`` (at least 2).
    """
    w = as_word(w)
    if not is_lyndon(w):
        raise DomainError(f"{word_str(w)} is not a Lyndon word")
    if d is None:
        d = max(2, max(w))
    if len(w) > N:
        raise RangeError(f"degree {len(w)} exceeds truncation level {N}")
    return _bracket_cached(as_word(w, d), int(d), int(N))


@dataclass
class LyndonExpansion:
    d: int
    N: int
    coords: dict = field(default_factory=dict)
    residual: float = 0.0

    def __getitem__(self, w):
        return self.coords.get(as_word(w), 0.0)

    def to_tensor(self):
        out = TruncatedTensor.zero(self.d, self.N)
        for w, c in self.coords.items():
            if c:
                out = out + c * lyndon_bracket(w, self.N, self.d)
        return out

    def to_dict(self, skip_zero=True):
        return {word_str(w): c for w, c in self.coords.items() if c or not skip_zero}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data, d=2, N=None):
        coords = {as_word(k, d): float(v) for k, v in data.items()}
        for w in coords:
            if not is_lyndon(w):
                raise DomainError(f"{word_str(w)} is not a Lyndon word")
        top = max((len(w) for w in coords), default=1) if N is None else N
        return cls(d, top, coords)


def lie_to_lyndon(t, tol=DEFAULT_RESIDUAL_TOL):
    """Coordinates of a Lie element in the Lyndon bracket basis.

    Sweeps each degree in increasing word order, peeling off ``c_w P_w``
    where ``c_w`` is the current residual coefficient of ``w``; this is
    exact because ``P_u`` only involves words ``>= u``. Raises
    :class:`NotLieError` if the leftover residual exceeds ``tol``.
    """
    if t.coeffs[0] != 0.0:
        raise DomainError("a Lie element has zero scalar part")
    d, N = t.d, t.N
    off = level_offsets(d, N)
    residual = np.array(t.coeffs, dtype=float)
    coords = {}
    if N >= 1:
        for w in lyndon_words(d, N):
            pos = off[len(w)] + word_index(w, d)
            c = float(residual[pos])
            coords[w] = c
            if c != 0.0:
                residual -= c * lyndon_bracket(w, N, d).coeffs
    res = float(np.max(np.abs(residual))) if residual.size else 0.0
    if res > tol:
        raise NotLieError(f"not a Lie element: residual {res:.3e} > tol {tol:.1e}", res)
    return LyndonExpansion(d, N, coords, res)


@lru_cache(maxsize=4096)
def _shuffle_cached(u, v):
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = Counter()
    for w, m in _shuffle_cached(u[:-1], v).items():
        out[w + u[-1:]] += m
    for w, m in _shuffle_cached(u, v[:-1]).items():
        out[w + v[-1:]] += m
    return dict(out)


def shuffle(u, v):
    """Shuffle product of two words as ``{word: multiplicity}``."""
    return dict(_shuffle_cached(as_word(u), as_word(v)))


def shuffle_many(*words):
    """Iterated shuffle of several words."""
    acc = {(): 1}
    for w in words:
        nxt = Counter()
        for a, m in acc.items():
            for b, k in shuffle(a, w).items():
                nxt[b] += m * k
        acc = dict(nxt)
    return acc
