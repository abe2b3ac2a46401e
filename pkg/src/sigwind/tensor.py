"""Truncated tensor algebra T^N(R^d) with dense level-major storage.

A word ``(i1, ..., ik)`` with letters in ``1..d`` addresses entry
``sum_j (i_j - 1) * d**(k - j)`` of level ``k`` (first letter most
significant). All levels are concatenated into one flat float64 array.
"""

import json
from itertools import product

import numpy as np

from .exceptions import DomainError, RangeError, ShapeError

DEFAULT_TOL = 1e-10


# -- words ------------------------------------------------------------------


def as_word(w, d=None):
    """Normalise ``w`` to a tuple of 1-based letters.

    Accepts tuples/lists of ints or digit strings such as ``"12122"``;
    the empty string (or tuple) is the empty word.
    """
    if isinstance(w, str):
        letters = tuple(int(ch) for ch in w)
    else:
        letters = tuple(int(x) for x in w)
    if d is not None:
        for x in letters:
            if not 1 <= x <= d:
                raise DomainError(f"letter {x} of word {letters} outside 1..{d}")
    elif any(x < 1 for x in letters):
        raise DomainError(f"letters must be positive, got {letters}")
    return letters


def word_str(w):
    return "".join(str(x) for x in w)


def word_index(w, d):
    idx = 0
    for x in w:
        idx = idx * d + (x - 1)
    return idx


def index_word(idx, k, d):
    letters = []
    for _ in range(k):
        idx, r = divmod(idx, d)
        letters.append(r + 1)
    return tuple(reversed(letters))


def all_words(d, k):
    """Words of length ``k`` in index order."""
    return [tuple(w) for w in product(range(1, d + 1), repeat=k)]


def level_offsets(d, N):
    off = [0]
    for k in range(N + 1):
        off.append(off[-1] + d**k)
    return off


# -- tensors ----------------------------------------------------------------


class TruncatedTensor:
    """Element of the truncated tensor algebra; immutable once built."""

    __slots__ = ("d", "N", "_coeffs", "_off")

    def __init__(self, d, N, coeffs=None):
        if d < 1 or N < 0:
            raise ShapeError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
        self.d = int(d)
        self.N = int(N)
        self._off = level_offsets(self.d, self.N)
        size = self._off[-1]
        if coeffs is None:
            arr = np.zeros(size)
        else:
            arr = np.array(coeffs, dtype=np.float64).ravel()
            if arr.size != size:
                raise ShapeError(f"expected {size} coefficients for d={d}, N={N}, got {arr.size}")
            if not np.all(np.isfinite(arr)):
                raise DomainError("tensor coefficients must be finite")
        arr.flags.writeable = False
        self._coeffs = arr

    # construction helpers
    @classmethod
    def zero(cls, d, N):
        return cls(d, N)

    @classmethod
    def identity(cls, d, N):
        c = np.zeros(level_offsets(d, N)[-1])
        c[0] = 1.0
        return cls(d, N, c)

    @classmethod
    def from_levels(cls, d, N, levels):
        return cls(d, N, np.concatenate([np.asarray(lv, dtype=float).ravel() for lv in levels]))

    @classmethod
    def from_words(cls, d, N, mapping):
        off = level_offsets(d, N)
        c = np.zeros(off[-1])
        for w, v in mapping.items():
            w = as_word(w, d)
            if len(w) > N:
                raise RangeError(f"word {word_str(w)} exceeds level {N}")
            c[off[len(w)] + word_index(w, d)] += v
        return cls(d, N, c)

    @classmethod
    def vector(cls, x, N):
        """Level-1 tensor holding the vector ``x``."""
        x = np.asarray(x, dtype=float).ravel()
        d = x.size
        c = np.zeros(level_offsets(d, N)[-1])
        if N >= 1:
            c[1:1 + d] = x
        return cls(d, N, c)

    @property
    def coeffs(self):
        return self._coeffs

    def level(self, k):
        if not 0 <= k <= self.N:
            raise RangeError(f"level {k} outside 0..{self.N}")
        return self._coeffs[self._off[k]:self._off[k + 1]]

    @property
    def levels(self):
        return [self.level(k) for k in range(self.N + 1)]

    def __getitem__(self, w):
        return word_coefficient(self, w)

    def items(self, skip_zero=True):
        """Yield ``(word, coefficient)`` in level-major index order."""
        for k in range(self.N + 1):
            lv = self.level(k)
            for i, v in enumerate(lv):
                if skip_zero and v == 0.0:
                    continue
                yield index_word(i, k, self.d), float(v)

    def truncate(self, N):
        if N > self.N:
            raise RangeError(f"cannot raise truncation level {self.N} to {N}")
        return TruncatedTensor(self.d, N, self._coeffs[: self._off[N + 1]])

    def project_level(self, k):
        """Tensor keeping only level ``k``."""
        c = np.zeros_like(self._coeffs)
        c[self._off[k]:self._off[k + 1]] = self.level(k)
        return TruncatedTensor(self.d, self.N, c)

    def norm(self):
        return float(np.max(np.abs(self._coeffs))) if self._coeffs.size else 0.0

    def allclose(self, other, atol=DEFAULT_TOL):
        _check_compatible(self, other)
        return bool(np.max(np.abs(self._coeffs - other._coeffs)) <= atol)

    # arithmetic sugar over the module functions
    def __add__(self, other):
        return tensor_linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        return tensor_linear_combine(1.0, self, -1.0, other)

    def __neg__(self):
        return TruncatedTensor(self.d, self.N, -self._coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, TruncatedTensor):
            return NotImplemented
        return TruncatedTensor(self.d, self.N, float(scalar) * self._coeffs)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TruncatedTensor(self.d, self.N, self._coeffs / float(scalar))

    def __matmul__(self, other):
        return tensor_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, TruncatedTensor):
            return NotImplemented
        return self.d == other.d and self.N == other.N and np.array_equal(self._coeffs, other._coeffs)

    def __hash__(self):
        return hash((self.d, self.N, self._coeffs.tobytes()))

    def __repr__(self):
        terms = [f"{v:+.6g}*{word_str(w) or '1'}" for w, v in self.items()]
        body = " ".join(terms[:8]) + (" ..." if len(terms) > 8 else "")
        return f"TruncatedTensor(d={self.d}, N={self.N}: {body or '0'})"

    # serialisation
    def to_dict(self):
        return {
            "d": self.d,
            "N": self.N,
            "coeffs": {word_str(w): v for w, v in self.items()},
        }

    @classmethod
    def from_dict(cls, data):
        return cls.from_words(int(data["d"]), int(data["N"]), {k: float(v) for k, v in data["coeffs"].items()})

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _check_compatible(a, b):
    if a.d != b.d or a.N != b.N:
        raise ShapeError(f"shape mismatch: (d={a.d}, N={a.N}) vs (d={b.d}, N={b.N})")


def tensor_linear_combine(alpha, a, beta, b):
    _check_compatible(a, b)
    return TruncatedTensor(a.d, a.N, alpha * a.coeffs + beta * b.coeffs)


def tensor_mul(a, b):
    """Truncated tensor product: level n is sum_i a_i (x) b_{n-i}."""
    _check_compatible(a, b)
    d, N = a.d, a.N
    la, lb = a.levels, b.levels
    out = []
    for n in range(N + 1):
        acc = la[0][0] * lb[n]
        for i in range(1, n + 1):
            acc = acc + np.outer(la[i], lb[n - i]).ravel()
        out.append(acc)
    return TruncatedTensor.from_levels(d, N, out)


def tensor_exp(a):
    if a.coeffs[0] != 0.0:
        raise DomainError(f"tensor_exp needs a zero scalar part, got {a.coeffs[0]}")
    result = TruncatedTensor.identity(a.d, a.N)
    term = result
    for j in range(1, a.N + 1):
        term = tensor_mul(term, a) / j
        result = result + term
    return result


def tensor_log(a):
    if a.coeffs[0] != 1.0:
        raise DomainError(f"tensor_log needs scalar part 1, got {a.coeffs[0]}")
    x = a - TruncatedTensor.identity(a.d, a.N)
    result = TruncatedTensor.zero(a.d, a.N)
    power = TruncatedTensor.identity(a.d, a.N)
    for j in range(1, a.N + 1):
        power = tensor_mul(power, x)
        result = result + power * ((-1.0) ** (j + 1) / j)
    return result


def tensor_inverse(a):
    """Inverse of a tensor with scalar part 1 (finite geometric series)."""
    if a.coeffs[0] != 1.0:
        raise DomainError("tensor_inverse needs scalar part 1")
    x = TruncatedTensor.identity(a.d, a.N) - a
    result = TruncatedTensor.identity(a.d, a.N)
    power = result
    for _ in range(a.N):
        power = tensor_mul(power, x)
        result = result + power
    return result


def word_coefficient(a, w):
    w = as_word(w, a.d)
    if len(w) > a.N:
        raise RangeError(f"word {word_str(w)} has degree {len(w)} > N={a.N}")
    return float(a.level(len(w))[word_index(w, a.d)])


def bracket(a, b):
    """Commutator ``a (x) b - b (x) a``."""
    return tensor_mul(a, b) - tensor_mul(b, a)


def shuffle_defect(g, max_degree=None):
    """Largest violation of the shuffle identity over word pairs.

    Checks ``g[u] * g[v] == sum over shuffles of g[w]`` for all words with
    ``len(u) + len(v) <= max_degree`` (default ``g.N``).
    """
    from .lyndon import shuffle

    top = g.N if max_degree is None else max_degree
    worst = 0.0
    for r in range(top + 1):
        for s in range(r, top - r + 1):
            for u in all_words(g.d, r):
                for v in all_words(g.d, s):
                    rhs = sum(m * word_coefficient(g, w) for w, m in shuffle(u, v).items())
                    worst = max(worst, abs(word_coefficient(g, u) * word_coefficient(g, v) - rhs))
    return worst


def is_group_like(g, tol=DEFAULT_TOL):
    return g.coeffs[0] == 1.0 and shuffle_defect(g) <= tol
