"""Piecewise-linear paths and their truncated signatures."""

import csv
import io
import math

import numpy as np

from . import _kernels
from .exceptions import CSVParseError, DomainError, ShapeError
from .tensor import TruncatedTensor, tensor_exp


class PolyLine:
    """Ordered vertices in R^d; ``closed`` iff first and last vertex coincide exactly."""

    __slots__ = ("vertices", "closed")

    def __init__(self, vertices):
        v = np.array(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 2:
            raise DomainError(f"a PolyLine needs at least 2 vertices, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("PolyLine vertices must be finite")
        v.flags.writeable = False
        self.vertices = v
        self.closed = bool(np.array_equal(v[0], v[-1]))

    @property
    def d(self):
        return self.vertices.shape[1]

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def increments(self):
        return np.diff(self.vertices, axis=0)

    def __len__(self):
        return self.vertices.shape[0]

    def length(self):
        return float(np.sum(np.linalg.norm(self.increments, axis=1)))

    def translate(self, offset):
        return PolyLine(self.vertices + np.asarray(offset, dtype=float))

    def scale(self, factor):
        return PolyLine(self.vertices * float(factor))

    def anchored(self):
        """Copy translated so the first vertex is the origin."""
        return PolyLine(self.vertices - self.vertices[0])

    def refine(self, k):
        """Insert ``k - 1`` equally spaced points into every segment."""
        if k < 1:
            raise DomainError("refinement factor must be >= 1")
        v = self.vertices
        t = np.arange(k)[:, None, None] / k
        pts = v[:-1][None] + t * np.diff(v, axis=0)[None]
        pts = pts.transpose(1, 0, 2).reshape(-1, v.shape[1])
        return PolyLine(np.vstack([pts, v[-1:]]))

    def __eq__(self, other):
        return isinstance(other, PolyLine) and np.array_equal(self.vertices, other.vertices)

    def __repr__(self):
        return f"PolyLine(d={self.d}, n_vertices={len(self)}, closed={self.closed})"

    # CSV interface: header ``x,y`` then one vertex per row
    def to_csv(self, path=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = ["x", "y"] if self.d == 2 else [f"x{i + 1}" for i in range(self.d)]
        writer.writerow(names)
        for row in self.vertices:
            writer.writerow([repr(float(c)) for c in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def read_polyline_csv(source):
    """Parse a ``x,y`` CSV file (path or file-like) into a PolyLine."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise CSVParseError("empty CSV: expected header 'x,y' and at least two vertex rows")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["x", "y"]:
        raise CSVParseError(f"row 1: expected header 'x,y', got {','.join(rows[0])!r}")
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise CSVParseError(f"row {lineno}: expected 2 fields, got {len(row)}")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError as exc:
            raise CSVParseError(f"row {lineno}: {exc}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise CSVParseError(f"row {lineno}: non-finite coordinate")
        pts.append((x, y))
    if len(pts) < 2:
        raise CSVParseError(f"need at least 2 vertices, found {len(pts)}")
    return PolyLine(pts)


def segment_signature(increment, N):
    return tensor_exp(TruncatedTensor.vector(increment, N))


def polyline_signature(p, N):
    """Signature of the polyline: the ordered product of segment exponentials.

    Zero-length segments are skipped. The product runs in a compiled kernel
    (or its numpy twin, see :mod:`sigwind._kernels`).
    """
    inc = p.increments
    flat = _kernels.chen_signature(inc, int(N))
    return TruncatedTensor(p.d, N, flat)


def concatenate(a, b):
    """``a`` followed by ``b`` translated to start at the end of ``a``."""
    if a.d != b.d:
        raise ShapeError(f"cannot concatenate paths in R^{a.d} and R^{b.d}")
    if np.array_equal(b.vertices[0], a.vertices[-1]):
        shifted = b.vertices[1:]  # already attached; avoid rounding in x - c + c
    else:
        shifted = b.vertices[1:] - b.vertices[0] + a.vertices[-1]
    return PolyLine(np.vstack([a.vertices, shifted]))


def concatenate_all(*paths):
    out = paths[0]
    for p in paths[1:]:
        out = concatenate(out, p)
    return out


def reverse(p):
    return PolyLine(p.vertices[::-1])


def segment(increment, start=None):
    inc = np.asarray(increment, dtype=float)
    s = np.zeros_like(inc) if start is None else np.asarray(start, dtype=float)
    return PolyLine([s, s + inc])


def sample_parametric(f, m, closed=False):
    """Vertices ``f(j/m)`` for ``j = 0..m``.

    With ``closed=True`` the final vertex is set to ``f(0)`` so that periodic
    maps give an exactly closed polyline despite rounding at ``t = 1``.
    """
    if m < 1:
        raise DomainError("need m >= 1 sample intervals")
    pts = [np.asarray(f(j / m), dtype=float) for j in range(m + 1)]
    if closed:
        pts[-1] = pts[0]
    return PolyLine(pts)


def close_by_chord(p, tol=0.0):
    """Append the chord back to the start unless the gap is within ``tol``.

    A gap within ``tol`` is closed by snapping the last vertex.
    """
    gap = float(np.linalg.norm(p.end - p.start))
    if gap == 0.0:
        return p
    if gap <= tol:
        v = np.array(p.vertices)
        v[-1] = v[0]
        return PolyLine(v)
    return PolyLine(np.vstack([p.vertices, p.vertices[:1]]))


def circle(radius=1.0, center=(0.0, 0.0), m=256, start_angle=0.0, turns=1):
    """Regular ``m``-gon inscribed in a counter-clockwise circle, exactly closed."""
    cx, cy = center

    def f(t):
        a = start_angle + 2 * math.pi * turns * t
        return (cx + radius * math.cos(a), cy + radius * math.sin(a))

    return sample_parametric(f, m, closed=True)


def unit_square():
    """Counter-clockwise unit square starting at the origin."""
    return PolyLine([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])


def random_closed_polygon(rng, max_vertices=16, low=-2.0, high=2.0, min_vertices=3):
    """Random closed polygon with uniform coordinates; self-intersections allowed."""
    n = int(rng.integers(min_vertices, max_vertices + 1))
    pts = rng.uniform(low, high, size=(n, 2))
    return PolyLine(np.vstack([pts, pts[:1]]))
