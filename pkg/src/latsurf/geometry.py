"""Exact integer and rational geometry on the square lattice Z^2.

Every predicate here (orientation, membership, distances used in comparisons)
is evaluated with Python integers or :class:`fractions.Fraction`; floats only
appear in values reported for display.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import DegenerateError, DomainError

Vec = tuple[int, int]


def perp(v: Sequence[int]) -> Vec:
    """Return ``v`` rotated clockwise by a right angle, ``(y, -x)``."""
    return (v[1], -v[0])


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def orient(p: Sequence, q: Sequence, r: Sequence):
    """Twice the signed area of the triangle ``pqr`` (positive when CCW)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def as_vec(v: Sequence) -> Vec:
    x, y = v
    if int(x) != x or int(y) != y:
        raise DomainError(f"{v!r} is not a lattice vector")
    return (int(x), int(y))


def reduce(v: Sequence[int]) -> tuple[int, Vec, Vec]:
    """Split a nonzero lattice vector into ``(gcd, primitive part, perp)``.

    >>> reduce((4, 6))
    (2, (2, 3), (6, -4))
    """
    x, y = as_vec(v)
    if x == 0 and y == 0:
        raise DomainError("the zero vector has no reduction")
    g = math.gcd(x, y)
    return g, (x // g, y // g), (y, -x)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, s, t) with a*s + b*t == g >= 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def bezout_companion(w: Sequence[int]) -> Vec:
    """Return ``u`` with ``u . perp(w) == 1`` so that ``{u, w}`` is a lattice basis.

    Among the solutions ``u + t*w`` the one of smallest squared norm is
    returned, ties broken lexicographically.
    """
    a, b = as_vec(w)
    g, s, t = _ext_gcd(a, b)
    if g != 1:
        raise DomainError(f"{(a, b)} is not primitive (gcd {g})")
    # u . (b, -a) = u1*b - u2*a = 1 is solved by u = (t, -s)
    u1, u2 = t, -s
    norm2 = a * a + b * b
    t0 = -(u1 * a + u2 * b) // norm2
    best = None
    for shift in (t0 - 1, t0, t0 + 1, t0 + 2):
        cand = (u1 + shift * a, u2 + shift * b)
        key = (cand[0] ** 2 + cand[1] ** 2, cand)
        if best is None or key < best:
            best = key
    return best[1]


class FacetData(NamedTuple):
    """Geometry of one polygon edge ``S_i`` running from ``v_i`` to ``v_{i+1}``."""

    length: float
    unit_normal: tuple[float, float]
    miller_normal: Vec
    lattice_spacing: float
    edge: Vec
    lattice_length: int  # gcd of the edge vector == |S_i| / |miller_normal|
    offset: int  # miller_normal . x <= offset on the polygon


class PolygonMetrics(NamedTuple):
    area2: int
    facets: list[FacetData]
    delta: float


def _segment_dist2(p: Sequence[int], a: Sequence[int], b: Sequence[int]) -> Fraction:
    ab = (b[0] - a[0], b[1] - a[1])
    ap = (p[0] - a[0], p[1] - a[1])
    num = dot(ap, ab)
    den = dot(ab, ab)
    if num <= 0:
        return Fraction(dot(ap, ap))
    if num >= den:
        bp = (p[0] - b[0], p[1] - b[1])
        return Fraction(dot(bp, bp))
    return Fraction(cross(ab, ap) ** 2, den)


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon given by its counter-clockwise vertex cycle."""

    vertices: tuple[Vec, ...]

    def __init__(self, vertices: Iterable[Sequence[int]]):
        verts = tuple(as_vec(v) for v in vertices)
        n = len(verts)
        if n < 3:
            raise DegenerateError("a polygon needs at least 3 vertices")
        for i in range(n):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % n]
            if a == b:
                raise DegenerateError(f"zero-length facet at vertex {b}")
            o = orient(a, b, c)
            if o == 0:
                raise DegenerateError(f"collinear vertices around {b}")
            if o < 0:
                raise DomainError(
                    f"vertices must form a strictly convex counter-clockwise cycle (turn at {b})"
                )
        # a locally convex cycle can still wind more than once
        edges = self._edges_of(verts)
        turning = sum(math.atan2(cross(e1, e2), dot(e1, e2)) for e1, e2 in zip(edges, edges[1:] + edges[:1]))
        if abs(turning - 2 * math.pi) > 1e-6:
            raise DomainError("vertex cycle is not simple")
        object.__setattr__(self, "vertices", verts)

    @staticmethod
    def _edges_of(verts):
        n = len(verts)
        return [(verts[(i + 1) % n][0] - verts[i][0], verts[(i + 1) % n][1] - verts[i][1]) for i in range(n)]

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def edges(self) -> list[Vec]:
        return self._edges_of(self.vertices)

    @cached_property
    def area2(self) -> int:
        v = self.vertices
        return sum(cross(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    @property
    def area(self) -> Fraction:
        return Fraction(self.area2, 2)

    @cached_property
    def facets(self) -> list[FacetData]:
        out = []
        for v, m in zip(self.vertices, self.edges):
            g, mbar, _ = reduce(m)
            nbar = perp(mbar)
            norm = math.hypot(*nbar)
            out.append(
                FacetData(
                    length=math.hypot(*m),
                    unit_normal=(nbar[0] / norm, nbar[1] / norm),
                    miller_normal=nbar,
                    lattice_spacing=1.0 / norm,
                    edge=m,
                    lattice_length=g,
                    offset=dot(nbar, v),
                )
            )
        return out

    @property
    def miller_normals(self) -> list[Vec]:
        return [f.miller_normal for f in self.facets]

    @cached_property
    def delta2(self) -> Fraction:
        """Exact squared minimum distance from a vertex to a facet not containing it."""
        v = self.vertices
        n = len(v)
        best = None
        for i in range(n):
            for j in range(n):
                if i == j or i == (j + 1) % n:
                    continue
                d2 = _segment_dist2(v[i], v[j], v[(j + 1) % n])
                if best is None or d2 < best:
                    best = d2
        return best

    @property
    def delta(self) -> float:
        return _sqrt_floor(self.delta2)

    def halfplanes(self) -> list[tuple[Vec, Fraction]]:
        return [(f.miller_normal, Fraction(f.offset)) for f in self.facets]

    def scaled(self, k: int) -> "LatticePolygon":
        if int(k) != k or k <= 0:
            raise DomainError("lattice polygons scale by positive integers only")
        k = int(k)
        return LatticePolygon([(k * x, k * y) for x, y in self.vertices])

    def translated(self, t: Sequence[int]) -> "LatticePolygon":
        tx, ty = as_vec(t)
        return LatticePolygon([(x + tx, y + ty) for x, y in self.vertices])

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, p: Sequence) -> bool:
        return all(dot(n, p) <= c for n, c in self.halfplanes())

    def row_ranges(self):
        return _halfplane_rows(self.halfplanes(), *_int_box(self.bounding_box()))

    def lattice_points(self) -> np.ndarray:
        return _rows_to_points(self.row_ranges())

    def measure(self) -> float:
        return self.area2 / 2


def _sqrt_floor(x: Fraction) -> float:
    r = math.sqrt(x)
    # nudge down until r*r <= x exactly
    while Fraction(r) * Fraction(r) > x:
        r = math.nextafter(r, 0.0)
    return r


def polygon_metrics(P: LatticePolygon) -> PolygonMetrics:
    return PolygonMetrics(P.area2, P.facets, P.delta)


class PickCount(NamedTuple):
    total: int
    boundary: int
    interior: int


def pick_count(P: LatticePolygon) -> PickCount:
    """Lattice point count of a closed lattice polygon from area and facet gcds."""
    boundary = sum(f.lattice_length for f in P.facets)
    # |P| + B/2 + 1 with |P| = area2/2
    total2 = P.area2 + boundary + 2
    assert total2 % 2 == 0
    total = total2 // 2
    return PickCount(total, boundary, total - boundary)


# --- row-wise exact enumeration helpers --------------------------------------

def _int_box(box) -> tuple[int, int]:
    _, ymin, _, ymax = box
    return math.ceil(ymin), math.floor(ymax)


def _halfplane_rows(halfplanes, ymin: int, ymax: int):
    """Yield ``(y, xlo, xhi)`` rows of lattice points satisfying every ``n.x <= c``."""
    hp = []
    for (a, b), c in halfplanes:
        c = Fraction(c)
        hp.append((a, b, c.numerator, c.denominator))
    for y in range(ymin, ymax + 1):
        lo, hi = None, None
        ok = True
        for a, b, p, q in hp:
            # a*x <= p/q - b*y  <=>  q*a*x <= p - q*b*y
            rhs = p - q * b * y
            qa = q * a
            if qa == 0:
                if rhs < 0:
                    ok = False
                    break
            elif qa > 0:
                bound = rhs // qa
                hi = bound if hi is None else min(hi, bound)
            else:
                bound = _ceil_div(rhs, qa)
                lo = bound if lo is None else max(lo, bound)
        if not ok or lo is None or hi is None or lo > hi:
            continue
        yield y, lo, hi


def _ceil_div(num: int, den: int) -> int:
    return -((-num) // den)


def _rows_to_points(rows) -> np.ndarray:
    chunks = []
    for y, lo, hi in rows:
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        chunks.append(np.column_stack([xs, np.full_like(xs, y)]))
    if not chunks:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(chunks)


def enumerate_lattice_points(region) -> np.ndarray:
    """All lattice points of a closed bounded convex region, as an ``(n, 2)`` int array.

    Points are ordered by row (``y``) then by ``x``.
    """
    if not hasattr(region, "lattice_points"):
        raise DomainError(f"cannot enumerate lattice points of {type(region).__name__}")
    return region.lattice_points()


def region_grid(region) -> tuple[np.ndarray, int, int]:
    """Boolean occupancy grid of the region's lattice points plus its origin offset."""
    pts = enumerate_lattice_points(region)
    if len(pts) == 0:
        return np.zeros((0, 0), dtype=bool), 0, 0
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    grid = np.zeros((int(x1 - x0 + 1), int(y1 - y0 + 1)), dtype=bool)
    grid[pts[:, 0] - x0, pts[:, 1] - y0] = True
    return grid, int(x0), int(y0)


# --- convex hull ------------------------------------------------------------

def _row_extremes(pts: np.ndarray) -> np.ndarray:
    # only the leftmost and rightmost point of each row can be hull vertices
    order = np.lexsort((pts[:, 0], pts[:, 1]))
    pts = pts[order]
    ys = pts[:, 1]
    first = np.r_[True, ys[1:] != ys[:-1]]
    last = np.r_[ys[1:] != ys[:-1], True]
    return np.unique(pts[first | last], axis=0)


def convex_hull(points) -> LatticePolygon:
    """Strictly convex CCW hull of lattice points (collinear boundary points dropped)."""
    arr = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    if len(arr) > 64:
        arr = _row_extremes(arr)
    pts = sorted({(int(x), int(y)) for x, y in arr})
    if len(pts) < 3:
        raise DegenerateError("need at least three distinct points for a hull")

    def half(seq):
        chain: list[Vec] = []
        for p in seq:
            while len(chain) >= 2 and orient(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateError("all points are collinear")
    return LatticePolygon(hull)
