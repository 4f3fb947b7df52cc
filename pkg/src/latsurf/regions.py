"""Convex regions beyond lattice polygons, dilations and lattice-point remainders.

All regions expose ``lattice_points()`` (exact enumeration, boundary
inclusive), ``contains(p)``, ``measure()`` and ``dilate(r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from .exceptions import DegenerateError, DomainError
from .geometry import (
    LatticePolygon,
    Vec,
    _halfplane_rows,
    _rows_to_points,
    as_vec,
    convex_hull,
    cross,
    dot,
    enumerate_lattice_points,
    perp,
    reduce,
)

RationalVec = tuple[Fraction, Fraction]


def _frac_vec(p) -> RationalVec:
    return (Fraction(p[0]), Fraction(p[1]))


def _exact(r) -> Fraction:
    if isinstance(r, str):
        return Fraction(r)
    return Fraction(r)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _sqrt_interval(s: Fraction) -> tuple[int, int]:
    """Integers ``a <= b`` bracketing ``sqrt(s)``: ``a = floor(sqrt s)``, ``b = ceil(sqrt s)``."""
    # floor(sqrt(p/q)) = isqrt(p*q) // q is exact
    p, q = s.numerator, s.denominator
    a = math.isqrt(p * q) // q
    b = a if a * a == s else a + 1
    return a, b


def _disk_row(center: RationalVec, r2: Fraction, y: int) -> tuple[int, int] | None:
    """Integer ``x`` range with ``(x - cx)^2 + (y - cy)^2 <= r2``."""
    s = r2 - (y - center[1]) ** 2
    if s < 0:
        return None
    cx = center[0]
    # largest x with x - cx <= sqrt(s): scan from a float guess, fixing exactly
    hi = _floor(cx) + math.isqrt(_floor(s)) + 1
    while (hi - cx) > 0 and (hi - cx) ** 2 > s:
        hi -= 1
    while (hi + 1 - cx) <= 0 or (hi + 1 - cx) ** 2 <= s:
        hi += 1
    lo = _ceil(cx) - math.isqrt(_floor(s)) - 1
    while (cx - lo) > 0 and (cx - lo) ** 2 > s:
        lo += 1
    while (cx - (lo - 1)) <= 0 or (cx - (lo - 1)) ** 2 <= s:
        lo -= 1
    if lo > hi:
        return None
    return lo, hi


def _halfplane_row(halfplanes, y: int) -> tuple[int | None, int | None] | None:
    """Integer ``x`` bounds in row ``y`` (``None`` for an open side), or ``None`` if empty."""
    lo, hi = None, None
    for (a, b), c in halfplanes:
        rhs = Fraction(c) - b * y
        if a == 0:
            if rhs < 0:
                return None
        elif a > 0:
            bound = _floor(rhs / a)
            hi = bound if hi is None else min(hi, bound)
        else:
            bound = _ceil(rhs / a)
            lo = bound if lo is None else max(lo, bound)
    return lo, hi


# --- rational half-plane polygons --------------------------------------------

class RationalPolygon:
    """Bounded intersection of half-planes ``x . n_i <= c_i`` (integer ``n_i``, rational ``c_i``)."""

    def __init__(self, halfplanes: Sequence[tuple[Sequence[int], object]]):
        hp = []
        for n, c in halfplanes:
            n = as_vec(n)
            if n == (0, 0):
                raise DomainError("half-plane normal must be nonzero")
            hp.append((n, _exact(c)))
        if len(hp) < 3:
            raise DegenerateError("need at least three half-planes for a bounded region")
        angles = sorted(math.atan2(n[1], n[0]) for n, _ in hp)
        gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
        if max(gaps) >= math.pi - 1e-15:
            raise DomainError("half-planes do not bound a region")
        self.halfplanes = tuple(hp)
        self.vertices = self._vertices()
        if len(self.vertices) < 3:
            raise DegenerateError("half-plane intersection has empty interior")

    def _vertices(self) -> list[RationalVec]:
        pts = set()
        hp = self.halfplanes
        for i in range(len(hp)):
            for j in range(i + 1, len(hp)):
                (a1, b1), c1 = hp[i]
                (a2, b2), c2 = hp[j]
                det = a1 * b2 - a2 * b1
                if det == 0:
                    continue
                p = ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)
                if self.contains(p):
                    pts.add(p)
        if len(pts) < 3:
            return list(pts)
        # CCW order around the centroid; exact hull of a convex point set
        pts = sorted(pts)
        lower, upper = [], []
        for seq, chain in ((pts, lower), (list(reversed(pts)), upper)):
            for p in seq:
                while len(chain) >= 2 and _orient(chain[-2], chain[-1], p) <= 0:
                    chain.pop()
                chain.append(p)
        return lower[:-1] + upper[:-1]

    def contains(self, p) -> bool:
        return all(dot(n, p) <= c for n, c in self.halfplanes)

    @property
    def area(self) -> Fraction:
        v = self.vertices
        return sum((cross(v[i], v[(i + 1) % len(v)]) for i in range(len(v))), Fraction(0)) / 2

    def measure(self) -> float:
        return float(self.area)

    def bounding_box(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def lattice_points(self) -> np.ndarray:
        _, ymin, _, ymax = self.bounding_box()
        return _rows_to_points(_halfplane_rows(self.halfplanes, _ceil(ymin), _floor(ymax)))

    def dilate(self, r) -> "RationalPolygon":
        r = _exact(r)
        if r <= 0:
            raise DomainError("dilation factor must be positive")
        return RationalPolygon([(n, c * r) for n, c in self.halfplanes])

    def __repr__(self):
        return f"RationalPolygon({[(n, str(c)) for n, c in self.halfplanes]})"


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


# --- disks -------------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    """Closed disk with rational center and rational squared radius."""

    center: RationalVec
    radius2: Fraction

    def __init__(self, center=(0, 0), radius2=None, radius=None):
        if (radius2 is None) == (radius is None):
            raise DomainError("give exactly one of radius2 and radius")
        r2 = _exact(radius2) if radius2 is not None else _exact(radius) ** 2
        if r2 <= 0:
            raise DomainError("radius must be positive")
        object.__setattr__(self, "center", _frac_vec(center))
        object.__setattr__(self, "radius2", r2)

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    def contains(self, p) -> bool:
        return (p[0] - self.center[0]) ** 2 + (p[1] - self.center[1]) ** 2 <= self.radius2

    def measure(self) -> float:
        return math.pi * float(self.radius2)

    def row_ranges(self):
        lo, hi = _sqrt_interval(self.radius2)
        cy = self.center[1]
        for y in range(_ceil(cy) - hi, _floor(cy) + hi + 1):
            row = _disk_row(self.center, self.radius2, y)
            if row is not None:
                yield (y, *row)

    def lattice_points(self) -> np.ndarray:
        return _rows_to_points(self.row_ranges())

    def dilate(self, r) -> "Disk":
        r = _exact(r)
        if r <= 0:
            raise DomainError("dilation factor must be positive")
        return Disk((self.center[0] * r, self.center[1] * r), radius2=self.radius2 * r * r)


# --- mixed regions -----------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Flat boundary piece between two lattice points."""

    start: Vec
    end: Vec

    def __post_init__(self):
        object.__setattr__(self, "start", as_vec(self.start))
        object.__setattr__(self, "end", as_vec(self.end))
        if self.start == self.end:
            raise DegenerateError("segment has zero length")

    @property
    def edge(self) -> Vec:
        return (self.end[0] - self.start[0], self.end[1] - self.start[1])

    @property
    def miller_normal(self) -> Vec:
        return perp(reduce(self.edge)[1])

    @property
    def length(self) -> float:
        return math.hypot(*self.edge)

    @property
    def halfplane(self) -> tuple[Vec, Fraction]:
        n = self.miller_normal
        return n, Fraction(dot(n, self.start))

    def scaled(self, k: int) -> "Segment":
        return Segment((k * self.start[0], k * self.start[1]), (k * self.end[0], k * self.end[1]))


@dataclass(frozen=True)
class Arc:
    """Counter-clockwise circular arc from ``start`` to ``end`` around ``center``."""

    start: Vec
    end: Vec
    center: RationalVec
    radius2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "start", as_vec(self.start))
        object.__setattr__(self, "end", as_vec(self.end))
        object.__setattr__(self, "center", _frac_vec(self.center))
        object.__setattr__(self, "radius2", _exact(self.radius2))
        for p in (self.start, self.end):
            if (p[0] - self.center[0]) ** 2 + (p[1] - self.center[1]) ** 2 != self.radius2:
                raise DomainError(f"arc endpoint {p} is not on its circle")
        if self.start == self.end:
            raise DegenerateError("arc endpoints coincide")

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    def _angle(self, p) -> float:
        return math.atan2(float(p[1] - self.center[1]), float(p[0] - self.center[0]))

    @property
    def angles(self) -> tuple[float, float]:
        """Start and end angles with ``0 < end - start < 2 pi``."""
        a0 = self._angle(self.start)
        a1 = self._angle(self.end)
        while a1 <= a0:
            a1 += 2 * math.pi
        return a0, a1

    @property
    def span(self) -> float:
        a0, a1 = self.angles
        return a1 - a0

    def covers_direction(self, d) -> bool:
        """Whether the outward normal ``d`` occurs strictly inside the arc (exact)."""
        c = self.center
        u = (self.start[0] - c[0], self.start[1] - c[1])
        v = (self.end[0] - c[0], self.end[1] - c[1])
        cu, cv, uv = cross(u, d), cross(d, v), cross(u, v)
        if uv > 0:
            return cu > 0 and cv > 0
        # arc longer than a half turn: excluded region is the short wedge from v to u
        return not (cross(v, d) >= 0 and cross(d, u) >= 0)

    def tangent_at(self, p) -> RationalVec:
        return (-(p[1] - self.center[1]), p[0] - self.center[0])

    def scaled(self, k: int) -> "Arc":
        return Arc(
            (k * self.start[0], k * self.start[1]),
            (k * self.end[0], k * self.end[1]),
            (self.center[0] * k, self.center[1] * k),
            self.radius2 * k * k,
        )


Piece = Union[Segment, Arc]


class MixedRegion:
    """Convex region bounded by lattice segments and circular arcs, listed counter-clockwise.

    The region must equal the intersection of the segments' half-planes
    with the arcs' disks, and no segment may meet an arc tangentially.
    """

    def __init__(self, pieces: Sequence[Piece]):
        pieces = tuple(pieces)
        if len(pieces) < 2:
            raise DegenerateError("need at least two boundary pieces")
        for a, b in zip(pieces, pieces[1:] + pieces[:1]):
            if a.end != b.start:
                raise DomainError(f"boundary is not closed between {a.end} and {b.start}")
        self.pieces = pieces
        self.segments = [p for p in pieces if isinstance(p, Segment)]
        self.arcs = [p for p in pieces if isinstance(p, Arc)]
        self.halfplanes = [s.halfplane for s in self.segments]
        self._check_junctions()
        self._check_intersection()

    def _check_junctions(self):
        for a, b in zip(self.pieces, self.pieces[1:] + self.pieces[:1]):
            p = a.end
            d_in = a.edge if isinstance(a, Segment) else a.tangent_at(p)
            d_out = b.edge if isinstance(b, Segment) else b.tangent_at(p)
            turn = cross(d_in, d_out)
            if turn == 0:
                raise DomainError(f"boundary pieces meet tangentially at {p}")
            if turn < 0:
                raise DomainError(f"boundary turns clockwise at {p}; region is not convex")

    def _check_intersection(self):
        verts = [p.start for p in self.pieces]
        for v in verts:
            if not self.contains(v):
                raise DomainError(f"junction {v} violates another boundary piece")
        for arc in self.arcs:
            for n, c in self.halfplanes:
                if arc.covers_direction(n):
                    gap = c - dot(n, arc.center)
                    if gap < 0 or gap * gap < arc.radius2 * dot(n, n):
                        raise DomainError("an arc crosses a flat facet's supporting line")
            for other in self.arcs:
                if other is arc:
                    continue
                d = (arc.center[0] - other.center[0], arc.center[1] - other.center[1])
                if d != (0, 0) and arc.covers_direction(d):
                    if math.hypot(float(d[0]), float(d[1])) + arc.radius > other.radius * (1 + 1e-14):
                        raise DomainError("an arc leaves another arc's disk")

    def contains(self, p) -> bool:
        if any(dot(n, p) > c for n, c in self.halfplanes):
            return False
        return all((p[0] - a.center[0]) ** 2 + (p[1] - a.center[1]) ** 2 <= a.radius2 for a in self.arcs)

    def measure(self) -> float:
        verts = [p.start for p in self.pieces]
        poly = sum(cross(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))) / 2
        caps = sum(0.5 * float(a.radius2) * (a.span - math.sin(a.span)) for a in self.arcs)
        return float(poly) + caps

    def bounding_box(self):
        pts = [p.start for p in self.pieces]
        xs = [Fraction(p[0]) for p in pts]
        ys = [Fraction(p[1]) for p in pts]
        for a in self.arcs:
            lo, hi = _sqrt_interval(a.radius2)
            xs += [a.center[0] - hi, a.center[0] + hi]
            ys += [a.center[1] - hi, a.center[1] + hi]
        return min(xs), min(ys), max(xs), max(ys)

    def row_ranges(self):
        _, ymin, _, ymax = self.bounding_box()
        for y in range(_ceil(ymin), _floor(ymax) + 1):
            row = _halfplane_row(self.halfplanes, y)
            if row is None:
                continue
            lo, hi = row
            for a in self.arcs:
                d = _disk_row(a.center, a.radius2, y)
                if d is None:
                    lo, hi = 1, 0
                    break
                lo = d[0] if lo is None else max(lo, d[0])
                hi = d[1] if hi is None else min(hi, d[1])
            if lo is not None and hi is not None and lo <= hi:
                yield y, lo, hi

    def lattice_points(self) -> np.ndarray:
        return _rows_to_points(self.row_ranges())

    def dilate(self, r) -> "MixedRegion":
        if int(r) != r or r < 1:
            raise DomainError("mixed regions dilate by positive integers only")
        return MixedRegion([p.scaled(int(r)) for p in self.pieces])


def circular_segment(center, radius2, chord_start, chord_end) -> MixedRegion:
    """Part of a disk to the left of the chord ``chord_start -> chord_end``."""
    chord = Segment(chord_start, chord_end)
    arc = Arc(chord.end, chord.start, center, radius2)
    return MixedRegion([chord, arc])


ConvexRegion = Union[LatticePolygon, RationalPolygon, Disk, MixedRegion]


# --- scaling and remainders --------------------------------------------------

def dilate(region: ConvexRegion, r) -> ConvexRegion:
    """The dilation ``r * region``; non-integer dilations of lattice polygons become rational polygons."""
    if isinstance(region, LatticePolygon):
        if int(r) == r and r >= 1:
            return region.scaled(int(r))
        return RationalPolygon(region.halfplanes()).dilate(r)
    if hasattr(region, "dilate"):
        return region.dilate(r)
    raise DomainError(f"cannot dilate {type(region).__name__}")


def map_scales(fn: Callable, scales: Sequence, workers: int | None = None) -> list:
    """Evaluate ``fn`` at every scale concurrently; results keep the input order."""
    scales = list(scales)
    if workers == 1 or len(scales) <= 1:
        return [fn(s) for s in scales]
    with ThreadPoolExecutor(max_workers=workers or min(4, len(scales))) as pool:
        return list(pool.map(fn, scales))


class RemainderSample(NamedTuple):
    scale: float
    count: int
    measure: float
    remainder: float


def lattice_remainder(region: ConvexRegion, r) -> RemainderSample:
    """Lattice point count of ``r * region`` minus its area."""
    scaled = dilate(region, r)
    count = len(enumerate_lattice_points(scaled))
    measure = scaled.measure()
    return RemainderSample(float(r), count, measure, count - measure)


def remainder_study(region: ConvexRegion, scales: Sequence, workers: int | None = None) -> list[RemainderSample]:
    """One :class:`RemainderSample` per scale, in input order."""
    scales = list(scales)
    if any(s <= 0 for s in scales):
        raise DomainError("scales must be positive")
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise DomainError("scales must be increasing")
    return map_scales(lambda s: lattice_remainder(region, s), scales, workers)


def hull_of_scaled(region: ConvexRegion, r) -> LatticePolygon:
    """Convex hull of the lattice points of ``r * region``."""
    pts = enumerate_lattice_points(dilate(region, r))
    return convex_hull(pts)


def equivalent_region(P: LatticePolygon, k: int) -> RationalPolygon:
    """Facets of ``kP`` pushed out by half an interplanar spacing.

    The result has the same lattice points as ``kP``.
    """
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    return RationalPolygon([(f.miller_normal, Fraction(2 * int(k) * f.offset + 1, 2)) for f in P.facets])


def abs_flux(P: LatticePolygon, w: Sequence[int]) -> int:
    """Boundary integral of ``|w . n|``, an exact integer."""
    w = as_vec(w)
    if w == (0, 0):
        raise DomainError("w must be nonzero")
    return sum(abs(dot(w, perp(m))) for m in P.edges)


def inverse_miller_integral(P: LatticePolygon) -> int:
    """Boundary integral of ``1/|n|`` (Miller normal length); equals the boundary lattice count."""
    return sum(f.lattice_length for f in P.facets)
