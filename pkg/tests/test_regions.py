import math
from fractions import Fraction

import numpy as np
import pytest

from latsurf import (
    Arc,
    Disk,
    DomainError,
    LatticePolygon,
    MixedRegion,
    RationalPolygon,
    Segment,
    abs_flux,
    circular_segment,
    dilate,
    enumerate_lattice_points,
    equivalent_region,
    hull_of_scaled,
    inverse_miller_integral,
    lattice_remainder,
    pick_count,
    remainder_study,
)
from latsurf.regions import map_scales

from _gen import random_polygon

UNIT = LatticePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
TRI2 = LatticePolygon([(0, 0), (2, 0), (0, 2)])


def _pointset(region):
    return {tuple(p) for p in enumerate_lattice_points(region).tolist()}


def test_dilate_examples():
    assert dilate(UNIT, 3).vertices == ((0, 0), (3, 0), (3, 3), (0, 3))
    assert dilate(Disk(radius2=1), 10).radius2 == 100
    half = dilate(TRI2, Fraction(5, 2))
    assert isinstance(half, RationalPolygon)
    assert half.area == Fraction(25, 2)
    assert _pointset(half) == {(x, y) for x in range(6) for y in range(6) if x + y <= 5}


def test_remainder_examples():
    s = lattice_remainder(UNIT, 7)
    assert (s.count, s.measure, s.remainder) == (64, 49.0, 15.0)
    assert lattice_remainder(UNIT, 1).remainder == 3
    d = lattice_remainder(Disk(radius=1), 10)
    assert d.count == 317
    assert d.remainder == pytest.approx(317 - 100 * math.pi, abs=1e-12)


def test_unit_square_remainder_closed_form():
    for s in remainder_study(UNIT, range(1, 60)):
        assert s.remainder == 2 * s.scale + 1
        assert s.remainder == s.count - s.measure


def test_remainder_study_validation_and_order():
    with pytest.raises(DomainError):
        remainder_study(UNIT, [3, 2])
    with pytest.raises(DomainError):
        remainder_study(UNIT, [0, 1])
    scales = [1, 2.5, 4, 9.25]
    assert [s.scale for s in remainder_study(Disk(radius=1), scales, workers=3)] == scales


def test_map_scales_serial_equals_parallel():
    f = lambda s: lattice_remainder(Disk(radius=1), s).count
    scales = list(range(5, 40, 3))
    assert map_scales(f, scales, workers=1) == map_scales(f, scales, workers=4)


def test_disk_counts_match_brute():
    for center, r2 in [((0, 0), 50), ((Fraction(1, 3), Fraction(-1, 2)), Fraction(77, 4)), ((2, 1), 9)]:
        D = Disk(center=center, radius2=r2)
        cx, cy = (Fraction(c) for c in center)
        brute = {(x, y) for x in range(-15, 16) for y in range(-15, 16) if (x - cx) ** 2 + (y - cy) ** 2 <= r2}
        assert _pointset(D) == brute


def test_hull_of_scaled():
    assert set(hull_of_scaled(Disk(radius=1), 2).vertices) == {(2, 0), (0, 2), (-2, 0), (0, -2)}
    assert hull_of_scaled(TRI2, 3).vertices == TRI2.scaled(3).vertices
    assert len(hull_of_scaled(Disk(radius=1), 50)) == 44


def test_equivalent_region_unit_square():
    om = equivalent_region(UNIT, 3)
    assert om.area == 16
    assert om.bounding_box() == (Fraction(-1, 2), Fraction(-1, 2), Fraction(7, 2), Fraction(7, 2))
    assert _pointset(om) == {(x, y) for x in range(4) for y in range(4)}


def test_equivalent_region_random():
    rng = np.random.default_rng(31)
    for _ in range(20):
        P = random_polygon(rng, size=12)
        diffs = set()
        for k in range(2, 8):
            om = equivalent_region(P, k)
            kp = P.scaled(k)
            assert _pointset(om) == _pointset(kp)
            diffs.add(om.area - pick_count(kp).total)
        assert len(diffs) == 1


def test_abs_flux():
    assert abs_flux(UNIT, (1, 0)) == 2
    assert abs_flux(UNIT, (1, 1)) == 4
    with pytest.raises(DomainError):
        abs_flux(UNIT, (0, 0))
    rng = np.random.default_rng(9)
    for _ in range(50):
        P = random_polygon(rng, size=25)
        w = tuple(int(v) for v in rng.integers(-4, 5, size=2))
        if w == (0, 0):
            continue
        assert abs_flux(P.scaled(3), w) == 3 * abs_flux(P, w)
        # projection of P onto the direction perpendicular to w, times |w|
        proj = [x * -w[1] + y * w[0] for x, y in P.vertices]
        assert abs_flux(P, w) == 2 * (max(proj) - min(proj))


def test_inverse_miller_integral():
    assert inverse_miller_integral(UNIT) == 4
    assert inverse_miller_integral(TRI2) == 6
    rng = np.random.default_rng(10)
    for _ in range(50):
        P = random_polygon(rng)
        assert inverse_miller_integral(P) == pick_count(P).boundary


def test_circular_segment_region():
    seg = circular_segment((0, 0), 25, (3, -4), (3, 4))
    assert len(seg.pieces) == 2
    # the chord runs upward, so the region is the larger piece x <= 3
    cap = 25 * math.acos(3 / 5) - 12
    assert seg.measure() == pytest.approx(25 * math.pi - cap, rel=1e-14)
    assert seg.pieces[0].miller_normal == (1, 0)
    brute = {(x, y) for x in range(-6, 7) for y in range(-6, 7) if x * x + y * y <= 25 and x <= 3}
    assert _pointset(seg) == brute
    big = seg.dilate(4)
    brute4 = {(x, y) for x in range(-21, 21) for y in range(-21, 21) if x * x + y * y <= 400 and x <= 12}
    assert _pointset(big) == brute4
    with pytest.raises(DomainError):
        seg.dilate(2.5)


def test_mixed_region_rejects_tangent_junction():
    # quarter disk glued to a square: the top edge leaves the circle along its tangent
    with pytest.raises(DomainError, match="tangent"):
        MixedRegion([Arc((5, 0), (0, 5), (0, 0), 25), Segment((0, 5), (-5, 5)), Segment((-5, 5), (-5, 0)), Segment((-5, 0), (5, 0))])
    ok = MixedRegion([Arc((5, 0), (3, 4), (0, 0), 25), Segment((3, 4), (0, 4)), Segment((0, 4), (0, 0)), Segment((0, 0), (5, 0))])
    assert ok.measure() == pytest.approx(12.5 * math.atan2(4, 3) + 6, rel=1e-14)
    with pytest.raises(DomainError, match="violates"):
        MixedRegion([Arc((5, 0), (3, 4), (0, 0), 25), Segment((3, 4), (-5, 4)), Segment((-5, 4), (-5, 0)), Segment((-5, 0), (5, 0))])


def test_arc_validation():
    with pytest.raises(DomainError):
        Arc((1, 1), (0, 5), (0, 0), 25)
    a = Arc((3, 4), (-3, 4), (0, 0), 25)
    assert a.span == pytest.approx(2 * math.atan2(3, 4))
    assert a.covers_direction((0, 1))
    assert not a.covers_direction((0, -1))


def test_open_region_rejected():
    with pytest.raises(DomainError):
        MixedRegion([Segment((3, -4), (3, 4))])
    with pytest.raises(DomainError):
        RationalPolygon([((1, 0), 1), ((0, 1), 1)])
