import math

import numpy as np
import pytest
from scipy import integrate

from latsurf import (
    Disk,
    DomainError,
    FiniteTable,
    InvalidPotentialError,
    RadialPowerLaw,
    circular_segment,
    fit_growth_exponent,
    lennard_jones,
    mixed_energy_residual,
    smooth_energy_residual,
    stored_energy,
)
from latsurf.asymptotics import arc_gamma_integral, mixed_surface_integral
from latsurf.energy import gamma_circ_many
from latsurf.lattice_sums import bond_sum

I = (1, 0, 0, 1)
LJ = lennard_jones()
NN = FiniteTable.nearest_neighbor()


def test_fit_recovers_power_law():
    s = np.array([10, 20, 40, 80, 160.0])
    fit = fit_growth_exponent(s, 3.0 * s**-1.7)
    assert fit.slope == pytest.approx(-1.7, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
    assert fit.ci_low == pytest.approx(-1.7) and fit.ci_high == pytest.approx(-1.7)
    assert fit.n == 5


def test_fit_edge_cases():
    assert fit_growth_exponent([5], [1.0]) is None
    assert fit_growth_exponent([1, 2, 3], [1e-12, 1e-9, 4.0]) is None
    two = fit_growth_exponent([1, 2], [1.0, 4.0])
    assert two.slope == pytest.approx(2.0)
    assert math.isinf(two.ci_low) and math.isinf(two.ci_high)
    noisy = fit_growth_exponent([1, 2, 4, 8], [1.0, -2.2, 3.9, -8.5])
    assert noisy.ci_low < noisy.slope < noisy.ci_high
    assert noisy.overlaps(two)


ARCS = [(0.0, 2 * math.pi), (0.3, 1.1), (-2.0, 2.5), (1.0, 1.0 + 3 * math.pi / 2)]


@pytest.mark.parametrize("a0, a1", ARCS)
def test_arc_integral_matches_quadrature_for_tables(a0, a1):
    F = (1.1, 0.2, -0.1, 0.9)
    table = FiniteTable({(1, 0): -1.0, (2, 1): 0.3, (1, 1): -0.5}, symmetrize=True)
    bs = bond_sum(table, F)
    # the integrand has kinks where a bond vector is tangent to the arc
    kinks = [p + j * math.pi / 2 for w in bs.vectors for p in [math.atan2(w[1], w[0])] for j in range(-5, 6, 2)]
    kinks = sorted(k for k in kinks if a0 < k < a1)
    f = lambda t: 2.5 * gamma_circ_many(F, np.array([t]), table)[0]
    quad = math.fsum(integrate.quad(f, lo, hi, epsabs=1e-14)[0] for lo, hi in zip([a0] + kinks, kinks + [a1]))
    assert arc_gamma_integral(bs, 2.5, a0, a1) == pytest.approx(quad, rel=1e-12)


def test_arc_integral_full_circle_closed_form():
    F = (1.1, 0.2, -0.1, 0.9)
    table = FiniteTable({(1, 0): -1.0, (2, 1): 0.3, (1, 1): -0.5}, symmetrize=True)
    bs = bond_sum(table, F)
    v = np.asarray(bs.vectors, float)
    assert arc_gamma_integral(bs, 1.0, 0.0, 2 * math.pi) == pytest.approx(-math.fsum(np.hypot(v[:, 0], v[:, 1]) * bs.phi), rel=1e-14)


@pytest.mark.parametrize("a0, a1", ARCS[:2])
def test_arc_integral_lennard_jones_against_composite_rule(a0, a1):
    # LJ has a kink at every lattice direction, so a fixed rule only agrees to a few parts in 1e7
    F = (1.1, 0.2, -0.1, 0.9)
    bs = bond_sum(LJ, F, max_radius=40)
    edges = np.linspace(a0, a1, 301)
    x, wts = np.polynomial.legendre.leggauss(8)
    mid, half = (edges[1:] + edges[:-1]) / 2, (edges[1:] - edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    vals = gamma_circ_many(F, nodes, LJ, max_radius=40).reshape(len(mid), -1)
    rule = math.fsum(half * (vals @ wts))
    assert arc_gamma_integral(bs, 1.0, a0, a1) == pytest.approx(rule, rel=1e-6)


def test_nearest_neighbor_disk_surface():
    # the reduced density of the NN table is (|n1| + |n2|) / 2, whose circle integral is 4
    b = smooth_energy_residual(Disk(radius=1), 10, I, NN)
    assert b.surface == pytest.approx(40.0, abs=1e-12)
    assert b.bulk == pytest.approx(-200 * math.pi, abs=1e-10)
    assert b.corner == 0.0
    assert b.total == pytest.approx(b.bulk + b.surface + b.residual, abs=1e-10)


def test_smooth_decay_required():
    slow = RadialPowerLaw(((-1.0, 5.0),))
    with pytest.raises(InvalidPotentialError):
        smooth_energy_residual(Disk(radius=1), 10, I, slow)
    with pytest.raises(DomainError):
        smooth_energy_residual(circular_segment((0, 0), 25, (3, -4), (3, 4)), 2, I, LJ)


def test_smooth_residual_tracks_lattice_remainder():
    # the leading error is W times the lattice point remainder of the disk
    W = stored_energy(I, LJ)
    for r in (10, 20):
        b = smooth_energy_residual(Disk(radius=1), r, I, LJ)
        count = len(Disk(radius=r).lattice_points())
        assert abs(b.residual - W * (count - math.pi * r * r)) < 3.0


def test_mixed_region_surface_and_errors():
    seg = circular_segment((0, 0), 25, (3, -4), (3, 4))
    with pytest.raises(DomainError):
        mixed_energy_residual(seg, 2.5, I, LJ)
    with pytest.raises(DomainError):
        mixed_energy_residual(Disk(radius=1), 2, I, LJ)
    # NN: the facet (1,0) has extended density -1/2 over length 8; the arc covers every angle outside [-a, a]
    a = math.atan2(4, 3)
    arc = 5 * 0.5 * integrate.quad(lambda t: abs(math.cos(t)) + abs(math.sin(t)), a, 2 * math.pi - a, points=[math.pi / 2, math.pi, 3 * math.pi / 2])[0]
    assert mixed_surface_integral(seg, I, NN) == pytest.approx(8 * -0.5 + arc, abs=1e-12)


def test_mixed_residual_decomposition_consistent():
    seg = circular_segment((0, 0), 25, (3, -4), (3, 4))
    b = mixed_energy_residual(seg, 4, I, LJ)
    assert b.total == pytest.approx(b.bulk + b.surface + b.residual, abs=1e-9)
    assert b.bulk == pytest.approx(16 * seg.measure() * stored_energy(I, LJ), rel=1e-14)
