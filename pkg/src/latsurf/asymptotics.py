"""Energy decompositions of dilated smooth and mixed regions, and growth-rate fits."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .energy import EnergyBreakdown, RationalNormal, energy_brute, gamma_hat, _fsum, _w_sum
from .exceptions import DomainError, InvalidPotentialError
from .lattice_sums import DEFAULT_EPSILON, BondSum, bond_sum
from .potentials import RadialPowerLaw, as_deformation
from .regions import Arc, Disk, MixedRegion, dilate


class SlopeFit(NamedTuple):
    """Least-squares line through ``(log scale, log |value|)`` with a 95% slope interval."""

    slope: float
    intercept: float
    ci_low: float
    ci_high: float
    n: int

    def overlaps(self, other: "SlopeFit") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high


def fit_growth_exponent(scales: Sequence[float], values: Sequence[float], noise_floor: float = 1e-8) -> SlopeFit | None:
    """Fit ``|value| ~ C scale**slope``, ignoring samples with ``|value| < noise_floor``.

    Returns ``None`` when fewer than two samples survive.
    """
    pts = [(math.log(s), math.log(abs(v))) for s, v in zip(scales, values) if abs(v) >= noise_floor]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    if len(pts) == 2:
        slope = (y[1] - y[0]) / (x[1] - x[0])
        return SlopeFit(float(slope), float(y[0] - slope * x[0]), -math.inf, math.inf, 2)
    fit = stats.linregress(x, y)
    half = stats.t.ppf(0.975, len(pts) - 2) * fit.stderr
    return SlopeFit(float(fit.slope), float(fit.intercept), float(fit.slope - half), float(fit.slope + half), len(pts))


def _abs_cos_antiderivative(x):
    n = np.floor((x + math.pi / 2) / math.pi)
    return 2 * n + np.sin(x - n * math.pi)


def _abs_cos_integral(a0: float, a1: float, phase):
    """``int_{a0}^{a1} |cos(t - phase)| dt``, elementwise in ``phase``."""
    return _abs_cos_antiderivative(a1 - phase) - _abs_cos_antiderivative(a0 - phase)


def arc_gamma_integral(bs: BondSum, radius: float, a0: float, a1: float) -> float:
    """Integral of the reduced surface density along a circular arc of outward-normal angles ``[a0, a1]``.

    Evaluated in closed form bond by bond, since ``|w . n(t)| = |w| |cos(t - t_w)|``.
    """
    v = bs.vectors
    phase = np.arctan2(v[:, 1], v[:, 0])
    norms = np.hypot(v[:, 0], v[:, 1])
    direct = _fsum(norms * bs.phi * _abs_cos_integral(a0, a1, phase))
    breaks = [a0 + math.pi / 2, a0 - math.pi / 2, a1 + math.pi / 2, a1 - math.pi / 2]
    tail = bs.exterior(lambda t: _abs_cos_integral(a0, a1, t), 1.0, breaks)
    return -0.25 * radius * (direct + tail)


def _require_smooth_decay(potential):
    if isinstance(potential, RadialPowerLaw) and not potential.decay > 3:
        raise InvalidPotentialError(f"decay exponent d={potential.decay:g} must exceed 3 for curved regions")


def smooth_energy_residual(region: Disk, r, F, potential, epsilon: float = DEFAULT_EPSILON,
                           max_radius: int | None = None) -> EnergyBreakdown:
    """Bulk and surface parts of the energy of ``r * region`` for a disk.

    The surface term integrates the reduced density over the boundary; the
    corner term is zero and everything else lands in ``residual``.
    """
    if not isinstance(region, Disk):
        raise DomainError("smooth_energy_residual supports disks")
    _require_smooth_decay(potential)
    F = as_deformation(F)
    bs = bond_sum(potential, F, epsilon, max_radius)
    W = _w_sum(bs)
    rf = float(r)
    bulk = rf * rf * region.measure() * W
    surface = rf * arc_gamma_integral(bs, region.radius, 0.0, 2 * math.pi)
    total = energy_brute(dilate(region, r), F, potential, epsilon)
    residual = total - math.fsum([bulk, surface])
    return EnergyBreakdown(bulk, surface, 0.0, total, residual, bs.truncation_radius, bs.tail_bound)


def mixed_surface_integral(region: MixedRegion, F, potential, epsilon: float = DEFAULT_EPSILON,
                           max_radius: int | None = None) -> float:
    """Boundary integral of the extended density: facet values on segments, reduced density on arcs."""
    bs = bond_sum(potential, F, epsilon, max_radius)
    parts = []
    for piece in region.pieces:
        if isinstance(piece, Arc):
            a0, a1 = piece.angles
            parts.append(arc_gamma_integral(bs, piece.radius, a0, a1))
        else:
            g = gamma_hat(F, RationalNormal(piece.miller_normal), potential, epsilon, max_radius)
            parts.append(piece.length * g)
    return math.fsum(parts)


def mixed_energy_residual(region: MixedRegion, k: int, F, potential, epsilon: float = DEFAULT_EPSILON,
                          max_radius: int | None = None) -> EnergyBreakdown:
    """Bulk and surface parts of the energy of ``k * region`` for a segment/arc region."""
    if not isinstance(region, MixedRegion):
        raise DomainError("mixed_energy_residual needs a MixedRegion")
    if int(k) != k or k < 1:
        raise DomainError("mixed regions are dilated by positive integers only")
    k = int(k)
    _require_smooth_decay(potential)
    F = as_deformation(F)
    bs = bond_sum(potential, F, epsilon, max_radius)
    bulk = k * k * region.measure() * _w_sum(bs)
    surface = k * mixed_surface_integral(region, F, potential, epsilon, max_radius)
    total = energy_brute(region.dilate(k), F, potential, epsilon)
    residual = total - math.fsum([bulk, surface])
    return EnergyBreakdown(bulk, surface, 0.0, total, residual, bs.truncation_radius, bs.tail_bound)
