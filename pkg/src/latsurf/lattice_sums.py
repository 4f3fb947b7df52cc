"""Bond sums over Z^2 \\ {0} for finite tables and power-law potentials.

Infinite-range sums run over the box ``max(|a|, |b|) <= M``. The box sum is a
midpoint rule for the integral over the square of half-width ``M + 1/2``, so
the omitted exterior is estimated by integrating the power-law terms over the
outside of that square. A rigorous bound on the omitted tail is reported
alongside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .exceptions import InvalidPotentialError
from .potentials import DeformationGradient, FiniteTable, Potential, RadialPowerLaw, as_deformation

DEFAULT_EPSILON = 1e-9
DEFAULT_MAX_RADIUS = 120

_SQRT2 = math.sqrt(2.0)


def lattice_tail_bound(s: float, rho: float) -> float:
    """Upper bound on ``sum_{w in Z^2, |w| > rho} |w|**-s`` for ``s > 2``.

    Unit cells centred at the omitted points lie outside the disc of radius
    ``rho - sqrt(2)/2`` and ``|w| >= |x| - sqrt(2)/2`` on each cell.
    """
    if s <= 2:
        return math.inf
    base = rho - _SQRT2
    if base <= 0:
        return math.inf
    return 2 * math.pi * (base ** (2 - s) / (s - 2) + (_SQRT2 / 2) * base ** (1 - s) / (s - 1))


def tail_bound(potential: Potential, F, rho: float, weight: int = 2) -> float:
    """Bound on ``sum_{|w| > rho} |w|**weight |phi(|F w|)|``."""
    if isinstance(potential, FiniteTable):
        return 0.0 if rho >= potential.max_norm else math.inf
    F = as_deformation(F)
    alpha = F.sigma_min
    if alpha * rho < potential.r0:
        return math.inf
    p = potential.decay + 2.0
    return potential.bound_constant * alpha ** (-p) * lattice_tail_bound(p - weight, rho)


def truncation_radius(potential: Potential, F, epsilon: float = DEFAULT_EPSILON) -> float:
    """Smallest radius (to 1e-6 relative) whose weighted tail bound is below ``epsilon``."""
    if isinstance(potential, FiniteTable):
        return potential.max_norm
    if potential.decay <= 2:
        raise InvalidPotentialError(f"decay exponent d={potential.decay:g} must exceed 2")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lo = 1.0
    hi = 2.0
    while tail_bound(potential, F, hi) >= epsilon:
        lo, hi = hi, hi * 2
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if tail_bound(potential, F, mid) < epsilon:
            hi = mid
        else:
            lo = mid
    return hi


@lru_cache(maxsize=8)
def box_vectors(M: int) -> np.ndarray:
    r = np.arange(-M, M + 1, dtype=np.int64)
    a, b = np.meshgrid(r, r, indexing="ij")
    v = np.column_stack([a.ravel(), b.ravel()])
    return v[(v[:, 0] != 0) | (v[:, 1] != 0)]


# composite Gauss-Legendre rule on [0, 2pi), split at multiples of pi/8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)


def _angular_rule(extra_breaks=()) -> tuple[np.ndarray, np.ndarray]:
    brk = set(np.linspace(0, 2 * math.pi, 17))
    for b in extra_breaks:
        brk.add(float(b) % (2 * math.pi))
    brk = np.array(sorted(brk))
    nodes, weights = [], []
    for a, b in zip(brk[:-1], brk[1:]):
        if b - a < 1e-15:
            continue
        nodes.append(0.5 * (b - a) * _GL_X + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * _GL_W)
    return np.concatenate(nodes), np.concatenate(weights)


@dataclass(frozen=True, eq=False)
class BondSum:
    """The bond vectors of one lattice sum and their potential values.

    ``radius`` is the box half-width (``None`` for a finite table, whose
    vectors are summed exactly).
    """

    vectors: np.ndarray
    phi: np.ndarray
    potential: Potential
    F: DeformationGradient
    radius: int | None
    tail_bound: float

    @property
    def truncation_radius(self) -> float:
        if self.radius is None:
            return self.potential.max_norm
        return float(self.radius)

    def exterior_kernel(self, weight: float, breaks=()) -> tuple[np.ndarray, np.ndarray]:
        """Angles and weights ``k`` with ``exterior(A) == sum(k * A(angles))``."""
        theta, wts = _angular_rule(breaks)
        if self.radius is None:
            return theta, np.zeros_like(theta)
        e = np.column_stack([np.cos(theta), np.sin(theta)])
        stretch = self.F.stretch(e)
        h = self.radius + 0.5
        t0 = h / np.maximum(np.abs(e[:, 0]), np.abs(e[:, 1]))
        kernel = np.zeros_like(theta)
        for c, p in self.potential.terms:
            q = weight - p + 2  # radial integrand t**(weight - p) * t dt
            kernel += c * wts * stretch ** (-p) * t0**q / (-q)
        return theta, kernel

    def exterior(self, angular: Callable[[np.ndarray], np.ndarray], weight: float, breaks=()) -> float:
        """Continuum estimate of ``sum_{omitted w} |w|**weight A(w/|w|) phi(|F w|)``.

        ``angular`` maps angles to the direction factor ``A``; zero for finite tables.
        """
        if self.radius is None:
            return 0.0
        theta, kernel = self.exterior_kernel(weight, breaks)
        return float(np.sum(kernel * angular(theta)))


def summation_radius(potential: Potential, F, epsilon: float, max_radius: int | None = None) -> int:
    rho = truncation_radius(potential, F, epsilon)
    cap = DEFAULT_MAX_RADIUS if max_radius is None else max_radius
    return max(2, min(math.ceil(rho), int(cap)))


@lru_cache(maxsize=32)
def _power_law_sum(potential: RadialPowerLaw, F: DeformationGradient, M: int) -> BondSum:
    vec = box_vectors(M)
    phi = potential(F.stretch(vec))
    return BondSum(vec, phi, potential, F, M, tail_bound(potential, F, M))


def bond_sum(potential: Potential, F, epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> BondSum:
    """Vectors and potential values entering every bond sum for ``(potential, F)``."""
    F = as_deformation(F)
    if isinstance(potential, FiniteTable):
        return BondSum(potential.vectors, potential.values(F), potential, F, None, 0.0)
    if not isinstance(potential, RadialPowerLaw):
        raise InvalidPotentialError(f"unsupported potential {potential!r}")
    if potential.decay <= 2:
        raise InvalidPotentialError(f"decay exponent d={potential.decay:g} must exceed 2")
    M = summation_radius(potential, F, epsilon, max_radius)
    return _power_law_sum(potential, F, M)
