"""Bulk, surface and corner energies of deformed lattice crystals.

Every density here is a bond sum over ``Z^2 \\ {0}`` supplied by
:func:`latsurf.lattice_sums.bond_sum`. For power-law potentials the box sum
is completed by a continuum estimate of the omitted exterior.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.signal import fftconvolve

from .bonds import _check_range, _nt_int, shifted_overlap
from .exceptions import DomainError
from .geometry import LatticePolygon, as_vec, cross, dot, reduce, region_grid
from .lattice_sums import DEFAULT_EPSILON, BondSum, bond_sum, box_vectors, tail_bound
from .potentials import FiniteTable, Potential, RadialPowerLaw, as_deformation

_TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class RationalNormal:
    """A lattice direction, given by its coprime Miller normal."""

    miller: tuple[int, int]

    def __post_init__(self):
        g, reduced, _ = reduce(as_vec(self.miller))
        if g != 1:
            raise DomainError(f"Miller normal {self.miller} is not primitive")
        object.__setattr__(self, "miller", reduced)

    @property
    def unit(self) -> np.ndarray:
        v = np.array(self.miller, dtype=float)
        return v / np.hypot(*v)

    @property
    def angle(self) -> float:
        return math.atan2(self.miller[1], self.miller[0])


@dataclass(frozen=True)
class IrrationalNormal:
    """A direction declared irrational by the caller, given by its angle."""

    angle: float

    @property
    def unit(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])


TaggedNormal = Union[RationalNormal, IrrationalNormal]


@dataclass(frozen=True)
class EnergyBreakdown:
    """One energy split as ``total = bulk + surface + corner + residual``."""

    bulk: float
    surface: float
    corner: float
    total: float
    residual: float
    truncation_radius: float
    tail_bound: float = 0.0
    corners: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "bulk": self.bulk,
            "surface": self.surface,
            "corner": self.corner,
            "residual": self.residual,
            "total": self.total,
            "truncation_radius": self.truncation_radius,
            "tail_bound": self.tail_bound,
        }


def _fsum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).ravel())


def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    norm = math.hypot(n[0], n[1])
    if abs(norm - 1.0) > 1e-12:
        raise DomainError(f"normal {tuple(n)} is not a unit vector")
    return n


def _abs_proj(e_angle_n):
    return lambda theta: np.abs(np.cos(theta) * e_angle_n[0] + np.sin(theta) * e_angle_n[1])


def _one(theta):
    return np.ones_like(theta)


def _w_sum(bs: BondSum) -> float:
    return 0.5 * _fsum(bs.phi) + 0.5 * bs.exterior(_one, 0.0)


def _gcirc_sum(bs: BondSum, n: np.ndarray) -> float:
    proj = np.abs(bs.vectors @ n)
    return -0.25 * _fsum(proj * bs.phi) - 0.25 * bs.exterior(_abs_proj(n), 1.0)


def stored_energy(F, potential: Potential, epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> float:
    """Cauchy-Born energy density ``W(F) = 1/2 sum_w phi_w(|F w|)``."""
    return _w_sum(bond_sum(potential, F, epsilon, max_radius))


def gamma_circ(F, n, potential: Potential, epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> float:
    """Reduced surface density ``-1/4 sum_w |w.n| phi_w(|F w|)`` for a unit normal ``n``."""
    return _gcirc_sum(bond_sum(potential, F, epsilon, max_radius), _unit(n))


def gamma_circ_many(F, angles, potential: Potential, epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> np.ndarray:
    """:func:`gamma_circ` at the unit normals ``(cos t, sin t)``.

    Normals are processed in blocks; each column is summed pairwise in
    ``np.longdouble`` rather than with ``math.fsum``, which agrees with
    :func:`gamma_circ` to rounding and is much faster for many angles.
    """
    bs = bond_sum(potential, F, epsilon, max_radius)
    t = np.asarray(angles, dtype=float).ravel()
    normals = np.vstack([np.cos(t), np.sin(t)])
    theta, kernel = bs.exterior_kernel(1.0)
    dirs = np.vstack([np.cos(theta), np.sin(theta)])
    vecs = bs.vectors.astype(float)
    phi = bs.phi.astype(np.longdouble)[:, None]
    out = np.empty(len(t))
    block = max(1, 4_000_000 // max(len(vecs), 1))
    for i in range(0, len(t), block):
        n = normals[:, i:i + block]
        direct = (np.abs(vecs @ n) * phi).sum(axis=0)
        tail = kernel @ np.abs(dirs.T @ n)
        out[i:i + block] = -0.25 * (direct.astype(float) + tail)
    return out


def gamma_diamond(F, miller: Sequence[int], potential: Potential, epsilon: float = DEFAULT_EPSILON,
                  max_radius: int | None = None) -> float:
    """Surface density of the lattice facet with Miller normal ``miller``.

    ``-1/4 sum_w (|w.n| - 1) phi_w(|F w|) / |n|``; bonds parallel to the
    facet plane subtract their share of the bulk energy.
    """
    nb = RationalNormal(tuple(miller)).miller
    bs = bond_sum(potential, F, epsilon, max_radius)
    norm = math.hypot(*nb)
    proj = np.abs(bs.vectors @ np.array(nb, dtype=np.int64))
    direct = -0.25 / norm * _fsum((proj - 1) * bs.phi)
    unit = np.array(nb, dtype=float) / norm
    tail = -0.25 * bs.exterior(_abs_proj(unit), 1.0) + 0.5 * bs.exterior(_one, 0.0) / (2 * norm)
    return direct + tail


def thomae_h(n: TaggedNormal) -> float:
    """``1/|n|`` on lattice directions, zero on irrational ones."""
    if isinstance(n, RationalNormal):
        return 1.0 / math.hypot(*n.miller)
    if isinstance(n, IrrationalNormal):
        return 0.0
    raise TypeError(f"expected a tagged normal, got {type(n).__name__}")


def gamma_hat(F, n: TaggedNormal, potential: Potential, epsilon: float = DEFAULT_EPSILON,
              max_radius: int | None = None) -> float:
    """Extended surface density: ``gamma_circ`` plus ``W/(2|n|)`` on lattice directions."""
    bs = bond_sum(potential, F, epsilon, max_radius)
    value = _gcirc_sum(bs, n.unit)
    h = thomae_h(n)
    if h:
        value += 0.5 * _w_sum(bs) * h
    return value


def lipschitz_constant(F, potential: Potential, epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> float:
    """``sum_w |w| |phi_w(|F w|)|``, plus the tail bound for infinite range."""
    bs = bond_sum(potential, F, epsilon, max_radius)
    norms = np.hypot(bs.vectors[:, 0], bs.vectors[:, 1])
    extra = 0.0 if bs.radius is None else tail_bound(potential, bs.F, bs.radius, weight=1)
    return _fsum(norms * np.abs(bs.phi)) + extra


def corner_angle(n: Sequence[int], m: Sequence[int]) -> float:
    """Angle in ``(0, pi)`` between the unit normals of two adjacent facets."""
    c = cross(n, m)
    if c == 0:
        raise DomainError(f"normals {tuple(n)} and {tuple(m)} are parallel")
    return math.atan2(abs(c), dot(n, m))


def _corner_terms_list(vectors: np.ndarray, n, m) -> tuple[np.ndarray, np.ndarray]:
    H = (vectors @ np.array(n, dtype=np.int64)) * (vectors @ np.array(m, dtype=np.int64)) < 0
    NT = np.zeros(len(vectors), dtype=np.int64)
    for i in np.flatnonzero(H):
        NT[i] = _nt_int((int(vectors[i, 0]), int(vectors[i, 1])), n, m)
    return H, NT


@lru_cache(maxsize=64)
def _box_corner_terms(M: int, n, m):
    return _corner_terms_list(box_vectors(M), n, m)


def vertex_energy(F, n_i: Sequence[int], n_prev: Sequence[int], potential: Potential,
                  epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> float:
    """Corner energy for the facets with integer normals ``n_i`` and ``n_prev``.

    ``1/2 sum_w {[H(w) - theta/(2 pi)](gcd(w) - 1) + H(w) N_T(w)} phi_w(|F w|)``
    where ``H`` marks bonds crossing from one facet's side to the other's,
    ``N_T`` counts lattice points inside the corner triangle and ``theta``
    is the angle between the normals.
    """
    n = as_vec(n_i)
    m = as_vec(n_prev)
    theta = corner_angle(n, m)
    bs = bond_sum(potential, F, epsilon, max_radius)
    if bs.radius is None:
        H, NT = _corner_terms_list(bs.vectors, n, m)
    else:
        H, NT = _box_corner_terms(bs.radius, n, m)
    g = np.gcd(bs.vectors[:, 0], bs.vectors[:, 1])
    coef = (H - theta / _TWO_PI) * (g - 1) + H * NT
    direct = 0.5 * _fsum(coef * bs.phi)
    if bs.radius is None:
        return direct
    # continuum estimate of the omitted corner triangles: area |w|^2 A(e)
    # minus half the lattice points on the two facet-parallel edges, |w| B(e)
    nb = np.array(reduce(n)[1], dtype=float)
    mb = np.array(reduce(m)[1], dtype=float)
    c = abs(cross(reduce(n)[1], reduce(m)[1]))

    def projections(t):
        en = np.cos(t) * nb[0] + np.sin(t) * nb[1]
        em = np.cos(t) * mb[0] + np.sin(t) * mb[1]
        return en, em, en * em < 0

    def area(t):
        en, em, h = projections(t)
        return np.where(h, np.abs(en * em) / (2 * c), 0.0)

    def edges(t):
        en, em, h = projections(t)
        return np.where(h, -0.5 * (np.abs(en) + np.abs(em)) / c, 0.0)

    breaks = [math.atan2(v[1], v[0]) + s for v in (n, m) for s in (math.pi / 2, -math.pi / 2)]
    return direct + 0.5 * (bs.exterior(area, 2.0, breaks) + bs.exterior(edges, 1.0, breaks))


def pair_counts(region) -> tuple[np.ndarray, np.ndarray]:
    """All bond vectors ``w != 0`` realised in ``region`` with their bond numbers."""
    grid, _, _ = region_grid(region)
    g = grid.astype(float)
    corr = np.rint(fftconvolve(g, g[::-1, ::-1])).astype(np.int64)
    nx, ny = grid.shape
    a, b = np.nonzero(corr)
    w = np.column_stack([a - (nx - 1), b - (ny - 1)])
    counts = corr[a, b]
    keep = (w[:, 0] != 0) | (w[:, 1] != 0)
    return w[keep], counts[keep]


def energy_brute(region, F, potential: Potential, epsilon: float = DEFAULT_EPSILON) -> float:
    """Atomistic energy ``1/2 sum_x sum_w phi_w(|F w|)`` over pairs inside ``region``.

    Power-law potentials are summed over every pair in the region, so no
    truncation is involved and ``epsilon`` is unused for them.
    """
    F = as_deformation(F)
    if isinstance(potential, FiniteTable):
        grid, _, _ = region_grid(region)
        phi = potential.values(F)
        counts = [shifted_overlap(grid, w) for w in potential.bonds]
        return 0.5 * _fsum(np.array(counts, dtype=float) * phi)
    if not isinstance(potential, RadialPowerLaw):
        raise TypeError(f"unsupported potential {potential!r}")
    w, counts = pair_counts(region)
    return 0.5 * _fsum(counts * potential(F.stretch(w)))


def _polygon_parts(P: LatticePolygon, k: int, F, potential, epsilon, max_radius):
    bs = bond_sum(potential, F, epsilon, max_radius)
    W = _w_sum(bs)
    bulk = k * k * float(P.area) * W
    surface = k * math.fsum(
        f.length * gamma_diamond(F, f.miller_normal, potential, epsilon, max_radius) for f in P.facets
    )
    normals = P.miller_normals
    corners = tuple(
        vertex_energy(F, normals[i], normals[i - 1], potential, epsilon, max_radius) for i in range(len(normals))
    )
    return bs, bulk, surface, corners


def energy_exact(P: LatticePolygon, F, potential: FiniteTable) -> EnergyBreakdown:
    """Closed-form energy of a lattice polygon for a finite-range table.

    Requires ``max |w| <= delta(P)``; larger ranges raise
    :class:`~latsurf.exceptions.PreconditionError`.
    """
    if not isinstance(potential, FiniteTable):
        raise TypeError("energy_exact needs a FiniteTable; use decompose_scaled_energy for power laws")
    for w in potential.bonds:
        _check_range(P, w)
    F = as_deformation(F)
    bs, bulk, surface, corners = _polygon_parts(P, 1, F, potential, DEFAULT_EPSILON, None)
    corner = math.fsum(corners)
    total = math.fsum([bulk, surface, corner])
    return EnergyBreakdown(bulk, surface, corner, total, 0.0, bs.truncation_radius, 0.0, corners)


def decompose_scaled_energy(P: LatticePolygon, k: int, F, potential: Potential,
                            epsilon: float = DEFAULT_EPSILON, max_radius: int | None = None) -> EnergyBreakdown:
    """Split the atomistic energy of ``kP`` into ``k^2`` bulk, ``k`` surface and corner parts.

    ``residual`` is the brute-force energy minus the three continuum terms.
    """
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    k = int(k)
    F = as_deformation(F)
    bs, bulk, surface, corners = _polygon_parts(P, k, F, potential, epsilon, max_radius)
    corner = math.fsum(corners)
    total = energy_brute(P.scaled(k), F, potential, epsilon)
    residual = total - math.fsum([bulk, surface, corner])
    return EnergyBreakdown(bulk, surface, corner, total, residual, bs.truncation_radius, bs.tail_bound, corners)
