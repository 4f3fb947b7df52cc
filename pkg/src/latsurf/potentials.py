"""Deformation gradients and pair potentials."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .exceptions import DomainError, InvalidPotentialError
from .geometry import as_vec

PairFunction = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class DeformationGradient:
    """A 2x2 matrix with positive determinant, stored row-major."""

    entries: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.entries) != 4:
            raise DomainError("F needs exactly four entries")
        object.__setattr__(self, "entries", tuple(float(e) for e in self.entries))
        if not all(math.isfinite(e) for e in self.entries):
            raise DomainError("F has non-finite entries")
        if self.det <= 0:
            raise DomainError(f"det F = {self.det:.6g} must be positive")

    @classmethod
    def identity(cls) -> "DeformationGradient":
        return cls((1.0, 0.0, 0.0, 1.0))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(2, 2)

    @property
    def det(self) -> float:
        a, b, c, d = self.entries
        return a * d - b * c

    @property
    def sigma_min(self) -> float:
        """Smallest singular value: ``|F z| >= sigma_min |z|`` for all ``z``."""
        return float(np.linalg.svd(self.matrix, compute_uv=False)[-1])

    def stretch(self, vectors) -> np.ndarray:
        """``|F w|`` for each row of ``vectors``."""
        v = np.asarray(vectors, dtype=float).reshape(-1, 2)
        return np.hypot(*(v @ self.matrix.T).T)


def as_deformation(F) -> DeformationGradient:
    if isinstance(F, DeformationGradient):
        return F
    arr = np.asarray(F, dtype=float).ravel()
    return DeformationGradient(tuple(arr))


class FiniteTable:
    """Finite-range bond table ``w -> phi_w``.

    Each value is either a constant or a callable of the deformed bond
    length ``|F w|``. The table must satisfy ``phi_w == phi_{-w}``.
    """

    def __init__(self, bonds: Mapping[Sequence[int], PairFunction], symmetrize: bool = False):
        table: dict[tuple[int, int], PairFunction] = {}
        for w, value in bonds.items():
            w = as_vec(w)
            if w == (0, 0):
                raise InvalidPotentialError("the zero vector cannot carry a bond")
            table[w] = value
        if symmetrize:
            for w, value in list(table.items()):
                table.setdefault((-w[0], -w[1]), value)
        for w, value in table.items():
            neg = (-w[0], -w[1])
            if neg not in table:
                raise InvalidPotentialError(f"bond {w} has no partner {neg}; pass symmetrize=True")
            other = table[neg]
            if callable(value) != callable(other) or (not callable(value) and value != other):
                raise InvalidPotentialError(f"phi_{w} differs from phi_{neg}")
        self.bonds = table

    @classmethod
    def nearest_neighbor(cls, value: PairFunction = -1.0) -> "FiniteTable":
        return cls({(1, 0): value, (-1, 0): value, (0, 1): value, (0, -1): value})

    @property
    def vectors(self) -> np.ndarray:
        return np.array(list(self.bonds), dtype=np.int64).reshape(-1, 2)

    @property
    def max_norm2(self) -> int:
        return max((a * a + b * b for a, b in self.bonds), default=0)

    @property
    def max_norm(self) -> float:
        return math.sqrt(self.max_norm2)

    def values(self, F: DeformationGradient) -> np.ndarray:
        lengths = F.stretch(self.vectors) if self.bonds else np.zeros(0)
        out = np.empty(len(self.bonds))
        for i, value in enumerate(self.bonds.values()):
            out[i] = value(float(lengths[i])) if callable(value) else float(value)
        return out

    def __repr__(self):
        return f"FiniteTable({len(self.bonds)} bonds, max |w| = {self.max_norm:.4g})"


@dataclass(frozen=True)
class RadialPowerLaw:
    """Radial pair potential ``phi(r) = sum_i c_i r**(-p_i)``.

    ``r0`` is the radius beyond which the decay bound
    ``|phi(r)| <= C r**-(2+d)`` is used, with ``d = min(p_i) - 2``.
    """

    terms: tuple[tuple[float, float], ...]
    r0: float = 1.0

    def __post_init__(self):
        terms = tuple((float(c), float(p)) for c, p in self.terms)
        if not terms:
            raise InvalidPotentialError("a power-law potential needs at least one term")
        object.__setattr__(self, "terms", terms)
        if self.r0 <= 0:
            raise InvalidPotentialError("r0 must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for c, p in self.terms:
            out = out + c * r ** (-p)
        return out

    @property
    def decay(self) -> float:
        return min(p for _, p in self.terms) - 2.0

    @property
    def bound_constant(self) -> float:
        pmin = self.decay + 2.0
        return sum(abs(c) * self.r0 ** (pmin - p) for c, p in self.terms)

    def require_decay(self, minimum: float) -> None:
        if not self.decay > minimum:
            raise InvalidPotentialError(f"decay exponent d={self.decay:g} must exceed {minimum:g}")


def lennard_jones(depth: float = 1.0, r_min: float = 1.0) -> RadialPowerLaw:
    """``depth * ((r_min/r)**12 - 2 (r_min/r)**6)``, minimum ``-depth`` at ``r_min`` (d = 4)."""
    return RadialPowerLaw(((depth * r_min**12, 12.0), (-2.0 * depth * r_min**6, 6.0)), r0=r_min)


Potential = Union[FiniteTable, RadialPowerLaw]
