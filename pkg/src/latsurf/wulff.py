"""Wulff shapes as half-plane envelopes of a sampled surface density."""
from __future__ import annotations

import math

import numpy as np

from .energy import RationalNormal, gamma_circ_many, gamma_hat
from .exceptions import DomainError, WulffUndefinedError
from .lattice_sums import DEFAULT_EPSILON


def miller_directions(max_norm: float = 20.0) -> list[tuple[int, int]]:
    """Primitive integer vectors with ``|n| <= max_norm``, ordered by angle."""
    out = []
    m = int(max_norm)
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            if (a or b) and a * a + b * b <= max_norm * max_norm and math.gcd(a, b) == 1:
                out.append((a, b))
    out.sort(key=lambda v: math.atan2(v[1], v[0]))
    return out


def halfplane_envelope(normals: np.ndarray, offsets: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Vertices (CCW) of ``{x : x . n_j <= c_j}`` for unit normals ``n_j`` and ``c_j > 0``."""
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    big = 4 * float(np.max(offsets)) + 1.0
    poly = [np.array(p) for p in ((-big, -big), (big, -big), (big, big), (-big, big))]
    for n, c in zip(normals, offsets):
        out = []
        for i, p in enumerate(poly):
            q = poly[(i + 1) % len(poly)]
            fp = p @ n - c
            fq = q @ n - c
            if fp <= 0:
                out.append(p)
            if (fp < 0 < fq) or (fq < 0 < fp):
                t = fp / (fp - fq)
                out.append(p + t * (q - p))
        poly = out
        if not poly:
            raise DomainError("half-plane intersection is empty")
    scale = float(np.max(offsets))
    return _clean(np.array(poly), tol * scale)


def _clean(poly: np.ndarray, tol: float) -> np.ndarray:
    # drop repeated vertices, then vertices lying on the segment between their neighbours
    keep = [p for i, p in enumerate(poly) if np.linalg.norm(p - poly[i - 1]) > tol]
    changed = True
    while changed and len(keep) > 3:
        changed = False
        for i in range(len(keep)):
            a, b, c = keep[i - 1], keep[i], keep[(i + 1) % len(keep)]
            cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cr) <= tol * max(np.linalg.norm(c - a), 1.0):
                del keep[i]
                changed = True
                break
    return np.array(keep)


def wulff_shape(F, potential, samples: int = 360, epsilon: float = DEFAULT_EPSILON,
                use_hat: bool = False, max_radius: int | None = None) -> np.ndarray:
    """Wulff polygon of the reduced density from ``samples`` equally spaced normals.

    With ``use_hat`` the facet normals with ``|n| <= 20`` are added using
    the extended density.
    """
    if samples < 16:
        raise DomainError("at least 16 sample normals are required")
    angles = 2 * math.pi * np.arange(samples) / samples
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    gam = gamma_circ_many(F, angles, potential, epsilon, max_radius)
    if use_hat:
        extra = miller_directions(20.0)
        ex_n = np.array([RationalNormal(v).unit for v in extra])
        ex_g = np.array([gamma_hat(F, RationalNormal(v), potential, epsilon, max_radius) for v in extra])
        normals = np.vstack([normals, ex_n])
        gam = np.concatenate([gam, ex_g])
    bad = np.flatnonzero(gam <= 0)
    if len(bad):
        n = normals[bad[0]]
        raise WulffUndefinedError(
            f"surface density {gam[bad[0]]:.6g} <= 0 at normal ({n[0]:.6g}, {n[1]:.6g})"
        )
    return halfplane_envelope(normals, gam)
