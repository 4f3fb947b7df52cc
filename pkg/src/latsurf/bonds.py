"""Exact w-bond counting for convex lattice polygons.

The bond number ``N_w`` (pairs ``x, x+w`` of lattice points both inside the
region) is split as ``#P - #T_dagger + #T_ddagger``: lattice points, minus
bonds leaving through the boundary, plus bonds straddling a corner. Each
piece has a closed form here and a brute-force counterpart used as an oracle.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exceptions import DomainError, PreconditionError
from .geometry import (
    LatticePolygon,
    as_vec,
    bezout_companion,
    cross,
    dot,
    perp,
    pick_count,
    reduce,
    region_grid,
)


def floor_sum(n: int, m: int, a: int, b: int) -> int:
    """``sum(floor((a*i + b) / m) for i in range(n))`` in O(log) steps, ``m > 0``."""
    if n <= 0:
        return 0
    ans = 0
    if a < 0 or a >= m:
        q, a = divmod(a, m)
        ans += n * (n - 1) // 2 * q
    if b < 0 or b >= m:
        q, b = divmod(b, m)
        ans += n * q
    while True:
        if a >= m:
            ans += n * (n - 1) // 2 * (a // m)
            a %= m
        if b >= m:
            ans += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            return ans
        n, b = divmod(y_max, m)
        m, a = a, m


def _staircase(A: int, B: int, D: int, k: int) -> int:
    # alpha = A/D, beta = B/D, D > 0
    if A == 0:
        return 0
    absA = abs(A)
    c = -(-absA // D)  # ceil(|alpha|)
    n = c - 1
    if n <= 0:
        return 0
    # sum_j floor(beta*j/|alpha|) and sum_j ceil((beta-k)*j/|alpha|), j = 1..n
    lower = floor_sum(n + 1, absA, B, 0)
    upper = -floor_sum(n + 1, absA, k * D - B, 0)
    return n * (k - 1) + upper - lower


def staircase_sum(alpha, beta, k: int) -> int:
    """Interior lattice count of the triangle ``conv{0, (0,k), (|alpha|, beta)}``.

    Column ``x = j`` contributes ``k - 1 + ceil((beta-k) j/|alpha|) - floor(beta j/|alpha|)``
    points for ``0 < j < |alpha|``; ``alpha = 0`` gives an empty triangle.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    D = alpha.denominator * beta.denominator // math.gcd(alpha.denominator, beta.denominator)
    return _staircase(int(alpha * D), int(beta * D), D, int(k))


def staircase_sum_naive(alpha, beta, k: int) -> int:
    """Direct column-by-column evaluation of :func:`staircase_sum` (oracle)."""
    alpha = abs(Fraction(alpha))
    beta = Fraction(beta)
    if alpha == 0:
        return 0
    c = math.ceil(alpha)
    total = 0
    for j in range(1, c):
        total += k - 1 + math.ceil((beta - k) * j / alpha) - math.floor(beta * j / alpha)
    return total


def sector_indicator(w: Sequence, n: Sequence, m: Sequence) -> int:
    """1 when ``w`` points out of one facet and into the other, else 0."""
    return 1 if dot(w, n) * dot(w, m) < 0 else 0


def triangle_apex(w: Sequence[int], n: Sequence[int], m: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Apex ``q`` of the corner triangle ``conv{0, w, q}``: ``q.n = 0`` and ``(q - w).m = 0``."""
    npp = perp(n)
    den = dot(m, npp)
    if den == 0:
        raise DomainError("corner normals are parallel")
    s = Fraction(dot(m, w), den)
    return (s * npp[0], s * npp[1])


def triangle_interior_count(w: Sequence[int], n: Sequence[int], m: Sequence[int]) -> int:
    """Interior lattice points of ``conv{0, w, q}`` via the staircase sum.

    ``n`` and ``m`` are integer normals of the two facets meeting at a corner
    (any positive multiples give the same triangle).
    """
    w = as_vec(w)
    n = as_vec(n)
    m = as_vec(m)
    if dot(w, n) * dot(w, m) >= 0:
        raise DomainError(f"w={w} does not change sides across the corner n={n}, m={m}")
    return _nt_int(w, n, m)


def _nt_int(w, n, m) -> int:
    npp = (n[1], -n[0])
    D = m[0] * npp[0] + m[1] * npp[1]
    if D == 0:
        raise DomainError("corner normals are parallel")
    s = m[0] * w[0] + m[1] * w[1]
    # q = (s / D) * npp
    g = math.gcd(w[0], w[1])
    wb = (w[0] // g, w[1] // g)
    u = bezout_companion(wb)
    # the unimodular map x -> (x . perp(wb), -x . perp(u)) sends w to (0, g)
    A = s * (npp[0] * wb[1] - npp[1] * wb[0])
    B = -s * (npp[0] * u[1] - npp[1] * u[0])
    if D < 0:
        A, B, D = -A, -B, -D
    return _staircase(A, B, D, g)


def triangle_interior_count_brute(w: Sequence[int], n: Sequence[int], m: Sequence[int]) -> int:
    """Enumerate lattice points strictly inside ``conv{0, w, q}`` with rational predicates."""
    w = as_vec(w)
    q = triangle_apex(w, n, m)
    tri = [(0, 0), w, q]
    xs = [p[0] for p in tri]
    ys = [p[1] for p in tri]
    sgn = cross((w[0], w[1]), q)
    if sgn == 0:
        return 0
    count = 0
    for x in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for y in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            p = (x, y)
            o1 = cross(w, p)
            o2 = (q[0] - w[0]) * (y - w[1]) - (q[1] - w[1]) * (x - w[0])
            o3 = -q[0] * (y - q[1]) + q[1] * (x - q[0])
            if sgn > 0 and o1 > 0 and o2 > 0 and o3 > 0:
                count += 1
            elif sgn < 0 and o1 < 0 and o2 < 0 and o3 < 0:
                count += 1
    return count


def t_dagger_count(P: LatticePolygon, w: Sequence[int]) -> int:
    """Number of w-bonds that leave ``P``: ``sum_i |S_i| <w.n_i>_+ + gcd(w)``."""
    w = as_vec(w)
    g, _, _ = reduce(w)
    # |S_i| (w . n_i) = w . perp(edge_i), an integer
    return sum(max(dot(w, perp(m)), 0) for m in P.edges) + g


def _check_range(P: LatticePolygon, w) -> None:
    if Fraction(dot(w, w)) > P.delta2:
        raise PreconditionError(
            f"|w|={math.sqrt(dot(w, w)):.6g} exceeds delta(P)={P.delta:.6g}; "
            "use bond_number_brute instead"
        )


def t_ddagger_count(P: LatticePolygon, w: Sequence[int]) -> int:
    """Number of w-bonds with both ends outside ``P`` that cross a corner of ``P``."""
    w = as_vec(w)
    _check_range(P, w)
    g, _, _ = reduce(w)
    normals = P.miller_normals
    total = 0
    for i, n in enumerate(normals):
        m = normals[i - 1]
        if dot(w, n) * dot(w, m) < 0:
            total += g - 1 + _nt_int(w, n, m)
    return total


def bond_number(P: LatticePolygon, w: Sequence[int]) -> int:
    """Closed-form w-bond number of a convex lattice polygon, valid for ``|w| <= delta(P)``."""
    w = as_vec(w)
    _check_range(P, w)
    return pick_count(P).total - t_dagger_count(P, w) + t_ddagger_count(P, w)


def bond_number_brute(region, w: Sequence[int]) -> int:
    """Count lattice points ``x`` of the region with ``x + w`` also in the region."""
    w = as_vec(w)
    if w == (0, 0):
        raise DomainError("w must be nonzero")
    grid, _, _ = region_grid(region)
    return shifted_overlap(grid, w)


def shifted_overlap(grid: np.ndarray, w) -> int:
    nx, ny = grid.shape
    a, b = w
    if abs(a) >= nx or abs(b) >= ny:
        return 0
    src = grid[max(0, -a): nx - max(0, a), max(0, -b): ny - max(0, b)]
    dst = grid[max(0, a): nx - max(0, -a), max(0, b): ny - max(0, -b)]
    return int(np.count_nonzero(src & dst))


def straddle_count_brute(P: LatticePolygon, w: Sequence[int]) -> int:
    """Bonds ``b(x, w)`` with both ends outside ``P`` whose segment meets ``P``."""
    w = as_vec(w)
    xmin, ymin, xmax, ymax = P.bounding_box()
    hp = P.halfplanes()
    count = 0
    for x in range(xmin - abs(w[0]) - 1, xmax + abs(w[0]) + 2):
        for y in range(ymin - abs(w[1]) - 1, ymax + abs(w[1]) + 2):
            p0 = (x, y)
            p1 = (x + w[0], y + w[1])
            if P.contains(p0) or P.contains(p1):
                continue
            # segment p0 + t w, t in [0,1], meets P iff the clipped t-interval is nonempty
            lo, hi = Fraction(0), Fraction(1)
            for nrm, c in hp:
                a = dot(nrm, w)
                b = c - dot(nrm, p0)
                if a == 0:
                    if b < 0:
                        lo, hi = Fraction(1), Fraction(0)
                        break
                elif a > 0:
                    hi = min(hi, b / a)
                else:
                    lo = max(lo, b / a)
            if lo <= hi:
                count += 1
    return count
