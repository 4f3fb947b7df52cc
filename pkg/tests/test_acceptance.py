"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even when
output is captured) or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import contextlib
import math
import sys
import time
from fractions import Fraction

import numpy as np

from latsurf import (
    Disk,
    FiniteTable,
    IrrationalNormal,
    LatticePolygon,
    RationalNormal,
    bond_number,
    bond_number_brute,
    decompose_scaled_energy,
    energy_brute,
    energy_exact,
    enumerate_lattice_points,
    equivalent_region,
    fit_growth_exponent,
    gamma_circ,
    gamma_hat,
    hull_of_scaled,
    inverse_miller_integral,
    lattice_remainder,
    lennard_jones,
    lipschitz_constant,
    pick_count,
    smooth_energy_residual,
    stored_energy,
    triangle_interior_count,
)
from latsurf.bonds import triangle_interior_count_brute
from latsurf.energy import gamma_circ_many

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from _gen import random_deformation, random_polygon, random_polygon_with_delta, random_table, vectors_within  # noqa: E402

I = (1, 0, 0, 1)
LJ = lennard_jones()
UNIT = LatticePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def report(capsys, number: int, passed: bool, detail: str) -> None:
    line = f"[criterion {number:2d}] {'PASS' if passed else 'FAIL'}  {detail}"
    ctx = capsys.disabled() if capsys is not None else contextlib.nullcontext()
    with ctx:
        print("\n" + line if capsys is not None else line, flush=True)


# --- 1 -----------------------------------------------------------------------

def test_criterion_01_exact_decomposition(capsys):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    while cases < 200:
        P = random_polygon(rng, size=40, nmin=3, nmax=10)
        if P.delta2 < 2:
            continue
        table = random_table(rng, P.delta2)
        F = random_deformation(rng, (0.5, 2.0))
        exact = energy_exact(P, F, table).total
        brute = energy_brute(P, F, table)
        worst = max(worst, abs(exact - brute) / max(abs(brute), 1e-300))
        cases += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed <= 120
    report(capsys, 1, ok, f"{cases} polygons, max relative error {worst:.2e} (tol 1e-10), {elapsed:.1f}s (limit 120s)")
    assert ok


# --- 2 -----------------------------------------------------------------------

def test_criterion_02_bond_number(capsys):
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    cases, mismatches = 0, 0
    while cases < 500:
        P = random_polygon_with_delta(rng, 2, size=40)
        pool = vectors_within(P.delta2, limit=8)
        for i in rng.choice(len(pool), size=min(4, len(pool)), replace=False):
            w = pool[i]
            mismatches += bond_number(P, w) != bond_number_brute(P, w)
            cases += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed <= 60
    report(capsys, 2, ok, f"{cases} (P, w) pairs, {mismatches} mismatches, {elapsed:.1f}s (limit 60s)")
    assert ok


# --- 3 -----------------------------------------------------------------------

def test_criterion_03_triangle_count(capsys):
    rng = np.random.default_rng(103)
    cases, mismatches = 0, 0
    while cases < 1000:
        w = tuple(int(v) for v in rng.integers(-12, 13, size=2))
        n = tuple(int(v) for v in rng.integers(-6, 7, size=2))
        m = tuple(int(v) for v in rng.integers(-6, 7, size=2))
        if w == (0, 0) or n[0] * m[1] - n[1] * m[0] == 0:
            continue
        if (w[0] * n[0] + w[1] * n[1]) * (w[0] * m[0] + w[1] * m[1]) >= 0:
            continue
        mismatches += triangle_interior_count(w, n, m) != triangle_interior_count_brute(w, n, m)
        cases += 1
    ok = mismatches == 0
    report(capsys, 3, ok, f"{cases} triangle specs, {mismatches} mismatches")
    assert ok


# --- 4 -----------------------------------------------------------------------

def test_criterion_04_pick_and_square_remainder(capsys):
    rng = np.random.default_rng(104)
    bad_pick = 0
    for _ in range(500):
        P = random_polygon(rng, size=40)
        bad_pick += pick_count(P).total != len(enumerate_lattice_points(P))
    bad_rem = [k for k in range(1, 201) if lattice_remainder(UNIT, k).remainder != 2 * k + 1]
    ok = bad_pick == 0 and not bad_rem
    report(capsys, 4, ok, f"500 polygons, {bad_pick} Pick mismatches; remainder == 2k+1 fails at {len(bad_rem)} of k=1..200")
    assert ok


# --- 5 -----------------------------------------------------------------------

def test_criterion_05_square_closed_form(capsys):
    nn = FiniteTable.nearest_neighbor(-1.0)
    bad = []
    for m in range(1, 51):
        e = energy_exact(LatticePolygon([(0, 0), (m, 0), (m, m), (0, m)]), I, nn)
        if (e.total, e.bulk, e.surface, e.corner) != (-2 * m * (m + 1), -2 * m * m, -2 * m, 0):
            bad.append(m)
    ok = not bad
    report(capsys, 5, ok, f"m=1..50 exact equality; failures at m={bad}")
    assert ok


# --- 6 -----------------------------------------------------------------------

def test_criterion_06_polygon_residual_decay(capsys):
    t0 = time.perf_counter()
    ks = [4, 8, 16, 32, 64]
    res = [decompose_scaled_energy(UNIT, k, I, LJ).residual for k in ks]
    fit = fit_growth_exponent(ks, res)
    elapsed = time.perf_counter() - t0
    ok = fit is not None and fit.slope <= -1.5 and elapsed <= 300
    detail = ", ".join(f"{k}:{r:.3e}" for k, r in zip(ks, res))
    report(capsys, 6, ok, f"slope {fit.slope:.3f} (need <= -1.5, theory -2); residuals {detail}; {elapsed:.1f}s (limit 300s)")
    assert ok


# --- 7 -----------------------------------------------------------------------

def test_criterion_07_disk_residual(capsys):
    t0 = time.perf_counter()
    disk = Disk(radius2=1)
    seqs = {"integer": [10, 20, 40, 80], "half-integer": [Fraction(21, 2), Fraction(41, 2), Fraction(81, 2), Fraction(161, 2)]}
    fits, notes = {}, []
    for name, rs in seqs.items():
        res = [smooth_energy_residual(disk, r, I, LJ).residual for r in rs]
        fits[name] = fit_growth_exponent([float(r) for r in rs], res)
        f = fits[name]
        notes.append(f"{name} slope {f.slope:.3f} CI [{f.ci_low:.2f}, {f.ci_high:.2f}]")
    elapsed = time.perf_counter() - t0
    slopes_ok = all(f.slope <= 0.8 for f in fits.values())
    overlap = fits["integer"].overlaps(fits["half-integer"])
    ok = slopes_ok and overlap and elapsed <= 600
    report(capsys, 7, ok, f"{'; '.join(notes)} (need both <= 0.8, theory 2/3); intervals overlap: {overlap}; {elapsed:.1f}s")
    assert ok


# --- 8 -----------------------------------------------------------------------

def test_criterion_08_hull_growth(capsys):
    rs = [20, 40, 80, 160]
    vals = [inverse_miller_integral(hull_of_scaled(Disk(radius2=1), r)) for r in rs]
    fit = fit_growth_exponent(rs, vals)
    ok = fit.slope <= 0.75
    report(capsys, 8, ok, f"values {vals}, growth exponent {fit.slope:.3f} (need <= 0.75)")
    assert ok


# --- 9 -----------------------------------------------------------------------

def test_criterion_09_continuity_pathology(capsys):
    rng = np.random.default_rng(109)
    K = lipschitz_constant(I, LJ)
    a, b = rng.uniform(0, 2 * math.pi, size=(2, 10_000))
    ga, gb = gamma_circ_many(I, a, LJ), gamma_circ_many(I, b, LJ)
    chord = np.hypot(np.cos(a) - np.cos(b), np.sin(a) - np.sin(b))
    ratio = float(np.max(np.abs(ga - gb) / chord))
    lipschitz_ok = ratio <= K

    W = stored_energy(I, LJ)
    jump_err = 0.0
    for miller in [(1, 0), (1, 1)]:
        rn = RationalNormal(miller)
        limit = gamma_circ(I, rn.unit, LJ)
        approach = [gamma_hat(I, IrrationalNormal(rn.angle + h), LJ) for h in (1e-4, 1e-7, 1e-10)]
        converges = abs(approach[-1] - limit) <= 1e-9
        jump = gamma_hat(I, rn, LJ) - approach[-1]
        jump_err = max(jump_err, abs(jump - 0.5 * W / math.hypot(*miller)), 0.0 if converges else math.inf)
    ok = lipschitz_ok and jump_err <= 1e-9
    report(capsys, 9, ok, f"max |dγ|/|dn| = {ratio:.4f} <= K = {K:.4f} over 10^4 pairs: {lipschitz_ok}; "
                          f"jump error at (1,0), (1,1)/√2: {jump_err:.1e} (tol 1e-9)")
    assert ok


# --- 10 ----------------------------------------------------------------------

def test_criterion_10_equivalent_region(capsys):
    rng = np.random.default_rng(110)
    set_fail, pairs = 0, 0
    while pairs < 100:
        P = random_polygon(rng, size=15)
        k = int(rng.integers(1, 21))
        om = {tuple(p) for p in enumerate_lattice_points(equivalent_region(P, k)).tolist()}
        kp = {tuple(p) for p in enumerate_lattice_points(P.scaled(k)).tolist()}
        set_fail += om != kp
        pairs += 1
    const_fail = 0
    for _ in range(20):
        P = random_polygon(rng, size=15)
        diffs = {equivalent_region(P, k).area - pick_count(P.scaled(k)).total for k in range(2, 13)}
        const_fail += len(diffs) != 1
    ok = set_fail == 0 and const_fail == 0
    report(capsys, 10, ok, f"{pairs} (P, k) set equalities, {set_fail} failures; "
                           f"|Ω(k)| - #(kP) constant over k=2..12 for 20 polygons, {const_fail} failures")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
