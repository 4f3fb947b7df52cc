"""Command-line interface: ``latsurf <subcommand> --config run.json ...``.

Exit codes: 0 success, 1 computation or domain error, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import asymptotics, bonds, energy, regions, wulff
from .config import ConfigError, RunConfig, load_config
from .exceptions import DomainError, LatsurfError
from .geometry import LatticePolygon, pick_count
from .output import csv_text, fmt, svg_plot, svg_polygon, write_text
from .potentials import FiniteTable


class UsageError(Exception):
    pass


def _parse_w(text: str):
    try:
        x, y = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y integers, got {text!r}") from None
    return x, y


def _parse_scales(values: list[str]) -> list[Fraction]:
    out = []
    for v in values:
        for t in v.split(","):
            if t.strip():
                try:
                    out.append(Fraction(t.strip()))
                except (ValueError, ZeroDivisionError):
                    raise UsageError(f"bad scale {t!r}") from None
    if not out:
        raise UsageError("no scales given")
    return out


def _emit(lines: list[tuple[str, object]]) -> None:
    for key, value in lines:
        print(f"{key}: {fmt(value)}")


def _emit_table(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _need_polygon(cfg: RunConfig) -> LatticePolygon:
    if not isinstance(cfg.region, LatticePolygon):
        raise DomainError(f"this operation needs a lattice_polygon region, not {cfg.region_kind}")
    return cfg.region


# --- subcommands -------------------------------------------------------------

def cmd_count(cfg: RunConfig, args) -> None:
    sample = regions.lattice_remainder(cfg.region, args.k)
    lines = [("points", sample.count), ("measure", sample.measure), ("remainder", sample.remainder)]
    scaled = regions.dilate(cfg.region, args.k)
    if isinstance(scaled, LatticePolygon):
        pc = pick_count(scaled)
        lines += [
            ("pick_total", pc.total),
            ("pick_boundary", pc.boundary),
            ("pick_interior", pc.interior),
            ("pick_matches_enumeration", "true" if pc.total == sample.count else "false"),
        ]
    _emit(lines)


def cmd_bonds(cfg: RunConfig, args) -> None:
    region = regions.dilate(cfg.region, args.k)
    lines = [("w", f"{args.w[0]},{args.w[1]}"), ("brute", bonds.bond_number_brute(region, args.w))]
    if isinstance(region, LatticePolygon):
        lines.append(("t_dagger", bonds.t_dagger_count(region, args.w)))
        try:
            lines.append(("t_ddagger", bonds.t_ddagger_count(region, args.w)))
            lines.append(("formula", bonds.bond_number(region, args.w)))
        except DomainError as exc:
            lines.append(("formula", f"unavailable ({exc})"))
    _emit(lines)


def _breakdown(b: energy.EnergyBreakdown) -> list[tuple[str, object]]:
    return list(b.as_dict().items())


def _scaled(cfg: RunConfig, k) -> energy.EnergyBreakdown:
    kw = dict(epsilon=cfg.epsilon, max_radius=cfg.max_radius)
    if isinstance(cfg.region, LatticePolygon):
        return energy.decompose_scaled_energy(cfg.region, k, cfg.F, cfg.potential, **kw)
    if isinstance(cfg.region, regions.Disk):
        return asymptotics.smooth_energy_residual(cfg.region, k, cfg.F, cfg.potential, **kw)
    if isinstance(cfg.region, regions.MixedRegion):
        return asymptotics.mixed_energy_residual(cfg.region, k, cfg.F, cfg.potential, **kw)
    raise DomainError(f"no scaled decomposition for {cfg.region_kind} regions")


def cmd_energy(cfg: RunConfig, args) -> None:
    if args.mode == "exact":
        P = regions.dilate(_need_polygon(cfg), args.k)
        if not isinstance(cfg.potential, FiniteTable):
            raise DomainError("exact mode needs a finite_table potential; use --mode scaled")
        _emit(_breakdown(energy.energy_exact(P, cfg.F, cfg.potential)))
    elif args.mode == "brute":
        total = energy.energy_brute(regions.dilate(cfg.region, args.k), cfg.F, cfg.potential, cfg.epsilon)
        _emit([("total", total)])
    else:
        _emit(_breakdown(_scaled(cfg, args.k)))


def cmd_gamma(cfg: RunConfig, args) -> None:
    kw = dict(epsilon=cfg.epsilon, max_radius=cfg.max_radius)
    F, pot = cfg.F, cfg.potential
    theta = 2 * math.pi * np.arange(args.samples) / args.samples
    rational = wulff.miller_directions(args.max_miller)
    if args.density == "circ":
        gam = energy.gamma_circ_many(F, theta, pot, **kw)
        header, rows = ["theta", "gamma"], list(zip(theta, gam))
        curves, markers = {"reduced density": (theta, gam)}, {}
    elif args.density == "diamond":
        ang = [energy.RationalNormal(v).angle % (2 * math.pi) for v in rational]
        gam = [energy.gamma_diamond(F, v, pot, **kw) for v in rational]
        rows = sorted(zip(ang, gam))
        header = ["theta", "gamma"]
        curves, markers = {}, {"facet density": tuple(zip(*rows))}
    else:
        irr = energy.gamma_circ_many(F, theta, pot, **kw)
        rat = [(energy.RationalNormal(v).angle % (2 * math.pi),
                energy.gamma_hat(F, energy.RationalNormal(v), pot, **kw)) for v in rational]
        rat.sort()
        header = ["theta", "gamma", "kind"]
        rows = [(t, g, "irrational") for t, g in zip(theta, irr)] + [(t, g, "rational") for t, g in rat]
        curves, markers = {"irrational directions": (theta, irr)}, {"rational directions": tuple(zip(*rat))}
    _emit_table(csv_text(header, rows), args.out)
    if args.svg:
        write_text(args.svg, svg_plot(curves, markers, "theta", "gamma", f"surface density ({args.density})"))


def cmd_wulff(cfg: RunConfig, args) -> None:
    verts = wulff.wulff_shape(cfg.F, cfg.potential, args.samples, cfg.epsilon, use_hat=args.hat,
                              max_radius=cfg.max_radius)
    _emit_table(csv_text(["x", "y"], verts), args.out)
    if args.svg:
        write_text(args.svg, svg_polygon(verts))


def cmd_study(cfg: RunConfig, args) -> None:
    scales = _parse_scales(args.scales)
    if args.kind == "remainder":
        samples = regions.remainder_study(cfg.region, scales, args.workers)
        _emit_table(csv_text(["scale", "count", "measure", "remainder"], samples), args.out)
        return
    results = regions.map_scales(lambda s: _scaled(cfg, s), scales, args.workers)
    if args.kind == "decomposition":
        rows = [(float(s), b.bulk, b.surface, b.corner, b.residual, b.total) for s, b in zip(scales, results)]
        _emit_table(csv_text(["scale", "bulk", "surface", "corner", "residual", "total"], rows), args.out)
        return
    rem = regions.remainder_study(cfg.region, scales, args.workers)
    xs = [float(s) for s in scales]
    rows = []
    for name, values in (("residual", [b.residual for b in results]), ("remainder", [r.remainder for r in rem])):
        fit = asymptotics.fit_growth_exponent(xs, values)
        if fit is None:
            rows.append((name, "nan", "nan", "nan", "nan", 0))
        else:
            rows.append((name, fit.slope, fit.intercept, fit.ci_low, fit.ci_high, fit.n))
    _emit_table(csv_text(["quantity", "slope", "intercept", "ci_low", "ci_high", "n"], rows), args.out)


# --- argument parsing --------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latsurf", description="Lattice crystal energies split into bulk, surface and corner parts.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{count,bonds,energy,gamma,wulff,study}")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration (schema v1)")
        return p

    p = add("count", "lattice point count, area and remainder (with Pick cross-check for polygons)")
    p.add_argument("--k", type=Fraction, default=Fraction(1), help="dilation factor")
    p.set_defaults(func=cmd_count)

    p = add("bonds", "w-bond number by closed form and by enumeration")
    p.add_argument("--w", type=_parse_w, required=True, help="bond vector X,Y")
    p.add_argument("--k", type=_positive_int, default=1, help="integer dilation factor")
    p.set_defaults(func=cmd_bonds)

    p = add("energy", "energy of the (dilated) region")
    p.add_argument("--mode", choices=["exact", "brute", "scaled"], default="exact")
    p.add_argument("--k", type=Fraction, default=Fraction(1), help="dilation factor")
    p.set_defaults(func=cmd_energy)

    p = add("gamma", "surface density as a function of the normal angle")
    p.add_argument("--density", choices=["circ", "diamond", "hat"], default="circ")
    p.add_argument("--samples", type=_positive_int, default=360)
    p.add_argument("--max-miller", type=float, default=10.0, help="largest |n| of rational directions")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--svg", help="also write an SVG plot here")
    p.set_defaults(func=cmd_gamma)

    p = add("wulff", "Wulff shape of the reduced surface density")
    p.add_argument("--samples", type=_positive_int, default=360)
    p.add_argument("--hat", action="store_true", help="add facet normals with the extended density")
    p.add_argument("--out", help="CSV path for the vertices (default: stdout)")
    p.add_argument("--svg", help="also write an SVG drawing here")
    p.set_defaults(func=cmd_wulff)

    p = add("study", "scale studies: remainders, energy decompositions, growth fits")
    p.add_argument("--kind", choices=["remainder", "decomposition", "slope"], required=True)
    p.add_argument("--scales", nargs="+", required=True, help="scales, space or comma separated")
    p.add_argument("--workers", type=_positive_int, default=None)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_study)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"latsurf: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"latsurf: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        args.func(cfg, args)
    except UsageError as exc:
        print(f"latsurf: {exc}", file=sys.stderr)
        return 2
    except (LatsurfError, ValueError, ArithmeticError, OSError) as exc:
        print(f"latsurf: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
