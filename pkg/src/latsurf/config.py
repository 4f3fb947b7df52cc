"""JSON run configuration (schema ``v1``) with strict, itemized validation.

Example::

    {
      "schema": "v1",
      "region": {"type": "lattice_polygon", "vertices": [[0, 0], [3, 0], [3, 3], [0, 3]]},
      "potential": {"type": "finite_table", "bonds": [{"w": [1, 0], "value": -1}], "symmetrize": true},
      "F": [1, 0, 0, 1]
    }

Rational numbers may be written as strings such as ``"7/2"``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exceptions import LatsurfError
from .geometry import LatticePolygon
from .lattice_sums import DEFAULT_EPSILON
from .potentials import DeformationGradient, FiniteTable, RadialPowerLaw, lennard_jones
from .regions import Arc, Disk, MixedRegion, RationalPolygon, Segment

SCHEMA = "v1"


class ConfigError(LatsurfError):
    """The configuration document is malformed; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {e}" for e in self.errors))


@dataclass
class RunConfig:
    region: Any
    potential: Any
    F: DeformationGradient
    epsilon: float = DEFAULT_EPSILON
    max_radius: int | None = None
    seed: int = 0
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def region_kind(self) -> str:
        return self.raw["region"]["type"]


class _Checker:
    def __init__(self, text: str):
        self.text = text
        self.errors: list[str] = []

    def line_of(self, path: str) -> int | None:
        # walk the key names of the path through the text in order; "config" names the root object
        pos = 0
        keys = re.findall(r"[A-Za-z_0-9]+(?![^\[]*\])", path)
        if keys[:1] == ["config"]:
            keys = keys[1:]
            if not keys:
                return 1
        for key in keys:
            idx = self.text.find(f'"{key}"', pos)
            if idx < 0:
                break
            pos = idx
        return self.text.count("\n", 0, pos) + 1 if pos else None

    def fail(self, path: str, msg: str):
        line = self.line_of(path)
        where = f"line {line}: " if line else ""
        self.errors.append(f"{where}{path}: {msg}")

    def obj(self, value, path: str, required: set, optional: set = frozenset()) -> bool:
        if not isinstance(value, dict):
            self.fail(path, "expected an object")
            return False
        ok = True
        for key in sorted(required - value.keys()):
            self.fail(path, f"missing key '{key}'")
            ok = False
        for key in sorted(value.keys() - required - optional):
            self.fail(f"{path}.{key}", "unknown key")
            ok = False
        return ok

    def number(self, value, path: str, rational: bool = False):
        if isinstance(value, bool):
            self.fail(path, "expected a number")
            return None
        if isinstance(value, (int, float)):
            return Fraction(value) if rational else value
        if rational and isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError):
                pass
        self.fail(path, "expected a number" + (" or a rational string like \"7/2\"" if rational else ""))
        return None

    def integer(self, value, path: str):
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(path, "expected an integer")
            return None
        return value

    def pair(self, value, path: str, kind: str = "int"):
        if not isinstance(value, list) or len(value) != 2:
            self.fail(path, "expected a pair [x, y]")
            return None
        conv = self.integer if kind == "int" else (lambda v, p: self.number(v, p, rational=True))
        out = [conv(v, f"{path}[{i}]") for i, v in enumerate(value)]
        return None if None in out else tuple(out)


def _region(c: _Checker, spec):
    path = "region"
    if not isinstance(spec, dict) or "type" not in spec:
        c.fail(path, "expected an object with a 'type'")
        return None
    kind = spec["type"]
    start = len(c.errors)
    try:
        if kind == "lattice_polygon":
            if not c.obj(spec, path, {"type", "vertices"}):
                return None
            verts = [c.pair(v, f"{path}.vertices[{i}]") for i, v in enumerate(spec["vertices"])]
            return None if None in verts else LatticePolygon(verts)
        if kind == "disk":
            if not c.obj(spec, path, {"type"}, {"center", "radius2", "radius"}):
                return None
            center = c.pair(spec.get("center", [0, 0]), f"{path}.center", "rational")
            if ("radius2" in spec) == ("radius" in spec):
                c.fail(path, "give exactly one of 'radius2' and 'radius'")
                return None
            key = "radius2" if "radius2" in spec else "radius"
            val = c.number(spec[key], f"{path}.{key}", rational=True)
            if center is None or val is None:
                return None
            return Disk(center, **{key: val})
        if kind == "rational_polygon":
            if not c.obj(spec, path, {"type", "halfplanes"}):
                return None
            hps = []
            for i, hp in enumerate(spec["halfplanes"]):
                p = f"{path}.halfplanes[{i}]"
                if not c.obj(hp, p, {"normal", "offset"}):
                    continue
                n = c.pair(hp["normal"], f"{p}.normal")
                off = c.number(hp["offset"], f"{p}.offset", rational=True)
                if n is not None and off is not None:
                    hps.append((n, off))
            return RationalPolygon(hps) if len(c.errors) == start else None
        if kind == "mixed":
            if not c.obj(spec, path, {"type", "pieces"}):
                return None
            pieces = []
            for i, pc in enumerate(spec["pieces"]):
                p = f"{path}.pieces[{i}]"
                if not isinstance(pc, dict) or pc.get("kind") not in ("segment", "arc"):
                    c.fail(p, "expected a piece with kind 'segment' or 'arc'")
                    continue
                if pc["kind"] == "segment":
                    if c.obj(pc, p, {"kind", "start", "end"}):
                        s, e = c.pair(pc["start"], f"{p}.start"), c.pair(pc["end"], f"{p}.end")
                        if s and e:
                            pieces.append(Segment(s, e))
                elif c.obj(pc, p, {"kind", "start", "end", "center", "radius2"}):
                    s, e = c.pair(pc["start"], f"{p}.start"), c.pair(pc["end"], f"{p}.end")
                    ctr = c.pair(pc["center"], f"{p}.center", "rational")
                    r2 = c.number(pc["radius2"], f"{p}.radius2", rational=True)
                    if s and e and ctr and r2 is not None:
                        pieces.append(Arc(s, e, ctr, r2))
            return MixedRegion(pieces) if len(c.errors) == start else None
    except (LatsurfError, ValueError, TypeError) as exc:
        c.fail(path, str(exc))
        return None
    c.fail(f"{path}.type", f"unknown region type {kind!r} (expected lattice_polygon, disk, rational_polygon or mixed)")
    return None


def _potential(c: _Checker, spec):
    path = "potential"
    if not isinstance(spec, dict) or "type" not in spec:
        c.fail(path, "expected an object with a 'type'")
        return None
    kind = spec["type"]
    start = len(c.errors)
    try:
        if kind == "finite_table":
            if not c.obj(spec, path, {"type", "bonds"}, {"symmetrize"}):
                return None
            table = {}
            for i, b in enumerate(spec["bonds"]):
                p = f"{path}.bonds[{i}]"
                if not c.obj(b, p, {"w", "value"}):
                    continue
                w = c.pair(b["w"], f"{p}.w")
                v = c.number(b["value"], f"{p}.value")
                if w is not None and v is not None:
                    if w in table:
                        c.fail(p, f"duplicate bond {w}")
                    table[w] = float(v)
            sym = spec.get("symmetrize", False)
            if not isinstance(sym, bool):
                c.fail(f"{path}.symmetrize", "expected true or false")
                return None
            return FiniteTable(table, symmetrize=sym) if len(c.errors) == start else None
        if kind == "lennard_jones":
            if not c.obj(spec, path, {"type"}, {"depth", "r_min"}):
                return None
            depth = c.number(spec.get("depth", 1.0), f"{path}.depth")
            rmin = c.number(spec.get("r_min", 1.0), f"{path}.r_min")
            if depth is None or rmin is None:
                return None
            if rmin <= 0:
                c.fail(f"{path}.r_min", "must be positive")
                return None
            return lennard_jones(float(depth), float(rmin))
        if kind == "power_law":
            if not c.obj(spec, path, {"type", "terms"}, {"r0"}):
                return None
            terms = []
            for i, t in enumerate(spec["terms"]):
                p = f"{path}.terms[{i}]"
                if c.obj(t, p, {"coefficient", "power"}):
                    co = c.number(t["coefficient"], f"{p}.coefficient")
                    pw = c.number(t["power"], f"{p}.power")
                    if co is not None and pw is not None:
                        terms.append((float(co), float(pw)))
            r0 = c.number(spec.get("r0", 1.0), f"{path}.r0")
            if len(c.errors) > start or r0 is None:
                return None
            return RadialPowerLaw(tuple(terms), float(r0))
    except (LatsurfError, ValueError, TypeError) as exc:
        c.fail(path, str(exc))
        return None
    c.fail(f"{path}.type", f"unknown potential type {kind!r} (expected finite_table, lennard_jones or power_law)")
    return None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document, raising :class:`ConfigError` on any problem."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"line {exc.lineno}: not valid JSON ({exc.msg})"]) from None
    c = _Checker(text)
    if not c.obj(raw, "config", {"schema", "region", "potential", "F"}, {"epsilon", "max_radius", "seed"}):
        if not isinstance(raw, dict):
            raise ConfigError(c.errors)
    if raw.get("schema", SCHEMA) != SCHEMA:
        c.fail("schema", f"unsupported schema {raw.get('schema')!r}; expected {SCHEMA!r}")
    region = _region(c, raw["region"]) if "region" in raw else None
    potential = _potential(c, raw["potential"]) if "potential" in raw else None
    F = None
    if "F" in raw:
        f = raw["F"]
        if not isinstance(f, list) or len(f) != 4:
            c.fail("F", "expected four numbers, row-major")
        else:
            vals = [c.number(v, f"F[{i}]") for i, v in enumerate(f)]
            if None not in vals:
                try:
                    F = DeformationGradient(tuple(float(v) for v in vals))
                except LatsurfError as exc:
                    c.fail("F", str(exc))
    eps = raw.get("epsilon", DEFAULT_EPSILON)
    if c.number(eps, "epsilon") is not None and not eps > 0:
        c.fail("epsilon", "must be positive")
    max_radius = raw.get("max_radius")
    if max_radius is not None and c.integer(max_radius, "max_radius") is not None and max_radius < 2:
        c.fail("max_radius", "must be at least 2")
    seed = raw.get("seed", 0)
    c.integer(seed, "seed")
    if c.errors:
        raise ConfigError(c.errors)
    return RunConfig(region, potential, F, float(eps), max_radius, seed, raw)


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
