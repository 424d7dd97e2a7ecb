"""Scenario configuration: schema, validation and object construction.

A scenario is a JSON object with the following fields (defaults in
brackets; see the README for the full schema):

  name              string, used for the report file name
  chart             {"lo": [4 floats], "hi": [4 floats], "fd_step": float}
  frame             {"type": "fiducial"} or {"type": "rotor", "expr": EXPR}
  connection        {"type": "zero"} or {"type": "table", "entries": [...]}
  params            {"mass": m, "charge": q, "potential": EXPR or {"kind":"zero"}}
  unknown           {"type": "plane-wave", "boost": ROTOR or null}
                    | {"type": "expr", "expr": EXPR} | {"type": "constant-one"}
  suites            list of suite names [all seven]
  tolerances        {check-name: positive float} overrides [{}]
  grid              points per axis for residual grids [9]
  transport_steps   integrator step count [256]
  seed              integer for the randomized property checks [0]
  expected          {check-name: value} turns residual checks into
                    expected-value diagnostics [{}]

Field expressions EXPR form a closed constructor set, each with an exact
derivative: zero, constant, polynomial (degree <= 3), rotor-wave, sum,
product, scalar-linear, scalar-sine, scalar-gaussian, exp-bivector and
const-rotor.  Blade keys are "1" for the scalar slot and ascending
generator strings "e0" .. "e0123"; values are reals or [re, im] pairs.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import CMultivector, Multivector, exp_bivector
from .errors import ConfigError, StaError, UnknownSuite
from .fields import (
    BivectorExp,
    CliffordField,
    Constant,
    Field,
    FieldExpr,
    Polynomial,
    ScalarGaussian,
    ScalarLinear,
    ScalarSine,
    f_product,
    f_scale,
    f_sum,
    rotor_wave,
)
from .geometry import Chart, ConnectionField, SpacetimeSetup, change_spin_frame
from .dirac import DiracParams, make_plane_wave

_BLADE_BY_NAME = {"1": 0, "s": 0}
for _mask in range(1, 16):
    _name = "e" + "".join(str(a) for a in range(4) if _mask >> a & 1)
    _BLADE_BY_NAME[_name] = _mask

SUITE_NAMES = (
    "algebra",
    "derivatives",
    "transport",
    "dirac-triad",
    "gauge",
    "lorentz",
    "bilinears",
)


def _fail(msg: str):
    raise ConfigError(msg)


def _coef(v, where: str):
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    _fail(f"{where}: coefficient must be a number or [re, im]")


def parse_multivector(obj, where: str):
    if not isinstance(obj, dict):
        _fail(f"{where}: expected a blade table object")
    coeffs = np.zeros(16, dtype=complex)
    for k, v in obj.items():
        if k not in _BLADE_BY_NAME:
            _fail(f"{where}: unknown blade name {k!r}")
        coeffs[_BLADE_BY_NAME[k]] = _coef(v, where)
    if np.any(coeffs.imag):
        return CMultivector(coeffs)
    return Multivector(coeffs.real)


def _vec4(obj, where: str) -> np.ndarray:
    if not (isinstance(obj, list) and len(obj) == 4 and
            all(isinstance(x, (int, float)) for x in obj)):
        _fail(f"{where}: expected a list of 4 numbers")
    return np.asarray(obj, dtype=float)


def parse_expr(obj, where: str = "expr") -> FieldExpr:
    if not isinstance(obj, dict) or "kind" not in obj:
        _fail(f"{where}: expected an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "zero":
        return Constant(Multivector.zero())
    if kind == "constant":
        return Constant(parse_multivector(obj.get("blades", {}), where))
    if kind == "polynomial":
        terms = []
        for i, t in enumerate(obj.get("terms", [])):
            wt = f"{where}.terms[{i}]"
            if not isinstance(t, dict):
                _fail(f"{wt}: expected an object")
            blade = t.get("blade", "1")
            if blade not in _BLADE_BY_NAME:
                _fail(f"{wt}: unknown blade name {blade!r}")
            powers = t.get("powers", [0, 0, 0, 0])
            if not (isinstance(powers, list) and len(powers) == 4):
                _fail(f"{wt}: powers must be 4 integers")
            terms.append((_BLADE_BY_NAME[blade], _coef(t.get("coef", 0.0), wt), tuple(powers)))
        try:
            return Polynomial(terms)
        except ValueError as exc:
            _fail(f"{where}: {exc}")
    if kind == "rotor-wave":
        front = parse_multivector(obj.get("front", {"1": 1.0}), f"{where}.front")
        biv = parse_multivector(obj.get("bivector", {}), f"{where}.bivector")
        wave = _vec4(obj.get("wave"), f"{where}.wave")
        try:
            return rotor_wave(front, biv, wave)
        except ValueError as exc:
            _fail(f"{where}: {exc}")
    if kind == "sum":
        parts = obj.get("terms", [])
        if not parts:
            _fail(f"{where}: sum needs at least one term")
        acc = parse_expr(parts[0], f"{where}.terms[0]")
        for i, p in enumerate(parts[1:], 1):
            acc = f_sum(acc, parse_expr(p, f"{where}.terms[{i}]"))
        return acc
    if kind == "product":
        parts = obj.get("factors", [])
        if not parts:
            _fail(f"{where}: product needs at least one factor")
        acc = parse_expr(parts[0], f"{where}.factors[0]")
        for i, p in enumerate(parts[1:], 1):
            acc = f_product(acc, parse_expr(p, f"{where}.factors[{i}]"))
        return acc
    if kind == "scalar-linear":
        return ScalarLinear(_vec4(obj.get("slope"), f"{where}.slope"),
                            float(obj.get("offset", 0.0)))
    if kind == "scalar-sine":
        return ScalarSine(float(obj.get("amplitude", 1.0)),
                          _vec4(obj.get("wave"), f"{where}.wave"),
                          float(obj.get("phase", 0.0)))
    if kind == "scalar-gaussian":
        return ScalarGaussian(float(obj.get("amplitude", 1.0)),
                              _vec4(obj.get("widths"), f"{where}.widths"),
                              _vec4(obj.get("center"), f"{where}.center"))
    if kind == "exp-bivector":
        biv = parse_multivector(obj.get("bivector", {}), f"{where}.bivector")
        s = parse_expr(obj.get("scalar", {"kind": "zero"}), f"{where}.scalar")
        try:
            return BivectorExp(biv, s)
        except ValueError as exc:
            _fail(f"{where}: {exc}")
    if kind == "const-rotor":
        biv = parse_multivector(obj.get("bivector", {}), f"{where}.bivector")
        s = float(obj.get("parameter", 1.0))
        try:
            return Constant(exp_bivector(f_scale_mv(s, biv)))
        except ValueError as exc:
            _fail(f"{where}: {exc}")
    _fail(f"{where}: unknown expression kind {kind!r}")


def f_scale_mv(s: float, mv):
    return s * mv


class Scenario:
    """Validated scenario with its constructed objects."""

    def __init__(self, cfg: dict):
        if not isinstance(cfg, dict):
            _fail("configuration root must be an object")
        self.name = cfg.get("name")
        if not isinstance(self.name, str) or not self.name:
            _fail("scenario needs a nonempty 'name'")

        chart_cfg = cfg.get("chart", {"lo": [0, 0, 0, 0], "hi": [1, 1, 1, 1]})
        lo = _vec4(chart_cfg.get("lo"), "chart.lo")
        hi = _vec4(chart_cfg.get("hi"), "chart.hi")
        fd = float(chart_cfg.get("fd_step", 1e-3))
        try:
            self.chart = Chart(lo, hi, fd)
        except ValueError as exc:
            _fail(f"chart: {exc}")

        self.grid = int(cfg.get("grid", 9))
        if self.grid < 2:
            _fail("grid must be at least 2")
        self.transport_steps = int(cfg.get("transport_steps", 256))
        if self.transport_steps < 1:
            _fail("transport_steps must be >= 1")
        self.seed = int(cfg.get("seed", 0))

        tol_cfg = cfg.get("tolerances", {})
        if not isinstance(tol_cfg, dict):
            _fail("tolerances must be an object")
        for k, v in tol_cfg.items():
            if not isinstance(v, (int, float)) or v <= 0:
                _fail(f"tolerances[{k!r}] must be a positive number")
        self.tolerances = {k: float(v) for k, v in tol_cfg.items()}

        expected_cfg = cfg.get("expected", {})
        if not isinstance(expected_cfg, dict):
            _fail("expected must be an object")
        self.expected = {k: float(v) for k, v in expected_cfg.items()}

        suites = cfg.get("suites", list(SUITE_NAMES))
        if not isinstance(suites, list) or not suites:
            _fail("suites must be a nonempty list")
        for s in suites:
            if s not in SUITE_NAMES:
                raise UnknownSuite(f"unknown suite {s!r}")
        self.suites = list(suites)

        self.setup, self.frame_rotor = self._build_setup(cfg)

        params_cfg = cfg.get("params", {"mass": 1.0, "charge": 0.0})
        mass = params_cfg.get("mass", 1.0)
        charge = params_cfg.get("charge", 0.0)
        if not isinstance(mass, (int, float)) or mass < 0:
            _fail("params.mass must be a nonnegative number")
        if not isinstance(charge, (int, float)):
            _fail("params.charge must be a number")
        pot_cfg = params_cfg.get("potential", {"kind": "zero"})
        pot = CliffordField(parse_expr(pot_cfg, "params.potential"))
        self.params = DiracParams(float(mass), float(charge), pot)
        try:
            self.params.validate_grade1(self.setup)
        except ValueError as exc:
            _fail(f"params.potential: {exc}")

        self.unknown = self._build_unknown(cfg.get("unknown", {"type": "plane-wave"}))

    def _build_setup(self, cfg):
        conn_cfg = cfg.get("connection", {"type": "zero"})
        ctype = conn_cfg.get("type")
        if ctype == "zero":
            conn = ConnectionField.zero()
        elif ctype == "table":
            gamma = [[[None] * 4 for _ in range(4)] for _ in range(4)]
            for i, ent in enumerate(conn_cfg.get("entries", [])):
                we = f"connection.entries[{i}]"
                try:
                    a, b, c = int(ent["a"]), int(ent["b"]), int(ent["c"])
                except (KeyError, TypeError, ValueError):
                    _fail(f"{we}: needs integer frame indices a, b, c")
                if not all(0 <= i_ < 4 for i_ in (a, b, c)) or b >= c:
                    _fail(f"{we}: indices must satisfy 0 <= a < 4 and b < c")
                if gamma[a][b][c] is not None:
                    _fail(f"{we}: duplicate entry for ({a},{b},{c})")
                e = parse_expr(ent.get("expr"), f"{we}.expr")
                gamma[a][b][c] = e
                gamma[a][c][b] = f_scale(-1.0, e)
            conn = ConnectionField(gamma)
        else:
            _fail(f"connection.type must be 'zero' or 'table', got {ctype!r}")

        frame_cfg = cfg.get("frame", {"type": "fiducial"})
        ftype = frame_cfg.get("type")
        base = SpacetimeSetup(self.chart, conn)
        if ftype == "fiducial":
            return base, None
        if ftype == "rotor":
            rot = parse_expr(frame_cfg.get("expr"), "frame.expr")
            fc = change_spin_frame(rot, base)
            return fc.setup, rot
        _fail(f"frame.type must be 'fiducial' or 'rotor', got {ftype!r}")

    def _build_unknown(self, cfg) -> Field:
        utype = cfg.get("type", "expr")
        if utype == "plane-wave":
            boost_cfg = cfg.get("boost")
            boost = None
            if boost_cfg is not None:
                b = parse_expr(boost_cfg, "unknown.boost")
                if not isinstance(b, Constant) or isinstance(b.value, CMultivector):
                    _fail("unknown.boost must be a constant real rotor")
                boost = b.value
            try:
                return make_plane_wave(self.params.mass, boost)
            except StaError as exc:
                _fail(f"unknown.boost: {exc}")
        if utype == "constant-one":
            return CliffordField(Constant(Multivector.scalar(1.0)))
        if utype == "expr":
            return CliffordField(parse_expr(cfg.get("expr"), "unknown.expr"))
        _fail(f"unknown.type must be 'plane-wave', 'constant-one' or 'expr'")

    def tol(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)


def load_config(path_or_name: str) -> dict:
    """Load a config from a path, falling back to the built-in scenarios."""
    p = Path(path_or_name)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    else:
        builtin = resources.files("sta").joinpath(f"scenarios/{path_or_name}.json")
        if not builtin.is_file():
            raise ConfigError(
                f"no config file {path_or_name!r} and no built-in scenario of that name"
            )
        text = builtin.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config does not parse as JSON: {exc}") from exc


def builtin_scenario_names() -> list[str]:
    base = resources.files("sta").joinpath("scenarios")
    return sorted(p.name[: -len(".json")] for p in base.iterdir() if p.name.endswith(".json"))
