"""Command line front end.

    nanoforce cp --config run.json [--out table.csv]
    nanoforce friction --config run.json [--out table.csv]
    nanoforce validate [--suite all|wick|cp|friction|keldysh]
    nanoforce material --config run.json [--out table.csv]

Exit codes: 0 ok, 1 validation failure, 2 config error, 3 non-convergence.
Worker threads for sweeps come from ``NANOFORCE_THREADS`` (default 1); the
output does not depend on it.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

import jsonschema
import numpy as np

from . import __version__
from .casimir_polder import HalfSpaceScene, cp_sweep
from .errors import DomainError
from .friction import CONVENTION as FRICTION_CONVENTION
from .friction import FrictionScene, friction_sweep
from .numerics import NumericsPolicy
from .response_models import (
    Constant,
    Drude,
    Lorentz,
    LorentzOscillator,
    PolarizabilityModel,
    Vacuum,
    eps_imag_axis,
)
from .validation import run_suite, SUITES, summary_line

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICS = 0, 1, 2, 3
THREADS_ENV = "NANOFORCE_THREADS"

_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_LINE = {
    "type": "object",
    "properties": {"alpha0": {"type": "number"}, "omega0": _POS, "gamma": _NONNEG},
    "required": ["alpha0", "omega0"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "units": {"const": "natural"},
        "temperature": _POS,
        "z_A": _POS,
        "v": _NONNEG,
        "direction": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "particle": {
            "oneOf": [
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "static"}, "alpha0": _NONNEG},
                 "required": ["model", "alpha0"]},
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "isotropic"}, "alpha0": _NONNEG,
                                "omega0": _POS, "gamma": _NONNEG},
                 "required": ["model", "alpha0", "omega0"]},
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "tensor"},
                                "entries": {"type": "object", "additionalProperties": False,
                                            "properties": {k: _LINE for k in
                                                           ("xx", "yy", "zz", "xy", "xz", "yz")}}},
                 "required": ["model", "entries"]},
            ]
        },
        "wall": {
            "oneOf": [
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "vacuum"}}, "required": ["model"]},
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "constant"}, "eps0": {"type": "number", "minimum": 1}},
                 "required": ["model", "eps0"]},
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "drude"}, "omega_p": _POS, "gamma": _POS},
                 "required": ["model", "omega_p", "gamma"]},
                {"type": "object", "additionalProperties": False,
                 "properties": {"model": {"const": "lorentz"}, "eps_inf": {"type": "number", "minimum": 1},
                                "strength": _NONNEG, "omega0": _POS, "gamma": _POS},
                 "required": ["model", "eps_inf", "strength", "omega0", "gamma"]},
            ]
        },
        "numerics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rel_tol": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "matsubara_max_terms": {"type": "integer", "minimum": 1},
                "cp_variant": {"enum": ["w0_squared", "as_printed"]},
                "s0": {"enum": ["limit", "quasistatic"]},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "axis": {"enum": ["z", "T", "v"]},
                "min": _NONNEG,
                "max": _NONNEG,
                "points": {"type": "integer", "minimum": 0},
                "spacing": {"enum": ["log", "linear"]},
            },
            "required": ["axis", "min", "max", "points"],
        },
        "material_grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"zeta_min": _POS, "zeta_max": _POS, "points": {"type": "integer", "minimum": 1}},
            "required": ["zeta_min", "zeta_max", "points"],
        },
    },
    "required": ["temperature", "particle"],
}


class ConfigError(Exception):
    pass


class NonConvergence(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    digest: str

    @property
    def temperature(self) -> float:
        return float(self.raw["temperature"])

    def policy(self) -> NumericsPolicy:
        num = self.raw.get("numerics", {})
        kw = {k: num[k] for k in ("rel_tol", "matsubara_max_terms") if k in num}
        return NumericsPolicy(**kw)

    @property
    def variant(self) -> str:
        return self.raw.get("numerics", {}).get("cp_variant", "w0_squared")

    @property
    def s0(self) -> str:
        return self.raw.get("numerics", {}).get("s0", "limit")

    def particle(self) -> PolarizabilityModel:
        p = self.raw["particle"]
        try:
            if p["model"] == "static":
                return PolarizabilityModel.static(p["alpha0"])
            if p["model"] == "isotropic":
                return PolarizabilityModel.isotropic(p["alpha0"], p["omega0"], p.get("gamma", 0.0))
            return PolarizabilityModel(**{k: Lorentz(e["alpha0"], e["omega0"], e.get("gamma", 0.0))
                                          for k, e in p["entries"].items()})
        except DomainError as exc:
            raise ConfigError(f"particle: {exc}") from exc

    def wall(self):
        if "wall" not in self.raw:
            raise ConfigError("wall: required for this command")
        w = self.raw["wall"]
        try:
            return {
                "vacuum": lambda: Vacuum(),
                "constant": lambda: Constant(w["eps0"]),
                "drude": lambda: Drude(w["omega_p"], w["gamma"]),
                "lorentz": lambda: LorentzOscillator(w["eps_inf"], w["strength"], w["omega0"], w["gamma"]),
            }[w["model"]]()
        except DomainError as exc:
            raise ConfigError(f"wall: {exc}") from exc

    def sweep_values(self, allowed: Sequence[str], fixed_key: str, fixed_axis: str):
        """``(axis, values)`` from ``sweep`` or the single fixed value."""
        sw = self.raw.get("sweep")
        if sw is None:
            if fixed_key not in self.raw:
                raise ConfigError(f"{fixed_key}: required when no sweep is given")
            return fixed_axis, [float(self.raw[fixed_key])]
        if sw["axis"] not in allowed:
            raise ConfigError(f"sweep.axis: {sw['axis']!r} not allowed here, use one of {list(allowed)}")
        lo, hi, n = float(sw["min"]), float(sw["max"]), int(sw["points"])
        if hi < lo:
            raise ConfigError("sweep.max: must be >= sweep.min")
        if sw.get("spacing", "linear") == "log":
            if lo <= 0.0:
                raise ConfigError("sweep.min: must be positive for log spacing")
            values = np.geomspace(lo, hi, n) if n > 1 else np.array([lo] * n)
        else:
            values = np.linspace(lo, hi, n)
        return sw["axis"], [float(x) for x in values]


def _is_model_mismatch(e: jsonschema.ValidationError) -> bool:
    return e.validator == "const" and list(e.absolute_path)[-1:] == ["model"]


def _error_path(err: jsonschema.ValidationError) -> str:
    # for oneOf, report the branch whose "model" matched so the message names a real key
    if err.validator == "oneOf" and err.context:
        branches: dict = {}
        for e in err.context:
            branches.setdefault(e.relative_schema_path[0], []).append(e)
        matched = [errs for errs in branches.values() if not any(_is_model_mismatch(e) for e in errs)]
        if matched:
            return _error_path(matched[0][0])
        path = ".".join(str(p) for p in err.absolute_path)
        model = err.instance.get("model") if isinstance(err.instance, dict) else None
        return f"{path}.model: unknown or missing model {model!r}"
    path = ".".join(str(p) for p in err.absolute_path) or "<root>"
    return f"{path}: {err.message}"


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        raw = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError(_error_path(errors[0]))
    return RunConfig(raw, hashlib.sha256(data).hexdigest())


def threads_from_env() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(value)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV}: expected an integer, got {value!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV}: must be >= 1")
    return n


# -- tables ----------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


@dataclass(frozen=True)
class CsvTable:
    metadata: tuple[str, ...]
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def render(self) -> str:
        lines = [f"# {m}" for m in self.metadata]
        lines.append(",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width does not match the header")
            lines.append(",".join(fmt(x) for x in row))
        return "\n".join(lines) + "\n"


def _metadata(cfg: RunConfig, command: str, *notes: str) -> tuple[str, ...]:
    return (f"tool=nanoforce {__version__}", f"command={command}", f"config_sha256={cfg.digest}",
            "units=natural (hbar = k_B = c = 1)", *notes)


def run_cp(cfg: RunConfig) -> tuple[CsvTable, bool]:
    _, z_grid = cfg.sweep_values(("z",), "z_A", "z")
    if any(z <= 0.0 for z in z_grid):
        raise ConfigError("sweep.min: z_A values must be positive")
    try:
        scene = HalfSpaceScene(z_grid[0] if z_grid else 1.0, cfg.temperature, cfg.wall(), cfg.particle())
        rows = cp_sweep(scene, z_grid, cfg.variant, cfg.policy(), cfg.s0, threads=threads_from_env())
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    table = CsvTable(
        _metadata(cfg, "cp", f"cp_variant={cfg.variant}", f"s0={cfg.s0}",
                  "sign=negative F_z attracts the particle to the wall"),
        ("z_A", "F_z", "error_estimate", "s_terms", "converged"),
        tuple((z, r.F_z, r.error_estimate, r.s_terms_used, r.converged) for z, r in rows),
    )
    return table, all(r.converged for _, r in rows)


def run_friction(cfg: RunConfig) -> tuple[CsvTable, bool]:
    axis, values = cfg.sweep_values(("T", "v"), "v", "v")
    try:
        scene = FrictionScene(float(cfg.raw.get("v", 0.0)), cfg.temperature, cfg.particle(),
                              direction=tuple(cfg.raw.get("direction", (0.0, 0.0, 1.0))))
        if axis == "T" and any(x <= 0.0 for x in values):
            raise ConfigError("sweep.min: temperatures must be positive")
        rows = friction_sweep(scene, axis, values, cfg.policy(), threads=threads_from_env())
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    table = CsvTable(
        _metadata(cfg, "friction", f"convention={FRICTION_CONVENTION}"),
        (axis, "F_x", "F_y", "F_z", "drag", "error_estimate", "converged"),
        tuple((x, *r.F.tolist(), r.drag, float(np.max(r.error_estimate)), r.converged) for x, r in rows),
    )
    return table, all(r.converged for _, r in rows)


def material_show(cfg: RunConfig) -> CsvTable:
    g = cfg.raw.get("material_grid", {"zeta_min": 1e-3, "zeta_max": 1e3, "points": 61})
    if g["zeta_max"] < g["zeta_min"]:
        raise ConfigError("material_grid.zeta_max: must be >= zeta_min")
    zeta = np.geomspace(g["zeta_min"], g["zeta_max"], g["points"])
    particle = cfg.particle()
    wall = cfg.wall() if "wall" in cfg.raw else Vacuum()
    eps = eps_imag_axis(wall, zeta)
    axx, ayy, azz = particle.diagonal_imag_axis(zeta)
    return CsvTable(_metadata(cfg, "material"), ("zeta", "eps", "alpha_xx", "alpha_yy", "alpha_zz"),
                    tuple(zip(*(np.atleast_1d(a).tolist() for a in (zeta, eps, axx, ayy, azz)))))


def _emit(table: CsvTable, out: str | None) -> None:
    text = table.render()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nanoforce", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nanoforce {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("cp", "friction", "material"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
    p = sub.add_parser("validate")
    p.add_argument("--suite", default="all", choices=sorted(SUITES))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            checks = []
            for check in run_suite(args.suite):
                print(summary_line(check), flush=True)
                checks.append(check)
            failed = sum(not c.passed for c in checks)
            print(f"SUMMARY suite={args.suite} passed={len(checks) - failed} failed={failed}")
            return EXIT_VALIDATION if failed else EXIT_OK
        cfg = load_config(args.config)
        if args.command == "material":
            _emit(material_show(cfg), args.out)
            return EXIT_OK
        table, converged = (run_cp if args.command == "cp" else run_friction)(cfg)
        _emit(table, args.out)
        if not converged:
            print("error: at least one row did not converge (see the converged column)", file=sys.stderr)
            return EXIT_NUMERICS
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"numerics error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
