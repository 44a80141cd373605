"""Scenario documents (JSON) and result tables (CSV / JSON / gnuplot).

Scenario file layout::

    {
      "geometry":   {"h_sat_km": 500, "h_haps_km": 22,
                     "zenith_ah_deg": 70, "zenith_b_deg": [81, 73, 66, 77, 61]},
      "atmosphere": {"regime": "moderate", "theta1_per_km": 1e-5, "rho_fraction": 0.1},
      "beam":       {"wavelength_nm": 1550, "aperture_m": 0.1},
      "turbulence": {"v_g_mps": 60, "ground_A": 1.7e-14},
      "run":        {"gamma_bar_db": [0, 2, 4], "gamma_th_db": 7,
                     "trials": 10000000, "seed": 20210901}
    }

``atmosphere`` takes either ``regime`` or ``theta2_per_km`` (raw stratospheric
extinction, km^-1), plus an optional ``theta2_table`` of ``[h_haps_km, theta2]``
pairs. ``run.gamma_bar_db`` may instead be a range object
``{"start": 0, "stop": 20, "step": 2}`` (stop inclusive).

Result tables have the fixed column order of :data:`COLUMNS` (altitude sweeps
prepend ``h_haps_km``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import jsonschema

from .analytics import OutageEstimate
from .atmosphere import VolcanicRegime
from .errors import DomainError, ScenarioParseError
from .scenario import Scenario

_NUMBER = {"type": "number"}
_INTEGER = {"type": "integer"}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["geometry", "atmosphere", "beam", "turbulence", "run"],
    "additionalProperties": False,
    "properties": {
        "geometry": {
            "type": "object",
            "required": ["h_sat_km", "h_haps_km", "zenith_ah_deg", "zenith_b_deg"],
            "additionalProperties": False,
            "properties": {
                "h_sat_km": _NUMBER,
                "h_haps_km": _NUMBER,
                "zenith_ah_deg": _NUMBER,
                "zenith_b_deg": {"type": "array", "items": _NUMBER},
            },
        },
        "atmosphere": {
            "type": "object",
            "required": ["rho_fraction"],
            "additionalProperties": False,
            "properties": {
                "regime": {"type": "string", "enum": ["moderate", "high", "extreme"]},
                "theta1_per_km": _NUMBER,
                "theta2_per_km": _NUMBER,
                "rho_fraction": _NUMBER,
                "theta2_table": {
                    "type": "array",
                    "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
                },
            },
            "anyOf": [
                {"required": ["regime"]},
                {"required": ["theta2_per_km"]},
                {"required": ["theta2_table"]},
            ],
        },
        "beam": {
            "type": "object",
            "required": ["wavelength_nm", "aperture_m"],
            "additionalProperties": False,
            "properties": {"wavelength_nm": _NUMBER, "aperture_m": _NUMBER},
        },
        "turbulence": {
            "type": "object",
            "required": ["v_g_mps"],
            "additionalProperties": False,
            "properties": {"v_g_mps": _NUMBER, "ground_A": _NUMBER},
        },
        "run": {
            "type": "object",
            "required": ["gamma_bar_db", "gamma_th_db"],
            "additionalProperties": False,
            "properties": {
                "gamma_bar_db": {
                    "oneOf": [
                        {"type": "array", "items": _NUMBER},
                        {
                            "type": "object",
                            "required": ["start", "stop", "step"],
                            "additionalProperties": False,
                            "properties": {"start": _NUMBER, "stop": _NUMBER, "step": _NUMBER},
                        },
                    ]
                },
                "gamma_th_db": _NUMBER,
                "trials": _INTEGER,
                "seed": _INTEGER,
                "ss1_rule": {"type": "string", "enum": ["direct", "extrema"]},
            },
        },
    },
}

COLUMNS = ("gamma_bar_db", "strategy", "method", "outage", "std_error", "terms_used")


def _field_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else (("." if parts else "") + str(p)))
    return "".join(parts) or "<root>"


def _line_of(text: str, path) -> Optional[int]:
    # best effort: first line mentioning the innermost key
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return None
    needle = f'"{keys[-1]}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def expand_range(spec) -> tuple:
    start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
    if step <= 0:
        raise DomainError("run.gamma_bar_db.step must be positive")
    if stop < start:
        raise DomainError("run.gamma_bar_db.stop must not be below start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(n))


def scenario_from_dict(doc: dict, text: Optional[str] = None) -> Scenario:
    """Validate a decoded scenario document and build a :class:`Scenario`.

    Raises
    ------
    ScenarioParseError
        Structural problems: missing fields, wrong types, unknown keys.
    DomainError
        Physically invalid values (e.g. ``h_haps_km >= h_sat_km``).
    """
    validator = jsonschema.Draft7Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = _field_path(err)
        line = _line_of(text, list(err.absolute_path)) if text else None
        suffix = f" (line {line})" if line else ""
        if err.validator == "required":
            missing = err.message.split("'")[1] if "'" in err.message else err.message
            full = f"{where}.{missing}" if where != "<root>" else missing
            raise ScenarioParseError(f"missing required field {full}{suffix}")
        raise ScenarioParseError(f"invalid field {where}: {err.message}{suffix}")

    geo, atm, beam, turb, run = (doc[k] for k in ("geometry", "atmosphere", "beam", "turbulence", "run"))
    grid = run["gamma_bar_db"]
    grid = expand_range(grid) if isinstance(grid, dict) else tuple(grid)
    kwargs = dict(
        h_sat_km=geo["h_sat_km"],
        h_haps_km=geo["h_haps_km"],
        zenith_ah_deg=geo["zenith_ah_deg"],
        zenith_b_deg=tuple(geo["zenith_b_deg"]),
        regime=VolcanicRegime.parse(atm["regime"]) if "regime" in atm else None,
        theta2_per_km=atm.get("theta2_per_km"),
        rho_fraction=atm["rho_fraction"],
        theta2_table=tuple(tuple(p) for p in atm["theta2_table"]) if "theta2_table" in atm else None,
        wavelength_nm=beam["wavelength_nm"],
        aperture_m=beam["aperture_m"],
        v_g_mps=turb["v_g_mps"],
        gamma_bar_db=grid,
        gamma_th_db=run["gamma_th_db"],
    )
    optional = {
        "theta1_per_km": atm.get("theta1_per_km"),
        "ground_A": turb.get("ground_A"),
        "trials": run.get("trials"),
        "seed": run.get("seed"),
        "ss1_rule": run.get("ss1_rule"),
    }
    kwargs.update({k: v for k, v in optional.items() if v is not None})
    return Scenario(**kwargs)


def loads_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc, text)


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario file {path}: {exc.strerror}") from None
    return loads_scenario(text)


def scenario_to_dict(s: Scenario) -> dict:
    atmosphere = {"theta1_per_km": s.theta1_per_km, "rho_fraction": s.rho_fraction}
    if s.regime is not None:
        atmosphere["regime"] = s.regime.name.lower()
    if s.theta2_per_km is not None:
        atmosphere["theta2_per_km"] = s.theta2_per_km
    if s.theta2_table is not None:
        atmosphere["theta2_table"] = [list(p) for p in s.theta2_table]
    return {
        "geometry": {
            "h_sat_km": s.h_sat_km,
            "h_haps_km": s.h_haps_km,
            "zenith_ah_deg": s.zenith_ah_deg,
            "zenith_b_deg": list(s.zenith_b_deg),
        },
        "atmosphere": atmosphere,
        "beam": {"wavelength_nm": s.wavelength_nm, "aperture_m": s.aperture_m},
        "turbulence": {"v_g_mps": s.v_g_mps, "ground_A": s.ground_A},
        "run": {
            "gamma_bar_db": list(s.gamma_bar_db),
            "gamma_th_db": s.gamma_th_db,
            "trials": s.trials,
            "seed": s.seed,
            "ss1_rule": s.ss1_rule,
        },
    }


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


@dataclass(frozen=True)
class ResultRow:
    gamma_bar_db: float
    strategy: str
    estimate: OutageEstimate
    h_haps_km: Optional[float] = None

    def as_dict(self) -> dict:
        d = {} if self.h_haps_km is None else {"h_haps_km": self.h_haps_km}
        d.update(
            gamma_bar_db=self.gamma_bar_db,
            strategy=self.strategy,
            method=self.estimate.method.value,
            outage=self.estimate.value,
            std_error=self.estimate.std_error,
            terms_used=self.estimate.terms_used,
        )
        return d


def _fmt(key, value):
    if value is None:
        return ""
    if key in ("outage", "std_error"):
        return f"{value:.10e}"
    if key in ("gamma_bar_db", "h_haps_km"):
        return f"{value:g}"
    return str(value)


def format_table(rows, fmt: str = "csv") -> str:
    """Render result rows as ``csv``, ``json`` or whitespace-separated ``gnuplot``."""
    rows = list(rows)
    columns = (("h_haps_km",) if rows and rows[0].h_haps_km is not None else ()) + COLUMNS
    if fmt == "json":
        return json.dumps([r.as_dict() for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            d = r.as_dict()
            writer.writerow([_fmt(c, d[c]) for c in columns])
        return buf.getvalue()
    if fmt == "gnuplot":
        lines = ["# " + " ".join(columns)]
        for r in rows:
            d = r.as_dict()
            lines.append(" ".join(_fmt(c, d[c]) or "NaN" for c in columns))
        return "\n".join(lines) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")
