"""Design specification documents.

A design spec declares functional requirements (each with an acceptable
range), design parameters, and optionally an influence matrix, per-FR
probability models, per-FR additive noise models, a binarization threshold
``epsilon``, and a batch-tank scenario block.

The JSON document format is pinned here::

    {
      "frs":  [{"id", "description?", "nominal", "tol_minus", "tol_plus", "unit?"}],
      "dps":  [{"id", "description?", "nominal", "uncertainty?"}],
      "matrix": [[...], ...],            # optional, |frs| rows x |dps| columns
      "system_pdfs": {"<fr id>": pdf},   # optional
      "noise_pdfs":  {"<fr id>": pdf},   # optional
      "epsilon": 0.0,                    # optional, >= 0
      "scenario": {...}                  # optional tank block
    }

    pdf: {"kind": "uniform",    "lo", "hi"}
       | {"kind": "normal",     "mu", "sigma"}
       | {"kind": "triangular", "lo", "mode", "hi"}
       | {"kind": "empirical",  "samples": [...]}

Unknown fields are rejected everywhere. ``parse_spec`` reports JSON syntax
errors with their position and schema violations with the offending field
path; ``validate_spec`` returns semantic violations as data rather than
raising.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .distributions import Empirical, Normal, Pdf, Triangular, Uniform
from .errors import SpecFormatError
from .tank import TankConfig

__all__ = [
    "DesignRange",
    "FunctionalRequirement",
    "DesignParameter",
    "DesignSpec",
    "range_bounds",
    "parse_spec",
    "render_spec",
    "validate_spec",
    "pdf_from_obj",
    "pdf_to_obj",
]


@dataclass(frozen=True)
class DesignRange:
    """Acceptable band for an FR: [nominal - tol_minus, nominal + tol_plus].

    Tolerances may be asymmetric. Negative or non-finite values are rejected
    outright; a zero-width range (both tolerances zero) is representable but
    flagged by :func:`validate_spec`.
    """

    nominal: float
    tol_minus: float
    tol_plus: float

    def __post_init__(self):
        for name in ("nominal", "tol_minus", "tol_plus"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"design range {name} must be a finite number")
        if self.tol_minus < 0 or self.tol_plus < 0:
            raise ValueError("design range tolerances must be non-negative")


def range_bounds(dr: DesignRange) -> tuple[float, float]:
    """(lower, upper) bounds of the acceptable band."""
    return (dr.nominal - dr.tol_minus, dr.nominal + dr.tol_plus)


@dataclass(frozen=True)
class FunctionalRequirement:
    id: str
    design_range: DesignRange
    description: str = ""
    unit: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("FR id must be a non-empty string")


@dataclass(frozen=True)
class DesignParameter:
    id: str
    nominal: float
    description: str = ""
    uncertainty: Pdf | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("DP id must be a non-empty string")
        if not (isinstance(self.nominal, (int, float)) and math.isfinite(self.nominal)):
            raise ValueError(f"DP {self.id!r} nominal must be a finite number")


@dataclass(frozen=True)
class DesignSpec:
    frs: tuple[FunctionalRequirement, ...]
    dps: tuple[DesignParameter, ...]
    matrix: tuple[tuple[float, ...], ...] | None = None
    system_pdfs: dict[str, Pdf] = field(default_factory=dict)
    noise_pdfs: dict[str, Pdf] = field(default_factory=dict)
    epsilon: float = 0.0
    scenario: TankConfig | None = None

    def __post_init__(self):
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon)
                and self.epsilon >= 0):
            raise ValueError("epsilon must be a finite number >= 0")

    def fr_ids(self) -> tuple[str, ...]:
        return tuple(fr.id for fr in self.frs)

    def dp_ids(self) -> tuple[str, ...]:
        return tuple(dp.id for dp in self.dps)


# ---------------------------------------------------------------------------
# JSON codec


def _require_object(obj, where):
    if not isinstance(obj, dict):
        raise SpecFormatError("expected an object", where)


def _check_keys(obj, allowed, where):
    for key in obj:
        if key not in allowed:
            raise SpecFormatError(f"unknown field {key!r}", where)


def _number(obj, key, where, required=True, default=None):
    if key not in obj:
        if required:
            raise SpecFormatError(f"missing required field {key!r}", where)
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecFormatError(f"field {key!r} must be a number", where)
    return float(v)


def _string(obj, key, where, required=True, default=""):
    if key not in obj:
        if required:
            raise SpecFormatError(f"missing required field {key!r}", where)
        return default
    v = obj[key]
    if not isinstance(v, str):
        raise SpecFormatError(f"field {key!r} must be a string", where)
    return v


_PDF_FIELDS = {
    "uniform": ("lo", "hi"),
    "normal": ("mu", "sigma"),
    "triangular": ("lo", "mode", "hi"),
    "empirical": ("samples",),
}


def pdf_from_obj(obj, where: str = "pdf") -> Pdf:
    """Decode one pdf object; raises SpecFormatError naming the field."""
    _require_object(obj, where)
    kind = _string(obj, "kind", where)
    if kind not in _PDF_FIELDS:
        raise SpecFormatError(f"unknown pdf kind {kind!r}", where)
    _check_keys(obj, ("kind",) + _PDF_FIELDS[kind], where)
    try:
        if kind == "uniform":
            return Uniform(_number(obj, "lo", where), _number(obj, "hi", where))
        if kind == "normal":
            return Normal(_number(obj, "mu", where), _number(obj, "sigma", where))
        if kind == "triangular":
            return Triangular(_number(obj, "lo", where), _number(obj, "mode", where),
                              _number(obj, "hi", where))
        samples = obj.get("samples")
        if not isinstance(samples, list) or not samples:
            raise SpecFormatError("field 'samples' must be a non-empty array", where)
        for i, v in enumerate(samples):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SpecFormatError(f"samples[{i}] must be a number", where)
        return Empirical(tuple(float(v) for v in samples))
    except ValueError as exc:
        if isinstance(exc, SpecFormatError):
            raise
        raise SpecFormatError(str(exc), where) from exc


def pdf_to_obj(pdf: Pdf) -> dict:
    """Encode one pdf as its JSON object form."""
    if isinstance(pdf, Uniform):
        return {"kind": "uniform", "lo": pdf.lo, "hi": pdf.hi}
    if isinstance(pdf, Normal):
        return {"kind": "normal", "mu": pdf.mu, "sigma": pdf.sigma}
    if isinstance(pdf, Triangular):
        return {"kind": "triangular", "lo": pdf.lo, "mode": pdf.mode, "hi": pdf.hi}
    if isinstance(pdf, Empirical):
        return {"kind": "empirical", "samples": list(pdf.samples)}
    raise TypeError(f"not a known pdf type: {type(pdf).__name__}")


_SCENARIO_NUMBERS = ("level_low", "level_high", "temp_setpoint", "mix_duration", "timestep")
_GAIN_KEYS = ("mixer_to_temp", "heater_to_level", "mixer_to_level")
_NOISE_KEYS = ("level", "temp", "duration", "inlet")


def _scenario_from_obj(obj, where="scenario") -> TankConfig:
    _require_object(obj, where)
    _check_keys(obj, _SCENARIO_NUMBERS + ("sensor_noise", "coupling_gains", "cycles"), where)
    kwargs = {}
    for key in _SCENARIO_NUMBERS:
        v = _number(obj, key, f"{where}.{key}", required=False)
        if v is not None:
            kwargs[key] = v
    if "cycles" in obj:
        v = obj["cycles"]
        if isinstance(v, bool) or not isinstance(v, int):
            raise SpecFormatError("field 'cycles' must be an integer", where)
        kwargs["cycles"] = v
    if "sensor_noise" in obj:
        block = obj["sensor_noise"]
        _require_object(block, f"{where}.sensor_noise")
        _check_keys(block, _NOISE_KEYS, f"{where}.sensor_noise")
        kwargs["sensor_noise"] = {
            ch: pdf_from_obj(block[ch], f"{where}.sensor_noise.{ch}") for ch in block
        }
    if "coupling_gains" in obj:
        block = obj["coupling_gains"]
        _require_object(block, f"{where}.coupling_gains")
        _check_keys(block, _GAIN_KEYS, f"{where}.coupling_gains")
        for key in block:
            kwargs[key] = _number(block, key, f"{where}.coupling_gains.{key}")
    try:
        return TankConfig(**kwargs)
    except ValueError as exc:
        raise SpecFormatError(str(exc), where) from exc


def _scenario_to_obj(cfg: TankConfig) -> dict:
    out = {
        "level_low": cfg.level_low,
        "level_high": cfg.level_high,
        "temp_setpoint": cfg.temp_setpoint,
        "mix_duration": cfg.mix_duration,
        "timestep": cfg.timestep,
        "cycles": cfg.cycles,
    }
    if cfg.sensor_noise:
        out["sensor_noise"] = {ch: pdf_to_obj(p) for ch, p in cfg.sensor_noise.items()}
    gains = {
        "mixer_to_temp": cfg.mixer_to_temp,
        "heater_to_level": cfg.heater_to_level,
        "mixer_to_level": cfg.mixer_to_level,
    }
    if any(v != 0.0 for v in gains.values()):
        out["coupling_gains"] = gains
    return out


_FR_KEYS = ("id", "description", "nominal", "tol_minus", "tol_plus", "unit")
_DP_KEYS = ("id", "description", "nominal", "uncertainty")
_TOP_KEYS = ("frs", "dps", "matrix", "system_pdfs", "noise_pdfs", "epsilon", "scenario")


def _fr_from_obj(obj, where) -> FunctionalRequirement:
    _require_object(obj, where)
    _check_keys(obj, _FR_KEYS, where)
    fr_id = _string(obj, "id", where)
    try:
        dr = DesignRange(
            _number(obj, "nominal", where),
            _number(obj, "tol_minus", where),
            _number(obj, "tol_plus", where),
        )
        return FunctionalRequirement(
            fr_id, dr,
            description=_string(obj, "description", where, required=False),
            unit=_string(obj, "unit", where, required=False),
        )
    except ValueError as exc:
        if isinstance(exc, SpecFormatError):
            raise
        raise SpecFormatError(str(exc), where) from exc


def _dp_from_obj(obj, where) -> DesignParameter:
    _require_object(obj, where)
    _check_keys(obj, _DP_KEYS, where)
    dp_id = _string(obj, "id", where)
    unc = None
    if "uncertainty" in obj:
        unc = pdf_from_obj(obj["uncertainty"], f"{where}.uncertainty")
    try:
        return DesignParameter(
            dp_id, _number(obj, "nominal", where),
            description=_string(obj, "description", where, required=False),
            uncertainty=unc,
        )
    except ValueError as exc:
        if isinstance(exc, SpecFormatError):
            raise
        raise SpecFormatError(str(exc), where) from exc


def _pdf_map_from_obj(obj, where, fr_ids) -> dict[str, Pdf]:
    _require_object(obj, where)
    out = {}
    for key, val in obj.items():
        if key not in fr_ids:
            raise SpecFormatError(f"unknown FR id {key!r}", where)
        out[key] = pdf_from_obj(val, f"{where}.{key}")
    return out


def parse_spec(text: str) -> DesignSpec:
    """Parse a JSON design-spec document.

    Raises :class:`SpecFormatError` with the error position for malformed
    JSON, or with the offending field path for schema violations. Semantic
    problems that are representable (zero-width ranges, missing probability
    sources) are left to :func:`validate_spec`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(
            f"syntax error: {exc.msg}", f"line {exc.lineno} column {exc.colno}"
        ) from exc
    _require_object(doc, "document")
    _check_keys(doc, _TOP_KEYS, "document")

    for key in ("frs", "dps"):
        if key not in doc or not isinstance(doc[key], list):
            raise SpecFormatError(f"missing or non-array field {key!r}", "document")

    frs = tuple(_fr_from_obj(o, f"frs[{i}]") for i, o in enumerate(doc["frs"]))
    dps = tuple(_dp_from_obj(o, f"dps[{i}]") for i, o in enumerate(doc["dps"]))

    fr_ids = [fr.id for fr in frs]
    for i, fr_id in enumerate(fr_ids):
        if fr_id in fr_ids[:i]:
            raise SpecFormatError(f"duplicate FR id {fr_id!r}", f"frs[{i}]")
    dp_ids = [dp.id for dp in dps]
    for i, dp_id in enumerate(dp_ids):
        if dp_id in dp_ids[:i]:
            raise SpecFormatError(f"duplicate DP id {dp_id!r}", f"dps[{i}]")

    matrix = None
    if "matrix" in doc:
        raw = doc["matrix"]
        if not isinstance(raw, list) or len(raw) != len(frs):
            raise SpecFormatError(
                f"matrix must have one row per FR ({len(frs)})", "matrix")
        rows = []
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != len(dps):
                raise SpecFormatError(
                    f"row {i} must have one entry per DP ({len(dps)})", "matrix")
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, float)) \
                        or not math.isfinite(float(v)):
                    raise SpecFormatError(f"entry [{i}][{j}] must be a finite number",
                                          "matrix")
            rows.append(tuple(float(v) for v in row))
        matrix = tuple(rows)

    system_pdfs = _pdf_map_from_obj(doc["system_pdfs"], "system_pdfs", fr_ids) \
        if "system_pdfs" in doc else {}
    noise_pdfs = _pdf_map_from_obj(doc["noise_pdfs"], "noise_pdfs", fr_ids) \
        if "noise_pdfs" in doc else {}

    epsilon = _number(doc, "epsilon", "epsilon", required=False, default=0.0)
    scenario = _scenario_from_obj(doc["scenario"]) if "scenario" in doc else None

    try:
        return DesignSpec(frs, dps, matrix, system_pdfs, noise_pdfs, epsilon, scenario)
    except ValueError as exc:
        raise SpecFormatError(str(exc), "document") from exc


def render_spec(spec: DesignSpec) -> str:
    """Render a spec back to its JSON document form (parse round-trips)."""
    doc: dict = {"frs": [], "dps": []}
    for fr in spec.frs:
        obj = {"id": fr.id}
        if fr.description:
            obj["description"] = fr.description
        obj["nominal"] = fr.design_range.nominal
        obj["tol_minus"] = fr.design_range.tol_minus
        obj["tol_plus"] = fr.design_range.tol_plus
        if fr.unit:
            obj["unit"] = fr.unit
        doc["frs"].append(obj)
    for dp in spec.dps:
        obj = {"id": dp.id}
        if dp.description:
            obj["description"] = dp.description
        obj["nominal"] = dp.nominal
        if dp.uncertainty is not None:
            obj["uncertainty"] = pdf_to_obj(dp.uncertainty)
        doc["dps"].append(obj)
    if spec.matrix is not None:
        doc["matrix"] = [list(row) for row in spec.matrix]
    if spec.system_pdfs:
        doc["system_pdfs"] = {k: pdf_to_obj(v) for k, v in spec.system_pdfs.items()}
    if spec.noise_pdfs:
        doc["noise_pdfs"] = {k: pdf_to_obj(v) for k, v in spec.noise_pdfs.items()}
    if spec.epsilon != 0.0:
        doc["epsilon"] = spec.epsilon
    if spec.scenario is not None:
        doc["scenario"] = _scenario_to_obj(spec.scenario)
    return json.dumps(doc, indent=2) + "\n"


def validate_spec(spec: DesignSpec) -> list[str]:
    """Semantic validation; returns violations as strings (empty = valid).

    Pure: the spec is not modified and repeated calls agree.
    """
    issues = []
    fr_ids = list(spec.fr_ids())
    dp_ids = list(spec.dp_ids())
    for i, fr_id in enumerate(fr_ids):
        if fr_id in fr_ids[:i]:
            issues.append(f"duplicate FR id {fr_id!r}")
    for i, dp_id in enumerate(dp_ids):
        if dp_id in dp_ids[:i]:
            issues.append(f"duplicate DP id {dp_id!r}")
    for fr in spec.frs:
        dr = fr.design_range
        if dr.tol_minus == 0 and dr.tol_plus == 0:
            issues.append(f"FR {fr.id!r}: zero-width design range")
    if spec.matrix is not None:
        rows = len(spec.matrix)
        cols = {len(r) for r in spec.matrix}
        if rows != len(spec.frs) or (spec.matrix and cols != {len(spec.dps)}):
            shape = f"{rows}x{'/'.join(str(c) for c in sorted(cols)) or '0'}"
            issues.append(
                f"matrix shape {shape} does not match "
                f"{len(spec.frs)} FRs x {len(spec.dps)} DPs")
    for fr in spec.frs:
        if (fr.id not in spec.system_pdfs and spec.matrix is None
                and spec.scenario is None):
            issues.append(
                f"FR {fr.id!r} has no system range source "
                f"(no system pdf, design matrix, or scenario)")
    for key in list(spec.system_pdfs) + list(spec.noise_pdfs):
        if key not in fr_ids:
            issues.append(f"pdf map references unknown FR id {key!r}")
    if spec.scenario is not None and len(spec.frs) != 3:
        issues.append(
            f"scenario requires exactly 3 FRs (level, temperature, duration), "
            f"got {len(spec.frs)}")
    return issues
