"""Deterministic report rendering.

Reports are plain dict documents with a fixed key order, rendered to JSON
by a renderer that owns the float format: finite floats are written with
17 significant digits (enough to round-trip IEEE doubles), infinities are
written as the JSON strings ``"inf"`` / ``"-inf"`` because infinite bits
are a legitimate result, not an error. Identical inputs therefore produce
byte-identical output. The text format is a human-oriented view of the
same document and is never parsed back.
"""

from __future__ import annotations

import json
import math

from .coupling import (Classification, Coupled, Decoupled, Degenerate,
                       Uncoupled)
from .info import SystemInfoReport
from .model import DesignSpec, range_bounds

__all__ = [
    "render_json",
    "render_text",
    "classification_doc",
    "info_doc",
    "spec_echo",
]


def _float_token(x: float) -> str:
    if math.isnan(x):
        raise ValueError("reports must not contain NaN")
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _render(value, indent: int, out: list) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _render(item, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(value):
            out.append(inner)
            _render(item, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif value is None:
        out.append("null")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_float_token(value))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    else:
        raise TypeError(f"cannot render {type(value).__name__} in a report")


def render_json(doc: dict) -> str:
    out: list[str] = []
    _render(doc, 0, out)
    out.append("\n")
    return "".join(out)


def spec_echo(spec: DesignSpec) -> dict:
    return {"frs": list(spec.fr_ids()), "dps": list(spec.dp_ids())}


def _pair_ids(pair, fr_ids, dp_ids):
    fr_idx, dp_idx = pair
    return [fr_ids[fr_idx], dp_ids[dp_idx]]


def classification_doc(cls: Classification, fr_ids, dp_ids) -> dict:
    """Classification block with a fixed schema: the inapplicable fields
    are null rather than absent."""
    doc = {"class": cls.kind, "sequence": None, "blocks": None, "reason": None}
    if isinstance(cls, Uncoupled):
        doc["sequence"] = [_pair_ids(p, fr_ids, dp_ids) for p in cls.pairs]
    elif isinstance(cls, Decoupled):
        doc["sequence"] = [_pair_ids(p, fr_ids, dp_ids) for p in cls.order]
    elif isinstance(cls, Coupled):
        doc["blocks"] = [[_pair_ids(p, fr_ids, dp_ids) for p in block]
                         for block in cls.blocks]
    elif isinstance(cls, Degenerate):
        doc["reason"] = cls.reason.value
    return doc


def info_doc(report: SystemInfoReport, spec: DesignSpec,
             pdf_labels: dict[str, str] | None = None) -> dict:
    """Info block for a report document.

    Rows are labeled by ``report.fr_ids`` (falling back to declaration
    order) and annotated with each FR's design range and the description of
    the distribution its probability came from (``pdf_labels``).
    """
    fr_by_id = {fr.id: fr for fr in spec.frs}
    labels = report.fr_ids if report.fr_ids is not None else spec.fr_ids()
    rows = []
    for fr_id, res in zip(labels, report.per_fr):
        fr = fr_by_id[fr_id]
        lo, hi = range_bounds(fr.design_range)
        rows.append({
            "fr": fr_id,
            "probability": res.probability,
            "bits": res.bits,
            "std_error": res.std_error,
            "design_range": {"lower": lo, "upper": hi},
            "system_pdf": (pdf_labels or {}).get(fr_id, "(sampled)"),
        })
    doc = {
        "method": report.method.value,
        "order": list(report.fr_ids) if report.method.value == "chain"
                 and report.fr_ids is not None else None,
        "per_fr": rows,
        "system_probability": report.system_probability,
        "system_bits": report.system_bits,
        "mc": None,
    }
    if report.mc is not None:
        doc["mc"] = {
            "seed": report.mc.seed,
            "n_samples": report.mc.n_samples,
            "std_error": report.mc.std_error,
        }
    return doc


def _fmt_num(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".6g")


def render_text(doc: dict) -> str:
    """Aligned, human-oriented view of a report document."""
    lines: list[str] = []
    spec = doc.get("spec")
    if spec:
        lines.append(f"FRs: {', '.join(spec['frs'])}")
        lines.append(f"DPs: {', '.join(spec['dps'])}")
    cls = doc.get("classification")
    if cls:
        lines.append(f"classification: {cls['class']}")
        if cls.get("sequence"):
            steps = " -> ".join(f"{fr} (via {dp})" for fr, dp in cls["sequence"])
            lines.append(f"  adjustment sequence: {steps}")
        if cls.get("blocks"):
            for i, block in enumerate(cls["blocks"]):
                members = ", ".join(f"{fr}/{dp}" for fr, dp in block)
                lines.append(f"  block {i + 1}: {members}")
        if cls.get("reason"):
            lines.append(f"  reason: {cls['reason'].replace('_', ' ')}")
    elif "classification" in doc:
        lines.append("classification: (no design matrix)")
    info = doc.get("info")
    if info:
        lines.append(f"method: {info['method']}")
        if info.get("order"):
            lines.append(f"  chain order: {' -> '.join(info['order'])}")
        width = max([len("system")] + [len(row["fr"]) for row in info["per_fr"]]) + 2
        lines.append(
            f"{'FR':<{width}}{'probability':>14}{'bits':>12}{'std_error':>12}  design range")
        for row in info["per_fr"]:
            rng = row["design_range"]
            lines.append(
                f"{row['fr']:<{width}}"
                f"{_fmt_num(_as_float(row['probability'])):>14}"
                f"{_fmt_num(_as_float(row['bits'])):>12}"
                f"{_fmt_num(_as_float(row['std_error'])):>12}"
                f"  [{_fmt_num(rng['lower'])}, {_fmt_num(rng['upper'])}]"
                f"  {row['system_pdf']}")
        lines.append(
            f"{'system':<{width}}"
            f"{_fmt_num(_as_float(info['system_probability'])):>14}"
            f"{_fmt_num(_as_float(info['system_bits'])):>12}")
        if info.get("mc"):
            mc = info["mc"]
            lines.append(
                f"monte carlo: seed {mc['seed']}, {mc['n_samples']} samples, "
                f"system std_error {_fmt_num(_as_float(mc['std_error']))}")
    if doc.get("csv"):
        lines.append(f"samples written to {doc['csv']}")
    if "issues" in doc:
        if doc["issues"]:
            lines.append("issues:")
            lines.extend(f"  - {issue}" for issue in doc["issues"])
        else:
            lines.append("spec is valid")
    for warning in doc.get("warnings", ()):
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"


def _as_float(x) -> float:
    # Infinities travel as the strings "inf"/"-inf" in document form.
    if isinstance(x, str):
        return math.inf if x == "inf" else -math.inf
    return float(x)
