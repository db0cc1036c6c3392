"""Forward uncertainty propagation from design parameters to requirements.

Three model flavours share one sampling protocol
(``sample_frs(rng, n) -> (n, n_frs) ndarray``):

* :class:`LinearModel` — FR = A @ DP + noise, with a pdf per DP and an
  optional additive noise pdf per FR row.
* :class:`BlackBoxModel` — an arbitrary vector function of the DPs,
  optionally with DP pdfs so it can be sampled.
* :class:`ScenarioModel` — the batch-process tank simulator
  (:mod:`axdesign.tank`); each sample row is one simulated cycle.

:func:`propagate` runs a model and wraps the draws in a :class:`SampleSet`
(named columns, rectangular, finite, CSV-exportable).
:func:`estimate_design_matrix` recovers the local influence matrix of any
model exposing ``evaluate`` by central finite differences — exact for
linear maps at any step size.

Determinism: every DP column, noise row, and simulated cycle draws from
its own derived substream of the caller's ``RngState``, so results are
reproducible for a given seed and independent across columns.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .coupling import DesignMatrix
from .distributions import Pdf, RngState, draw_from
from .tank import TankConfig, simulate, tank_response

__all__ = [
    "SampleSet",
    "LinearModel",
    "BlackBoxModel",
    "ScenarioModel",
    "propagate",
    "estimate_design_matrix",
    "simulate_tank",
    "TANK_COLUMNS",
]

TANK_COLUMNS = ("level", "temperature", "mix_duration")


@dataclass(frozen=True)
class SampleSet:
    """Rectangular table of per-trial FR values with named columns."""

    columns: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        cols = tuple(str(c) for c in self.columns)
        if len(set(cols)) != len(cols) or not cols:
            raise ValueError("column names must be non-empty and unique")
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[1] != len(cols):
            raise ValueError(
                f"values must be 2-D with {len(cols)} columns, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample values must all be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.values[:, self.columns.index(name)]
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None

    def to_csv(self, target) -> None:
        """Write as CSV with the column names as header. ``target`` is a
        path or a writable text file."""
        if hasattr(target, "write"):
            self._write_csv(target)
        else:
            with open(target, "w", newline="") as handle:
                self._write_csv(handle)

    def _write_csv(self, handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.values:
            writer.writerow([repr(float(v)) for v in row])

    def csv_text(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()


def _substreamed_draws(pdfs, rng: RngState, n: int, base: int) -> np.ndarray:
    """One column per pdf, each drawn from substream ``base + column``.
    ``None`` entries produce zero columns."""
    out = np.zeros((n, len(pdfs)), dtype=np.float64)
    for j, pdf in enumerate(pdfs):
        if pdf is not None:
            out[:, j] = draw_from(pdf, rng.substream(base + j).generator(), n)
    return out


class LinearModel:
    """FR = matrix @ DP + noise with independent per-DP pdfs.

    ``noise_pdfs``, when given, adds one independent draw per FR row;
    entries may be ``None`` for noiseless rows.
    """

    def __init__(self, matrix, dp_pdfs: Sequence[Pdf],
                 noise_pdfs: Sequence[Pdf | None] | None = None):
        self.matrix = matrix if isinstance(matrix, DesignMatrix) else DesignMatrix(matrix)
        self.dp_pdfs = tuple(dp_pdfs)
        if len(self.dp_pdfs) != self.matrix.n_dps:
            raise ValueError(
                f"{self.matrix.n_dps} DP columns but {len(self.dp_pdfs)} DP pdfs")
        for j, pdf in enumerate(self.dp_pdfs):
            if not isinstance(pdf, Pdf):
                raise ValueError(f"dp_pdfs[{j}] is not a Pdf")
        self.noise_pdfs = None
        if noise_pdfs is not None:
            self.noise_pdfs = tuple(noise_pdfs)
            if len(self.noise_pdfs) != self.matrix.n_frs:
                raise ValueError(
                    f"{self.matrix.n_frs} FR rows but {len(self.noise_pdfs)} noise pdfs")
            for i, pdf in enumerate(self.noise_pdfs):
                if pdf is not None and not isinstance(pdf, Pdf):
                    raise ValueError(f"noise_pdfs[{i}] is neither a Pdf nor None")

    @property
    def n_frs(self) -> int:
        return self.matrix.n_frs

    def sample_dps(self, rng: RngState, n: int) -> np.ndarray:
        return _substreamed_draws(self.dp_pdfs, rng, n, base=0)

    def evaluate(self, dp_values) -> np.ndarray:
        dps = np.asarray(dp_values, dtype=np.float64)
        return dps @ self.matrix.entries.T

    def sample_frs(self, rng: RngState, n: int) -> np.ndarray:
        frs = self.evaluate(self.sample_dps(rng, n))
        if self.noise_pdfs is not None:
            frs = frs + _substreamed_draws(
                self.noise_pdfs, rng, n, base=self.matrix.n_dps)
        return frs


class BlackBoxModel:
    """Arbitrary DP-vector -> FR-vector function.

    ``fn`` maps a 1-D DP array to a 1-D FR array-like. Sampling requires
    ``dp_pdfs``; evaluation alone (e.g. for finite differences) does not.
    """

    def __init__(self, fn: Callable, dp_pdfs: Sequence[Pdf] | None = None):
        if not callable(fn):
            raise ValueError("fn must be callable")
        self.fn = fn
        self.dp_pdfs = tuple(dp_pdfs) if dp_pdfs is not None else None
        if self.dp_pdfs is not None:
            for j, pdf in enumerate(self.dp_pdfs):
                if not isinstance(pdf, Pdf):
                    raise ValueError(f"dp_pdfs[{j}] is not a Pdf")

    def evaluate(self, dp_values) -> np.ndarray:
        out = np.asarray(self.fn(np.asarray(dp_values, dtype=np.float64)),
                         dtype=np.float64)
        if out.ndim != 1:
            raise ValueError(f"black-box output must be a 1-D FR vector, got shape {out.shape}")
        return out

    def sample_frs(self, rng: RngState, n: int) -> np.ndarray:
        if self.dp_pdfs is None:
            raise ValueError("sampling a black-box model requires dp_pdfs")
        dps = _substreamed_draws(self.dp_pdfs, rng, n, base=0)
        rows = []
        for i in range(n):
            try:
                row = self.evaluate(dps[i])
            except Exception as exc:
                raise RuntimeError(f"black-box evaluation failed at trial {i}: {exc}") from exc
            if rows and row.shape != rows[0].shape:
                raise RuntimeError(
                    f"black-box output changed length at trial {i}")
            rows.append(row)
        return np.vstack(rows)


class ScenarioModel:
    """Tank-scenario sampler: each FR sample row is one simulated cycle,
    and ``evaluate`` is the noise-free two-cycle setpoint response map
    (suitable for finite-difference influence estimation)."""

    column_names = TANK_COLUMNS

    def __init__(self, config: TankConfig):
        if not isinstance(config, TankConfig):
            raise ValueError("config must be a TankConfig")
        self.config = config

    def evaluate(self, dp_values) -> np.ndarray:
        return tank_response(self.config, dp_values)

    def sample_frs(self, rng: RngState, n: int) -> np.ndarray:
        return simulate(self.config, rng, cycles=n)


def propagate(model, rng: RngState, n: int,
              columns: Sequence[str] | None = None) -> SampleSet:
    """Draw ``n`` FR sample rows from ``model`` into a :class:`SampleSet`.

    Column names come from ``columns``, else the model's ``column_names``
    attribute, else ``fr1..frK``.
    """
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
        raise ValueError("n must be a positive integer")
    if not isinstance(rng, RngState):
        raise ValueError("rng must be an RngState")
    values = np.asarray(model.sample_frs(rng, n), dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != n:
        raise ValueError(f"model produced shape {values.shape}, expected ({n}, n_frs)")
    if columns is None:
        columns = getattr(model, "column_names", None)
    if columns is None:
        columns = tuple(f"fr{j + 1}" for j in range(values.shape[1]))
    return SampleSet(columns=tuple(columns), values=values)


def estimate_design_matrix(model, dp_nominals, step: float) -> DesignMatrix:
    """Influence matrix by central finite differences around ``dp_nominals``.

    Entry (i, j) is ``(FR_i(dp + step*e_j) - FR_i(dp - step*e_j)) / (2*step)``
    using the model's ``evaluate``. Exact for linear maps at any positive
    step; non-finite model output raises with the offending DP named.
    """
    x0 = np.asarray(dp_nominals, dtype=np.float64)
    if x0.ndim != 1 or x0.size == 0 or not np.all(np.isfinite(x0)):
        raise ValueError("dp_nominals must be a non-empty finite 1-D vector")
    if not (isinstance(step, (int, float)) and math.isfinite(step) and step > 0):
        raise ValueError("step must be a positive finite number")
    columns = []
    for j in range(x0.size):
        shift = np.zeros_like(x0)
        shift[j] = step
        f_plus = np.asarray(model.evaluate(x0 + shift), dtype=np.float64)
        f_minus = np.asarray(model.evaluate(x0 - shift), dtype=np.float64)
        col = (f_plus - f_minus) / (2.0 * step)
        if not np.all(np.isfinite(col)):
            raise ValueError(f"non-finite model output while probing DP {j}")
        columns.append(col)
    return DesignMatrix(np.column_stack(columns))


def simulate_tank(config: TankConfig, rng: RngState,
                  cycles: int | None = None,
                  columns: Sequence[str] | None = None) -> SampleSet:
    """Run the tank simulator and return the per-cycle achieved FR values
    (fill level, temperature at mix start, mix duration) as a
    :class:`SampleSet`. ``cycles`` overrides ``config.cycles``."""
    values = simulate(config, rng, cycles=cycles)
    return SampleSet(columns=tuple(columns) if columns else TANK_COLUMNS,
                     values=values)
