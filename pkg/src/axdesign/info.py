"""Information content of functional requirements, in bits.

The information attached to one FR is ``-log2(P)`` where P is the
probability that the realized output lands inside the FR's design range.
Certain success costs zero bits; impossible success costs infinitely many.
System-level information adds across FRs exactly when their success events
are independent; otherwise it must be estimated from joint behaviour.

Estimation routes:

* :func:`system_information_independent` — combine closed-form per-FR
  results (from :func:`fr_information`) under independence: probabilities
  multiply, bits add (an infinite term absorbs the sum).
* :func:`system_information_joint` — Monte Carlo over a sampling model;
  the system probability is the fraction of sampled outcome vectors inside
  every design range simultaneously. Valid for any dependence structure.
  :func:`system_information_from_samples` is the same estimator applied to
  an already-drawn sample table.
* :func:`conditional_chain_information` — a product of conditional success
  probabilities along a given FR order, each link estimated from the
  samples that already satisfied every earlier link (rejection
  conditioning on one shared sample set). The link product telescopes to
  the joint count, so chain and joint totals agree for the same seed; the
  chain additionally shows what each requirement costs once its
  predecessors are met. The estimator accepts any ordering, but only
  orderings that respect the dependency structure (e.g. a decoupled
  adjustment sequence) make the per-link numbers individually meaningful.

Monte Carlo standard errors are binomial on the probability scale and
mapped to bits by the delta method (divide by ``p * ln 2``); a zero
estimate has infinite bits-scale error, a certain one has zero.

Sampling models are duck-typed: anything with
``sample_frs(rng: RngState, n: int) -> (n, n_frs) ndarray`` works.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .distributions import Pdf, RngState
from .model import DesignRange, range_bounds

__all__ = [
    "InfoResult",
    "Method",
    "McConfig",
    "McStats",
    "SystemInfoReport",
    "bits_from_probability",
    "fr_information",
    "system_information_independent",
    "system_information_joint",
    "system_information_from_samples",
    "conditional_chain_information",
]

_LN2 = math.log(2.0)


def bits_from_probability(p: float) -> float:
    """``-log2(p)`` with the conventions 0 -> inf and 1 -> 0.0 exactly."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p == 0.0:
        return math.inf
    if p == 1.0:
        return 0.0
    return -math.log2(p)


@dataclass(frozen=True)
class InfoResult:
    """Success probability and its cost in bits for one requirement.

    ``std_error`` is the bits-scale standard error of ``bits``; it is 0.0
    for closed-form results, and for Monte Carlo results it is infinite
    when the probability estimate is zero.
    """

    probability: float
    bits: float
    std_error: float = 0.0


class Method(Enum):
    ANALYTIC = "analytic"
    CONDITIONAL_CHAIN = "chain"
    JOINT_MONTE_CARLO = "joint"


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings: the RNG seed and the number of samples."""

    seed: int = 0
    n_samples: int = 100_000

    def __post_init__(self):
        if not (isinstance(self.seed, int) and not isinstance(self.seed, bool)
                and self.seed >= 0):
            raise ValueError("seed must be a non-negative integer")
        if not (isinstance(self.n_samples, int) and not isinstance(self.n_samples, bool)
                and self.n_samples >= 1):
            raise ValueError("n_samples must be a positive integer")


@dataclass(frozen=True)
class McStats:
    """Provenance of a Monte Carlo estimate: seed (None when the samples
    were supplied by the caller), sample count, and the bits-scale standard
    error of the system total."""

    seed: int | None
    n_samples: int
    std_error: float


@dataclass(frozen=True)
class SystemInfoReport:
    """Per-FR and system-level information from one estimation run.

    ``per_fr`` rows follow FR declaration order for the analytic and joint
    routes; for the conditional chain they follow the chain order and each
    row is conditional on its predecessors. ``fr_ids`` labels the rows when
    the caller supplied names. ``mc`` is ``None`` for closed-form results.
    """

    method: Method
    per_fr: tuple[InfoResult, ...]
    system_probability: float
    system_bits: float
    mc: McStats | None = None
    fr_ids: tuple[str, ...] | None = None
    warnings: tuple[str, ...] = ()


def _bounds(design_range) -> tuple[float, float]:
    if isinstance(design_range, DesignRange):
        return range_bounds(design_range)
    lo, hi = design_range
    return float(lo), float(hi)


def fr_information(pdf: Pdf, design_range) -> InfoResult:
    """Closed-form information for one FR.

    ``design_range`` is a :class:`~axdesign.model.DesignRange` or a
    ``(lo, hi)`` pair; the probability is the pdf's mass over it.
    """
    lo, hi = _bounds(design_range)
    p = min(max(pdf.interval_probability(lo, hi), 0.0), 1.0)
    return InfoResult(probability=p, bits=bits_from_probability(p))


def system_information_independent(
    results: Sequence[InfoResult],
    fr_ids: Sequence[str] | None = None,
) -> SystemInfoReport:
    """Combine per-FR results under independence.

    The system probability is the product of the per-FR probabilities and
    the system bits are their sum (the same number up to float rounding;
    an infinite term makes both degenerate consistently).
    """
    results = tuple(results)
    if not results:
        raise ValueError("at least one per-FR result is required")
    total_p = 1.0
    total_bits = 0.0
    for res in results:
        total_p *= res.probability
        total_bits += res.bits
    return SystemInfoReport(
        method=Method.ANALYTIC, per_fr=results,
        system_probability=total_p, system_bits=total_bits,
        fr_ids=tuple(fr_ids) if fr_ids is not None else None)


def _mc_result(hits: int, n: int) -> InfoResult:
    p = hits / n
    se_p = math.sqrt(p * (1.0 - p) / n)
    bits = bits_from_probability(p)
    if p == 0.0:
        se_bits = math.inf
    elif p == 1.0:
        se_bits = 0.0
    else:
        se_bits = se_p / (p * _LN2)
    return InfoResult(probability=p, bits=bits, std_error=se_bits)


def _inside_matrix(samples, ranges) -> np.ndarray:
    """Boolean (n, m) table: sample inside its column's design range."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != len(ranges):
        raise ValueError(
            f"sample table has shape {arr.shape}, expected (n, {len(ranges)})")
    if arr.shape[0] < 1:
        raise ValueError("at least one sample row is required")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample values must all be finite")
    inside = np.empty(arr.shape, dtype=bool)
    for j, rng_j in enumerate(ranges):
        lo, hi = _bounds(rng_j)
        inside[:, j] = (arr[:, j] >= lo) & (arr[:, j] <= hi)
    return inside


def _draw_inside(model, ranges, mc: McConfig) -> np.ndarray:
    samples = model.sample_frs(RngState(seed=mc.seed), mc.n_samples)
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != mc.n_samples:
        raise ValueError(
            f"model produced shape {arr.shape}, expected ({mc.n_samples}, {len(ranges)})")
    return _inside_matrix(arr, ranges)


def _joint_report(inside: np.ndarray, seed: int | None,
                  fr_ids: Sequence[str] | None) -> SystemInfoReport:
    n = inside.shape[0]
    per = tuple(_mc_result(int(inside[:, j].sum()), n)
                for j in range(inside.shape[1]))
    joint_hits = int(inside.all(axis=1).sum())
    system = _mc_result(joint_hits, n)
    warnings = []
    if joint_hits == 0:
        warnings.append(
            f"no samples landed inside all design ranges ({n} drawn); "
            "system bits are unbounded at this sample size")
    return SystemInfoReport(
        method=Method.JOINT_MONTE_CARLO, per_fr=per,
        system_probability=system.probability, system_bits=system.bits,
        mc=McStats(seed=seed, n_samples=n, std_error=system.std_error),
        fr_ids=tuple(fr_ids) if fr_ids is not None else None,
        warnings=tuple(warnings))


def system_information_joint(
    model,
    ranges: Sequence,
    mc: McConfig = McConfig(),
    fr_ids: Sequence[str] | None = None,
) -> SystemInfoReport:
    """Monte Carlo joint information.

    Samples the model once; the system probability is the fraction of
    outcome vectors inside all ranges at once, and the per-FR rows are the
    marginal fractions. No independence assumption."""
    ranges = tuple(ranges)
    if not ranges:
        raise ValueError("at least one design range is required")
    inside = _draw_inside(model, ranges, mc)
    return _joint_report(inside, mc.seed, fr_ids)


def system_information_from_samples(
    samples,
    ranges: Sequence,
    fr_ids: Sequence[str] | None = None,
    seed: int | None = None,
) -> SystemInfoReport:
    """Joint information computed from an existing (n, m) sample table
    (for example the output of a simulation run). ``seed`` is recorded for
    provenance when known."""
    ranges = tuple(ranges)
    if not ranges:
        raise ValueError("at least one design range is required")
    inside = _inside_matrix(samples, ranges)
    return _joint_report(inside, seed, fr_ids)


def conditional_chain_information(
    model,
    order: Sequence,
    ranges: Sequence,
    mc: McConfig = McConfig(),
    fr_ids: Sequence[str] | None = None,
) -> SystemInfoReport:
    """Chained conditional information along ``order``.

    ``order`` is a permutation of the FR columns, given as integer indices
    or as FR ids (the latter requires ``fr_ids`` naming the columns). Each
    link's probability is estimated from the samples that satisfied every
    earlier link, so the link product telescopes to the joint estimate for
    the same seed and sample count; the system bits are the sum of the
    per-link bits. A link that leaves zero surviving samples starves the
    links after it: those are reported as zero probability with infinite
    error, and a warning is attached.
    """
    ranges = tuple(ranges)
    if not ranges:
        raise ValueError("at least one design range is required")
    labels = tuple(fr_ids) if fr_ids is not None else None
    idx_order = _resolve_order(order, len(ranges), labels)
    inside = _draw_inside(model, ranges, mc)
    n = mc.n_samples

    per = []
    alive = np.ones(n, dtype=bool)
    starved_after = None
    total_bits = 0.0
    for position, idx in enumerate(idx_order):
        survivors = int(alive.sum())
        if survivors == 0:
            if starved_after is None:
                prev = idx_order[position - 1]
                starved_after = labels[prev] if labels else f"column {prev}"
            per.append(InfoResult(0.0, math.inf, math.inf))
            total_bits = math.inf
            continue
        res = _mc_result(int((alive & inside[:, idx]).sum()), survivors)
        per.append(res)
        total_bits += res.bits
        alive &= inside[:, idx]
    warnings = []
    if starved_after is not None:
        warnings.append(
            f"sample starvation: no samples survived past {starved_after}; "
            "later links are reported as zero probability with infinite error")

    system = _mc_result(int(alive.sum()), n)
    chain_ids = tuple(labels[i] for i in idx_order) if labels else None
    return SystemInfoReport(
        method=Method.CONDITIONAL_CHAIN, per_fr=tuple(per),
        system_probability=system.probability, system_bits=total_bits,
        mc=McStats(seed=mc.seed, n_samples=n, std_error=system.std_error),
        fr_ids=chain_ids, warnings=tuple(warnings))


def _resolve_order(order, n_frs: int, labels: tuple[str, ...] | None) -> list[int]:
    resolved = []
    for entry in order:
        if isinstance(entry, str):
            if labels is None:
                raise ValueError("ordering by FR id requires fr_ids")
            if entry not in labels:
                raise ValueError(f"unknown FR id in order: {entry!r}")
            resolved.append(labels.index(entry))
        elif isinstance(entry, int) and not isinstance(entry, bool):
            resolved.append(entry)
        else:
            raise ValueError(f"order entries must be FR indices or ids, got {entry!r}")
    if sorted(resolved) != list(range(n_frs)):
        raise ValueError("order must be a permutation of the FR columns")
    return resolved
