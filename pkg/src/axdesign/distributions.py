"""Probability models and reproducible sampling.

Four distribution families are supported: uniform, normal, triangular and
empirical (resampling from stored observations). Every family exposes a
density, an exact CDF and interval probabilities computed as CDF differences,
so interval masses are additive and total mass is 1 to within floating point.

Random number generation
------------------------
All sampling is driven by :class:`RngState`, an explicit immutable value
(root seed, substream path, operation counter). The underlying generator is
the counter-based Philox 4x64 algorithm; the substream path feeds numpy's
``SeedSequence`` spawn keys and each sampling operation consumes a disjoint
2**64-draw region of the counter space. Because state never hides inside a
mutable object, any result can be reproduced from the seed alone, and
substreams derived with :meth:`RngState.substream` are independent of the
order in which they are consumed.

Normal variates are generated by the inverse-CDF method (Philox uniforms
mapped through the inverse normal CDF); this choice is fixed for the
package, so a given seed always yields the same samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy.special import ndtr, ndtri

__all__ = [
    "RngState",
    "Pdf",
    "Uniform",
    "Normal",
    "Triangular",
    "Empirical",
    "from_samples",
    "sample",
    "sample_n",
    "draw_from",
    "interval_probability",
]

# Each sampling operation owns this many draws of Philox counter space; the
# 256-bit counter leaves room for 2**192 operations per substream.
_REGION = 1 << 64

# Largest uniform grid used when inverting the CDF: (k + 0.5) / 2**53 for
# k < 2**53 keeps inverse-CDF inputs strictly inside (0, 1).
_OPEN_DENOM = float(1 << 53)


@dataclass(frozen=True)
class RngState:
    """Serializable random generator state.

    Attributes
    ----------
    seed : int
        Root seed, non-negative.
    stream : tuple of int
        Substream derivation path (SeedSequence spawn key).
    draws : int
        Number of completed sampling operations on this substream.
    """

    seed: int
    stream: tuple[int, ...] = ()
    draws: int = 0

    def __post_init__(self):
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.draws < 0:
            raise ValueError("draws must be non-negative")

    def substream(self, key: int) -> "RngState":
        """Derive the independent substream identified by ``key``."""
        if not isinstance(key, int) or key < 0:
            raise ValueError("substream key must be a non-negative integer")
        return RngState(self.seed, self.stream + (key,), 0)

    def advanced(self) -> "RngState":
        """State after one sampling operation."""
        return replace(self, draws=self.draws + 1)

    def generator(self) -> Generator:
        """Fresh numpy Generator positioned at this state's counter region."""
        bitgen = Philox(SeedSequence(self.seed, spawn_key=self.stream))
        bitgen.advance(self.draws * _REGION)
        return Generator(bitgen)


def _open_uniform(gen: Generator, n: int) -> np.ndarray:
    """Uniforms strictly inside (0, 1), safe for inverse-CDF transforms."""
    return (gen.integers(0, 1 << 53, size=n).astype(np.float64) + 0.5) / _OPEN_DENOM


class Pdf:
    """Base class for probability models."""

    def density(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def interval_probability(self, lo: float, hi: float) -> float:
        """Probability mass on [lo, hi], computed as cdf(hi) - cdf(lo)."""
        if lo > hi:
            raise ValueError(f"interval lower bound {lo} exceeds upper bound {hi}")
        return float(self.cdf(hi)) - float(self.cdf(lo))

    def _draw(self, gen: Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(Pdf):
    """Uniform distribution on [lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("uniform bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"uniform requires lo < hi, got [{self.lo}, {self.hi}]")

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, 1.0 / (self.hi - self.lo), 0.0)[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        t = (x - self.lo) / (self.hi - self.lo)
        return np.clip(t, 0.0, 1.0)[()]

    def _draw(self, gen, n):
        return self.lo + gen.random(n) * (self.hi - self.lo)

    def describe(self):
        return f"uniform[{self.lo:g}, {self.hi:g}]"


@dataclass(frozen=True)
class Normal(Pdf):
    """Normal distribution with mean mu and standard deviation sigma."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("normal parameters must be finite")
        if self.sigma <= 0:
            raise ValueError(f"normal requires sigma > 0, got {self.sigma}")

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        z = (x - self.mu) / self.sigma
        return (np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi)))[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return ndtr((x - self.mu) / self.sigma)[()]

    def _draw(self, gen, n):
        # Inverse-CDF method; uniforms kept strictly inside (0, 1).
        return self.mu + self.sigma * ndtri(_open_uniform(gen, n))

    def describe(self):
        return f"normal(mu={self.mu:g}, sigma={self.sigma:g})"


@dataclass(frozen=True)
class Triangular(Pdf):
    """Triangular distribution on [lo, hi] with the given mode."""

    lo: float
    mode: float
    hi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.lo, self.mode, self.hi)):
            raise ValueError("triangular parameters must be finite")
        if not (self.lo <= self.mode <= self.hi) or not self.lo < self.hi:
            raise ValueError(
                f"triangular requires lo <= mode <= hi and lo < hi, got "
                f"({self.lo}, {self.mode}, {self.hi})"
            )

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, mode, hi = self.lo, self.mode, self.hi
        width = hi - lo
        out = np.zeros_like(x, dtype=np.float64)
        if mode > lo:
            rising = (x >= lo) & (x < mode)
            out = np.where(rising, 2.0 * (x - lo) / (width * (mode - lo)), out)
        if hi > mode:
            falling = (x >= mode) & (x <= hi)
            out = np.where(falling, 2.0 * (hi - x) / (width * (hi - mode)), out)
        else:
            out = np.where(x == mode, 2.0 / width, out)
        return out[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, mode, hi = self.lo, self.mode, self.hi
        width = hi - lo
        out = np.zeros_like(x, dtype=np.float64)
        if mode > lo:
            rising = (x > lo) & (x <= mode)
            out = np.where(rising, (x - lo) ** 2 / (width * (mode - lo)), out)
        if hi > mode:
            falling = (x > mode) & (x < hi)
            out = np.where(falling, 1.0 - (hi - x) ** 2 / (width * (hi - mode)), out)
        out = np.where(x >= hi, 1.0, out)
        if mode == lo:
            out = np.where((x > lo) & (x < hi), 1.0 - (hi - x) ** 2 / (width * width), out)
        return out[()]

    def _draw(self, gen, n):
        u = _open_uniform(gen, n)
        lo, mode, hi = self.lo, self.mode, self.hi
        width = hi - lo
        split = (mode - lo) / width
        left = lo + np.sqrt(u * width * (mode - lo)) if mode > lo else np.full(n, lo)
        right = hi - np.sqrt((1.0 - u) * width * (hi - mode)) if hi > mode else np.full(n, hi)
        return np.where(u < split, left, right)

    def describe(self):
        return f"triangular({self.lo:g}, {self.mode:g}, {self.hi:g})"


@dataclass(frozen=True)
class Empirical(Pdf):
    """Distribution defined by stored observations.

    The CDF counts samples exactly (fraction of observations <= x), so
    interval probabilities are exact sample fractions. The density is a
    fixed-bin histogram with Freedman-Diaconis bin width (at least one bin),
    which is a smoothing convenience only; probabilities never go through it.
    Sampling draws uniformly from the stored observations.
    """

    samples: tuple[float, ...]

    def __post_init__(self):
        if len(self.samples) == 0:
            raise ValueError("empirical distribution requires at least one sample")
        arr = np.asarray(self.samples, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError("empirical samples must all be finite")

    @cached_property
    def _sorted(self) -> np.ndarray:
        arr = np.sort(np.asarray(self.samples, dtype=np.float64))
        arr.setflags(write=False)
        return arr

    @cached_property
    def _histogram(self):
        arr = self._sorted
        span = arr[-1] - arr[0]
        if span == 0.0:
            return None
        q25, q75 = np.percentile(arr, [25.0, 75.0])
        width = 2.0 * (q75 - q25) / len(arr) ** (1.0 / 3.0)
        bins = 1 if width <= 0 else min(int(math.ceil(span / width)), 4096)
        counts, edges = np.histogram(arr, bins=bins, range=(arr[0], arr[-1]))
        heights = counts / (len(arr) * np.diff(edges))
        return edges, heights

    def density(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self._histogram is None:
            atom = self._sorted[0]
            return np.where(x == atom, np.inf, 0.0)[()]
        edges, heights = self._histogram
        idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, len(heights) - 1)
        inside = (x >= edges[0]) & (x <= edges[-1])
        return np.where(inside, heights[idx], 0.0)[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        counts = np.searchsorted(self._sorted, x, side="right")
        return (counts / len(self._sorted))[()]

    def _draw(self, gen, n):
        arr = np.asarray(self.samples, dtype=np.float64)
        return arr[gen.integers(0, len(arr), size=n)]

    def describe(self):
        return f"empirical(n={len(self.samples)})"


def from_samples(values) -> Empirical:
    """Build an :class:`Empirical` distribution from observed values.

    Raises ``ValueError`` when ``values`` is empty or contains non-finite
    entries.
    """
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError("cannot build an empirical distribution from zero samples")
    if not np.all(np.isfinite(arr)):
        raise ValueError("empirical samples must all be finite")
    return Empirical(tuple(float(v) for v in arr))


def interval_probability(pdf: Pdf, lo: float, hi: float) -> float:
    """Probability that ``pdf`` falls inside ``[lo, hi]``."""
    return pdf.interval_probability(lo, hi)


def draw_from(pdf: Pdf, gen: Generator, n: int) -> np.ndarray:
    """Low-level hook: draw ``n`` values from an explicit numpy Generator.

    For simulators that manage their own generator objects; everything else
    should prefer :func:`sample_n`, which threads :class:`RngState`.
    """
    return pdf._draw(gen, n)


def sample_n(pdf: Pdf, rng: RngState, n: int):
    """Draw ``n`` values. Returns ``(ndarray, next RngState)``."""
    if n < 0:
        raise ValueError("sample count must be non-negative")
    values = pdf._draw(rng.generator(), n)
    return values, rng.advanced()


def sample(pdf: Pdf, rng: RngState):
    """Draw a single value. Returns ``(float, next RngState)``."""
    values, nxt = sample_n(pdf, rng, 1)
    return float(values[0]), nxt
