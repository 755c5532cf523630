"""Spectral unfolding and nearest-neighbour spacing statistics."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, FitError, InvalidInputError, UnfoldingError

log = logging.getLogger(__name__)

MIN_LEVELS = 50
MIN_SMALL_S = 30
CORE_FRACTION = 0.6
LOW_START = 7  # 0-based index of the 8th lowest level
LOW_FRACTION = 1724 / 16384
BIN_WIDTH = 0.1
S_MAX = 4.0


class ReferenceLaw(enum.Enum):
    POISSON = "poisson"
    WIGNER_GOE = "wigner_goe"
    SEMI_POISSON = "semi_poisson"

    def pdf(self, s):
        return reference_pdf(self, s)

    def cdf(self, s):
        return reference_cdf(self, s)


def _nonneg(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be non-negative")
    return s


def reference_pdf(law: ReferenceLaw, s):
    s = _nonneg(s)
    law = ReferenceLaw(law)
    if law is ReferenceLaw.POISSON:
        return np.exp(-s)
    if law is ReferenceLaw.WIGNER_GOE:
        return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s * s)
    return 4.0 * s * np.exp(-2.0 * s)


def reference_cdf(law: ReferenceLaw, s):
    s = _nonneg(s)
    law = ReferenceLaw(law)
    if law is ReferenceLaw.POISSON:
        return -np.expm1(-s)
    if law is ReferenceLaw.WIGNER_GOE:
        return -np.expm1(-0.25 * np.pi * s * s)
    return 1.0 - (1.0 + 2.0 * s) * np.exp(-2.0 * s)


@dataclass(frozen=True, eq=False)
class SpectralWindow:
    energies: np.ndarray
    lo: int
    hi: int
    source: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.energies)


def index_window(values, lo: int, hi: int, **source) -> SpectralWindow:
    """Levels ``values[lo:hi]`` of an ascending spectrum."""
    values = np.asarray(values, dtype=float)
    if not 0 <= lo < hi <= len(values):
        raise InvalidInputError(f"bad index window [{lo}, {hi}) for {len(values)} levels")
    return SpectralWindow(values[lo:hi].copy(), lo, hi, dict(source))


def core_window(values, fraction: float = CORE_FRACTION, **source) -> SpectralWindow:
    """Central ``fraction`` of the sorted levels."""
    N = len(values)
    width = int(round(fraction * N))
    lo = (N - width) // 2
    return index_window(values, lo, lo + width, **source)


def low_window(values, start: int = LOW_START, fraction: float = LOW_FRACTION, **source):
    """Low-energy window: from level ``start`` over ``fraction`` of all levels."""
    N = len(values)
    return index_window(values, start, min(N, start + int(round(fraction * N))), **source)


@dataclass(frozen=True, eq=False)
class SpacingSample:
    spacings: np.ndarray
    fit: Polynomial | None = None
    clamped: int = 0
    source: dict = field(default_factory=dict)

    @classmethod
    def of(cls, spacings, **source) -> "SpacingSample":
        s = np.asarray(spacings, dtype=float)
        if np.any(s < 0):
            raise InvalidInputError("spacings must be non-negative")
        return cls(s, source=dict(source))

    @property
    def mean(self) -> float:
        return float(np.mean(self.spacings))

    def __len__(self):
        return len(self.spacings)

    @property
    def passes_quality_gate(self) -> bool:
        return 0.99 <= self.mean <= 1.01


def unfold(window: SpectralWindow, degree: int = 3) -> SpacingSample:
    """Unfold by a least-squares cubic fit to the staircase (E_i, i + 1/2)."""
    E = np.asarray(window.energies, dtype=float)
    if len(E) < MIN_LEVELS:
        raise UnfoldingError(f"need at least {MIN_LEVELS} levels, got {len(E)}")
    if np.any(np.diff(E) < 0):
        raise UnfoldingError("energies must be ascending")
    if E[-1] - E[0] <= 1e-12 * max(1.0, abs(E[0])) or len(np.unique(E)) <= degree:
        raise UnfoldingError("window is (nearly) constant; staircase fit is singular")
    staircase = np.arange(len(E)) + 0.5
    # fit in a scaled domain so affine changes of E leave spacings unchanged
    fit = Polynomial.fit(E, staircase, degree)
    s = np.diff(fit(E))
    clamped = int(np.count_nonzero(s < 0))
    if clamped:
        log.warning("clamped %d negative unfolded spacings to 0", clamped)
        s = np.maximum(s, 0.0)
    sample = SpacingSample(s, fit, clamped, dict(window.source, lo=window.lo, hi=window.hi))
    if not sample.passes_quality_gate:
        log.warning("unfolded mean spacing %.4f outside [0.99, 1.01]", sample.mean)
    return sample


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    density: np.ndarray
    overflow: float  # probability mass above the last edge

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    def integral(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))


def histogram(sample: SpacingSample, bin_width: float = BIN_WIDTH, s_max: float = S_MAX):
    if bin_width <= 0:
        raise InvalidInputError("bin_width must be positive")
    nbins = max(1, int(np.ceil(s_max / bin_width - 1e-9)))
    edges = bin_width * np.arange(nbins + 1)
    s = sample.spacings
    total = len(s)
    if total == 0:
        return Histogram(edges, np.zeros(nbins), 0.0)
    counts, _ = np.histogram(s, bins=edges)
    return Histogram(edges, counts / (total * bin_width), float(np.sum(s > edges[-1]) / total))


def cumulative(sample: SpacingSample) -> list[tuple[float, float]]:
    """Empirical CDF evaluated at the sorted sample points (ties collapse to the top)."""
    s = np.sort(sample.spacings)
    if len(s) == 0:
        return []
    xs = np.unique(s)
    frac = np.searchsorted(s, xs, side="right") / len(s)
    return list(zip(xs.tolist(), frac.tolist()))


def empirical_cdf(sample: SpacingSample, x):
    s = np.sort(sample.spacings)
    return np.searchsorted(s, np.asarray(x, dtype=float), side="right") / len(s)


def ks_distance(sample: SpacingSample, law: ReferenceLaw) -> float:
    """Sup-norm distance between the empirical CDF and the reference CDF."""
    s = np.sort(sample.spacings)
    if len(s) == 0:
        raise InvalidInputError("empty sample")
    F = reference_cdf(law, s)
    k = np.arange(1, len(s) + 1) / len(s)
    return float(max(np.max(k - F), np.max(F - (k - 1.0 / len(s)))))


def small_s_exponent(sample: SpacingSample, s_cut: float) -> float:
    """Log-log slope of the empirical CDF over spacings below ``s_cut``."""
    s = np.sort(sample.spacings)
    F = np.arange(1, len(s) + 1) / len(s)
    keep = (s < s_cut) & (s > 0)
    if np.count_nonzero(keep) < MIN_SMALL_S:
        raise FitError(
            f"need {MIN_SMALL_S} positive spacings below {s_cut}, got {np.count_nonzero(keep)}"
        )
    slope, _ = np.polyfit(np.log(s[keep]), np.log(F[keep]), 1)
    return float(slope)
