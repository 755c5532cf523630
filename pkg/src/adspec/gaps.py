"""Minimal ground-state gaps, their ensemble statistics, and the solution-probability flow."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import eig_full, eig_lowest
from .errors import BoundaryMinimumError, DomainError, InvalidInputError
from .hamiltonian import DENSE_MAX_N, build_h1, build_ht
from .sat import SatInstance

GRID_STEP = 0.02
TOL = 1e-6
FLOW_LEVELS = (1e-1, 1e-2, 1e-3, 1e-4)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GapRecord:
    seed: int
    n: int
    alpha: float
    t_min: float
    delta: float
    grid_step: float
    tol: float
    evaluations: int
    local_minima: tuple[float, ...] = ()
    tries: int = 0


class GapScanner:
    """Evaluates Delta(t) for one instance, reusing H(1) across calls."""

    def __init__(self, instance: SatInstance, method: str = "auto"):
        self.instance = instance
        self.h1 = build_h1(instance)
        self.method = method
        self.evaluations = 0

    def levels(self, t: float) -> tuple[float, float, float]:
        op = build_ht(self.instance, t, self.h1)
        es = eig_lowest(op, 2, method=self.method)
        self.evaluations += 1
        e0, e1 = float(es.values[0]), float(es.values[1])
        return e0, e1, e1 - e0

    def __call__(self, t: float) -> float:
        return self.levels(t)[2]


def gap_at(instance: SatInstance, t: float) -> tuple[float, float, float]:
    """(E_0, E_1, E_1 - E_0) at an interior time 0 < t < 1."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"gap_at needs 0 < t < 1, got {t}")
    return GapScanner(instance).levels(t)


def scan_grid(grid_step: float) -> np.ndarray:
    count = int(round((1.0 - 2.0 * grid_step) / grid_step)) + 1
    return np.linspace(grid_step, 1.0 - grid_step, count)


def golden_section(f, a: float, b: float, tol: float):
    """Minimize a unimodal ``f`` on [a, b]; returns (x, f(x)) of the best probe."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a >= tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def find_min_gap(
    instance: SatInstance,
    grid_step: float = GRID_STEP,
    tol: float = TOL,
    method: str = "auto",
) -> GapRecord:
    """Locate the minimal gap: uniform grid scan, then golden-section refinement.

    Raises BoundaryMinimumError when the smallest grid value sits on the first
    or last grid point, since the minimum then cannot be bracketed.
    """
    if not 0.0 < grid_step <= 0.05:
        raise InvalidInputError(f"grid_step must lie in (0, 0.05], got {grid_step}")
    if not 0.0 < tol <= 1e-4:
        raise InvalidInputError(f"tol must lie in (0, 1e-4], got {tol}")
    gap = GapScanner(instance, method)
    ts = scan_grid(grid_step)
    deltas = np.array([gap(t) for t in ts])
    best = int(np.argmin(deltas))
    if best == 0 or best == len(ts) - 1:
        raise BoundaryMinimumError(
            f"minimal grid gap at boundary t={ts[best]:.4f} (seed {instance.seed})",
            t=float(ts[best]),
            delta=float(deltas[best]),
        )
    interior = np.arange(1, len(ts) - 1)
    is_local = (deltas[interior] <= deltas[interior - 1]) & (deltas[interior] <= deltas[interior + 1])
    local = tuple(float(ts[i]) for i in interior[is_local])

    t_ref, d_ref = golden_section(gap, ts[best - 1], ts[best + 1], tol)
    if d_ref > deltas[best]:
        t_ref, d_ref = ts[best], deltas[best]
    return GapRecord(
        seed=instance.seed,
        n=instance.n,
        alpha=instance.alpha,
        t_min=float(t_ref),
        delta=float(d_ref),
        grid_step=grid_step,
        tol=tol,
        evaluations=gap.evaluations,
        local_minima=local,
        tries=instance.tries,
    )


@dataclass(frozen=True, eq=False)
class EnsembleGapStats:
    n: int
    alpha: float
    count: int
    median: float
    mean: float
    min: float
    max: float
    normalized: np.ndarray  # delta / mean(delta), in record order

    def fraction_below(self, s: float) -> float:
        return float(np.mean(self.normalized < s))


def ensemble_stats(records) -> EnsembleGapStats:
    records = list(records)
    if len(records) < 2:
        raise InvalidInputError("need at least two gap records")
    n, alpha = records[0].n, records[0].alpha
    if any(r.n != n or abs(r.alpha - alpha) > 1e-12 for r in records):
        raise InvalidInputError("records mix different (n, alpha)")
    d = np.array([r.delta for r in records])
    mean = float(np.mean(d))
    return EnsembleGapStats(
        n=n,
        alpha=alpha,
        count=len(d),
        median=float(np.median(d)),
        mean=mean,
        min=float(d.min()),
        max=float(d.max()),
        normalized=d / mean,
    )


@dataclass(frozen=True)
class ScalingRow:
    n: int
    median: float  # all gap columns are divided by n
    mean: float
    min: float
    max: float
    reference: float  # 1 / (2 sqrt(2^n))


@dataclass(frozen=True)
class ScalingTable:
    rows: tuple[ScalingRow, ...]
    rate: float  # fitted decay of log(median gap / n) per added variable
    reference_rate: float = math.log(2.0) / 2.0


def scaling_table(stats) -> ScalingTable:
    stats = sorted(stats, key=lambda s: s.n)
    if len({s.n for s in stats}) < 3:
        raise InvalidInputError("scaling fit needs at least three distinct n")
    rows = tuple(
        ScalingRow(
            n=s.n,
            median=s.median / s.n,
            mean=s.mean / s.n,
            min=s.min / s.n,
            max=s.max / s.n,
            reference=0.5 / math.sqrt(2.0**s.n),
        )
        for s in stats
    )
    ns = np.array([r.n for r in rows], dtype=float)
    slope, _ = np.polyfit(ns, np.log([r.median for r in rows]), 1)
    return ScalingTable(rows, rate=float(-slope))


@dataclass(frozen=True, eq=False)
class FlowMap:
    t: np.ndarray
    p: np.ndarray  # shape (len(t), N + 1); p[:, i] = weight of the solution on levels >= i


def probability_flow(instance: SatInstance, t_grid) -> FlowMap:
    """Suffix sums of |<solution|psi_j(t)>|^2 over the eigenbasis at each t."""
    if instance.n > DENSE_MAX_N:
        raise InvalidInputError(f"full diagonalization capped at n <= {DENSE_MAX_N}")
    ts = np.asarray(t_grid, dtype=float)
    if np.any((ts <= 0.0) | (ts > 1.0)):
        raise DomainError("flow times must lie in (0, 1]")
    h1 = build_h1(instance)
    sol = instance.solution_index
    N = 1 << instance.n
    p = np.zeros((len(ts), N + 1))
    for row, t in enumerate(ts):
        w = eig_full(build_ht(instance, t, h1)).vectors[sol] ** 2
        p[row, :N] = np.cumsum(w[::-1])[::-1]
    return FlowMap(ts, p)


def flow_isolines(p, levels=FLOW_LEVELS) -> dict[float, np.ndarray]:
    """For each level and t row, the smallest i with p(i, t) <= level."""
    p = np.asarray(p.p if isinstance(p, FlowMap) else p, dtype=float)
    out = {}
    for level in levels:
        below = p <= level
        idx = np.argmax(below, axis=1)
        idx[~below.any(axis=1)] = p.shape[1]
        out[float(level)] = idx
    return out
