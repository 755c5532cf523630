"""Entanglement diagnostics of real pure states on n qubits.

Qubit ``k`` is bit ``k`` of the basis index.  Functions accept a single state
of shape (N,) or a block of states as columns, shape (N, M), and then return
one result per column.  Reduced density matrices use the same convention:
the first kept qubit is the least significant bit of the reduced index.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InvalidInputError

NORM_TOL = 1e-9
ZERO_EIG = 1e-14


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    kept: tuple[int, ...]
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _qubits(psi) -> tuple[np.ndarray, int]:
    psi = np.asarray(psi, dtype=float)
    if psi.ndim not in (1, 2):
        raise InvalidInputError(f"state must be 1-D or 2-D, got shape {psi.shape}")
    N = psi.shape[0]
    n = N.bit_length() - 1
    if N < 2 or 1 << n != N:
        raise InvalidInputError(f"state length {N} is not a power of two")
    norms = np.linalg.norm(psi, axis=0)
    if np.any(np.abs(norms - 1.0) > NORM_TOL):
        raise InvalidInputError("state is not normalized")
    return psi, n


def reduced_matrices(psi, kept) -> np.ndarray:
    """Partial trace onto ``kept``; shape (2^k, 2^k) or (M, 2^k, 2^k) for a block."""
    psi, n = _qubits(psi)
    kept = tuple(int(q) for q in kept)
    if len(set(kept)) != len(kept) or any(not 0 <= q < n for q in kept):
        raise InvalidInputError(f"kept qubits {kept} must be distinct and in [0, {n})")
    block = psi.ndim == 2
    cols = psi.shape[1] if block else 1
    # C-order reshape puts qubit q on axis n-1-q
    tensor = psi.reshape((2,) * n + (cols,))
    kept_axes = [n - 1 - q for q in reversed(kept)]  # highest reduced bit first
    traced = [a for a in range(n) if a not in kept_axes]
    tensor = np.transpose(tensor, [n] + kept_axes + traced)
    dk = 1 << len(kept)
    flat = tensor.reshape(cols, dk, -1)
    rho = flat @ flat.transpose(0, 2, 1)
    return rho if block else rho[0]


def reduce(psi, kept) -> ReducedDensity:
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 1:
        raise InvalidInputError("reduce takes a single state; use reduced_matrices for blocks")
    return ReducedDensity(tuple(int(q) for q in kept), reduced_matrices(psi, kept))


def partial_transpose(rho: np.ndarray, which: int = 0) -> np.ndarray:
    """Transpose one qubit's indices of 4x4 two-qubit matrices (0 = low bit)."""
    shape = rho.shape[:-2]
    r = rho.reshape(shape + (2, 2, 2, 2))  # (a_hi, a_lo, b_hi, b_lo)
    off = len(shape)
    axes = list(range(off + 4))
    if which == 0:
        axes[off + 1], axes[off + 3] = axes[off + 3], axes[off + 1]
    else:
        axes[off + 0], axes[off + 2] = axes[off + 2], axes[off + 0]
    return r.transpose(axes).reshape(rho.shape)


def ppt_min_eig(psi, j: int, k: int):
    """Smallest eigenvalue of the partially transposed two-qubit reduced state."""
    if j == k:
        raise InvalidInputError("PPT needs two distinct qubits")
    lo, hi = sorted((j, k))
    rho = reduced_matrices(psi, (lo, hi))
    return np.linalg.eigvalsh(partial_transpose(rho, 0))[..., 0]


def ppt_pairs(psi) -> dict[tuple[int, int], np.ndarray]:
    psi, n = _qubits(psi)
    return {(j, k): ppt_min_eig(psi, j, k) for j, k in combinations(range(n), 2)}


def ppt_avg(psi):
    """PPT minimal eigenvalue averaged over all n(n-1)/2 qubit pairs."""
    psi, n = _qubits(psi)
    if n < 2:
        raise InvalidInputError("need at least two qubits")
    vals = ppt_pairs(psi).values()
    return sum(vals) * (2.0 / (n * (n - 1)))


def _half_cut(n, cut):
    if cut is None:
        if n % 2:
            raise InvalidInputError(f"odd n={n} needs an explicit cut")
        cut = n // 2
    if not 0 < cut < n:
        raise InvalidInputError(f"cut must lie in (0, {n}), got {cut}")
    return cut


def entropy_half(psi, cut: int | None = None):
    """Base-2 von Neumann entropy of the lowest ``cut`` qubits (default n/2)."""
    psi, n = _qubits(psi)
    cut = _half_cut(n, cut)
    return entropy_from_weights(np.linalg.eigvalsh(reduced_matrices(psi, range(cut))))


def schmidt_spectrum(psi, cut: int | None = None) -> np.ndarray:
    """Squared Schmidt coefficients for the cut after the lowest n/2 qubits, descending."""
    psi, n = _qubits(psi)
    cut = _half_cut(n, cut)
    # rows: high qubits, columns: low qubits
    mat = psi.reshape((1 << (n - cut), 1 << cut) + psi.shape[1:])
    if psi.ndim == 2:
        mat = np.moveaxis(mat, -1, 0)
    sv = np.linalg.svd(mat, compute_uv=False)
    lam = sv**2
    dim = 1 << min(cut, n - cut)
    full = 1 << cut
    if dim < full:
        pad = np.zeros(lam.shape[:-1] + (full - dim,))
        lam = np.concatenate([lam, pad], axis=-1)
    return lam


def entropy_from_weights(lam) -> np.ndarray:
    """-sum(lam log2 lam) over the last axis, dropping weights below 1e-14."""
    lam = np.asarray(lam, dtype=float)
    safe = np.where(lam > ZERO_EIG, lam, 1.0)
    return -np.sum(np.where(lam > ZERO_EIG, safe * np.log2(safe), 0.0), axis=-1)


def random_state(n: int, seed) -> np.ndarray:
    """Normalized vector of i.i.d. real standard Gaussian amplitudes."""
    v = np.random.default_rng(seed).standard_normal(1 << n)
    return v / np.linalg.norm(v)
