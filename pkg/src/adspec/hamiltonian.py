"""Interpolated adiabatic Hamiltonian H(t) = (1-t) H(0) + t H(1) for a 3-SAT instance.

H(0) is the sum over qubits of A = [[1/2, -1/2], [-1/2, 1/2]], so it has
n/2 on the diagonal and -1/2 between basis states one bit-flip apart.  H(1)
is diagonal and counts violated clauses with weight 4/alpha, which keeps the
trace at N n / 2 for every t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .errors import DomainError, InvalidInputError
from .sat import SatInstance, violation_counts

DENSE_MAX_N = 14


@dataclass(frozen=True, eq=False)
class DiagonalFinal:
    n: int
    alpha: float
    entries: np.ndarray

    @property
    def prefactor(self) -> float:
        return 4.0 / self.alpha


@dataclass(frozen=True, eq=False)
class SymmetricOperator:
    """H(t) stored as its diagonal plus a uniform Hamming-distance-1 coupling."""

    n: int
    t: float
    diag: np.ndarray
    coupling: float

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def is_diagonal(self) -> bool:
        return self.coupling == 0.0

    def trace(self) -> float:
        return float(self.diag.sum())

    def apply(self, v):
        return apply(self, v)

    def dense(self) -> np.ndarray:
        if self.n > DENSE_MAX_N:
            raise InvalidInputError(f"dense form capped at n <= {DENSE_MAX_N}, got n={self.n}")
        N = self.dim
        mat = np.diag(self.diag.astype(float))
        if self.coupling != 0.0:
            idx = np.arange(N)
            for k in range(self.n):
                mat[idx, idx ^ (1 << k)] = self.coupling
        return mat

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(
            (self.dim, self.dim), matvec=self.apply, matmat=self.apply, dtype=float
        )


def build_h1(instance: SatInstance) -> DiagonalFinal:
    counts = violation_counts(instance.n, instance.clauses)
    return DiagonalFinal(instance.n, instance.alpha, (4.0 / instance.alpha) * counts)


def build_ht(instance: SatInstance, t: float, h1: DiagonalFinal | None = None) -> SymmetricOperator:
    """H(t) for one instance; pass a precomputed ``h1`` when scanning many t."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if h1 is None:
        h1 = build_h1(instance)
    n = instance.n
    diag = (1.0 - t) * (n / 2.0) + t * h1.entries
    return SymmetricOperator(n=n, t=t, diag=diag, coupling=-(1.0 - t) / 2.0)


def build_h0(n: int) -> SymmetricOperator:
    N = 1 << n
    return SymmetricOperator(n=n, t=0.0, diag=np.full(N, n / 2.0), coupling=-0.5)


def apply(op: SymmetricOperator, v) -> np.ndarray:
    """H(t) @ v in O(N n); ``v`` may be a vector or an (N, k) block."""
    v = np.asarray(v, dtype=float)
    N = op.dim
    if v.shape[0] != N or v.ndim > 2:
        raise InvalidInputError(f"expected leading dimension {N}, got shape {v.shape}")
    if v.ndim == 1:
        out = op.diag * v
    else:
        out = op.diag[:, None] * v
    if op.coupling == 0.0:
        return out
    tail = v.shape[1:]
    for k in range(op.n):
        # flipping bit k swaps the two halves of each 2^(k+1) block
        flipped = v.reshape((N >> (k + 1), 2, 1 << k) + tail)[:, ::-1]
        out += op.coupling * flipped.reshape(v.shape)
    return out
