"""Symmetric eigendecompositions of H(t): full (dense LAPACK) and lowest-k (Lanczos)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConvergenceError, InvalidInputError
from .hamiltonian import SymmetricOperator

RESIDUAL_TOL = 1e-9
# below this size dense LAPACK beats ARPACK for the lowest few pairs
ITERATIVE_MIN_N = 9
_V0_SEED = 20061


@dataclass(frozen=True, eq=False)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray
    t: float

    @property
    def count(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i], self.vectors[:, i]


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude component is positive."""
    rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def residuals(op: SymmetricOperator, es: EigenSystem) -> np.ndarray:
    r = op.apply(es.vectors) - es.vectors * es.values
    return np.linalg.norm(r, axis=0)


def _check(op, es, what):
    scale = max(1.0, float(np.max(np.abs(es.values))) if es.count else 1.0)
    worst = float(residuals(op, es).max(initial=0.0))
    if worst > RESIDUAL_TOL * scale:
        raise ConvergenceError(f"{what}: residual {worst:.3e} exceeds {RESIDUAL_TOL * scale:.1e}")


def _diagonal_system(op: SymmetricOperator, k: int) -> EigenSystem:
    # exact for t = 1; stable order breaks ties by basis index
    order = np.argsort(op.diag, kind="stable")[:k]
    vecs = np.zeros((op.dim, k))
    vecs[order, np.arange(k)] = 1.0
    return EigenSystem(op.diag[order].astype(float), vecs, op.t)


def eig_full(op: SymmetricOperator, check: bool = True) -> EigenSystem:
    """All N eigenpairs, ascending, signs fixed."""
    if op.is_diagonal:
        return _diagonal_system(op, op.dim)
    try:
        values, vectors = scipy.linalg.eigh(op.dense(), driver="evd")
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigh failed at t={op.t}: {exc}") from exc
    es = EigenSystem(values, fix_signs(vectors), op.t)
    if check:
        _check(op, es, f"eig_full(t={op.t})")
    return es


def eigvals_full(op: SymmetricOperator) -> np.ndarray:
    """All N eigenvalues, ascending, without eigenvectors."""
    if op.is_diagonal:
        return np.sort(op.diag.astype(float), kind="stable")
    try:
        return scipy.linalg.eigvalsh(op.dense(), driver="evd")
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigvalsh failed at t={op.t}: {exc}") from exc


def default_v0(N: int) -> np.ndarray:
    return np.random.default_rng(_V0_SEED).standard_normal(N)


def eig_lowest(
    op: SymmetricOperator,
    k: int,
    v0: np.ndarray | None = None,
    method: str = "auto",
    maxiter: int | None = None,
) -> EigenSystem:
    """The k lowest eigenpairs.

    ``method`` is ``"dense"``, ``"lanczos"`` or ``"auto"`` (Lanczos for n >= 9
    and k well below N).  The Lanczos start vector defaults to a fixed
    pseudo-random vector so repeated calls are bit-for-bit reproducible.
    """
    N = op.dim
    if not 1 <= k <= N:
        raise InvalidInputError(f"k must lie in [1, {N}], got {k}")
    if op.is_diagonal:
        return _diagonal_system(op, k)
    if method == "auto":
        method = "lanczos" if op.n >= ITERATIVE_MIN_N and k < N // 4 else "dense"
    if method == "dense":
        if k == N:
            return eig_full(op)
        try:
            values, vectors = scipy.linalg.eigh(op.dense(), subset_by_index=[0, k - 1])
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"dense eigh failed at t={op.t}: {exc}") from exc
    elif method == "lanczos":
        if k >= N - 1:
            raise InvalidInputError("Lanczos needs k < N - 1; use method='dense'")
        if v0 is None:
            v0 = default_v0(N)
        ncv = min(N, max(2 * k + 1, 20))
        try:
            values, vectors = eigsh(
                op.as_linear_operator(), k=k, which="SA", v0=v0, ncv=ncv, tol=0,
                maxiter=maxiter or 50 * N,
            )
        except ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"Lanczos did not converge at t={op.t} within {maxiter or 50 * N} restarts"
            ) from exc
        order = np.argsort(values, kind="stable")
        values, vectors = values[order], vectors[:, order]
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    es = EigenSystem(values, fix_signs(vectors), op.t)
    _check(op, es, f"eig_lowest(t={op.t}, k={k})")
    return es
