import itertools

import numpy as np
import pytest

from adspec.eigen import eig_full, eig_lowest, eigvals_full, residuals
from adspec.errors import InvalidInputError
from adspec.hamiltonian import build_h0, build_ht
from adspec.sat import violated_count

from conftest import instance


def jacobi_eigenvalues(a, tol=1e-13, max_sweeps=50):
    """Cyclic Jacobi rotations; an oracle independent of LAPACK."""
    a = np.array(a, dtype=float)
    n = len(a)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * np.linalg.norm(a):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                if abs(theta) > 1e100:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta else 1.0
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
    return np.sort(np.diag(a))


def test_jacobi_oracle_self_check():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((12, 12))
    m = m + m.T
    assert np.allclose(jacobi_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-11)


def test_h0_n4_multiplicities():
    es = eig_full(build_h0(4))
    expected = [0] + [1] * 4 + [2] * 6 + [3] * 4 + [4]
    assert np.allclose(es.values, expected, atol=1e-12)


def test_h1_ground_state_simple(inst8):
    es = eig_full(build_ht(inst8, 1.0))
    assert es.values[0] == 0 and es.values[1] > 0
    assert es.vectors[inst8.solution_index, 0] == 1.0


def test_full_matches_jacobi_oracle(inst6):
    op = build_ht(inst6, 0.5)
    assert np.max(np.abs(eig_full(op).values - jacobi_eigenvalues(op.dense()))) < 1e-9


@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.9, 1.0])
def test_eigensystem_invariants(inst8, t):
    op = build_ht(inst8, t)
    es = eig_full(op)
    N = 256
    assert np.all(np.diff(es.values) >= 0)
    assert residuals(op, es).max() <= 1e-9 * max(1, abs(es.values).max())
    assert np.abs(es.vectors.T @ es.vectors - np.eye(N)).max() <= 1e-9
    assert es.values.sum() == pytest.approx(N * 8 / 2, rel=1e-8)
    recon = (es.vectors * es.values) @ es.vectors.T
    assert np.abs(recon - op.dense()).max() < 1e-8
    # sign convention: largest-magnitude component positive
    rows = np.argmax(np.abs(es.vectors), axis=0)
    assert np.all(es.vectors[rows, np.arange(N)] > 0)


def test_eigvals_full_agrees(inst8):
    op = build_ht(inst8, 0.4)
    assert np.allclose(eigvals_full(op), eig_full(op).values, atol=1e-12)


def test_lowest_k_equals_full(inst6):
    op = build_ht(inst6, 0.3)
    a, b = eig_lowest(op, 64), eig_full(op)
    assert np.allclose(a.values, b.values, atol=1e-12)


@pytest.mark.parametrize("n,t", [(8, 0.55), (10, 0.2), (10, 0.6), (10, 0.97)])
def test_lanczos_agrees_with_dense(n, t):
    op = build_ht(instance(n), t)
    lz = eig_lowest(op, 4, method="lanczos")
    dn = eig_lowest(op, 4, method="dense")
    prefix = eigvals_full(op)[:4]
    assert np.allclose(lz.values, dn.values, atol=1e-8)
    assert np.allclose(dn.values, prefix, atol=1e-8)
    # ground state is simple away from t = 0, so the vectors agree after sign fixing
    assert np.allclose(lz.vectors[:, 0], dn.vectors[:, 0], atol=1e-6)


def test_lanczos_deterministic(inst10):
    op = build_ht(inst10, 0.5)
    a, b = eig_lowest(op, 2, method="lanczos"), eig_lowest(op, 2, method="lanczos")
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.vectors, b.vectors)


def test_h1_two_lowest(inst8):
    # brute force: smallest violated count among non-solutions
    min_viol = min(
        violated_count(inst8, "".join(bits))
        for bits in itertools.product("01", repeat=8)
        if "".join(bits) != inst8.solution
    )
    es = eig_lowest(build_ht(inst8, 1.0), 2)
    assert np.allclose(es.values, [0, 4 / inst8.alpha * min_viol])


def test_h0_two_lowest():
    assert np.allclose(eig_lowest(build_h0(6), 2).values, [0, 1], atol=1e-12)
    assert np.allclose(eig_lowest(build_h0(10), 2, method="lanczos").values[0], 0, atol=1e-10)


def test_bad_k(inst6):
    with pytest.raises(InvalidInputError):
        eig_lowest(build_ht(inst6, 0.5), 0)
    with pytest.raises(InvalidInputError):
        eig_lowest(build_ht(inst6, 0.5), 65)
