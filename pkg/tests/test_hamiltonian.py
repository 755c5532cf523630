import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adspec.errors import DomainError, InvalidInputError
from adspec.hamiltonian import apply, build_h0, build_h1, build_ht
from adspec.sat import Clause, SatInstance, violated_count

from conftest import instance


def naive_dense(inst, t):
    """Dense H(t) from the tensor-product definition, without the structured builder."""
    n = inst.n
    A = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    I = np.eye(2)
    h0 = np.zeros((1 << n, 1 << n))
    for q in range(n):
        # np.kron puts its first factor on the most significant bit
        factors = [A if k == q else I for k in reversed(range(n))]
        term = factors[0]
        for f in factors[1:]:
            term = np.kron(term, f)
        h0 += term
    h1 = np.zeros(1 << n)
    for i in range(1 << n):
        bits = "".join("1" if i >> k & 1 else "0" for k in range(n))
        h1[i] = 4.0 / inst.alpha * violated_count(inst, bits)
    return (1 - t) * h0 + t * np.diag(h1)


def test_h0_single_qubit_matches_A():
    assert np.array_equal(build_h0(1).dense(), [[0.5, -0.5], [-0.5, 0.5]])
    inst = SatInstance(3, (Clause.of(1, 2, 3),), 1 / 3, "111")
    op = build_ht(inst, 0.0)
    assert np.allclose(op.dense(), naive_dense(inst, 0.0))


def test_h1_single_clause():
    inst = SatInstance(3, (Clause.of(1, 2, 3),), 1 / 3, "111")
    h1 = build_h1(inst)
    assert h1.prefactor == pytest.approx(12.0)
    assert np.allclose(h1.entries, [12, 0, 0, 0, 0, 0, 0, 0])


@pytest.mark.parametrize("n", [6, 8, 10])
def test_h1_single_zero_at_solution(n):
    inst = instance(n)
    e = build_h1(inst).entries
    assert np.count_nonzero(e == 0) == 1
    assert e[inst.solution_index] == 0
    assert e.min() >= 0
    # each clause is violated by exactly N/8 assignments
    assert e.sum() == pytest.approx((1 << n) * n / 2, rel=1e-13)


@pytest.mark.parametrize("t", [0.0, 0.3, 0.77, 1.0])
def test_dense_matches_tensor_definition(inst6, t):
    assert np.allclose(build_ht(inst6, t).dense(), naive_dense(inst6, t), atol=1e-13)


def test_t1_is_diagonal_h1(inst6):
    op = build_ht(inst6, 1.0)
    assert op.is_diagonal
    assert np.array_equal(np.diag(op.dense()), build_h1(inst6).entries)


def test_t_out_of_range(inst6):
    for t in (-0.01, 1.01):
        with pytest.raises(DomainError):
            build_ht(inst6, t)


@given(t=st.floats(0, 1), seed=st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_trace_symmetry_linearity(t, seed):
    inst = instance(6, 3, seed)
    N, n = 64, 6
    d = build_ht(inst, t).dense()
    assert np.array_equal(d, d.T)
    assert np.trace(d) == pytest.approx(N * n / 2, rel=1e-12)
    lin = (1 - t) * build_ht(inst, 0.0).dense() + t * build_ht(inst, 1.0).dense()
    assert np.allclose(d, lin, atol=1e-13)


def test_apply_examples(inst8):
    N = 256
    uniform = np.full(N, 1 / np.sqrt(N))
    assert np.allclose(apply(build_ht(inst8, 0.0), uniform), 0, atol=1e-14)
    e_sol = np.zeros(N)
    e_sol[inst8.solution_index] = 1
    assert np.array_equal(apply(build_ht(inst8, 1.0), e_sol), np.zeros(N))


@given(t=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_apply_matches_dense(t, seed):
    inst = instance(8)
    rng = np.random.default_rng(seed)
    op = build_ht(inst, t)
    v = rng.standard_normal(256)
    dense = op.dense() @ v
    assert np.linalg.norm(op.apply(v) - dense) <= 1e-12 * max(1.0, np.linalg.norm(dense))
    block = rng.standard_normal((256, 3))
    assert np.allclose(op.apply(block), op.dense() @ block, rtol=1e-12, atol=1e-12)


def test_apply_length_mismatch(inst6):
    with pytest.raises(InvalidInputError):
        build_ht(inst6, 0.5).apply(np.ones(63))


@pytest.mark.parametrize("n", range(1, 7))
def test_h0_spectrum_binomial(n):
    w = np.linalg.eigvalsh(build_h0(n).dense())
    expected = np.concatenate([np.full(comb(n, k), float(k)) for k in range(n + 1)])
    assert np.max(np.abs(w - expected)) < 1e-10


def test_h1_spectrum_is_violation_multiset(inst6):
    w = np.sort(np.diag(build_ht(inst6, 1.0).dense()))
    counts = sorted(
        violated_count(inst6, "".join(b)) for b in itertools.product("01", repeat=6)
    )
    assert np.allclose(w, 4 / inst6.alpha * np.array(counts))
    assert np.count_nonzero(w == 0) == 1


def test_dense_cap():
    inst = SatInstance(15, (Clause.of(1, 2, 3),), 1 / 15, "1" * 15)
    with pytest.raises(InvalidInputError):
        build_ht(inst, 0.5).dense()
