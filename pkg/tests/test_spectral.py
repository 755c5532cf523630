import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from adspec.eigen import eigvals_full
from adspec.errors import DomainError, FitError, UnfoldingError
from adspec.hamiltonian import build_ht
from adspec.spectral import (
    ReferenceLaw,
    SpacingSample,
    core_window,
    cumulative,
    empirical_cdf,
    histogram,
    index_window,
    ks_distance,
    low_window,
    reference_cdf,
    reference_pdf,
    small_s_exponent,
    unfold,
)

LAWS = list(ReferenceLaw)


def sample_law(law, size, rng):
    """Inverse-CDF sampling from each reference law."""
    u = rng.random(size)
    if law is ReferenceLaw.POISSON:
        return -np.log1p(-u)
    if law is ReferenceLaw.WIGNER_GOE:
        return np.sqrt(-4 / np.pi * np.log1p(-u))
    # semi-Poisson is Gamma(2, 1/2)
    return rng.gamma(2.0, 0.5, size)


@pytest.mark.parametrize("law", LAWS)
def test_pdf_normalized_unit_mean(law):
    mass = integrate.quad(lambda s: law.pdf(s), 0, np.inf, epsabs=1e-12)[0]
    mean = integrate.quad(lambda s: s * law.pdf(s), 0, np.inf, epsabs=1e-12)[0]
    assert abs(mass - 1) < 1e-6 and abs(mean - 1) < 1e-6


@pytest.mark.parametrize("law", LAWS)
@pytest.mark.parametrize("s", [0.0, 0.1, 0.5, 1.3, 3.0])
def test_closed_cdf_matches_quadrature(law, s):
    quad = integrate.quad(lambda x: law.pdf(x), 0, s)[0]
    assert law.cdf(s) == pytest.approx(quad, abs=1e-10)


def test_pdf_values():
    assert reference_pdf(ReferenceLaw.WIGNER_GOE, 0.0) == 0.0
    assert reference_pdf(ReferenceLaw.POISSON, 0.0) == 1.0
    assert reference_pdf(ReferenceLaw.SEMI_POISSON, 0.5) == pytest.approx(2 * math.exp(-1))
    assert reference_pdf("wigner_goe", 1.0) == pytest.approx(math.pi / 2 * math.exp(-math.pi / 4))
    with pytest.raises(DomainError):
        reference_pdf(ReferenceLaw.POISSON, -0.1)
    with pytest.raises(DomainError):
        reference_cdf(ReferenceLaw.POISSON, -0.1)


def test_unfold_equal_spacing():
    E = 0.37 * np.arange(200)
    s = unfold(index_window(E, 0, 200)).spacings
    assert np.max(np.abs(s - 1)) < 1e-10


@given(
    a=st.floats(0.1, 100) | st.floats(-100, -0.1),
    b=st.floats(-100, 100),
    seed=st.integers(0, 1000),
)
@settings(max_examples=40, deadline=None)
def test_unfold_affine_invariance(a, b, seed):
    # |b/a| is bounded so rounding of the mapped inputs stays well below 1e-9 per spacing
    E = np.sort(np.random.default_rng(seed).normal(size=300)) * 2.0 + 5.0
    base = unfold(index_window(E, 0, 300)).spacings
    mapped = np.sort(a * E + b)
    other = unfold(index_window(mapped, 0, 300)).spacings
    if a < 0:
        other = other[::-1]
    assert np.max(np.abs(base - other)) < 1e-9


def test_unfold_errors():
    with pytest.raises(UnfoldingError):
        unfold(index_window(np.arange(20.0), 0, 20))
    with pytest.raises(UnfoldingError):
        unfold(index_window(np.full(80, 2.0), 0, 80))


def test_unfold_clamps_negative_spacings(caplog):
    # a kinked staircase that a cubic cannot follow monotonically
    E = np.concatenate([np.linspace(0, 1, 100), np.linspace(1.0001, 1.0002, 100), np.linspace(1.0003, 2, 3)])
    sample = unfold(index_window(E, 0, len(E)))
    assert np.all(sample.spacings >= 0)
    assert sample.clamped > 0


def test_unfold_instance_core_quality(inst10):
    E = eigvals_full(build_ht(inst10, 0.5))
    sample = unfold(core_window(E))
    assert len(sample) == round(0.6 * 1024) - 1
    assert sample.passes_quality_gate


def test_windows():
    E = np.arange(16384.0)
    core = core_window(E)
    assert len(core) == 9830 and core.lo == (16384 - 9830) // 2
    low = low_window(E)
    assert low.lo == 7 and len(low) == 1724


def test_histogram_normalization():
    s = SpacingSample.of(np.random.default_rng(0).exponential(size=1000))
    h = histogram(s, 0.1, 50.0)
    assert h.integral() == pytest.approx(1.0, abs=1e-9)
    assert h.overflow == 0.0
    h4 = histogram(s, 0.1, 4.0)
    assert h4.integral() + h4.overflow == pytest.approx(1.0, abs=1e-9)


def test_histogram_degenerate_sample():
    h = histogram(SpacingSample.of(np.ones(50)))
    assert np.count_nonzero(h.density) == 1


def test_histogram_exponential_bands():
    rng = np.random.default_rng(2024)
    total = 100_000
    h = histogram(SpacingSample.of(rng.exponential(size=total)), 0.1, 4.0)
    lo, hi = h.edges[:-1], h.edges[1:]
    p = np.exp(-lo) - np.exp(-hi)
    sigma = np.sqrt(total * p * (1 - p))
    counts = h.density * total * 0.1
    assert np.all(np.abs(counts - total * p) <= 3 * sigma)


def test_cumulative_examples():
    assert cumulative(SpacingSample.of([1, 2, 3])) == pytest.approx([(1, 1 / 3), (2, 2 / 3), (3, 1)])
    cdf = cumulative(SpacingSample.of(np.random.default_rng(1).random(77)))
    assert cdf[-1][1] == 1.0
    assert cumulative(SpacingSample.of([2, 1, 2])) == pytest.approx([(1, 1 / 3), (2, 1)])


@pytest.mark.parametrize("law", LAWS)
def test_ks_self_sample_small(law):
    # critical value at 99% for 10^4 points is 1.63/100
    for seed in range(5):
        s = SpacingSample.of(sample_law(law, 10_000, np.random.default_rng(seed)))
        assert ks_distance(s, law) < 0.02


def test_ks_all_equal_vs_poisson():
    d = ks_distance(SpacingSample.of(np.ones(100)), ReferenceLaw.POISSON)
    assert d == pytest.approx(1 - math.exp(-1), abs=1e-12)


def test_ks_separates_laws():
    s = SpacingSample.of(sample_law(ReferenceLaw.WIGNER_GOE, 5000, np.random.default_rng(3)))
    assert ks_distance(s, ReferenceLaw.WIGNER_GOE) < ks_distance(s, ReferenceLaw.SEMI_POISSON)
    assert ks_distance(s, ReferenceLaw.SEMI_POISSON) < ks_distance(s, ReferenceLaw.POISSON)


def test_small_s_exponent_quadratic():
    rng = np.random.default_rng(5)
    s_cut = 0.1
    s = s_cut * np.sqrt(rng.random(10_000))  # CDF (s / s_cut)^2
    assert small_s_exponent(SpacingSample.of(s), s_cut) == pytest.approx(2.0, abs=0.15)


def test_small_s_exponent_linear():
    rng = np.random.default_rng(6)
    s = rng.random(10_000)
    assert small_s_exponent(SpacingSample.of(s), 1.0) == pytest.approx(1.0, abs=0.1)


def test_small_s_exponent_needs_data():
    with pytest.raises(FitError):
        small_s_exponent(SpacingSample.of(np.linspace(0.5, 2, 100)), 0.1)


def test_empirical_cdf():
    s = SpacingSample.of([0.1, 0.2, 0.2, 0.9])
    assert np.allclose(empirical_cdf(s, [0.05, 0.2, 1.0]), [0, 0.75, 1])
