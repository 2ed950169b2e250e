import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import gammaln

import circbeta.distributions as dist
from circbeta.distributions import (
    RngStream,
    beta_draw,
    circle_pow,
    complex_gaussian_matrix,
    dirichlet,
    gen_cauchy_real,
    theta_nu,
)

M = 100_000


def stderr_bound(sample, k=4.0):
    return k * np.std(sample, ddof=1) / np.sqrt(sample.size)


# ---------------------------------------------------------------------------
# stream contract


def test_stream_reproducibility():
    a = RngStream(123, 7).generator().uniform(size=32)
    b = RngStream(123, 7).generator().uniform(size=32)
    np.testing.assert_array_equal(a, b)


def test_stream_independence_of_indices():
    a = RngStream(123, 0).generator().uniform(size=32)
    b = RngStream(123, 1).generator().uniform(size=32)
    assert np.max(np.abs(a - b)) > 1e-6


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**63 - 1), st.integers(min_value=0, max_value=1000))
def test_stream_bitwise_property(seed, idx):
    x = RngStream(seed, idx).generator().standard_normal(8)
    y = RngStream(seed, idx).generator().standard_normal(8)
    np.testing.assert_array_equal(x, y)


# ---------------------------------------------------------------------------
# disk family


def test_theta_nu_circle_case():
    rng = RngStream(1).generator()
    z = theta_nu(1.0, rng, size=1000)
    np.testing.assert_allclose(np.abs(z), 1.0, atol=1e-15)


def test_theta_nu_interior():
    rng = RngStream(2).generator()
    z = theta_nu(3.0, rng, size=1000)
    assert np.all(np.abs(z) < 1.0)


def test_theta_nu_density_normalization_oracle():
    # polar-coordinates quadrature of the stated density, including the
    # radial second moment used below
    for nu in (3.0, 5.0):
        f = lambda r: (nu - 1.0) * (1 - r * r) ** ((nu - 3.0) / 2.0) * r
        total, _ = integrate.quad(f, 0, 1, epsabs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-10)
        m2 = integrate.quad(lambda r: f(r) * r * r, 0, 1, epsabs=1e-12)[0]
        assert m2 == pytest.approx(2.0 / (nu + 1.0), abs=1e-10)


@pytest.mark.parametrize("nu,expected", [(3.0, 0.5), (5.0, 1.0 / 3.0)])
def test_theta_nu_second_moment(nu, expected):
    rng = RngStream(3).generator()
    z = theta_nu(nu, rng, size=M)
    m2 = np.abs(z) ** 2
    assert abs(m2.mean() - expected) <= stderr_bound(m2)


def test_theta_nu_rejects_small_nu():
    with pytest.raises(ValueError):
        theta_nu(0.5, RngStream(0).generator())


# ---------------------------------------------------------------------------
# Dirichlet / Beta


def test_dirichlet_sums_to_one_exactly():
    rng = RngStream(4).generator()
    w = dirichlet([0.5, 1.5, 2.0], rng, size=200)
    np.testing.assert_array_equal(w.sum(axis=1), np.ones(200))


def test_dirichlet_mean_and_marginal():
    rng = RngStream(5).generator()
    d = np.array([0.7, 1.3, 2.5])
    w = dirichlet(d, rng, size=M)
    for j in range(3):
        assert abs(w[:, j].mean() - d[j] / d.sum()) <= stderr_bound(w[:, j])
    # first coordinate of a symmetric pair against the Beta marginal moments
    w2 = dirichlet([0.8, 0.8], rng, size=M)[:, 0]
    b = beta_draw(0.8, 0.8, rng, size=M)
    assert abs(w2.mean() - b.mean()) <= stderr_bound(w2) + stderr_bound(b)
    assert abs(np.var(w2) - np.var(b)) <= 4.0 * np.sqrt(np.var(w2**2) + np.var(b**2)) / np.sqrt(M)


def test_dirichlet_rejects_nonpositive():
    with pytest.raises(ValueError):
        dirichlet([1.0, 0.0], RngStream(0).generator())


@pytest.mark.parametrize("a,b,mean", [(1.0, 1.0, 0.5), (2.0, 1.0, 2.0 / 3.0)])
def test_beta_moments(a, b, mean):
    rng = RngStream(6).generator()
    x = beta_draw(a, b, rng, size=M)
    assert abs(x.mean() - mean) <= stderr_bound(x)


def test_beta_rejects_nonpositive():
    with pytest.raises(ValueError):
        beta_draw(0.0, 1.0, RngStream(0).generator())


# ---------------------------------------------------------------------------
# circle power law


def test_circle_pow_uniform_case():
    rng = RngStream(7).generator()
    phi = circle_pow(0.0, rng, size=M)
    counts, _ = np.histogram(phi, bins=16, range=(0, 2 * np.pi))
    chi2 = np.sum((counts - M / 16) ** 2 / (M / 16))
    from scipy.stats import chi2 as chi2_dist

    assert chi2_dist.sf(chi2, 15) > 0.01


def test_circle_pow_normalization_oracle():
    # quadrature of |1 - e^{i phi}|^s against the gamma-ratio constant
    for s in (1.0, 2.0, 3.5):
        quad, _ = integrate.quad(
            lambda p: (2.0 * np.sin(p / 2.0)) ** s, 0, 2 * np.pi, epsabs=1e-12
        )
        closed = 2 * np.pi * np.exp(gammaln(s + 1.0) - 2.0 * gammaln(s / 2.0 + 1.0))
        assert abs(quad - closed) / closed <= 1e-8


def test_circle_pow_moment_against_quadrature():
    s = 2.0
    norm = integrate.quad(lambda p: (2 * np.sin(p / 2)) ** s, 0, 2 * np.pi)[0]
    target = integrate.quad(lambda p: np.cos(p) * (2 * np.sin(p / 2)) ** s, 0, 2 * np.pi)[0] / norm
    rng = RngStream(8).generator()
    phi = circle_pow(s, rng, size=M)
    c = np.cos(phi)
    assert abs(c.mean() - target) <= stderr_bound(c)


def test_circle_pow_acceptance_rate():
    # the acceptance probability of the rejection scheme is the normalization
    # over 2 pi 2^s; measured on the same acceptance function
    s = 2.0
    rng = RngStream(9).generator()
    phi = rng.uniform(0, 2 * np.pi, M)
    accepted = rng.uniform(size=M) < np.sin(phi / 2.0) ** s
    expected = np.exp(gammaln(s + 1.0) - s * np.log(2.0) - 2.0 * gammaln(s / 2.0 + 1.0))
    assert abs(accepted.mean() - expected) <= stderr_bound(accepted.astype(float))


def test_circle_pow_proposal_cap(monkeypatch):
    monkeypatch.setattr(dist, "CIRCLE_POW_PROPOSAL_CAP", 8)
    with pytest.raises(RuntimeError):
        circle_pow(40.0, RngStream(10).generator(), size=64)


# ---------------------------------------------------------------------------
# generalized Cauchy


def test_gen_cauchy_standard_case():
    rng = RngStream(11).generator()
    c = gen_cauchy_real(1.0, rng, size=M)
    inside = (np.abs(c) <= 1.0).astype(float)
    assert abs(inside.mean() - 0.5) <= stderr_bound(inside)


def test_gen_cauchy_variance():
    rng = RngStream(12).generator()
    c = gen_cauchy_real(2.0, rng, size=M)
    # variance of the scaled Student t with 3 degrees of freedom is 1
    assert abs(np.var(c) - 1.0) <= 4.0 * np.std(c**2) / np.sqrt(M)


def test_gen_cauchy_normalization_oracle():
    from circbeta.densities import gen_cauchy_normalization

    for g in (1.0, 2.0, 2.7):
        quad, _ = integrate.quad(lambda c: (1 + c * c) ** (-g), -np.inf, np.inf, epsabs=1e-12)
        assert abs(quad * gen_cauchy_normalization(g) - 1.0) <= 1e-8


def test_gen_cauchy_rejects_small_gamma():
    with pytest.raises(ValueError):
        gen_cauchy_real(0.5, RngStream(0).generator())


# ---------------------------------------------------------------------------
# complex Gaussians


def test_complex_gaussian_moments():
    rng = RngStream(13).generator()
    z = np.concatenate([complex_gaussian_matrix(10, rng).ravel() for _ in range(1000)])
    assert abs(z.real.mean()) <= stderr_bound(z.real)
    assert abs(z.imag.mean()) <= stderr_bound(z.imag)
    m2 = np.abs(z) ** 2
    assert abs(m2.mean() - 1.0) <= stderr_bound(m2)


def test_complex_gaussian_entry_independence():
    rng = RngStream(14).generator()
    a = np.array([complex_gaussian_matrix(2, rng) for _ in range(20000)])
    x, y = a[:, 0, 0].real, a[:, 1, 1].real
    corr = np.corrcoef(x, y)[0, 1]
    assert abs(corr) <= 4.0 / np.sqrt(x.size)
