import numpy as np
import pytest
from scipy import integrate
from scipy.special import gammaln

from circbeta.densities import (
    cauchy_recurrence_factor,
    density_cauchy_conditional,
    density_cauchy_ensemble,
    density_cbe,
    density_circular_jacobi,
    density_conditional_circular,
    density_dixon_anderson,
    density_eval,
    density_joint_circular,
    density_real_orthogonal_pairs,
    gen_cauchy_normalization,
    log_cauchy_ensemble_normalization,
    log_cbe_normalization,
    log_circle_pow_normalization,
    log_circular_jacobi_normalization,
    log_conditional_circular_constant,
    log_real_orthogonal_normalization,
    morris_constant,
    weight_dirichlet_constant,
)

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------------------
# gamma-product constants


def test_morris_constant_edge_cases():
    assert morris_constant(0, 1.0, 2.0, 0.5) == 1.0
    # single-factor case: the lambda factors cancel
    a, b = 0.7, 1.9
    expected = np.exp(gammaln(a + b + 1) - gammaln(a + 1) - gammaln(b + 1))
    assert morris_constant(1, a, b, 0.8) == pytest.approx(expected, rel=1e-14)


def test_morris_constant_against_quadrature():
    # the N = 2, unit-exponent case normalizes the plain pair integral
    f = lambda t1, t2: abs(np.exp(1j * t1) - np.exp(1j * t2)) ** 2
    v, _ = integrate.dblquad(f, 0, TWO_PI, 0, TWO_PI, epsabs=1e-9)
    assert morris_constant(2, 0.0, 0.0, 1.0) == pytest.approx(v / TWO_PI**2, rel=1e-8)


def test_morris_constant_rejects_poles():
    with pytest.raises(ValueError):
        morris_constant(2, -3.0, 0.0, 1.0)


def test_cbe_normalization_quadrature():
    # the Gamma(1 + beta/2) denominator is the one quadrature confirms
    for beta in (2.0, 3.0, 4.0):
        f = lambda t1, t2: abs(np.exp(1j * t1) - np.exp(1j * t2)) ** beta
        v, _ = integrate.dblquad(f, 0, TWO_PI, 0, TWO_PI, epsabs=1e-9)
        assert np.exp(log_cbe_normalization(2, beta)) == pytest.approx(v, rel=1e-8)


def test_cbe_normalization_beta4_exact_value():
    # direct trigonometric evaluation gives 24 pi^2 for two angles at beta 4
    assert np.exp(log_cbe_normalization(2, 4.0)) == pytest.approx(24 * np.pi**2, rel=1e-12)


def test_circular_jacobi_normalization_quadrature():
    a, c = 1.3, 0.75
    f = lambda t1, t2: (
        abs(1 - np.exp(1j * t1)) ** a
        * abs(1 - np.exp(1j * t2)) ** a
        * abs(np.exp(1j * t1) - np.exp(1j * t2)) ** (2 * c)
    )
    v, _ = integrate.dblquad(f, 0, TWO_PI, 0, TWO_PI, epsabs=1e-8)
    assert np.exp(log_circular_jacobi_normalization(2, a, c)) == pytest.approx(v, rel=1e-8)


def test_weight_dirichlet_constant():
    # inverse of the usual Dirichlet density constant with equal exponents
    n, beta = 4, 3.0
    expected = np.exp(n * gammaln(beta / 2) - gammaln(n * beta / 2))
    assert weight_dirichlet_constant(n, beta) == pytest.approx(expected, rel=1e-14)


def test_circle_pow_normalization_matches_quad():
    for s in (0.0, 1.7):
        v, _ = integrate.quad(lambda p: (2 * np.sin(p / 2)) ** s, 0, TWO_PI, epsabs=1e-12)
        assert np.exp(log_circle_pow_normalization(s)) == pytest.approx(v, rel=1e-9)


def test_cauchy_ensemble_normalization_chain():
    # closed form consistent with the one-step recurrence factor
    for gamma, d in ((2.0, 1.0), (2.5, 0.8)):
        lhs = np.exp(log_cauchy_ensemble_normalization(2, gamma, d))
        rhs = cauchy_recurrence_factor(1, gamma, d) * np.exp(
            log_cauchy_ensemble_normalization(1, gamma - d, d)
        )
        assert lhs == pytest.approx(rhs, rel=1e-12)
    assert log_cauchy_ensemble_normalization(0, 2.0, 1.0) == 0.0


def test_cauchy_ensemble_density_m1():
    # single-point case: a plain generalized Cauchy density
    g = 2.0
    total, _ = integrate.quad(
        lambda x: density_cauchy_ensemble(np.array([x]), g, 1.0), -np.inf, np.inf
    )
    assert total == pytest.approx(1.0, abs=1e-9)
    x = 0.37
    assert density_cauchy_ensemble(np.array([x]), g, 1.0) == pytest.approx(
        gen_cauchy_normalization(g) * (1 + x * x) ** (-g), rel=1e-12
    )


# ---------------------------------------------------------------------------
# circular densities


def test_cbe_density_n1_uniform():
    assert density_cbe([1.1], 2.0) == pytest.approx(1.0 / TWO_PI, rel=1e-12)
    assert density_cbe([7.0], 2.0) == 0.0  # outside the angle box


def test_conditional_circular_n1_uniform():
    val = density_conditional_circular(np.array([0.7]), np.array([2.0]), 1.0, 1.0)
    assert val == pytest.approx(1.0 / TWO_PI, rel=1e-12)
    assert np.exp(log_conditional_circular_constant(1, 1.0, 1.0)) == pytest.approx(1 / TWO_PI)


def test_conditional_circular_support():
    theta = np.array([1.0, 4.0])
    inside = density_conditional_circular(np.array([0.5, 2.0]), theta, 1.5, 0.5)
    outside = density_conditional_circular(np.array([2.0, 3.0]), theta, 1.5, 0.5)
    assert inside > 0 and outside == 0.0
    with pytest.raises(ValueError):
        density_conditional_circular(np.array([0.5, 2.0]), theta[::-1], 1.5, 0.5)


def test_joint_circular_factorizes():
    # joint = conditional x an explicit base factor, testable pointwise
    theta = np.array([1.0, 3.0, 5.5])
    psi = np.array([0.5, 2.0, 4.0])
    a, a1, d = 0.0, 1.0, 1.0
    joint = density_joint_circular(psi, theta, a, a1, d)
    cond = density_conditional_circular(psi, theta, a + 1.0, d)
    e = a + a1 + d
    base = (
        np.exp(gammaln(3)) / (TWO_PI**2 * morris_constant(2, e / 2, e / 2, d))
        * np.prod(np.abs(np.exp(1j * theta[-1]) - np.exp(1j * theta[:-1])) ** (a1 + a + d))
        * abs(np.exp(1j * theta[0]) - np.exp(1j * theta[1]))** (2 * d)
    )
    assert joint == pytest.approx(cond * base, rel=1e-10)


def test_circular_jacobi_density_positive_inside():
    assert density_circular_jacobi([1.0, 2.0], 1.0, 1.5) > 0
    assert density_circular_jacobi([1.0, 8.0], 1.0, 1.5) == 0.0


# ---------------------------------------------------------------------------
# real-line densities


def test_cauchy_conditional_n1_normalization():
    gamma, d1 = 2.0, 1.0
    y = 0.4

    def inner(x0):
        f = lambda x1: density_cauchy_conditional(np.array([x0, x1]), np.array([y]), gamma, d1)
        return integrate.quad(f, -np.inf, y, epsabs=1e-11)[0]

    total, _ = integrate.quad(inner, y, np.inf, epsabs=1e-10)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_cauchy_conditional_support():
    y = np.array([0.8, -0.5])
    ok = density_cauchy_conditional(np.array([1.0, 0.0, -1.0]), y, 2.0, 1.0)
    bad = density_cauchy_conditional(np.array([1.0, 0.9, -1.0]), y, 2.0, 1.0)
    assert ok > 0 and bad == 0.0
    with pytest.raises(ValueError):
        density_cauchy_conditional(np.array([1.0, 0.0, -1.0]), y, 0.9, 1.0)


def test_dixon_anderson_exact_integral():
    d = 2.0
    y = np.array([1.0, -0.7])
    total, _ = integrate.quad(
        lambda u: density_dixon_anderson(np.array([u]), y, d), y[1], y[0], epsabs=1e-12
    )
    assert total == pytest.approx(1.0, abs=1e-10)
    assert density_dixon_anderson(np.array([2.0]), y, d) == 0.0


def test_real_orthogonal_density_normalizations():
    a, b, beta = 0.3, -0.2, 1.7
    one, _ = integrate.quad(
        lambda t: density_real_orthogonal_pairs(np.array([t]), a, b, beta), 0, np.pi
    )
    assert one == pytest.approx(1.0, abs=1e-8)
    two, _ = integrate.dblquad(
        lambda t1, t2: density_real_orthogonal_pairs(np.array([t1, t2]), a, b, beta),
        0,
        np.pi,
        0,
        np.pi,
        epsabs=1e-8,
    )
    assert two == pytest.approx(1.0, abs=1e-6)
    assert np.isfinite(log_real_orthogonal_normalization(3, a, b, beta))


# ---------------------------------------------------------------------------
# dispatcher


def test_conditional_params_bundle():
    from circbeta.densities import ConditionalParams

    p = ConditionalParams(1.5, 0.5)
    assert p.a == pytest.approx(0.5)
    filled = ConditionalParams.for_gamma(2.0, n=2, d=1.0)
    assert filled.d0 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ConditionalParams(0.0, 1.0)
    with pytest.raises(ValueError):
        ConditionalParams(1.0, 1.0, gamma=5.0, n=2)  # violates the sum constraint


def test_density_eval_routes():
    assert density_eval("cbe", {"beta": 2.0}, [1.0]) == pytest.approx(1 / TWO_PI)
    v = density_eval(
        "conditional_circular",
        {"theta": np.array([1.0, 4.0]), "d0": 1.5, "d": 0.5},
        np.array([0.5, 2.0]),
    )
    assert v > 0
    assert density_eval("dixon_anderson", {"y": np.array([1.0, -1.0]), "d": 2.0}, [0.0]) > 0
    assert density_eval("cauchy_ensemble", {"gamma": 2.0, "d": 1.0}, [0.5]) > 0
    assert density_eval("cauchy_base", {"gamma": 3.0, "d": 1.0}, [0.5]) > 0
    assert density_eval("real_orthogonal", {"a": 0.0, "b": 0.0, "beta": 2.0}, [1.0]) > 0
    with pytest.raises(ValueError):
        density_eval("nonsense", {}, [1.0])
