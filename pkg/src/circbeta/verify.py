"""Numerical verification lab.

Every closed-form identity, determinant evaluation, Jacobian and conditional
density in scope gets an executable check with an explicit tolerance, driven
by finite differences, quadrature and brute-force oracles.  Checks are
deterministic given their seed: trial i draws from ``RngStream(seed, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from .angles import TWO_PI, cyclic_gaps, is_cyclically_interlaced
from .densities import (
    cauchy_conditional_many,
    cauchy_recurrence_factor,
    conditional_circular_many,
    density_dixon_anderson,
    log_cauchy_ensemble_normalization,
)
from .distributions import RngStream, circle_pow, gen_cauchy_real
from .linalg import (
    RealSchurParameters,
    SchurParameters,
    TridiagonalMatrix,
    UnitEigenData,
    build_hessenberg,
    build_real_orthogonal,
    eigen_real_orthogonal,
    eigen_symmetric_tridiag,
    eigen_unit,
    resolvent_11,
)
from .polynomials import (
    bottom_run,
    companion_roots_batch,
    perturbed_angles_batch,
    perturbed_spectrum,
)

IDENTITY_TOL = 1e-8
RESOLVENT_TOL = 1e-9
JACOBIAN_TOL = 1e-5
QUADRATURE_TOL = 1e-6
CHI2_PASS_P = 0.01  # per-test threshold; stricter than the Bonferroni bound
FD_STEP = 1e-6
MIN_EIGEN_GAP = 1e-3


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification check."""

    check_name: str
    trials: int
    max_rel_error: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    @classmethod
    def from_errors(cls, name, errors, tolerance, **details):
        worst = float(np.max(errors)) if np.size(errors) else 0.0
        return cls(name, int(np.size(errors)), worst, tolerance, worst <= tolerance, details)

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "trials": self.trials,
            "max_rel_error": self.max_rel_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
        }


def rel_err(lhs, rhs) -> float:
    lhs = complex(lhs)
    rhs = complex(rhs)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def _rng(seed: int, trial: int) -> np.random.Generator:
    return RngStream(seed, trial).generator()


# ---------------------------------------------------------------------------
# random instances


def _rand_schur(n, rng, radius=0.8) -> SchurParameters:
    interior = np.sqrt(rng.uniform(0, radius**2, n - 1)) * np.exp(
        1j * rng.uniform(0, TWO_PI, n - 1)
    )
    boundary = np.exp(1j * rng.uniform(0, TWO_PI))
    return SchurParameters(np.concatenate([interior, [boundary]]))


def _rand_real_schur(half_n, rng, radius=0.75) -> RealSchurParameters:
    return RealSchurParameters(rng.uniform(-radius, radius, 2 * half_n - 1))


def _rand_tridiag(n, rng) -> TridiagonalMatrix:
    return TridiagonalMatrix(rng.normal(0.0, 1.0, n), rng.uniform(0.5, 1.5, max(n - 1, 0)))


def _rand_circle_points(n, rng, min_gap):
    while True:
        th = np.sort(rng.uniform(0, TWO_PI, n))
        if n == 1 or np.min(cyclic_gaps(th)) >= min_gap:
            return th


def _stratified_points(n, rng, lo, hi, jitter=0.8):
    """Random points with guaranteed separation: one jittered point per equal
    cell of (lo, hi).  Keeps the alternant-style determinants well away from
    their vanishing locus, where the closed-form comparison would drown in
    roundoff."""
    cells = np.arange(n) + 0.5 + jitter * (rng.uniform(size=n) - 0.5)
    return lo + (hi - lo) * np.sort(cells) / n


def _rand_eigendata(n, rng) -> UnitEigenData:
    th = _rand_circle_points(n, rng, min_gap=0.4 / n)
    w = rng.dirichlet(np.full(n, 1.5))
    w /= w.sum()
    return UnitEigenData(th, w)


# ---------------------------------------------------------------------------
# resolvent identities


def check_resolvent(n: int = 5, trials: int = 100, seed: int = 0, shifts: int = 20):
    """Linear-solve resolvents against the eigen-sum forms, for tridiagonal,
    unitary Hessenberg and real orthogonal instances."""
    err_tri, err_hess, err_orth = [], [], []
    for trial in range(trials):
        rng = _rng(seed, trial)

        T = _rand_tridiag(n, rng)
        eig = eigen_symmetric_tridiag(T)
        M = T.matrix()
        for _ in range(shifts):
            lam = rng.normal() + 1j * (0.3 + abs(rng.normal()))
            lhs = resolvent_11(M, lam)
            rhs = np.sum(eig.first_components**2 / (eig.eigenvalues - lam))
            err_tri.append(rel_err(lhs, rhs))

        H = build_hessenberg(_rand_schur(n, rng))
        ue = eigen_unit(H)
        for k in range(shifts):
            r = 0.55 if k % 2 == 0 else 1.6
            lam = r * np.exp(1j * rng.uniform(0, TWO_PI))
            lhs = resolvent_11(H, lam)
            rhs = np.sum(ue.weights / (ue.eigenvalues - lam))
            err_hess.append(rel_err(lhs, rhs))

        half = max(2, n // 2)
        O = build_real_orthogonal(_rand_real_schur(half, rng))
        oe = eigen_real_orthogonal(O)
        for _ in range(shifts):
            lam = 0.6 * rng.uniform(0.1, 1.0) * np.exp(1j * rng.uniform(0, TWO_PI))
            # ((I - lam M)^{-1})_11 expressed through the resolvent at 1/lam
            lhs = -resolvent_11(O, 1.0 / lam) / lam
            lam_j = np.exp(1j * oe.angles)
            rhs = 0.5 * np.sum(
                oe.weights * (1.0 / (1.0 - lam * lam_j) + 1.0 / (1.0 - lam * np.conj(lam_j)))
            )
            err_orth.append(rel_err(lhs, rhs))
    mk = CheckReport.from_errors
    return [
        mk("resolvent_tridiagonal", err_tri, RESOLVENT_TOL, n=n, shifts=shifts),
        mk("resolvent_hessenberg", err_hess, RESOLVENT_TOL, n=n, shifts=shifts),
        mk("resolvent_real_orthogonal", err_orth, RESOLVENT_TOL, n=2 * half, shifts=shifts),
    ]


# ---------------------------------------------------------------------------
# eigenvalue product identities


def check_product_identities(n: int = 6, trials: int = 100, seed: int = 0):
    """Both-sides evaluation of the squared-Vandermonde and related product
    identities over random parameters, for sizes up to ``n``."""
    e_tri, e_hess, e_bottom, e_orth, e_edge = [], [], [], [], []
    for trial in range(trials):
        rng = _rng(seed, trial)
        for size in range(2, n + 1):
            T = _rand_tridiag(size, rng)
            eig = eigen_symmetric_tridiag(T)
            lam, q = eig.eigenvalues, eig.first_components
            lhs = np.prod([(lam[i] - lam[j]) ** 2 for i in range(size) for j in range(i + 1, size)])
            rhs = np.prod(T.offdiag ** (2 * np.arange(1, size))) / np.prod(q**2)
            e_tri.append(rel_err(lhs, rhs))

            params = _rand_schur(size, rng)
            ue = eigen_unit(build_hessenberg(params))
            lam_u = ue.eigenvalues
            pair = np.prod(
                [abs(lam_u[i] - lam_u[j]) ** 2 for i in range(size) for j in range(i + 1, size)]
            )
            interior = 1.0 - np.abs(params.alphas[:-1]) ** 2
            rhs = np.prod(interior ** (size - 1 - np.arange(size - 1))) / np.prod(ue.weights)
            e_hess.append(rel_err(pair, rhs))

            chib = bottom_run(params.alphas).chi
            vals = np.polynomial.polynomial.polyval(lam_u, chib)
            e_bottom.append(rel_err(np.prod(np.abs(vals)), np.prod(interior ** (size - 1 - np.arange(size - 1)))))

        for half in range(1, n // 2 + 1):
            rp = _rand_real_schur(half, rng)
            O = build_real_orthogonal(rp)
            oe = eigen_real_orthogonal(O)
            lam_o = np.exp(1j * oe.angles)
            lhs = np.prod(np.abs(lam_o - 1.0 / lam_o))
            for i in range(half):
                for j in range(i + 1, half):
                    lhs *= abs(lam_o[i] - lam_o[j]) ** 2 * abs(lam_o[i] - 1.0 / lam_o[j]) ** 2
            powers = (2 * half - 1 - np.arange(2 * half - 1)) / 2.0
            rhs = 2**half * np.prod((1.0 - rp.alphas**2) ** powers) / np.prod(oe.weights)
            e_orth.append(rel_err(lhs, rhs))

            signs = (-1.0) ** np.arange(2 * half - 1)
            e_edge.append(
                rel_err(np.prod(np.abs(1.0 - lam_o) ** 2), 2.0 * np.prod(1.0 - rp.alphas))
            )
            e_edge.append(
                rel_err(np.prod(np.abs(1.0 + lam_o) ** 2), 2.0 * np.prod(1.0 + signs * rp.alphas))
            )
    mk = CheckReport.from_errors
    return [
        mk("vandermonde_product_tridiagonal", e_tri, IDENTITY_TOL, max_size=n),
        mk("vandermonde_product_hessenberg", e_hess, IDENTITY_TOL, max_size=n),
        mk("bottom_charpoly_product", e_bottom, IDENTITY_TOL, max_size=n),
        mk("vandermonde_product_real_orthogonal", e_orth, IDENTITY_TOL, max_size=2 * (n // 2)),
        mk("edge_value_products", e_edge, IDENTITY_TOL, max_size=2 * (n // 2)),
    ]


# ---------------------------------------------------------------------------
# determinant evaluations


def _orientation_sign(n: int) -> float:
    """Row/column orientation factor of the confluent alternant blocks under
    the natural top-to-bottom reading; period four in n."""
    return -1.0 if ((n - 1) // 2) % 2 else 1.0


def _confluent_real_det(lam: np.ndarray) -> complex:
    n = lam.size
    m = 2 * n - 1
    M = np.empty((m, m), dtype=float)
    for j in range(1, m + 1):
        M[j - 1, : n - 1] = lam[: n - 1] ** j - lam[n - 1] ** j
        M[j - 1, n - 1 :] = j * lam ** (j - 1)
    return np.linalg.det(M)


def _confluent_circular_det(lam: np.ndarray) -> complex:
    n = lam.size
    m = 2 * n - 1
    M = np.empty((m, m), dtype=complex)
    r = 0
    for j in range(1, n):
        M[r, : n - 1] = lam[: n - 1] ** j - lam[n - 1] ** j
        M[r, n - 1 :] = j * lam**j
        M[r + 1, : n - 1] = lam[: n - 1] ** (-j) - lam[n - 1] ** (-j)
        M[r + 1, n - 1 :] = -j * lam ** (-j)
        r += 2
    M[r, : n - 1] = lam[: n - 1] ** n - lam[n - 1] ** n
    M[r, n - 1 :] = n * lam**n
    return np.linalg.det(M)


def _confluent_reciprocal_det(lam: np.ndarray) -> complex:
    n = lam.size
    m = 2 * n - 1
    M = np.empty((m, m), dtype=complex)
    for j in range(1, m + 1):
        # first block: subtract the n-th variable's symmetric power (the
        # variant subtracting each column's own power is identically zero,
        # so it cannot be the intended matrix)
        M[j - 1, : n - 1] = (lam[: n - 1] ** j + lam[: n - 1] ** (-j)) - (
            lam[n - 1] ** j + lam[n - 1] ** (-j)
        )
        M[j - 1, n - 1 :] = j * (lam**j - lam ** (-j))
    return np.linalg.det(M)


def check_det_identities(n: int = 5, trials: int = 100, seed: int = 0):
    """Numerical determinants of the three confluent-alternant matrices
    against their closed forms, sizes 1..n, up to the orientation sign."""
    e_real, e_circ, e_recip = [], [], []
    for trial in range(trials):
        rng = _rng(seed, trial)
        for size in range(1, n + 1):
            eps = _orientation_sign(size)

            lam = _stratified_points(size, rng, -2.0, 2.0)[::-1]
            rhs = np.prod(
                [(lam[k] - lam[j]) ** 4 for j in range(size) for k in range(j + 1, size)]
            )
            e_real.append(rel_err(_confluent_real_det(lam), eps * rhs))

            th = _stratified_points(size, rng, 0.0, TWO_PI)
            z = np.exp(1j * th)
            rhs = np.prod(
                [(z[k] - z[j]) ** 4 for j in range(size) for k in range(j + 1, size)]
            ) / np.prod(z ** (2 * size - 3))
            e_circ.append(rel_err(_confluent_circular_det(z), eps * rhs))

            # the reciprocal alternant also vanishes at reflected pairs
            # theta_i + theta_j = 2*pi, so its points live on the half circle
            th = _stratified_points(size, rng, 0.0, np.pi)
            z = np.exp(1j * th)
            rhs = np.prod(z - 1.0 / z)
            for j in range(size):
                for k in range(j + 1, size):
                    rhs *= (
                        (z[k] - z[j]) ** 2
                        * (1 / z[k] - 1 / z[j]) ** 2
                        * (z[j] - 1 / z[k]) ** 2
                        * (1 / z[j] - z[k]) ** 2
                    )
            e_recip.append(rel_err(_confluent_reciprocal_det(z), eps * rhs))
    mk = CheckReport.from_errors
    extras = {"max_size": n, "orientation": "sign (-1)^floor((n-1)/2) absorbed"}
    return [
        mk("confluent_vandermonde_real", e_real, IDENTITY_TOL, **extras),
        mk("confluent_vandermonde_circular", e_circ, IDENTITY_TOL, **extras),
        mk("confluent_vandermonde_reciprocal", e_recip, IDENTITY_TOL, **extras),
    ]


# ---------------------------------------------------------------------------
# Jacobians by central finite differences


def _fd_jacobian_det(f, x0, h=FD_STEP) -> float:
    x0 = np.asarray(x0, dtype=float)
    m = x0.size
    J = np.empty((m, m))
    for j in range(m):
        step = h * max(1.0, abs(x0[j]))
        xp = x0.copy()
        xm = x0.copy()
        xp[j] += step
        xm[j] -= step
        J[:, j] = (f(xp) - f(xm)) / (2.0 * step)
    return abs(np.linalg.det(J))


def _well_separated(values, margin=MIN_EIGEN_GAP):
    v = np.asarray(values)
    return v.size < 2 or np.min(np.abs(np.diff(v))) >= margin


def check_jacobians(case: str, n: int, trials: int = 20, seed: int = 0) -> CheckReport:
    """|det| of the central-difference Jacobian of the parameters-to-spectrum
    map against the closed form; the two must multiply to 1.

    ``case`` is 'tridiag', 'unitary' or 'real_orthogonal' (n means 2n x 2n
    there).  Base points are redrawn (up to 10 times) until eigenvalues are
    separated by at least 1e-3 and weights are bounded away from 0, so the
    differencing never crosses a sort boundary.
    """
    errors = []
    for trial in range(trials):
        rng = _rng(seed, trial)
        for _attempt in range(10):
            if case == "tridiag":
                T = _rand_tridiag(n, rng)
                eig = eigen_symmetric_tridiag(T)
                if not (_well_separated(eig.eigenvalues) and np.min(eig.first_components) > 1e-2):
                    continue
                x0 = np.concatenate([T.diag[::-1], T.offdiag[::-1]])

                def fwd(x):
                    t = TridiagonalMatrix(x[:n][::-1], x[n:][::-1])
                    e = eigen_symmetric_tridiag(t)
                    return np.concatenate([e.eigenvalues, e.first_components[: n - 1]])

                q = eig.first_components
                formula = (1.0 / q[-1]) * np.prod(T.offdiag) / np.prod(q)
            elif case == "unitary":
                params = _rand_schur(n, rng, radius=0.7)
                ue = eigen_unit(build_hessenberg(params))
                gaps_ok = np.min(cyclic_gaps(ue.angles)) >= MIN_EIGEN_GAP
                away_from_wrap = ue.angles[0] > 1e-3 and ue.angles[-1] < TWO_PI - 1e-3
                if not (gaps_ok and away_from_wrap and np.min(ue.weights) > 1e-4):
                    continue
                phi0 = float(np.angle(params.alphas[-1]) % TWO_PI)
                x0 = np.concatenate(
                    [np.column_stack([params.alphas[:-1].real, params.alphas[:-1].imag]).ravel(), [phi0]]
                )

                def fwd(x):
                    al = x[:-1:2] + 1j * x[1::2][: n - 1]
                    al = np.concatenate([al, [np.exp(1j * x[-1])]])
                    e = eigen_unit(build_hessenberg(SchurParameters(al)))
                    return np.concatenate([e.angles, e.moduli[: n - 1]])

                q = ue.moduli
                formula = np.prod(1.0 - np.abs(params.alphas[:-1]) ** 2) / (q[-1] * np.prod(q))
            elif case == "real_orthogonal":
                rp = _rand_real_schur(n, rng, radius=0.65)
                oe = eigen_real_orthogonal(build_real_orthogonal(rp))
                edge_ok = oe.angles[0] > 1e-3 and oe.angles[-1] < np.pi - 1e-3
                if not (_well_separated(oe.angles) and edge_ok and np.min(oe.weights) > 1e-4):
                    continue
                x0 = rp.alphas.copy()

                def fwd(x):
                    e = eigen_real_orthogonal(build_real_orthogonal(RealSchurParameters(x)))
                    return np.concatenate([e.angles, e.moduli[: n - 1]])

                q = oe.moduli
                al = rp.alphas
                signs = (-1.0) ** np.arange(al.size)
                formula = (
                    2 ** (n - 1)
                    / (q[-1] * np.prod(q))
                    * np.prod(1.0 - al**2)
                    / np.prod(np.sqrt((1.0 - al) * (1.0 + signs * al)))
                )
            elif case == "perturbation_phase":
                # weights and phase to perturbed angles at fixed base angles;
                # the closed form is the cross ratio of the two angle
                # Vandermondes over |1 - t|^{n-1}
                theta = _rand_circle_points(n, rng, min_gap=0.4 / n)
                w = rng.dirichlet(np.full(n, 3.0))
                phi0 = rng.uniform(0.5, TWO_PI - 0.5)
                if np.min(w) < 5e-3:
                    continue
                x0 = np.concatenate([w[:-1], [phi0]])
                base_psi = perturbed_angles_batch(theta, w[None, :], np.array([phi0]))[0]

                def fwd(x):
                    ww = np.concatenate([x[:-1], [1.0 - np.sum(x[:-1])]])
                    psi = perturbed_angles_batch(theta, ww[None, :], np.array([x[-1]]))[0]
                    # undo any 2*pi jump of the wrapped first-gap angle
                    return psi + np.round((base_psi - psi) / TWO_PI) * TWO_PI

                lam = np.exp(1j * theta)
                lam_new = np.exp(1j * base_psi)
                num = np.prod(
                    [abs(lam_new[k] - lam_new[j]) for j in range(n) for k in range(j + 1, n)]
                )
                den = np.prod(
                    [abs(lam[k] - lam[j]) for j in range(n) for k in range(j + 1, n)]
                )
                formula = abs(1.0 - np.exp(1j * phi0)) ** (-(n - 1)) * num / den
            else:
                raise ValueError(
                    "case must be 'tridiag', 'unitary', 'real_orthogonal'"
                    " or 'perturbation_phase'"
                )
            fd = _fd_jacobian_det(fwd, x0)
            errors.append(abs(fd * formula - 1.0))
            break
        else:
            raise RuntimeError("could not find a well-separated base point in 10 attempts")
    name = f"jacobian_{'tridiagonal' if case == 'tridiag' else case}_n{n}"
    return CheckReport.from_errors(name, errors, JACOBIAN_TOL, case=case, n=n, step=FD_STEP)


# ---------------------------------------------------------------------------
# rank-1 interlacing relations


def check_interlace_relations(n: int = 5, trials: int = 1000, seed: int = 0):
    """Residue and product identities of the perturbation function, the
    interlacing count, and continuity as the perturbation factor approaches
    the identity."""
    e_res, e_prod = [], []
    violations = 0
    for trial in range(trials):
        rng = _rng(seed, trial)
        eig = _rand_eigendata(n, rng)
        phi = rng.uniform(0.15, TWO_PI - 0.15)
        t = np.exp(1j * phi)
        sp = perturbed_spectrum(eig, t)
        if not is_cyclically_interlaced(eig.angles, sp.sorted_new):
            violations += 1
        lam = eig.eigenvalues
        lam_new = np.exp(1j * sp.new_angles)
        for j in range(n):
            lhs = -(t - 1.0) * lam[j] * eig.weights[j]
            rhs = np.prod(lam[j] - lam_new) / np.prod(np.delete(lam[j] - lam, j))
            e_res.append(rel_err(lhs, rhs))
        e_prod.append(rel_err(np.prod(lam_new), t * np.prod(lam)))

    e_cont = []
    for trial in range(min(trials, 50)):
        rng = _rng(seed, 10_000 + trial)
        eig = _rand_eigendata(n, rng)
        sp = perturbed_spectrum(eig, np.exp(1j * 1e-4))
        # for a small positive phase each zero sits just above the lower end
        # of its gap, so the set converges to the base set with a one-gap
        # index shift
        shift = np.abs(sp.new_angles - np.roll(eig.angles, 1))
        shift = np.minimum(shift, TWO_PI - shift)
        e_cont.append(np.max(shift))
    mk = CheckReport.from_errors
    return [
        mk("perturbation_residues", e_res, IDENTITY_TOL, n=n),
        mk("perturbation_product", e_prod, IDENTITY_TOL, n=n),
        CheckReport(
            "perturbation_interlacing", trials, float(violations), 0.0, violations == 0, {"n": n}
        ),
        mk("perturbation_continuity", e_cont, 1e-3, n=n, phase=1e-4),
    ]


# ---------------------------------------------------------------------------
# Cauchy integral recurrence


def _cauchy_I1_quad(gamma: float) -> float:
    f = lambda u: np.cos(u) ** (2.0 * gamma - 2.0)
    v, _ = integrate.quad(f, -np.pi / 2, np.pi / 2, epsabs=1e-12, limit=200)
    return v


def _cauchy_I2_quad(gamma: float, d: float) -> float:
    # ordered region x > y via x = tan u, y = tan v; the weight exponents
    # fold into smooth cosine powers
    p = 2.0 * gamma - 2.0 - 2.0 * d

    def inner(u):
        f = lambda v: np.cos(v) ** p * np.abs(np.sin(u - v)) ** (2.0 * d)
        val, _ = integrate.quad(f, -np.pi / 2, u, epsabs=1e-12, limit=200)
        return val * np.cos(u) ** p

    v, _ = integrate.quad(inner, -np.pi / 2, np.pi / 2, epsabs=1e-10, limit=200)
    return v


def check_in_recurrence(gamma: float, d: float) -> CheckReport:
    """Quadrature values of the first two Cauchy ensemble integrals against
    the one-step recurrence chaining and the closed product form."""
    if 2.0 * gamma <= 2.0 * d + 1.0:
        raise ValueError("integrand not normalizable at the requested order")
    i1 = _cauchy_I1_quad(gamma - d)
    i2 = _cauchy_I2_quad(gamma, d)
    i1_closed = np.exp(log_cauchy_ensemble_normalization(1, gamma - d, d))
    i2_closed = np.exp(log_cauchy_ensemble_normalization(2, gamma, d))
    i2_chain = cauchy_recurrence_factor(1, gamma, d) * i1
    errors = [
        rel_err(i1, i1_closed),
        rel_err(i2, i2_chain),
        rel_err(i2, i2_closed),
        rel_err(_cauchy_I1_quad(1.0), np.pi),
        rel_err(cauchy_recurrence_factor(0, 1.0, d), np.pi),
    ]
    name = f"cauchy_integral_recurrence_g{gamma:g}_d{d:g}"
    return CheckReport.from_errors(name, errors, QUADRATURE_TOL, gamma=gamma, d=d)


# ---------------------------------------------------------------------------
# conditional densities: sampling vs quadrature-normalized formulas


def _chi2_report(name, samples, edges, bin_probs, **details) -> CheckReport:
    counts, _ = np.histogram(samples, bins=edges)
    expected = samples.size * np.asarray(bin_probs)
    # merge under-filled cells into their neighbours, standard chi^2 hygiene
    cm, em = [], []
    acc_c, acc_e = 0.0, 0.0
    for c, e in zip(counts, expected):
        acc_c += c
        acc_e += e
        if acc_e >= 10.0:
            cm.append(acc_c)
            em.append(acc_e)
            acc_c, acc_e = 0.0, 0.0
    if acc_e > 0 and em:
        cm[-1] += acc_c
        em[-1] += acc_e
    cm = np.asarray(cm, dtype=float)
    em = np.asarray(em, dtype=float)
    chi2 = float(np.sum((cm - em) ** 2 / em))
    dof = cm.size - 1
    p = float(stats.chi2.sf(chi2, dof))
    return CheckReport(
        name,
        int(samples.size),
        1.0 - p,
        1.0 - CHI2_PASS_P,
        p > CHI2_PASS_P,
        {"chi2": chi2, "dof": dof, "p_value": p, **details},
    )


def check_conditional_circular(seed: int = 0, m_samples: int = 100_000, bins: int = 30):
    """The circular interlacing conditional at n = 2 with exponents (3/2 for
    the distinguished angle, 1/2 elsewhere): sampled construction vs the
    quadrature-normalized formula, plus the n = 1 uniform special case."""
    d, d0 = 0.5, 1.5
    theta = np.array([1.3, 4.1])
    rng = _rng(seed, 0)
    W = rng.dirichlet([d, d0], size=m_samples)
    phi = circle_pow(d0 + d - 1.0, rng, size=m_samples)
    psi = perturbed_angles_batch(theta, W, phi)
    psi2 = psi[:, 1]

    # marginal of the second-gap angle; the wrapped first-gap angle is
    # integrated out under psi1 = lo + (hi - lo) sin^2(u), which turns the
    # half-power edge factors at both gap ends into analytic ones
    lo, hi = theta[1] - TWO_PI, theta[0]
    u_nodes, u_weights = np.polynomial.legendre.leggauss(96)
    u = 0.25 * np.pi * (u_nodes + 1.0)
    psi1_nodes = lo + (hi - lo) * np.sin(u) ** 2
    ws = 0.25 * np.pi * u_weights * (hi - lo) * np.sin(2.0 * u)

    def marginal(p2: float) -> float:
        pts = np.column_stack([psi1_nodes, np.full_like(psi1_nodes, p2)])
        return float(ws @ conditional_circular_many(pts, theta, d0, d))

    edges = np.linspace(theta[0], theta[1], bins + 1)
    probs = np.empty(bins)
    for i in range(bins):
        probs[i], _ = integrate.quad(marginal, edges[i], edges[i + 1], epsabs=1e-10, limit=200)
    norm_err = abs(probs.sum() - 1.0)
    norm_report = CheckReport(
        "conditional_circular_normalization",
        1,
        float(norm_err),
        QUADRATURE_TOL,
        norm_err <= QUADRATURE_TOL,
        {"d": d, "d0": d0, "theta": theta.tolist()},
    )
    chi2_report = _chi2_report(
        "conditional_circular_chi2", psi2, edges, probs, d=d, d0=d0, marginal="second gap"
    )

    # n = 1 with unit exponents: the conditional is uniform on the circle
    rng1 = _rng(seed, 1)
    phi1 = circle_pow(0.0, rng1, size=m_samples)
    psi1 = perturbed_angles_batch(np.array([2.0]), np.ones((m_samples, 1)), phi1)[:, 0]
    edges_u = np.linspace(0.0, TWO_PI, bins + 1)
    uniform_probs = np.full(bins, 1.0 / bins)
    uni_report = _chi2_report(
        "conditional_circular_uniform_chi2", psi1, edges_u, uniform_probs, n=1
    )
    return [norm_report, chi2_report, uni_report]


def check_cauchy_conditional(seed: int = 0, m_samples: int = 100_000, bins: int = 24):
    """The real-line conditional at n = 2 with unit exponents (gamma = 2):
    sampled interlacing roots vs the quadrature-normalized formula."""
    dvec = np.array([1.0, 1.0, 1.0])
    gamma = 0.5 * (dvec.sum() + 1.0)
    y = np.array([0.8, -0.5])
    rng = _rng(seed, 0)
    q = rng.dirichlet(dvec, size=m_samples)
    c = gen_cauchy_real(gamma, rng, size=m_samples)

    e1, e2 = y.sum(), y.prod()
    coeffs = np.empty((m_samples, 4))
    coeffs[:, 0] = -c * e2 - (-(q[:, 1] * y[1] + q[:, 2] * y[0]))
    coeffs[:, 1] = e2 + c * e1 - (q[:, 1] + q[:, 2])
    coeffs[:, 2] = -(e1 + c) - (-(q[:, 1] * y[1] + q[:, 2] * y[0]))
    coeffs[:, 3] = 1.0 - (q[:, 1] + q[:, 2])
    roots = companion_roots_batch(coeffs)
    if np.max(np.abs(roots.imag)) > 1e-7:
        raise RuntimeError("interlacing roots acquired imaginary parts")
    xs = -np.sort(-roots.real, axis=1)
    x_mid = xs[:, 1]

    # phase relation tying the weight of the point at infinity to the
    # configuration: q_0 / (c + i) = prod (y + i) / prod (x + i)
    lhs = q[:, 0] / (c + 1j)
    rhs = np.prod(y + 1j) / np.prod(xs + 1j, axis=1)
    phase_err = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))
    phase_report = CheckReport.from_errors(
        "cauchy_phase_relation", phase_err, IDENTITY_TOL, gamma=gamma, y=y.tolist()
    )

    # bin probabilities of the middle point by tensor quadrature: the two
    # unbounded companions are folded onto (0, pi/2) with tangent maps
    u_nodes, u_w = np.polynomial.legendre.leggauss(96)
    u = 0.25 * np.pi * (u_nodes + 1.0)
    wu = 0.25 * np.pi * u_w / np.cos(u) ** 2
    x0_nodes = y[0] + np.tan(u)
    x2_nodes = y[1] - np.tan(u)
    b_nodes, b_w = np.polynomial.legendre.leggauss(24)

    edges = np.linspace(y[1], y[0], bins + 1)
    probs = np.empty(bins)
    for i in range(bins):
        half = 0.5 * (edges[i + 1] - edges[i])
        x1_nodes = edges[i] + half * (b_nodes + 1.0)
        g0, g1, g2 = np.meshgrid(x0_nodes, x1_nodes, x2_nodes, indexing="ij")
        pts = np.column_stack([g0.ravel(), g1.ravel(), g2.ravel()])
        vals = cauchy_conditional_many(pts, y, gamma, dvec[1:]).reshape(g0.shape)
        probs[i] = np.einsum("i,j,k,ijk->", wu, half * b_w, wu, vals)
    norm_err = abs(probs.sum() - 1.0)
    reports = [
        CheckReport(
            "cauchy_conditional_normalization",
            1,
            float(norm_err),
            QUADRATURE_TOL,
            norm_err <= QUADRATURE_TOL,
            {"gamma": gamma, "y": y.tolist()},
        ),
        _chi2_report(
            "cauchy_conditional_chi2", x_mid, edges, probs, gamma=gamma, marginal="middle point"
        ),
        phase_report,
    ]
    return reports


def check_dixon_anderson(seed: int = 0, m_samples: int = 100_000, bins: int = 30):
    """The classical interlacing conditional at n = 2, d = 2: the single
    inner point is an exact weight average, tested against the normalized
    two-pole density."""
    d = 2.0
    y = np.array([1.0, -0.7])
    rng = _rng(seed, 0)
    mu = rng.dirichlet([d, d], size=m_samples)
    u = mu[:, 0] * y[1] + mu[:, 1] * y[0]

    f = lambda uu: density_dixon_anderson(np.array([uu]), y, d)
    edges = np.linspace(y[1], y[0], bins + 1)
    probs = np.array(
        [integrate.quad(f, edges[i], edges[i + 1], epsabs=1e-11)[0] for i in range(bins)]
    )
    norm_err = abs(probs.sum() - 1.0)
    # the total also certifies the gamma-ratio constant of the density
    reports = [
        CheckReport(
            "dixon_anderson_normalization",
            1,
            float(norm_err),
            QUADRATURE_TOL,
            norm_err <= QUADRATURE_TOL,
            {"d": d, "y": y.tolist()},
        ),
        _chi2_report("dixon_anderson_chi2", u, edges, probs, d=d),
    ]
    return reports


def check_conditional_densities(which: str, seed: int = 0, m_samples: int = 100_000):
    """Dispatcher over the three conditional-density families."""
    table = {
        "conditional_circular": check_conditional_circular,
        "cauchy_conditional": check_cauchy_conditional,
        "dixon_anderson": check_dixon_anderson,
    }
    if which not in table:
        raise ValueError(f"unknown conditional density {which!r}")
    return table[which](seed=seed, m_samples=m_samples)


# ---------------------------------------------------------------------------
# suite registry


def _group_resolvent(seed):
    return check_resolvent(n=5, trials=100, seed=seed)


def _group_products(seed):
    return check_product_identities(n=6, trials=100, seed=seed)


def _group_dets(seed):
    return check_det_identities(n=5, trials=100, seed=seed)


def _group_jacobians(seed):
    out = []
    cases = (
        ("tridiag", (2, 3)),
        ("unitary", (2, 3)),
        ("real_orthogonal", (2, 3)),
        ("perturbation_phase", (2, 3)),
    )
    for case, sizes in cases:
        for n in sizes:
            out.append(check_jacobians(case, n, trials=20, seed=seed))
    return out


def _group_interlace(seed):
    return check_interlace_relations(n=5, trials=1000, seed=seed)


def _group_in_recurrence(seed):
    return [check_in_recurrence(2.0, 1.0), check_in_recurrence(1.5, 0.5)]


def _group_conditionals(seed):
    out = []
    for which in ("conditional_circular", "cauchy_conditional", "dixon_anderson"):
        out.extend(check_conditional_densities(which, seed=seed))
    return out


CHECK_GROUPS = {
    "resolvent": _group_resolvent,
    "product_identities": _group_products,
    "det_identities": _group_dets,
    "jacobians": _group_jacobians,
    "interlace_relations": _group_interlace,
    "in_recurrence": _group_in_recurrence,
    "conditional_densities": _group_conditionals,
}


def run_suite(names=None, seed: int = 0):
    """Run the named check groups (all by default); returns the flat report
    list in a deterministic order."""
    if names is None:
        names = list(CHECK_GROUPS)
    unknown = [n for n in names if n not in CHECK_GROUPS]
    if unknown:
        raise KeyError(f"unknown check group(s): {unknown}")
    reports = []
    for name in names:
        reports.extend(CHECK_GROUPS[name](seed))
    return reports
