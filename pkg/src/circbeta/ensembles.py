"""End-to-end ensemble samplers and batch generation.

Single-draw samplers take a ``numpy.random.Generator`` and consume draws in a
documented order, so that batch generation can hand each draw its own indexed
stream (``RngStream(master_seed, i)``) and stay reproducible while the heavy
algebra runs vectorized across the batch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .angles import TWO_PI, arg_in_0_2pi, is_cyclically_interlaced
from .distributions import (
    GENERATOR_ID,
    RngStream,
    beta_draw,
    circle_pow,
    complex_gaussian_matrix,
    gen_cauchy_real,
    theta_nu,
)
from .linalg import (
    SchurParameters,
    dual_product,
    eigen_unit_paired,
    realify_double,
    symplectic_unit,
)
from .polynomials import (
    CauchyRecurrenceState,
    cayley_angles,
    companion_roots_batch,
    real_roots_sorted,
    szego_chi_batch,
    szego_run,
    unit_circle_angles,
)


class ConsistencyError(Exception):
    """A structural property the construction guarantees failed numerically."""


ENSEMBLE_KINDS = {
    "cbe": ("beta",),
    "circular_jacobi": ("a", "d"),
    "joint_perturbed": ("beta",),
    "haar_unitary": (),
    "doubled_cue": (),
    "cse_dual": (),
    "coe_union": (),
    "coe_2n": (),
}


@dataclass(frozen=True)
class EnsembleSpec:
    """Declarative description of an ensemble draw."""

    kind: str
    n: int
    m_samples: int
    seed: int
    beta: float | None = None
    a: float | None = None
    d: float | None = None

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 1 or self.m_samples < 1:
            raise ValueError("need n >= 1 and m_samples >= 1")
        needed = ENSEMBLE_KINDS[self.kind]
        for name in needed:
            if getattr(self, name) is None:
                raise ValueError(f"ensemble {self.kind!r} requires parameter {name!r}")
        if self.beta is not None and self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.kind == "joint_perturbed" and self.n * self.beta < 2.0:
            raise ValueError("joint sampling needs n * beta >= 2")
        if self.d is not None and self.d <= 0:
            raise ValueError("d must be positive")
        if self.a is not None and self.a <= -1:
            raise ValueError("a must exceed -1 for integrability")

    def params_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "m_samples": self.m_samples, "seed": self.seed}
        for name in ENSEMBLE_KINDS[self.kind]:
            out[name] = getattr(self, name)
        return out


@dataclass(frozen=True)
class SampleBatch:
    """A batch of sorted angle sets with provenance metadata.

    ``draws`` has one row per sample.  Joint batches carry the perturbed sets
    in ``companions`` and the perturbation phases in ``t_angles``.
    """

    spec: EnsembleSpec
    draws: np.ndarray
    companions: np.ndarray | None = None
    t_angles: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        d = np.asarray(self.draws, dtype=float)
        if d.ndim != 2 or d.shape[0] != self.spec.m_samples:
            raise ValueError("draws must be (m_samples, set_size)")
        if np.any(d <= 0) or np.any(d > TWO_PI) or np.any(np.diff(d, axis=1) < 0):
            raise ValueError("each draw must be ascending angles in (0, 2*pi]")
        object.__setattr__(self, "draws", d)
        if self.companions is not None:
            c = np.asarray(self.companions, dtype=float)
            if c.shape != d.shape:
                raise ValueError("companions must match draws in shape")
            object.__setattr__(self, "companions", c)

    def interlacing_violations(self) -> int:
        """Number of draws whose companion set fails cyclic interlacing."""
        if self.companions is None:
            raise ValueError("batch has no companion sets")
        bad = 0
        for th, ps in zip(self.draws, self.companions):
            if not is_cyclically_interlaced(th, ps):
                bad += 1
        return bad


# ---------------------------------------------------------------------------
# single-draw samplers


def cbe_schur_parameters(n: int, beta: float, rng: np.random.Generator) -> SchurParameters:
    """Schur coefficients distributed so the Hessenberg eigen-angles follow
    the circular beta ensemble: alpha_k is a disk draw with parameter
    beta (n - 1 - k) + 1, drawn in index order, so the last lands on the
    circle."""
    if n < 1 or beta <= 0:
        raise ValueError("need n >= 1 and beta > 0")
    alphas = np.empty(n, dtype=complex)
    for k in range(n):
        alphas[k] = theta_nu(beta * (n - 1 - k) + 1.0, rng)
    return SchurParameters(alphas)


def sample_cbe(n: int, beta: float, rng: np.random.Generator) -> np.ndarray:
    """One circular beta ensemble angle set, via the coupled recurrences and
    unit-circle root extraction."""
    params = cbe_schur_parameters(n, beta, rng)
    pair = szego_run(params.alphas, 1.0)
    return unit_circle_angles(pair.chi)


def circular_jacobi_state(n: int, a: float, d: float, rng: np.random.Generator) -> CauchyRecurrenceState:
    """Run n steps of the random three-term recurrence for the circular
    Jacobi ensemble with one-point exponent ``a`` and pair exponent 2d.

    The shape parameter is gamma = a/2 + 1; step k draws
    b_k ~ Beta(2 gamma + k d - 1, k d) (b_0 = 1 with no draw consumed) and a
    generalized Cauchy c_k with parameter gamma + k d, in that order.
    """
    if a <= -1 or d <= 0:
        raise ValueError("need a > -1 and d > 0")
    gamma = 0.5 * a + 1.0
    state = CauchyRecurrenceState.initial(gamma, d)
    for k in range(n):
        b = 1.0 if k == 0 else float(beta_draw(2 * gamma + k * d - 1.0, k * d, rng))
        c = float(gen_cauchy_real(gamma + k * d, rng))
        state = state.step(b, c)
    return state


def sample_circular_jacobi(n: int, a: float, d: float, rng: np.random.Generator) -> np.ndarray:
    """One circular Jacobi angle set: real zeros of the recurrence polynomial
    pushed through the Cayley map.  All roots must be real to within 1e-8
    (a structural guarantee; its failure raises)."""
    state = circular_jacobi_state(n, a, d, rng)
    x = real_roots_sorted(state.p_curr, tol=1e-8)
    return np.sort(cayley_angles(x))


def sample_joint_perturbed(n: int, beta: float, rng: np.random.Generator):
    """Base and perturbed angle sets of one Hessenberg draw.

    Returns ``(theta, psi, t)``: the same Schur coefficients feed two
    recurrence runs, seeded 1 for the base set and seeded by the unimodular
    ``t`` for the row-scaled matrix; ``t`` has circle density
    |1 - t|^{n beta / 2 - 1}.
    """
    if n * beta < 2.0:
        raise ValueError("joint sampling needs n * beta >= 2 (non-negative phase exponent)")
    params = cbe_schur_parameters(n, beta, rng)
    phi = circle_pow(n * beta / 2.0 - 1.0, rng)
    t = np.exp(1j * phi)
    theta = unit_circle_angles(szego_run(params.alphas, 1.0).chi)
    psi = unit_circle_angles(szego_run(params.alphas, t).chi)
    return theta, psi, complex(t)


def sample_haar(n: int, rng: np.random.Generator, _max_redraws: int = 8) -> np.ndarray:
    """Haar-distributed unitary matrix: QR of a complex Gaussian matrix with
    the phase convention that makes the triangular factor's diagonal
    positive."""
    for _ in range(_max_redraws):
        Z = complex_gaussian_matrix(n, rng)
        Q, R = np.linalg.qr(Z)
        diag = np.diag(R)
        if np.min(np.abs(diag)) > 1e-12:
            return Q * (diag / np.abs(diag))[None, :]
    raise ConsistencyError("repeated numerical rank deficiency in Gaussian draws")


def haar_eigen_angles(n: int, rng: np.random.Generator) -> np.ndarray:
    """Sorted eigen-angles of one Haar unitary draw."""
    return np.sort(arg_in_0_2pi(np.linalg.eigvals(sample_haar(n, rng))))


def sample_cse_dual(n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent angles of the dual-product construction Z U^T Z U with
    U Haar on the 2n x 2n unitaries; the doubly degenerate pairs are merged
    with weights summed."""
    U = sample_haar(2 * n, rng)
    eig = eigen_unit_paired(dual_product(U), pair_tol=1e-8)
    return eig.angles


def superpose_and_decimate(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    """Merge 2n beta = 1 angles and keep every second one.

    ``coe_union`` superposes two independent n-point draws; ``coe_2n`` uses a
    single 2n-point draw.  The starting parity is randomized per draw, which
    is immaterial in law by rotation invariance.
    """
    if kind == "coe_union":
        merged = np.sort(np.concatenate([sample_cbe(n, 1.0, rng), sample_cbe(n, 1.0, rng)]))
    elif kind == "coe_2n":
        merged = sample_cbe(2 * n, 1.0, rng)
    else:
        raise ValueError("kind must be 'coe_union' or 'coe_2n'")
    parity = int(rng.integers(2))
    return merged[parity::2]


# ---------------------------------------------------------------------------
# vectorized batch internals (per-draw indexed streams, batched algebra)


def _streams(seed: int, m: int):
    return (RngStream(seed, i).generator() for i in range(m))


def _sorted_angles_from_chi(chi: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    roots = companion_roots_batch(chi)
    radial = np.abs(np.abs(roots) - 1.0)
    if np.max(radial) > tol:
        raise ConsistencyError(f"root left the unit circle by {np.max(radial):.3e}")
    return np.sort(arg_in_0_2pi(roots), axis=1)


def _cbe_alpha_batch(n: int, beta: float, seed: int, m: int) -> np.ndarray:
    al = np.empty((m, n), dtype=complex)
    for i, rng in enumerate(_streams(seed, m)):
        for k in range(n):
            al[i, k] = theta_nu(beta * (n - 1 - k) + 1.0, rng)
    return al


def _cbe_batch(n, beta, seed, m):
    al = _cbe_alpha_batch(n, beta, seed, m)
    return _sorted_angles_from_chi(szego_chi_batch(al, 1.0))


def _joint_batch(n, beta, seed, m):
    al = np.empty((m, n), dtype=complex)
    phi = np.empty(m)
    s = n * beta / 2.0 - 1.0
    for i, rng in enumerate(_streams(seed, m)):
        for k in range(n):
            al[i, k] = theta_nu(beta * (n - 1 - k) + 1.0, rng)
        phi[i] = circle_pow(s, rng)
    t = np.exp(1j * phi)
    theta = _sorted_angles_from_chi(szego_chi_batch(al, 1.0))
    psi = _sorted_angles_from_chi(szego_chi_batch(al, t))
    return theta, psi, phi


def jacobi_recurrence_roots_batch(
    n_max: int, a: float, d: float, seed: int, m: int, orders=None, imag_tol: float = 1e-8
) -> dict[int, np.ndarray]:
    """Real zeros of the three-term recurrence polynomials for a batch of m
    sweeps, harvested at the requested ``orders`` (default: only ``n_max``).

    One sweep serves every order: the degree-j polynomial of a sweep already
    has the order-j ensemble law, so lower orders come for free.  Returns
    ``{order: (m, order) descending real roots}``.
    """
    if a <= -1 or d <= 0:
        raise ValueError("need a > -1 and d > 0")
    orders = sorted({n_max} if orders is None else set(orders))
    if orders[0] < 1 or orders[-1] > n_max:
        raise ValueError("orders must lie in 1..n_max")
    gamma = 0.5 * a + 1.0
    b = np.ones((m, n_max))
    c = np.empty((m, n_max))
    for i, rng in enumerate(_streams(seed, m)):
        for k in range(n_max):
            if k > 0:
                b[i, k] = beta_draw(2 * gamma + k * d - 1.0, k * d, rng)
            c[i, k] = gen_cauchy_real(gamma + k * d, rng)

    out: dict[int, np.ndarray] = {}
    p_prev = np.zeros((m, 1))
    p_curr = np.ones((m, 1))
    for k in range(n_max):
        deg = k + 1
        p_next = np.zeros((m, deg + 1))
        bk = b[:, k][:, None]
        ck = c[:, k][:, None]
        p_next[:, 1:] += p_curr / bk
        p_next[:, :-1] -= ck * p_curr / bk
        if k > 0:
            w = 1.0 - 1.0 / bk
            p_next[:, : deg - 1] += w * p_prev
            p_next[:, 2 : deg + 1] += w * p_prev
        p_prev, p_curr = p_curr, p_next
        if deg in orders:
            roots = companion_roots_batch(p_curr)
            worst = np.max(np.abs(roots.imag))
            if worst > imag_tol:
                raise ConsistencyError(f"recurrence root imaginary part {worst:.3e}")
            out[deg] = -np.sort(-roots.real, axis=1)
    return out


def _jacobi_batch(n, a, d, seed, m):
    roots = jacobi_recurrence_roots_batch(n, a, d, seed, m)[n]
    return np.sort(cayley_angles(roots), axis=1)


def _haar_batch_matrices(n, seed, m):
    Z = np.empty((m, n, n), dtype=complex)
    for i, rng in enumerate(_streams(seed, m)):
        Z[i] = complex_gaussian_matrix(n, rng)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=1, axis2=2)
    if np.min(np.abs(diag)) <= 1e-12:
        # essentially impossible; fall back to per-draw redraw logic
        for i, rng in enumerate(_streams(seed, m)):
            Q[i] = sample_haar(n, rng)
        return Q
    return Q * (diag / np.abs(diag))[:, None, :]


def _haar_angle_batch(n, seed, m):
    Q = _haar_batch_matrices(n, seed, m)
    return np.sort(arg_in_0_2pi(np.linalg.eigvals(Q)), axis=1)


def _doubled_cue_batch(n, seed, m):
    Q = _haar_batch_matrices(n, seed, m)
    R = np.empty((m, 2 * n, 2 * n))
    R[:, 0::2, 0::2] = Q.real
    R[:, 0::2, 1::2] = Q.imag
    R[:, 1::2, 0::2] = -Q.imag
    R[:, 1::2, 1::2] = Q.real
    return np.sort(arg_in_0_2pi(np.linalg.eigvals(R)), axis=1)


def _cse_dual_batch(n, seed, m, pair_tol=1e-8):
    U = _haar_batch_matrices(2 * n, seed, m)
    Z = symplectic_unit(2 * n)
    S = Z @ np.transpose(U, (0, 2, 1)) @ Z @ U
    ang = np.sort(arg_in_0_2pi(np.linalg.eigvals(S)), axis=1)
    gaps = ang[:, 1::2] - ang[:, 0::2]
    ok = np.max(gaps, axis=1) <= pair_tol
    merged = 0.5 * (ang[:, 0::2] + ang[:, 1::2])
    if not np.all(ok):
        # rare wrap-around pairings: redo those draws through the careful path
        for i in np.flatnonzero(~ok):
            merged[i] = eigen_unit_paired(S[i], pair_tol=pair_tol).angles
    return merged


def _decimate_batch(kind, n, seed, m):
    out = np.empty((m, n))
    for i, rng in enumerate(_streams(seed, m)):
        out[i] = superpose_and_decimate(kind, n, rng)
    return out


def sample_batch(spec: EnsembleSpec) -> SampleBatch:
    """Generate the batch described by ``spec``.

    Draw i consumes randomness exclusively from ``RngStream(spec.seed, i)``,
    so batches are reproducible and embarrassingly parallel in principle;
    the linear algebra itself is vectorized across the batch.
    """
    kind, n, m, seed = spec.kind, spec.n, spec.m_samples, spec.seed
    companions = None
    t_angles = None
    if kind == "cbe":
        draws = _cbe_batch(n, spec.beta, seed, m)
    elif kind == "circular_jacobi":
        draws = _jacobi_batch(n, spec.a, spec.d, seed, m)
    elif kind == "joint_perturbed":
        draws, companions, t_angles = _joint_batch(n, spec.beta, seed, m)
    elif kind == "haar_unitary":
        draws = _haar_angle_batch(n, seed, m)
    elif kind == "doubled_cue":
        draws = _doubled_cue_batch(n, seed, m)
    elif kind == "cse_dual":
        draws = _cse_dual_batch(n, seed, m)
    elif kind in ("coe_union", "coe_2n"):
        draws = _decimate_batch(kind, n, seed, m)
    else:  # pragma: no cover - guarded by EnsembleSpec
        raise ValueError(kind)
    meta = {
        "generator": GENERATOR_ID,
        "library_version": __version__,
        "created_unix": time.time(),  # in-memory provenance; not serialized
    }
    return SampleBatch(spec, draws, companions=companions, t_angles=t_angles, metadata=meta)


# ---------------------------------------------------------------------------
# trace moments


def trace_power_abs2(angles: np.ndarray, p: int) -> np.ndarray:
    """|sum_j e^{i p theta_j}|^2 per row of an angle batch."""
    a = np.atleast_2d(np.asarray(angles, dtype=float))
    z = np.exp(1j * p * a)
    return np.abs(z.sum(axis=1)) ** 2


def moment_estimate(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and its standard error (0 for a single sample)."""
    v = np.asarray(values, dtype=float)
    mean = float(v.mean())
    if v.size < 2:
        return mean, 0.0
    return mean, float(v.std(ddof=1) / np.sqrt(v.size))


def trace_moment_table(
    m_samples: int, n_max: int, p_max: int, seed: int, a: float = 0.0, d: float = 1.0
):
    """Monte Carlo table of |Tr U^p|^2 moments for orders 1..n_max.

    A single recurrence sweep per replicate serves every order, so the whole
    table costs one batch of sweeps.  Returns (estimates, stderrs), each of
    shape (p_max, n_max) indexed by (p - 1, order - 1).
    """
    orders = range(1, n_max + 1)
    roots = jacobi_recurrence_roots_batch(n_max, a, d, seed, m_samples, orders=orders)
    est = np.empty((p_max, n_max))
    err = np.empty((p_max, n_max))
    for order in orders:
        x = roots[order]
        z = (x - 1j) / (x + 1j)
        zp = np.ones_like(z)
        for p in range(1, p_max + 1):
            zp = zp * z
            vals = np.abs(zp.sum(axis=1)) ** 2
            est[p - 1, order - 1], err[p - 1, order - 1] = moment_estimate(vals)
    return est, err
