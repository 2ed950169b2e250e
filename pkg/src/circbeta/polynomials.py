"""Coefficient-space polynomial machinery: the coupled circle recurrences, the
bottom-block variant, the random three-term recurrence on the real line, root
finders, and the interlacing zero solver for rank-1 perturbations.

Polynomials are 1-d coefficient arrays in ascending powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import TWO_PI, arg_in_0_2pi, is_cyclically_interlaced
from .linalg import UnitEigenData


class NotUnimodularError(Exception):
    """A root strayed from the unit circle beyond tolerance."""

    def __init__(self, msg, modulus=None):
        super().__init__(msg)
        self.modulus = modulus


class NotRealRootedError(Exception):
    """A root has imaginary part beyond tolerance."""


def _trim(coeffs: np.ndarray) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        raise ValueError("zero polynomial")
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) <= 1e-14 * scale:
        keep -= 1
    return c[:keep]


@dataclass(frozen=True)
class SzegoPair:
    """A coupled polynomial pair (chi_k, chi_tilde_k) after k recurrence steps.

    With ``init == 1`` the reversed-conjugate relation
    chi_tilde_k(z) = z^k conj(chi_k)(1/z) holds coefficient-wise; for a
    unimodular ``init = t != 1`` both sequences are carried explicitly and
    chi_k is the characteristic polynomial of the first-row-scaled matrix.
    """

    chi: np.ndarray
    chi_tilde: np.ndarray
    k: int
    init: complex = 1.0 + 0j

    def __post_init__(self):
        object.__setattr__(self, "chi", np.asarray(self.chi, dtype=complex))
        object.__setattr__(self, "chi_tilde", np.asarray(self.chi_tilde, dtype=complex))
        if self.chi.size != self.k + 1 or self.chi_tilde.size != self.k + 1:
            raise ValueError("coefficient arrays must have length k + 1")


def szego_run(alphas, init: complex = 1.0) -> SzegoPair:
    """Run the coupled recurrences

        chi_k = z chi_{k-1} - conj(alpha_{k-1}) chi_tilde_{k-1}
        chi_tilde_k = chi_tilde_{k-1} - z alpha_{k-1} chi_{k-1}

    from chi_0 = 1, chi_tilde_0 = init.

    A unimodular ``init = t`` seeds the run so that chi_N becomes the
    characteristic polynomial of the Hessenberg matrix with its first row
    multiplied by t (seeding *both* members with t only rescales the pair and
    leaves the zeros unchanged, so the seed enters through the reversed member
    alone).
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    if abs(abs(init) - 1.0) > 1e-12:
        raise ValueError("seed must have unit modulus")
    c = np.array([1.0 + 0j])
    ct = np.array([init], dtype=complex)
    for a in alphas:
        c_new = np.concatenate([[0.0], c]) - np.conj(a) * np.concatenate([ct, [0.0]])
        ct = np.concatenate([ct, [0.0]]) - a * np.concatenate([[0.0], c])
        c = c_new
    return SzegoPair(c, ct, alphas.size, complex(init))


def szego_chi_batch(alphas: np.ndarray, init) -> np.ndarray:
    """Vectorized top-member recurrence over a batch.

    ``alphas`` has shape (M, n); ``init`` is scalar or shape (M,).  Returns
    the (M, n + 1) coefficient array of chi_n per batch row.
    """
    alphas = np.asarray(alphas, dtype=complex)
    M, n = alphas.shape
    init = np.broadcast_to(np.asarray(init, dtype=complex), (M,))
    chi = np.ones((M, 1), dtype=complex)
    chit = init[:, None].copy()
    zero = np.zeros((M, 1), dtype=complex)
    for k in range(n):
        a = alphas[:, k][:, None]
        chi_s = np.concatenate([zero, chi], axis=1)
        chit_p = np.concatenate([chit, zero], axis=1)
        chi_new = chi_s - np.conj(a) * chit_p
        chit = chit_p - a * chi_s
        chi = chi_new
    return chi


def bottom_run(alphas, steps: int | None = None) -> SzegoPair:
    """Characteristic-polynomial recurrence of the reflected bottom block:

        chi_k = z chi_{k-1} + alpha_{n-1-k} conj(alpha_{n-1}) chi_tilde_{k-1}
        chi_tilde_k = chi_tilde_{k-1} + z conj(alpha_{n-1-k}) alpha_{n-1} chi_{k-1}

    with both members seeded at 1.  ``steps`` defaults to n - 1, the degree
    entering the eigenvalue product identity.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    n = alphas.size
    if steps is None:
        steps = n - 1
    if not 0 <= steps <= n:
        raise ValueError("steps must lie in [0, n]")
    a_last = alphas[-1]
    chi = np.array([1.0 + 0j])
    chit = np.array([1.0 + 0j])
    for k in range(1, steps + 1):
        a = -1.0 if n - 1 - k < 0 else alphas[n - 1 - k]
        chi_new = np.concatenate([[0.0], chi]) + a * np.conj(a_last) * np.concatenate([chit, [0.0]])
        chit = np.concatenate([chit, [0.0]]) + np.conj(a) * a_last * np.concatenate([[0.0], chi])
        chi = chi_new
    return SzegoPair(chi, chit, steps)


def three_term_step(p_curr: np.ndarray, p_prev, b: float, c: float) -> np.ndarray:
    """One step of the random three-term recurrence

        p_next = ((z - c) / b) p_curr + (1 - 1/b) (1 + z^2) p_prev.

    ``p_curr`` is monic of degree m and ``p_prev`` monic of degree m - 1
    (ignored at m = 0, where b must be 1).  The leading coefficients cancel to
    1/b + (1 - 1/b) = 1, so the output is again monic.
    """
    p_curr = np.atleast_1d(np.asarray(p_curr))
    if b <= 0 or b > 1:
        raise ValueError("recurrence coefficient b must lie in (0, 1]")
    m = p_curr.size - 1
    if abs(p_curr[-1] - 1.0) > 1e-9:
        raise ValueError("p_curr must be monic")
    if m == 0:
        if abs(b - 1.0) > 0:
            raise ValueError("the degree-0 step requires b = 1")
        return np.array([-c, 1.0], dtype=np.result_type(p_curr, float(c)))
    if p_prev is None:
        raise ValueError("p_prev is required once the degree is positive")
    p_prev = np.atleast_1d(np.asarray(p_prev))
    if p_prev.size != m or abs(p_prev[-1] - 1.0) > 1e-9:
        raise ValueError("p_prev must be monic of degree one less than p_curr")
    dtype = np.result_type(p_curr, p_prev, float(b), float(c))
    out = np.zeros(m + 2, dtype=dtype)
    out[1:] += p_curr / b
    out[:-1] -= (c / b) * p_curr
    w = 1.0 - 1.0 / b
    out[: m] += w * p_prev
    out[2 : m + 2] += w * p_prev
    return out


@dataclass(frozen=True)
class CauchyRecurrenceState:
    """Rolling state of the three-term recurrence: the last two monic
    polynomials, the step count, the shape parameters, and the (b, c) draws
    consumed so far."""

    p_prev: np.ndarray
    p_curr: np.ndarray
    n: int
    gamma: float
    d: float
    draws: tuple = field(default_factory=tuple)

    @classmethod
    def initial(cls, gamma: float, d: float) -> "CauchyRecurrenceState":
        if d <= 0:
            raise ValueError("d must be positive")
        return cls(np.zeros(0), np.array([1.0]), 0, float(gamma), float(d))

    def step(self, b: float, c: float) -> "CauchyRecurrenceState":
        p_next = three_term_step(self.p_curr, self.p_prev if self.n else None, b, c)
        return CauchyRecurrenceState(
            self.p_curr, p_next, self.n + 1, self.gamma, self.d, self.draws + ((b, c),)
        )


def companion_roots(p) -> np.ndarray:
    """All roots of ``p`` via companion-matrix eigenvalues."""
    c = _trim(p)
    if c.size < 2:
        raise ValueError("degree must be at least 1")
    return np.polynomial.polynomial.polyroots(c)


def companion_roots_batch(coeffs: np.ndarray) -> np.ndarray:
    """Roots of a batch of same-degree polynomials, shape (M, deg + 1) in,
    (M, deg) out, via stacked companion matrices."""
    c = np.asarray(coeffs, dtype=complex)
    M, m = c.shape
    deg = m - 1
    if deg < 1:
        raise ValueError("degree must be at least 1")
    monic = c / c[:, -1][:, None]
    A = np.zeros((M, deg, deg), dtype=complex)
    idx = np.arange(deg - 1)
    A[:, idx + 1, idx] = 1.0
    A[:, :, -1] = -monic[:, :-1]
    return np.linalg.eigvals(A)


def unit_circle_angles(p, tol: float = 1e-6) -> np.ndarray:
    """Sorted angles in (0, 2*pi] of the roots of ``p``, all of which must lie
    within ``tol`` of the unit circle."""
    roots = companion_roots(p)
    radial = np.abs(np.abs(roots) - 1.0)
    if np.max(radial) > tol:
        bad = np.abs(roots[np.argmax(radial)])
        raise NotUnimodularError(f"root modulus {bad:.8g} deviates from the circle", modulus=bad)
    return np.sort(arg_in_0_2pi(roots))


def real_roots_sorted(p, tol: float = 1e-6) -> np.ndarray:
    """Descending real roots of ``p``; every companion root must be real to
    within ``tol`` in imaginary part."""
    roots = companion_roots(p)
    worst = np.max(np.abs(roots.imag))
    if worst > tol:
        raise NotRealRootedError(f"largest imaginary part {worst:.3e} exceeds {tol:.1e}")
    return np.sort(roots.real)[::-1]


def _cot(x):
    return 1.0 / np.tan(x)


def perturbed_angles_batch(theta: np.ndarray, weights: np.ndarray, phi: np.ndarray,
                           bisections: int = 54, newton_steps: int = 3) -> np.ndarray:
    """Zeros of the perturbation function for a batch of weight/phase draws.

    For each row of ``weights`` (positive, summing to 1) and each phase
    ``phi = arg t`` in (0, 2*pi), solves

        cot(phi / 2) = sum_j w_j cot((psi - theta_j) / 2)

    on every cyclic gap of ``theta``.  The left side is constant and the right
    side decreases from +inf to -inf across each gap, so bisection brackets
    are guaranteed; a short Newton polish finishes to machine accuracy.

    Returns gap-aligned angles of shape (M, n): column i lies in the cyclic
    gap ending at ``theta[i]`` (column 0 wraps below ``theta[0]``).  Values
    are wrapped into (0, 2*pi].
    """
    theta = np.asarray(theta, dtype=float)
    W = np.atleast_2d(np.asarray(weights, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    n = theta.size
    lo = np.empty((phi.size, n))
    hi = np.empty((phi.size, n))
    lo[:, 0] = theta[-1] - TWO_PI
    hi[:, 0] = theta[0]
    lo[:, 1:] = theta[:-1]
    hi[:, 1:] = theta[1:]
    target = _cot(phi / 2.0)[:, None]

    def g_and_slope(psi):
        half = 0.5 * (psi[:, :, None] - theta[None, None, :])
        cots = _cot(half)
        g = target - np.einsum("mj,mij->mi", W, cots)
        slope = 0.5 * np.einsum("mj,mij->mi", W, 1.0 + cots**2)
        return g, slope

    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        g, _slope = g_and_slope(mid)
        neg = g < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    psi = 0.5 * (lo + hi)
    for _ in range(newton_steps):
        g, slope = g_and_slope(psi)
        step = np.where(slope > 0, g / slope, 0.0)
        psi = np.clip(psi - step, lo, hi)
    wrapped = np.mod(psi, TWO_PI)
    wrapped = np.where(wrapped == 0.0, TWO_PI, wrapped)
    return wrapped


@dataclass(frozen=True)
class InterlacedSpectrum:
    """Base angles, perturbed angles (one per cyclic gap) and the unimodular
    perturbation factor."""

    base_angles: np.ndarray
    new_angles: np.ndarray
    t: complex

    def __post_init__(self):
        object.__setattr__(self, "base_angles", np.asarray(self.base_angles, dtype=float))
        object.__setattr__(self, "new_angles", np.asarray(self.new_angles, dtype=float))
        if self.t != 1.0 and not is_cyclically_interlaced(
            self.base_angles, np.sort(self.new_angles)
        ):
            raise ValueError("perturbed angles do not interlace the base angles")

    @property
    def sorted_new(self) -> np.ndarray:
        return np.sort(self.new_angles)


def perturbed_spectrum(eig: UnitEigenData, t: complex) -> InterlacedSpectrum:
    """Eigen-angles after scaling the first row of the underlying unitary
    matrix by ``t``, computed as the zeros of the weighted cotangent sum.

    ``t = 1`` is the degenerate identity perturbation and returns the base
    angles unchanged.  Weights must be strictly positive.
    """
    if abs(abs(t) - 1.0) > 1e-12:
        raise ValueError("perturbation factor must have unit modulus")
    if np.any(eig.weights <= 0.0):
        raise ValueError("perturbed spectrum needs strictly positive weights")
    if t == 1.0:
        return InterlacedSpectrum(eig.angles, eig.angles.copy(), 1.0 + 0j)
    phi = float(np.angle(complex(t)) % TWO_PI)
    psi = perturbed_angles_batch(eig.angles, eig.weights[None, :], np.array([phi]))[0]
    return InterlacedSpectrum(eig.angles, psi, complex(t))


@dataclass(frozen=True)
class InterlacedRealSpectrum:
    """Strictly interlacing configuration x_0 > y_1 > x_1 > ... > y_n > x_n."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.size != y.size + 1:
            raise ValueError("need one more x than y")
        merged = np.empty(x.size + y.size)
        merged[0::2] = x
        merged[1::2] = y
        if np.any(np.diff(merged) >= 0):
            raise ValueError("sequence is not strictly interlacing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def cayley_angles(x) -> np.ndarray:
    """Angles theta with e^{i theta} = (x - i) / (x + i), in (0, 2*pi].

    Maps the real line monotonically onto the circle: x = 0 goes to pi and
    x -> +inf approaches 2*pi.
    """
    x = np.asarray(x, dtype=float)
    return arg_in_0_2pi((x - 1j) / (x + 1j))
