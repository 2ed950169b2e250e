"""Random variate generation: the disk/circle radial family, Dirichlet and
Beta draws, the |1 - t|^s circle law, the generalized Cauchy family, complex
Gaussian matrices, and the deterministic splittable stream contract."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import TWO_PI

# Generator contract: PCG64 keyed by SeedSequence((master_seed, stream_index)).
# Equal keys reproduce the variate stream bit for bit; distinct stream indices
# give statistically independent streams.
GENERATOR_ID = "numpy-pcg64/seedseq(master_seed,stream_index)"

CIRCLE_POW_PROPOSAL_CAP = 10**6


@dataclass(frozen=True)
class RngStream:
    """Deterministic, splittable source of randomness."""

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        return np.random.default_rng(
            np.random.SeedSequence((int(self.master_seed), int(self.stream_index)))
        )


def theta_nu(nu: float, rng: np.random.Generator, size=None):
    """Rotation-invariant draw with radial density (1 - |z|^2)^{(nu - 3)/2}.

    nu = 1 is the uniform law on the unit circle; for nu > 1 the draw is
    sqrt(s) e^{iU} with s ~ Beta(1, (nu - 1)/2) and U a uniform angle, which
    reproduces the stated disk density in polar coordinates.
    """
    if nu < 1:
        raise ValueError("the disk family needs nu >= 1")
    if nu == 1:
        return np.exp(1j * rng.uniform(0.0, TWO_PI, size=size))
    s = rng.beta(1.0, 0.5 * (nu - 1.0), size=size)
    return np.sqrt(s) * np.exp(1j * rng.uniform(0.0, TWO_PI, size=size))


def _pin_unit_sum(w: np.ndarray) -> np.ndarray:
    """Nudge one coordinate per row by ulps until the float sum is exactly 1.

    The largest coordinate usually lands in one or two steps; when its ulp is
    too coarse for the summation tree (the walk two-cycles around 1), retry
    with successively smaller coordinates, whose finer ulps cannot step over.
    """
    flat = w.reshape(-1, w.shape[-1])
    for i in np.flatnonzero(flat.sum(axis=1) != 1.0):
        row = flat[i]
        fixed = False
        for j in np.argsort(-row):
            saved = row[j]
            for _ in range(128):
                s = row.sum()
                if s == 1.0:
                    fixed = True
                    break
                row[j] = np.nextafter(row[j], np.inf if s < 1.0 else -np.inf)
            if fixed:
                break
            row[j] = saved
        if not fixed:  # pragma: no cover - some coordinate always lands
            raise RuntimeError("unit-sum renormalization failed to converge")
    return w


def dirichlet(exponents, rng: np.random.Generator, size=None) -> np.ndarray:
    """Dirichlet draw via the Gamma-ratio construction, renormalized so the
    coordinates sum to 1 exactly (the float rounding residual is absorbed
    into the largest coordinate)."""
    exponents = np.asarray(exponents, dtype=float)
    if np.any(exponents <= 0):
        raise ValueError("Dirichlet exponents must be positive")
    w = rng.dirichlet(exponents, size=size)
    w = w / w.sum(axis=-1, keepdims=True)
    return _pin_unit_sum(w)


def beta_draw(a: float, b: float, rng: np.random.Generator, size=None):
    """Classical Beta(a, b) variate."""
    if a <= 0 or b <= 0:
        raise ValueError("Beta parameters must be positive")
    return rng.beta(a, b, size=size)


def circle_pow(s: float, rng: np.random.Generator, size=None):
    """Angle phi in (0, 2*pi] with density proportional to |1 - e^{i phi}|^s.

    Rejection sampling against the uniform proposal with acceptance
    probability (|1 - e^{i phi}| / 2)^s = sin(phi/2)^s.  A hard cap on the
    proposal count turns an implementation bug into an error instead of a
    hang (acceptance is bounded well away from 0 for desk-scale s).
    """
    if s < 0:
        raise ValueError("exponent must be non-negative")
    scalar = size is None
    m = 1 if scalar else int(np.prod(size))
    out = np.empty(m)
    pending = np.arange(m)
    spent = 0
    while pending.size:
        block = pending.size
        spent += block
        if spent > CIRCLE_POW_PROPOSAL_CAP:
            raise RuntimeError("circle_pow exceeded the proposal cap")
        phi = rng.uniform(0.0, TWO_PI, size=block)
        accept = rng.uniform(size=block) < np.sin(phi / 2.0) ** s
        out[pending[accept]] = phi[accept]
        pending = pending[~accept]
    out[out == 0.0] = TWO_PI
    if scalar:
        return float(out[0])
    return out.reshape(size)


def gen_cauchy_real(gamma: float, rng: np.random.Generator, size=None):
    """Generalized Cauchy variate with density proportional to
    (1 + c^2)^{-gamma}, real gamma > 1/2, as a scaled Student t with
    nu = 2 gamma - 1 degrees of freedom."""
    if gamma <= 0.5:
        raise ValueError("gamma must exceed 1/2 for a normalizable density")
    nu = 2.0 * gamma - 1.0
    return rng.standard_t(nu, size=size) / np.sqrt(nu)


def complex_gaussian_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """n x n matrix of i.i.d. standard complex Gaussians (E|z|^2 = 1; the real
    and imaginary parts each have variance 1/2)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
