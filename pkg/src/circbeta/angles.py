"""Helpers for angles on the unit circle, with the (0, 2*pi] convention."""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(a):
    """Map angles (or radians array) into the half-open interval (0, 2*pi]."""
    out = np.mod(np.asarray(a, dtype=float), TWO_PI)
    out = np.where(out == 0.0, TWO_PI, out)
    return out if out.ndim else float(out)


def arg_in_0_2pi(z):
    """Argument of complex number(s) mapped into (0, 2*pi]."""
    return wrap_angle(np.angle(z))


def cyclic_gaps(angles: np.ndarray) -> np.ndarray:
    """Gaps between consecutive sorted angles, including the wrap-around gap.

    ``gaps[0]`` is the wrap gap from the largest angle back to the smallest.
    """
    a = np.asarray(angles, dtype=float)
    if a.size == 0:
        return a
    if a.size == 1:
        return np.array([TWO_PI])
    return np.concatenate([[a[0] + TWO_PI - a[-1]], np.diff(a)])


def is_cyclically_interlaced(base: np.ndarray, new: np.ndarray, strict: bool = True) -> bool:
    """True when exactly one ``new`` angle falls in each cyclic gap of ``base``.

    Both inputs are sorted sets in (0, 2*pi].  The gap preceding ``base[0]``
    wraps through 2*pi.
    """
    base = np.asarray(base, dtype=float)
    new = np.asarray(new, dtype=float)
    n = base.size
    if new.size != n:
        return False
    if n == 0:
        return True
    if strict and (np.any(np.isin(new, base))):
        return False
    # Count new angles in each gap (base[i-1], base[i]); gap 0 wraps.
    counts = np.zeros(n, dtype=int)
    for psi in new:
        idx = int(np.searchsorted(base, psi, side="left"))
        counts[idx % n] += 1
    return bool(np.all(counts == 1))
