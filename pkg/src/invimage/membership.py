"""Membership of points in the inverse image of [-1, 1].

A point z belongs to the image of T when T(z) lands on the segment, up to a
tolerance band: |Im T(z)| <= tol and  -1 - tol <= Re T(z) <= 1 + tol.
"""
from __future__ import annotations

import numpy as np

from .polynomial import Poly
from .rootfinder import centered_root_bound

EPS = np.finfo(float).eps


def is_in_image(T: Poly, z, tol: float) -> bool:
    """True iff T(z) lies within `tol` of the segment [-1, 1]."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    w = T(z)
    return bool(abs(w.imag) <= tol and -1.0 - tol <= w.real <= 1.0 + tol)


def default_membership_tol(T: Poly) -> float:
    """Membership tolerance for T: 1e-9 at the unit value scale of the
    image, floored by the evaluation noise of T on the disk holding it.

    Values of T on its image have magnitude at most 1, so the driving term
    is the noise floor; it keeps genuinely-out critical values (which sit a
    finite distance beyond the segment) many orders away from the band.
    """
    T.require_nonzero()
    q = T * T - 1.0
    center, radius = centered_root_bound(q)
    r = abs(center) + radius
    noise = EPS * (T.degree + 1) * T.magnitude_bound(r)
    return max(2e-9, 50.0 * noise)


def distance_to_segment(w: complex) -> float:
    """Euclidean distance from w to the segment [-1, 1]."""
    x = min(1.0, max(-1.0, w.real))
    return abs(w - x)
