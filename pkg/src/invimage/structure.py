"""Pell decomposition of T^2 - 1 and the arc counts it determines.

For every nonzero polynomial T of degree n there is a unique factorization

    T^2 - 1 = H * U^2

with H monic of even degree 2*ell carrying exactly the odd-multiplicity
zeros of T^2 - 1 (each once) and U of degree n - ell sharing T's leading
coefficient.  The inverse image of [-1, 1] under T consists of ell (and no
fewer) Jordan arcs whose endpoints are the zeros of H, and of nu (and no
fewer) analytic Jordan arcs, where 2*nu counts the odd-multiplicity zeros
with repetition.

Roots of T^2 - 1 are found through the factors T - 1 and T + 1 separately:
the factors cannot share a zero, their degree is half the product's, and
their conditioning is dramatically better, which is what makes multiplicity
validation reliable in double precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbiguityError
from .membership import default_membership_tol, is_in_image
from .polynomial import Poly
from .rootfinder import RootCluster, root_bound, roots_with_multiplicity

PELL_RESIDUAL_MAX = 1e-6


@dataclass(frozen=True)
class PellDecomposition:
    """The factorization T^2 - 1 = h * u^2 together with the zero pattern.

    odd_zeros hold the arc endpoints a_j (multiplicity 2*beta_j - 1 in
    T^2 - 1); even_zeros the d_j (multiplicity 2*alpha_j).
    endpoints_with_multiplicity lists each endpoint repeated according to
    its multiplicity, 2*nu entries in all.
    """

    h: Poly
    u: Poly
    ell: int
    nu: int
    odd_zeros: tuple[RootCluster, ...]
    even_zeros: tuple[RootCluster, ...]
    endpoints_with_multiplicity: tuple[complex, ...]
    residual: float

    @property
    def endpoints(self) -> tuple[complex, ...]:
        return tuple(c.center for c in self.odd_zeros)


@dataclass(frozen=True)
class TwoArcClassification:
    """Fine structure of the two-arc case (ell == 2).

    z_star is the extra zero of T' beyond those of u: T' = n (z - z*) u.
    When z* is one of the four endpoints the image is three analytic arcs
    meeting there at angles 2*pi/3; otherwise it is two analytic arcs, and
    they cross exactly when z* lies in the image.
    """

    z_star: complex
    z_star_is_endpoint: bool
    z_star_in_image: bool
    analytic_arc_count: int
    arcs_cross: bool


def _lex_key(c: RootCluster):
    return (c.center.real, c.center.imag)


def factor_root_clusters(T: Poly) -> tuple[list[RootCluster], list[RootCluster]]:
    """Root clusters of T - 1 and of T + 1 (in that order), lex-sorted.

    Together these are exactly the zeros of T^2 - 1 with their
    multiplicities; the two factors can never share a zero.
    """
    T.require_nonzero()
    if T.degree < 1:
        raise ValueError("analysis needs degree >= 1")
    minus = roots_with_multiplicity(T - 1.0)
    plus = roots_with_multiplicity(T + 1.0)
    guard = max(1e-9, 1e-7 * (1.0 + root_bound(T * T - 1.0)))
    for a in minus:
        for b in plus:
            if abs(a.center - b.center) < guard:
                raise AmbiguityError(
                    "zeros of T-1 and T+1 collide numerically; "
                    "multiplicity parity is undecidable"
                )
    return minus, plus


def pell_decompose(T: Poly) -> PellDecomposition:
    """Compute the unique decomposition T^2 - 1 = h * u^2.

    Zeros of odd multiplicity (taken once) build the monic h; u collects
    the even zeros at half multiplicity and the odd ones at (m-1)/2, scaled
    to T's leading coefficient.  The identity is verified numerically and
    an `AmbiguityError` is raised if it fails to close.
    """
    minus, plus = factor_root_clusters(T)
    clusters = sorted(minus + plus, key=_lex_key)
    n = T.degree

    odd = tuple(c for c in clusters if c.multiplicity % 2 == 1)
    even = tuple(c for c in clusters if c.multiplicity % 2 == 0)
    if len(odd) % 2 != 0:
        raise AmbiguityError("odd-multiplicity zero count is not even; clustering failed")
    ell = len(odd) // 2
    # an all-even pattern is impossible: T' would need n zeros
    assert ell >= 1, "internal error: no odd-multiplicity zeros found"
    nu2 = sum(c.multiplicity for c in odd)
    if nu2 % 2 != 0:
        raise AmbiguityError("odd multiplicities do not pair up; clustering failed")
    nu = nu2 // 2

    h = Poly.from_roots([c.center for c in odd], leading=1.0)
    u_roots = [c.center for c in even] + [c.center for c in odd if c.multiplicity >= 3]
    u_mults = [c.multiplicity // 2 for c in even] + [
        (c.multiplicity - 1) // 2 for c in odd if c.multiplicity >= 3
    ]
    u = Poly.from_roots(u_roots, leading=T.leading, multiplicities=u_mults)

    if h.degree != 2 * ell or u.degree != n - ell:
        raise AmbiguityError(
            "degree bookkeeping failed: "
            f"deg h = {h.degree} (want {2 * ell}), deg u = {u.degree} (want {n - ell})"
        )
    total = sum(c.multiplicity for c in clusters)
    if total != 2 * n:
        raise AmbiguityError(f"zero multiplicities sum to {total}, expected {2 * n}")

    res = pell_residual(T, h, u)
    if res > PELL_RESIDUAL_MAX:
        raise AmbiguityError(
            f"Pell residual {res:.3e} exceeds {PELL_RESIDUAL_MAX:.0e}; "
            "decomposition rejected"
        )

    b_list = []
    for c in odd:
        b_list.extend([c.center] * c.multiplicity)
    return PellDecomposition(
        h=h,
        u=u,
        ell=ell,
        nu=nu,
        odd_zeros=odd,
        even_zeros=even,
        endpoints_with_multiplicity=tuple(b_list),
        residual=res,
    )


def pell_residual(T: Poly, h: Poly, u: Poly) -> float:
    """Largest normalized defect of T^2 - 1 = h * u^2 on a sampling circle.

    Samples 4n points with equispaced angles (half-step offset) on the
    circle of root-bound radius; the defect is normalized by the largest
    |T|^2 on those points, so the result is scale free.
    """
    for p in (T, h, u):
        p.require_nonzero()
    if 2 * T.degree != h.degree + 2 * u.degree:
        raise ValueError(
            "degree mismatch: need 2 deg T = deg h + 2 deg u, got "
            f"{2 * T.degree} vs {h.degree + 2 * u.degree}"
        )
    n = max(T.degree, 1)
    radius = max(root_bound(T * T - 1.0), 1.0)
    angles = 2.0 * np.pi * (np.arange(4 * n) + 0.5) / (4 * n)
    z = radius * np.exp(1j * angles)
    tv = T(z)
    defect = np.abs(tv * tv - 1.0 - h(z) * u(z) ** 2)
    scale = np.abs(tv * tv).max()
    return float(defect.max() / max(scale, 1e-300))


def analytic_arc_count(T: Poly) -> int:
    """Minimal number of analytic Jordan arcs in the image of T."""
    return pell_decompose(T).nu


def jordan_arc_count(T: Poly) -> tuple[int, tuple[complex, ...]]:
    """Minimal number of Jordan arcs and their 2*ell endpoints."""
    pell = pell_decompose(T)
    return pell.ell, pell.endpoints


def classify_two_arc(T: Poly, pell: PellDecomposition | None = None) -> TwoArcClassification:
    """Resolve the two-arc case: 2 vs 3 analytic arcs, and crossing.

    Requires ell == 2.  z* is obtained by dividing T' by u; the division
    must be exact up to roundoff, otherwise the Pell structure does not
    hold and an error is raised.
    """
    if pell is None:
        pell = pell_decompose(T)
    if pell.ell != 2:
        raise ValueError("classification defined for two-arc case only")
    n = T.degree
    dT = T.derivative()
    quot, rem = divmod(dT, pell.u)
    scale = max(abs(c) for c in dT.coeffs)
    rem_size = 0.0 if rem.is_zero else max(abs(c) for c in rem.coeffs)
    if quot.degree != 1 or rem_size > 1e-6 * scale:
        raise AmbiguityError(
            f"Pell structure violated: T'/u has remainder {rem_size:.3e} "
            f"relative to {scale:.3e}"
        )
    z_star = -quot.coeffs[0] / quot.coeffs[1]

    bound = root_bound(T * T - 1.0)
    match_eps = max(1e-9, 1e-6 * (1.0 + bound))
    endpoint_gaps = [abs(z_star - a) for a in pell.endpoints]
    is_endpoint = min(endpoint_gaps) <= match_eps

    # consistency: an endpoint may only touch u's zero set at z* itself
    u_scale = max(abs(c) for c in pell.u.coeffs)
    for a in pell.endpoints:
        if abs(pell.u(a)) <= 1e-8 * u_scale * (1.0 + bound) ** pell.u.degree:
            if abs(a - z_star) > match_eps:
                raise AmbiguityError(
                    "an endpoint annihilates u away from z*; Pell structure violated"
                )

    tol = default_membership_tol(T)
    in_image = True if is_endpoint else is_in_image(T, z_star, tol)
    return TwoArcClassification(
        z_star=complex(z_star),
        z_star_is_endpoint=bool(is_endpoint),
        z_star_in_image=bool(in_image),
        analytic_arc_count=3 if is_endpoint else 2,
        arcs_cross=bool(in_image),
    )
