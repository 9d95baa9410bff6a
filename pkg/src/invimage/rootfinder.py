"""Simultaneous root finding and multiplicity clustering.

Multiplicity parity of the roots of auxiliary polynomials drives every
count this package produces, so the clustering must recover integer
multiplicities reliably.  In double precision the raw approximations of an
m-fold root scatter on a ring of radius roughly (eps * condition)**(1/m)
around the true root.  The strategy here:

* find all roots at once with a deterministic Aberth-Ehrlich iteration,
* single-linkage cluster with an escalating radius ladder, starting at the
  base radius and growing only for groups whose multiplicity cannot be
  confirmed yet,
* confirm a cluster of size m by polishing its mean with Newton's method on
  the (m-1)-th derivative (where the root is simple) and checking that the
  first m-1 derivatives vanish to evaluation noise while the m-th does not.

Groups that never validate raise `AmbiguityError`: near-multiple roots that
double precision cannot separate from true multiple roots are reported, not
guessed.  No arbitrary-precision escalation is attempted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguityError, RootFindingError
from .polynomial import Poly

EPS = np.finfo(float).eps

# Validation constants, calibrated on multiplicity-4 roots of degree-18
# inputs: polished lower derivatives land below ~0.2x the eps*cond noise
# scale, the m-th derivative clears it by >1e6.
_SMALLNESS_HEADROOM = 30.0
_MTH_NOISE_MARGIN = 1e4
_MAX_ABERTH_ITER = 600


@dataclass(frozen=True)
class RootCluster:
    """A numerically identified root with an integer multiplicity.

    residual is |p(center)| relative to the coefficient scale; radius is the
    largest distance of a member raw root from the center; tolerance is the
    clustering radius at which the cluster was accepted.
    """

    center: complex
    multiplicity: int
    residual: float
    radius: float
    tolerance: float


def root_bound(p: Poly) -> float:
    """Fujiwara bound: all roots lie in |z| <= 2 max |c_k/c_n|^(1/(n-k))."""
    p.require_nonzero()
    n = p.degree
    if n == 0:
        return 0.0
    cn = abs(p.coeffs[-1])
    vals = [
        2.0 * (abs(p.coeffs[k]) / cn) ** (1.0 / (n - k))
        for k in range(n)
        if p.coeffs[k] != 0
    ]
    return max(vals) if vals else 0.0


def centered_root_bound(p: Poly) -> tuple[complex, float]:
    """Root centroid and the Fujiwara bound of the recentred polynomial.

    Recentring removes the (often dominant) sum-of-roots term and gives a
    far tighter enclosing disk than the plain bound when the roots are not
    centred on the origin.
    """
    n = p.degree
    if n == 0:
        return 0j, 0.0
    mu = -p.coeffs[-2] / (n * p.coeffs[-1]) if n >= 1 else 0j
    shifted = p.affine_compose(1.0, -mu)  # p(z + mu)
    return mu, root_bound(shifted)


def find_roots(p: Poly) -> np.ndarray:
    """All `degree` roots of p, with repetition, deterministically.

    Exact trailing zero coefficients are deflated first (roots at the
    origin); the rest are found by Aberth-Ehrlich iteration from a circle of
    radius 1.1 * root_bound, angles offset by 0.4 rad to break symmetry.
    """
    p.require_nonzero()
    n = p.degree
    if n < 1:
        raise ValueError("root finding needs degree >= 1")

    coeffs = np.asarray(p.coeffs, dtype=complex)
    scale = np.abs(coeffs).max()
    # deflate exact (or cancellation-level) roots at the origin
    k0 = 0
    while k0 < n and abs(coeffs[k0]) <= 1e-15 * scale:
        k0 += 1
    zeros_at_origin = np.zeros(k0, dtype=complex)
    if k0 == n:
        return zeros_at_origin
    work = Poly(tuple(coeffs[k0:]))

    roots = _aberth(work)
    return np.concatenate([zeros_at_origin, roots])


def _aberth(p: Poly) -> np.ndarray:
    n = p.degree
    dp = p.derivative()
    bound = max(root_bound(p), 1e-12)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = 1.1 * bound * np.exp(1j * angles)

    best = z.copy()
    best_res = np.inf
    for _ in range(_MAX_ABERTH_ITER):
        pv = p(z)
        dv = dp(z)
        # Newton ratios; guard exact zeros of the derivative
        tiny = dv == 0
        if np.any(tiny):
            dv = np.where(tiny, 1e-300, dv)
        newton = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = (1.0 / diff).sum(axis=1)
        denom = 1.0 - newton * repulse
        denom = np.where(denom == 0, 1e-300, denom)
        step = newton / denom
        z = z - step

        noise = np.array([EPS * p.magnitude_bound(abs(w)) for w in z])
        res = np.abs(p(z))
        worst = np.max(res / np.maximum(noise, 1e-300))
        if worst < best_res:
            best_res = worst
            best = z.copy()
        converged = np.all(res <= 30.0 * (n + 1) * noise) or np.all(
            np.abs(step) <= 1e-15 * (1.0 + np.abs(z))
        )
        if converged:
            return z
    raise RootFindingError(
        f"root iteration did not converge within {_MAX_ABERTH_ITER} iterations",
        best=best,
        residual=float(best_res),
    )


def base_cluster_radius(scale: float) -> float:
    """Default clustering radius for a polynomial with the given root bound."""
    return max(1e-7, 1e-6 * scale)


def _single_linkage(points: np.ndarray, radius: float) -> list[list[int]]:
    order = sorted(range(len(points)), key=lambda i: (points[i].real, points[i].imag))
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if abs(points[a] - points[b]) <= radius:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for i in order:
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (points[g[0]].real, points[g[0]].imag))


def cluster_roots(
    raw,
    scale: float,
    *,
    poly: Poly | None = None,
    radius: float | None = None,
    check_separation: bool = True,
) -> list[RootCluster]:
    """Single-linkage clustering of raw roots at a fixed radius.

    `scale` is the root-bound of the source polynomial, which sets the base
    clustering radius.  With `poly` given, residuals are |poly(center)|
    relative to its coefficient scale.  Clusters closer together than three
    radii (but not merged) are ambiguous and raise.
    """
    pts = np.asarray(raw, dtype=complex)
    if pts.size == 0:
        raise ValueError("no roots to cluster")
    delta = base_cluster_radius(scale) if radius is None else radius
    coeff_scale = 1.0
    if poly is not None:
        coeff_scale = max(abs(c) for c in poly.coeffs)

    clusters = []
    for group in _single_linkage(pts, delta):
        members = pts[group]
        center = complex(members.mean())
        rad = float(np.abs(members - center).max())
        residual = abs(poly(center)) / coeff_scale if poly is not None else 0.0
        clusters.append(
            RootCluster(
                center=center,
                multiplicity=len(group),
                residual=float(residual),
                radius=rad,
                tolerance=max(delta, rad * (1 + 1e-9)),
            )
        )
    if check_separation:
        _check_separation(clusters)
    return clusters


def _check_separation(clusters: list[RootCluster]) -> None:
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = abs(clusters[i].center - clusters[j].center)
            floor = 3.0 * max(clusters[i].tolerance, clusters[j].tolerance)
            if gap <= floor:
                raise AmbiguityError(
                    "multiplicity resolution failed; tighten tolerance or "
                    f"increase precision (clusters {gap:.3e} apart, need > {floor:.3e})"
                )


def _polish_center(derivs: list[Poly], center: complex, m: int, guard: float) -> complex:
    """Newton-polish a candidate m-fold root on the (m-1)-th derivative.

    An m-fold root of p is a simple root of p^(m-1), where Newton converges
    quadratically.  The polish is rejected (original center kept) if it
    wanders more than `guard` away.
    """
    target = derivs[m - 1]
    slope = derivs[m]
    z = center
    for _ in range(60):
        fv = target(z)
        dv = slope(z)
        if dv == 0:
            break
        step = fv / dv
        z2 = z - step
        if abs(z2 - center) > guard:
            return center
        z = z2
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def _validate_multiplicity(derivs: list[Poly], center: complex, m: int, h: float) -> bool:
    """Accept multiplicity m at `center` on four pieces of evidence:

    * the first m-1 derivatives vanish to evaluation noise there,
    * the m-th derivative stands clear of its own noise scale,
    * the m-th Taylor term dominates all lower ones at the cluster scale h
      (rules out centers that are not resolved at that scale),
    * the terms of order m+1, m+2 do not dominate the m-th at scale h
      (rules out partially merged scatter of a higher multiplicity, whose
      polished center sits on the true root with a deceptively small m-th
      derivative).
    """
    r = abs(center)
    deg = derivs[0].degree
    head = _SMALLNESS_HEADROOM * (deg + 1) * EPS
    values = [abs(derivs[j](center)) for j in range(min(m + 2, deg) + 1)]
    for j in range(m):
        if values[j] > head * max(derivs[j].magnitude_bound(r), 1e-300):
            return False
    if values[m] < _MTH_NOISE_MARGIN * EPS * max(derivs[m].magnitude_bound(r), 1e-300):
        return False
    lead = values[m] * h**m / math.factorial(m)
    for j in range(m):
        if values[j] * h**j / math.factorial(j) > lead / 3.0:
            return False
    for j in range(m + 1, min(m + 2, deg) + 1):
        if values[j] * h**j / math.factorial(j) > 3.0 * lead:
            return False
    return True


def roots_with_multiplicity(p: Poly) -> list[RootCluster]:
    """Roots of p grouped into centers with validated integer multiplicities.

    Works up a ladder of clustering radii and accepts the first radius at
    which every cluster's multiplicity validates; raises `AmbiguityError`
    when no radius up to the cap produces a consistent pattern (for
    instance, two genuine simple roots around 1e-5 apart, which double
    precision cannot tell from a true double root).
    """
    p.require_nonzero()
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    raw = find_roots(p)
    bound = root_bound(p)
    coeff_scale = max(abs(c) for c in p.coeffs)
    derivs = p.derivatives(p.degree)

    delta0 = base_cluster_radius(bound)
    delta_cap = max(1e-2, 2e-2 * bound)
    delta = delta0
    last_failure = "no clustering radius produced a consistent pattern"
    while delta <= delta_cap:
        clusters = _clusters_at_radius(p, raw, derivs, coeff_scale, delta, delta0)
        if clusters is not None:
            try:
                _check_separation(clusters)
            except AmbiguityError as exc:
                last_failure = str(exc)
                delta *= 10.0
                continue
            clusters.sort(key=lambda c: (c.center.real, c.center.imag))
            return clusters
        delta *= 10.0
    raise AmbiguityError(
        "multiplicity resolution failed; tighten tolerance or increase "
        f"precision ({last_failure})"
    )


def _clusters_at_radius(p, raw, derivs, coeff_scale, delta, delta0):
    """All clusters at one linkage radius, or None if any fails validation."""
    clusters = []
    for group in _single_linkage(raw, delta):
        members = raw[group]
        m = len(members)
        if m > p.degree:
            return None
        center = complex(members.mean())
        rad = float(np.abs(members - center).max())
        guard = max(4.0 * delta, 8.0 * rad, 1e-9)
        polished = _polish_center(derivs, center, m, guard)
        h = max(rad, delta)
        if not _validate_multiplicity(derivs, polished, m, h):
            return None
        clusters.append(
            RootCluster(
                center=polished,
                multiplicity=m,
                residual=abs(p(polished)) / coeff_scale,
                radius=max(rad, abs(polished - center)),
                # identity scale of the cluster: its own scatter, floored
                # by the base radius
                tolerance=max(delta0, 1.5 * rad),
            )
        )
    return clusters
