"""Geometric analysis of the inverse image: membership, critical points,
connectivity, a grid-based verification oracle, and the real locus.

The connectivity dichotomy is exact: the image has k connected components
precisely when n - k zeros of T' (with multiplicity) lie inside it.
Membership of a critical point is decided structurally whenever possible
(a critical value of exactly +-1 happens iff the point is a multiple zero
of T -+ 1, i.e. an endpoint of the image); only genuinely interior-or-out
values go through the tolerance band, and values inside a tenth of the
band's width of its border raise an error rather than guess.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import AmbiguityError
from .membership import default_membership_tol, is_in_image
from .polynomial import Poly
from .rootfinder import RootCluster, centered_root_bound, root_bound, roots_with_multiplicity
from .structure import (
    PellDecomposition,
    TwoArcClassification,
    classify_two_arc,
    factor_root_clusters,
    pell_decompose,
)

EPS = np.finfo(float).eps

__all__ = [
    "AnalysisReport",
    "CriticalPoint",
    "bounding_box",
    "component_count",
    "critical_points",
    "default_membership_tol",
    "grid_oracle",
    "is_in_image",
    "is_real_image",
    "trace_real_locus",
]


@dataclass(frozen=True)
class CriticalPoint:
    location: complex
    multiplicity: int
    in_image: bool


@dataclass(frozen=True)
class AnalysisReport:
    """Aggregate answer: arc counts, critical structure, connectivity."""

    nu: int
    ell: int
    endpoints: tuple[complex, ...]
    critical_points: tuple[CriticalPoint, ...]
    component_count: int
    connected: bool
    two_arc: TwoArcClassification | None
    pell: PellDecomposition
    membership_tol: float


def critical_points(T: Poly) -> list[tuple[complex, int]]:
    """Zeros of T' with multiplicities, lex-ordered; needs degree >= 2."""
    T.require_nonzero()
    if T.degree < 2:
        raise ValueError("critical points need degree >= 2")
    clusters = roots_with_multiplicity(T.derivative())
    return [(c.center, c.multiplicity) for c in clusters]


def _classify_criticals(
    T: Poly,
    minus: list[RootCluster],
    plus: list[RootCluster],
    tol: float,
) -> list[CriticalPoint]:
    """Membership verdict for every critical point.

    Critical points coinciding with a multiple zero of T -+ 1 are endpoint
    points of the image with critical value exactly +-1: in, structurally.
    The rest go through the tolerance band; verdicts within 0.1 * tol of
    the band border are refused.
    """
    if T.degree < 2:
        return []
    crits = critical_points(T)
    multiple_ends = [c for c in minus + plus if c.multiplicity >= 2]
    bound = root_bound(T * T - 1.0)
    match_eps = max(1e-9, 1e-7 * (1.0 + bound))

    out: list[CriticalPoint] = []
    for z, m in crits:
        hit = next((e for e in multiple_ends if abs(e.center - z) <= match_eps), None)
        if hit is not None:
            if hit.multiplicity - 1 != m:
                raise AmbiguityError(
                    f"endpoint multiplicity {hit.multiplicity} inconsistent with "
                    f"derivative multiplicity {m} at {z:.6g}"
                )
            out.append(CriticalPoint(z, m, True))
            continue
        w = T(z)
        border = 0.1 * tol
        near_im_border = abs(abs(w.imag) - tol) <= border
        near_re_border = min(abs(w.real - (1.0 + tol)), abs(w.real + 1.0 + tol)) <= border
        if near_im_border or (abs(w.imag) <= tol + border and near_re_border):
            raise AmbiguityError(
                "borderline critical value; membership undecidable at this "
                f"tolerance (T({z:.6g}) = {w:.6g}, tol = {tol:.3g})"
            )
        out.append(CriticalPoint(z, m, is_in_image(T, z, tol)))
    return out


def component_count(T: Poly, tol: float | None = None) -> AnalysisReport:
    """Full analysis report with the connectivity count.

    k = degree - (multiplicities of in-image critical points); the image is
    connected iff k == 1.  Degree-1 images are single segments.
    """
    T.require_nonzero()
    n = T.degree
    if n < 1:
        raise ValueError("analysis needs degree >= 1")
    if tol is None:
        tol = default_membership_tol(T)
    pell = pell_decompose(T)
    if n == 1:
        return AnalysisReport(
            nu=1,
            ell=1,
            endpoints=pell.endpoints,
            critical_points=(),
            component_count=1,
            connected=True,
            two_arc=None,
            pell=pell,
            membership_tol=tol,
        )
    minus, plus = factor_root_clusters(T)
    verdicts = _classify_criticals(T, minus, plus, tol)
    inside = sum(c.multiplicity for c in verdicts if c.in_image)
    k = n - inside
    if not 1 <= k <= n:
        raise AmbiguityError(f"component count {k} outside [1, {n}]")
    two_arc = classify_two_arc(T, pell) if pell.ell == 2 else None
    return AnalysisReport(
        nu=pell.nu,
        ell=pell.ell,
        endpoints=pell.endpoints,
        critical_points=tuple(verdicts),
        component_count=k,
        connected=(k == 1),
        two_arc=two_arc,
        pell=pell,
        membership_tol=tol,
    )


def is_real_image(T: Poly) -> bool:
    """Whether the image is a subset of the real line.

    Holds iff T has real coefficients, n simple real zeros, and every
    critical value has modulus at least 1.  Critical values within 1e-8
    below 1 (but not within snapping distance of 1) are refused as
    borderline; values at 1 to rounding accuracy satisfy the bound.
    """
    T.require_nonzero()
    if T.degree < 1:
        raise ValueError("analysis needs degree >= 1")
    scale = max(abs(c) for c in T.coeffs)
    if any(abs(c.imag) > 1e-8 * scale for c in T.coeffs):
        return False
    zeros = roots_with_multiplicity(T)
    bound = root_bound(T)
    if any(c.multiplicity != 1 for c in zeros):
        return False
    if any(abs(c.center.imag) > 1e-8 * (1.0 + bound) for c in zeros):
        return False
    if T.degree < 2:
        return True
    min_mod = min(abs(T(z)) for z, _ in critical_points(T))
    snap = 1e-10
    if min_mod >= 1.0 - snap:
        return True
    if min_mod > 1.0 - 1e-8:
        raise AmbiguityError(
            f"borderline: smallest critical value modulus {min_mod!r} is "
            "within 1e-8 of 1"
        )
    return False


def bounding_box(T: Poly, pad: float = 0.2) -> tuple[complex, float]:
    """Square box (center, half-side) enclosing the image of T.

    Uses the root bound of T^2 - 1 around its root centroid, padded;
    recentring keeps the box tight when the roots sit far from the origin.
    """
    q = (T * T - 1.0).require_nonzero("T^2 - 1")
    center, radius = centered_root_bound(q)
    # the image hugs the zeros of T^2 - 1 within a lemniscate margin
    margin = (2.0 / max(abs(q.leading), 1e-300)) ** (1.0 / (2 * max(T.degree, 1)))
    half = (radius + margin) * (1.0 + pad)
    return center, half


def grid_oracle(T: Poly, resolution: int = 256, tol: float | None = None):
    """Count components by brute force on a grid, independent of the
    algebraic route.

    Every cell whose center projects onto the image (a few Newton steps on
    T(z) - clamp(Re T(z))) within one cell diagonal marks the cell
    occupied; occupied cells are merged with 8-neighbor adjacency.
    Returns (component_count, occupancy grid).
    """
    T.require_nonzero()
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if tol is None:
        tol = default_membership_tol(T)
    center, half = bounding_box(T)
    xs = np.linspace(center.real - half, center.real + half, resolution)
    ys = np.linspace(center.imag - half, center.imag + half, resolution)
    cell = xs[1] - xs[0]
    diag = cell * np.sqrt(2.0)

    X, Y = np.meshgrid(xs, ys)
    z = (X + 1j * Y).ravel()
    start = z.copy()
    dT = T.derivative() if T.degree >= 1 else None
    for _ in range(18):
        w = T(z)
        target = np.clip(w.real, -1.0, 1.0)
        f = w - target
        d = dT(z)
        safe = np.abs(d) > 1e-280
        step = np.where(safe, f / np.where(safe, d, 1.0), 0.0)
        # damp wild steps so cells cannot teleport across the box
        step_mag = np.abs(step)
        step = np.where(step_mag > half, step * (half / np.maximum(step_mag, 1e-300)), step)
        z = z - step

    w = T(z)
    landed = (np.abs(w.imag) <= tol) & (np.abs(w.real) <= 1.0 + tol)
    near_start = np.abs(z - start) <= diag
    occupied = (landed & near_start).reshape(resolution, resolution)

    structure8 = np.ones((3, 3), dtype=int)
    _, count = ndimage.label(occupied, structure=structure8)
    return int(count), occupied


def trace_real_locus(T: Poly, resolution: int = 256) -> list[np.ndarray]:
    """Polylines of the level set Im T = 0 inside the padded bounding box.

    Marching squares with linear interpolation; segments are chained into
    polylines through shared grid edges.  Plot-quality only: no
    monotonicity or completeness contract.
    """
    T.require_nonzero()
    if resolution < 16:
        raise ValueError("resolution too small")
    center, half = bounding_box(T)
    # offset the lattice half a cell so grid lines dodge exact symmetry axes
    xs = np.linspace(center.real - half, center.real + half, resolution + 1)
    ys = np.linspace(center.imag - half, center.imag + half, resolution + 1)
    xs = xs + (xs[1] - xs[0]) / 2.0
    ys = ys + (ys[1] - ys[0]) / 2.0
    X, Y = np.meshgrid(xs, ys)
    values = T(X + 1j * Y).imag

    segments: dict[tuple, list[tuple]] = {}

    def edge_point(i0, j0, i1, j1):
        v0 = values[j0, i0]
        v1 = values[j1, i1]
        t = v0 / (v0 - v1)
        t = min(1.0, max(0.0, t))
        x = xs[i0] + t * (xs[i1] - xs[i0])
        y = ys[j0] + t * (ys[j1] - ys[j0])
        return x + 1j * y

    raw_segments = []
    for j in range(resolution):
        for i in range(resolution):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            vals = [values[q, p] for p, q in corners]
            code = sum(1 << k for k, v in enumerate(vals) if v > 0)
            if code in (0, 15):
                continue
            edges = []
            for k in range(4):
                p0, p1 = corners[k], corners[(k + 1) % 4]
                v0, v1 = vals[k], vals[(k + 1) % 4]
                if (v0 > 0) != (v1 > 0):
                    key = tuple(sorted((p0, p1)))
                    edges.append((key, edge_point(*p0, *p1)))
            if len(edges) == 2:
                raw_segments.append((edges[0], edges[1]))
            elif len(edges) == 4:
                # saddle cell: resolve by the sign at the center
                cx = (xs[i] + xs[i + 1]) / 2.0
                cy = (ys[j] + ys[j + 1]) / 2.0
                mid = T(complex(cx, cy)).imag
                order = [0, 1, 2, 3] if (mid > 0) == (vals[0] > 0) else [1, 2, 3, 0]
                raw_segments.append((edges[order[0]], edges[order[1]]))
                raw_segments.append((edges[order[2]], edges[order[3]]))

    # chain segments through shared edge keys
    adjacency: dict[tuple, list[int]] = {}
    for idx, ((k0, _), (k1, _)) in enumerate(raw_segments):
        adjacency.setdefault(k0, []).append(idx)
        adjacency.setdefault(k1, []).append(idx)

    seen = [False] * len(raw_segments)
    polylines = []
    for idx in range(len(raw_segments)):
        if seen[idx]:
            continue
        seen[idx] = True
        (k0, p0), (k1, p1) = raw_segments[idx]
        chain = [p0, p1]
        keys = [k0, k1]
        # extend forward then backward
        for direction in (1, 0):
            key = keys[direction]
            while True:
                nexts = [t for t in adjacency.get(key, []) if not seen[t]]
                if not nexts:
                    break
                t = nexts[0]
                seen[t] = True
                (ka, pa), (kb, pb) = raw_segments[t]
                key, pt = (kb, pb) if ka == key else (ka, pa)
                if direction == 1:
                    chain.append(pt)
                else:
                    chain.insert(0, pt)
        polylines.append(np.asarray(chain, dtype=complex))
    polylines.sort(key=lambda c: (len(c), c[0].real, c[0].imag), reverse=True)
    return polylines
