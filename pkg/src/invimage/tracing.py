"""Numerical tracing of the image arcs.

The image of [-1, 1] under T^(-1) is swept out by the n solution branches
of T(z) = t as t descends from +1 to -1.  Branches start at the zeros of
T - 1 (a zero of multiplicity m launches m branches along rays spaced
2*pi/m), follow a predictor-corrector continuation through a Chebyshev-
spaced grid of t-knots, and terminate at the zeros of T + 1.  At an
interior critical value, the colliding branches are re-seeded along the
outgoing rays of the local model c (z - z0)^m = t - t0: straight through
when the ray count m is odd, rotated by pi/m when it is even (either
rotation gives a valid decomposition; the positive one is fixed for
determinism).

Every traced structure is cross-checked against the algebraic counts: the
analytic-arc merge must reproduce nu, the arc connectivity must reproduce
the component count, and a zero of T^2 - 1 of multiplicity m must receive
exactly m branch ends.  Disagreement raises `TraceError` rather than
silently reconciling.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguityError, TraceError
from .geometry import _classify_criticals, bounding_box
from .membership import default_membership_tol
from .polynomial import Poly
from .structure import factor_root_clusters

EPS = np.finfo(float).eps

_NEWTON_ITER = 18
_STEP_FLOOR = 1e-6
_CAPTURE_FACTOR = 2.5


@dataclass(frozen=True)
class ImageEndpoint:
    """A zero of T^2 - 1: side +1 for zeros of T - 1 (branches start
    there), side -1 for zeros of T + 1 (branches end there)."""

    location: complex
    multiplicity: int
    side: int


@dataclass(frozen=True)
class CrossingPoint:
    """Point where m >= 2 arcs cross; m - 1 is the multiplicity of the
    location as a zero of T', and the m tangent lines through it are
    spaced pi/m."""

    location: complex
    m: int
    tangent_angles: tuple[float, ...]
    t: float


@dataclass
class Arc:
    """One monotone Jordan arc: T decreases strictly from +1 to -1 along
    the polyline.  Endpoint fields index into the image_endpoints list;
    passes_through indexes into the crossing list."""

    points: np.ndarray
    t_values: np.ndarray
    start_endpoint: int
    end_endpoint: int
    passes_through: list[int] = field(default_factory=list)
    start_angle: float = 0.0
    end_angle: float = 0.0


def image_endpoints(T: Poly) -> list[ImageEndpoint]:
    """All distinct zeros of T^2 - 1 with multiplicity and side, lex-ordered."""
    minus, plus = factor_root_clusters(T)
    eps = [ImageEndpoint(c.center, c.multiplicity, +1) for c in minus]
    eps += [ImageEndpoint(c.center, c.multiplicity, -1) for c in plus]
    eps.sort(key=lambda e: (e.location.real, e.location.imag))
    return eps


def _mth_root_rays(value: complex, m: int) -> np.ndarray:
    """The m complex m-th roots of `value`, principal first."""
    r = abs(value) ** (1.0 / m)
    phi = cmath.phase(value) / m
    return np.array([r * cmath.exp(1j * (phi + 2.0 * math.pi * j / m)) for j in range(m)])


def _angle_gap(a: float, b: float) -> float:
    d = (a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


class _Tracer:
    def __init__(self, T: Poly, samples_per_arc: int):
        if samples_per_arc < 33:
            raise ValueError("samples_per_arc must be at least 33")
        T.require_nonzero()
        self.T = T
        self.n = T.degree
        self.dT = T.derivative() if self.n >= 1 else None
        self.derivs = T.derivatives(self.n)
        self.K = samples_per_arc
        self.tol = default_membership_tol(T)
        _, self.box_half = bounding_box(T)

        minus, plus = factor_root_clusters(T)
        self.endpoints = image_endpoints(T)
        self.minus = [e for e in self.endpoints if e.side == +1]
        self.plus = [e for e in self.endpoints if e.side == -1]
        self.endpoint_index = {
            (round(e.location.real, 12), round(e.location.imag, 12)): i
            for i, e in enumerate(self.endpoints)
        }
        odd_total = sum(e.multiplicity for e in self.endpoints if e.multiplicity % 2 == 1)
        self.nu = odd_total // 2

        if self.n >= 2:
            self.verdicts = _classify_criticals(T, minus, plus, self.tol)
        else:
            self.verdicts = []
        inside = sum(c.multiplicity for c in self.verdicts if c.in_image)
        self.k_algebraic = self.n - inside

        self.crossing_spec = self._plan_crossings()

    # -- planning ---------------------------------------------------------

    def _local_coeff(self, z0: complex, m: int) -> complex:
        return self.derivs[m](z0) / math.factorial(m)

    def _plan_crossings(self):
        """Interior crossings with their collision half-steps in t."""
        specials = [e.location for e in self.endpoints]
        multiple_ends = {
            (round(e.location.real, 10), round(e.location.imag, 10))
            for e in self.endpoints
            if e.multiplicity >= 2
        }
        interior = []
        for cp in self.verdicts:
            if not cp.in_image:
                continue
            key = (round(cp.location.real, 10), round(cp.location.imag, 10))
            if key in multiple_ends:
                continue  # boundary critical point: an endpoint, not a crossing
            t_c = float(np.clip(self.T(cp.location).real, -1.0, 1.0))
            if 1.0 - abs(t_c) < 1e-9:
                raise AmbiguityError(
                    f"interior critical value {t_c!r} indistinguishable from the "
                    "segment ends"
                )
            interior.append((cp.location, cp.multiplicity + 1, t_c))
        specials += [z for z, _, _ in interior]

        spec = []
        all_t = [t for _, _, t in interior]
        for z_c, m, t_c in interior:
            gaps = [abs(z_c - s) for s in specials if abs(z_c - s) > 1e-12]
            r_safe = (min(gaps) if gaps else self.box_half) / 8.0
            r_safe = min(r_safe, self.box_half / 8.0)
            c_m = self._local_coeff(z_c, m)
            if abs(c_m) == 0:
                raise TraceError(f"degenerate local model at crossing {z_c:.6g}")
            h = abs(c_m) * r_safe**m
            t_gaps = [abs(t_c - t) for t in all_t if abs(t_c - t) > 1e-12]
            t_gaps += [1.0 - t_c, t_c + 1.0]
            h = min(h, min(t_gaps) / 4.0)
            h = max(h, 1e-12)
            spec.append({"z": z_c, "m": m, "t": t_c, "c": c_m, "h": h})
        spec.sort(key=lambda s: -s["t"])
        return spec

    def _knots(self) -> np.ndarray:
        base = np.cos(np.pi * np.arange(self.K) / (self.K - 1))
        keep = np.ones(len(base), dtype=bool)
        extra = []
        for s in self.crossing_spec:
            lo, hi = s["t"] - s["h"], s["t"] + s["h"]
            keep &= ~((base > lo) & (base < hi))
            extra.extend([hi, s["t"], lo])
        knots = np.concatenate([base[keep], np.asarray(extra)])
        knots = np.unique(knots)[::-1]
        assert knots[0] == 1.0 and knots[-1] == -1.0
        return knots

    # -- stepping ---------------------------------------------------------

    def _newton_tol(self, z: np.ndarray) -> np.ndarray:
        bounds = np.array([self.T.magnitude_bound(abs(w)) for w in z])
        return np.maximum(1e-12, 100.0 * (self.n + 1) * EPS * bounds)

    def _correct(self, z0: np.ndarray, t: float):
        """Newton-correct the batch onto T(z) = t; None on failure."""
        z = z0.astype(complex).copy()
        for _ in range(_NEWTON_ITER):
            f = self.T(z) - t
            tolv = self._newton_tol(z)
            if np.all(np.abs(f) <= tolv):
                return z
            d = self.dT(z)
            bad = np.abs(d) < 1e-280
            if np.any(bad):
                return None
            z = z - f / d
        f = self.T(z) - t
        if np.all(np.abs(f) <= 10.0 * self._newton_tol(z)):
            return z
        return None

    def _advance(self, z: np.ndarray, t_from: float, t_to: float, depth: int = 0):
        """One continuation step for every branch, bisecting on failure."""
        dt = t_to - t_from
        d = self.dT(z)
        safe = np.abs(d) > 1e-280
        pred = np.where(safe, z + dt / np.where(safe, d, 1.0), z)
        corrected = self._correct(pred, t_to)
        if corrected is not None and self._plausible(z, corrected):
            return corrected
        if abs(dt) / 2.0 < _STEP_FLOOR / 2.0 or depth > 40:
            raise TraceError(
                f"continuation step failed between t = {t_from!r} and {t_to!r}",
                last_good_t=t_from,
            )
        mid = (t_from + t_to) / 2.0
        zmid = self._advance(z, t_from, mid, depth + 1)
        return self._advance(zmid, mid, t_to, depth + 1)

    def _plausible(self, before: np.ndarray, after: np.ndarray) -> bool:
        """Reject corrections that teleport or merge distinct branches."""
        if np.any(np.abs(after - before) > 0.5 * self.box_half):
            return False
        if len(after) > 1:
            d = np.abs(after[:, None] - after[None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() < 1e-10 * (1.0 + self.box_half):
                return False
        return True

    # -- the march --------------------------------------------------------

    def run(self):
        knots = self._knots()
        n = self.n

        starts: list[int] = []  # branch -> endpoint index
        z0_list: list[complex] = []
        for e_idx, e in enumerate(self.endpoints):
            if e.side != +1:
                continue
            starts.extend([e_idx] * e.multiplicity)
            z0_list.extend([e.location] * e.multiplicity)
        assert len(starts) == n, "zeros of T - 1 must supply n branch starts"

        samples = np.empty((len(knots), n), dtype=complex)
        samples[0] = np.asarray(z0_list)
        passes: list[list[int]] = [[] for _ in range(n)]
        crossings: list[CrossingPoint] = []
        cross_at_t: dict[int, list[int]] = {}  # knot index -> crossing spec ids
        for ci, s in enumerate(self.crossing_spec):
            k = int(np.argmin(np.abs(knots - s["t"])))
            cross_at_t.setdefault(k, []).append(ci)
        frozen = {}  # branch -> crossing spec id, between t_c and t_c - h

        positions = samples[0].copy()
        for k in range(1, len(knots)):
            t_prev, t = knots[k - 1], knots[k]
            if k == 1:
                positions = self._first_step(positions, starts, t)
            elif (k - 1) in cross_at_t:
                positions = self._leave_crossings(
                    positions, frozen, cross_at_t[k - 1], t_prev, t
                )
                frozen = {}
            else:
                positions = self._advance(positions, t_prev, t)

            if k in cross_at_t:
                for ci in cross_at_t[k]:
                    spec = self.crossing_spec[ci]
                    caught = self._capture(positions, spec, knots[k - 1])
                    for b in caught:
                        frozen[b] = ci
                        passes[b].append(ci)
                        positions[b] = spec["z"]
                    spec["incoming"] = {
                        b: cmath.phase(samples[k - 1][b] - spec["z"]) for b in caught
                    }
                    spec["index"] = ci
            samples[k] = positions

        ends = self._land(positions, samples[-2], knots[-2])
        samples[-1] = np.array([self.endpoints[e].location for e in ends])

        crossings = self._crossing_objects(samples, knots)
        arcs = self._assemble(samples, knots, starts, ends, passes)
        self._cross_checks(arcs)
        return arcs, crossings

    def _first_step(self, z0: np.ndarray, starts: list[int], t1: float):
        pred = z0.copy()
        b = 0
        while b < len(starts):
            e = self.endpoints[starts[b]]
            m = e.multiplicity
            if m == 1:
                d = self.dT(e.location)
                if abs(d) < 1e-280:
                    raise TraceError("simple start with vanishing derivative")
                pred[b] = e.location + (t1 - 1.0) / d
            else:
                c_m = self._local_coeff(e.location, m)
                rays = _mth_root_rays((t1 - 1.0) / c_m, m)
                pred[b : b + m] = e.location + rays
            b += m
        corrected = self._correct(pred, t1)
        if corrected is None or not self._plausible(pred, corrected):
            raise TraceError("branch launch failed", last_good_t=1.0)
        return corrected

    def _capture(self, positions: np.ndarray, spec, t_above: float) -> list[int]:
        """Branches colliding at the crossing, verified against the ring
        radius of the local model."""
        m = spec["m"]
        ring = (abs(t_above - spec["t"]) / abs(spec["c"])) ** (1.0 / m)
        dist = np.abs(positions - spec["z"])
        order = np.argsort(dist)
        caught = order[:m]
        if dist[caught[-1]] > _CAPTURE_FACTOR * ring:
            raise TraceError(
                f"expected {m} branches at crossing {spec['z']:.6g}, the "
                f"{m}-th nearest is {dist[caught[-1]]:.3e} away (ring {ring:.3e})"
            )
        if len(order) > m and dist[order[m]] < 4.0 * ring:
            raise TraceError(
                f"bystander branch within the capture ring of crossing {spec['z']:.6g}"
            )
        return sorted(int(i) for i in caught)

    def _leave_crossings(self, positions, frozen, spec_ids, t_c, t_next):
        pred = positions.copy()
        for ci in spec_ids:
            spec = self.crossing_spec[ci]
            m = spec["m"]
            branches = sorted(b for b, c in frozen.items() if c == ci)
            rays = _mth_root_rays((t_next - spec["t"]) / spec["c"], m)
            ray_angles = [cmath.phase(r) for r in rays]
            used = [False] * m
            turn = math.pi if m % 2 == 1 else math.pi + math.pi / m
            for b in branches:
                want = spec["incoming"][b] + turn
                best, best_gap = None, None
                for j in range(m):
                    if used[j]:
                        continue
                    gap = _angle_gap(want, ray_angles[j])
                    if best is None or gap < best_gap:
                        best, best_gap = j, gap
                used[best] = True
                pred[b] = spec["z"] + rays[best]
                spec.setdefault("outgoing", {})[b] = ray_angles[best]
        others = [b for b in range(len(positions)) if b not in frozen]
        if others:
            idx = np.asarray(others)
            d = self.dT(positions[idx])
            safe = np.abs(d) > 1e-280
            pred[idx] = np.where(
                safe, positions[idx] + (t_next - t_c) / np.where(safe, d, 1.0), positions[idx]
            )
        corrected = self._correct(pred, t_next)
        if corrected is None or not self._plausible(pred, corrected):
            raise TraceError(
                f"failed to restart branches below crossing level t = {t_c!r}",
                last_good_t=t_c,
            )
        return corrected

    def _land(self, final: np.ndarray, near_final: np.ndarray, t_near: float) -> list[int]:
        """Assign every branch to a terminal zero of T + 1 and enforce the
        incidence rule: a zero of multiplicity m receives exactly m ends."""
        plus_idx = [i for i, e in enumerate(self.endpoints) if e.side == -1]
        centers = np.array([self.endpoints[i].location for i in plus_idx])
        ends = []
        for b in range(len(final)):
            j = int(np.argmin(np.abs(centers - final[b])))
            ends.append(plus_idx[j])
        counts: dict[int, int] = {}
        for e in ends:
            counts[e] = counts.get(e, 0) + 1
        for i in plus_idx:
            e = self.endpoints[i]
            if counts.get(i, 0) != e.multiplicity:
                raise TraceError(
                    "geometry/algebra disagreement: endpoint "
                    f"{e.location:.6g} (multiplicity {e.multiplicity}) received "
                    f"{counts.get(i, 0)} branch ends"
                )
            if e.multiplicity >= 2:
                c_m = self._local_coeff(e.location, e.multiplicity)
                ring = (abs(t_near + 1.0) / abs(c_m)) ** (1.0 / e.multiplicity)
                for b in range(len(final)):
                    if ends[b] == i and abs(near_final[b] - e.location) > _CAPTURE_FACTOR * ring:
                        raise TraceError(
                            f"branch {b} lands at {e.location:.6g} from outside "
                            "the local capture ring"
                        )
        return ends

    def _crossing_objects(self, samples, knots) -> list[CrossingPoint]:
        out = []
        for spec in self.crossing_spec:
            angles = list(spec["incoming"].values()) + list(
                spec.get("outgoing", {}).values()
            )
            tangents: list[float] = []
            for a in angles:
                a = a % math.pi
                if not any(
                    min(abs(a - b), math.pi - abs(a - b)) < 1e-3 for b in tangents
                ):
                    tangents.append(a)
            out.append(
                CrossingPoint(
                    location=spec["z"],
                    m=spec["m"],
                    tangent_angles=tuple(sorted(tangents)),
                    t=spec["t"],
                )
            )
        return out

    def _assemble(self, samples, knots, starts, ends, passes) -> list[Arc]:
        arcs = []
        for b in range(self.n):
            pts = samples[:, b].copy()
            start_loc = self.endpoints[starts[b]].location
            end_loc = self.endpoints[ends[b]].location
            arcs.append(
                Arc(
                    points=pts,
                    t_values=knots.copy(),
                    start_endpoint=starts[b],
                    end_endpoint=ends[b],
                    passes_through=passes[b],
                    start_angle=cmath.phase(pts[1] - start_loc),
                    end_angle=cmath.phase(pts[-2] - end_loc),
                )
            )
        return arcs

    def _cross_checks(self, arcs: list[Arc]) -> None:
        merged = merge_analytic_arcs(arcs, self.endpoints)
        if len(merged) != self.nu:
            raise TraceError(
                "geometry/algebra disagreement: traced arcs merge into "
                f"{len(merged)} analytic arcs, algebra says {self.nu}"
            )
        k = arc_component_count(arcs)
        if k != self.k_algebraic:
            raise TraceError(
                "geometry/algebra disagreement: traced components "
                f"{k}, algebra says {self.k_algebraic}"
            )


def trace_arcs(T: Poly, samples_per_arc: int = 257):
    """Trace the n monotone arcs of the image of T.

    Returns (arcs, crossing_points).  Arc endpoints index into
    image_endpoints(T).  The traced topology is cross-checked against the
    algebraic arc and component counts and a `TraceError` is raised on any
    disagreement.
    """
    T.require_nonzero()
    n = T.degree
    if n < 1:
        raise ValueError("tracing needs degree >= 1")
    if n == 1:
        return _trace_degree_one(T, samples_per_arc), []
    return _Tracer(T, samples_per_arc).run()


def _trace_degree_one(T: Poly, samples_per_arc: int) -> list[Arc]:
    a = T.coeffs[1]
    b = T.coeffs[0]
    t = np.cos(np.pi * np.arange(samples_per_arc) / (samples_per_arc - 1))
    pts = (t - b) / a
    endpoints = image_endpoints(T)
    start = next(i for i, e in enumerate(endpoints) if e.side == +1)
    end = next(i for i, e in enumerate(endpoints) if e.side == -1)
    return [
        Arc(
            points=pts,
            t_values=t,
            start_endpoint=start,
            end_endpoint=end,
            passes_through=[],
            start_angle=cmath.phase(pts[1] - pts[0]),
            end_angle=cmath.phase(pts[-2] - pts[-1]),
        )
    ]


def merge_analytic_arcs(arcs: list[Arc], endpoints: list[ImageEndpoint]) -> list[np.ndarray]:
    """Join monotone arcs into analytic arcs through even-multiplicity
    endpoints, pairing arc ends whose arrival rays are opposite.

    Returns the merged polylines; their number is the minimal analytic
    arc count.
    """
    slots: dict[tuple[int, int], tuple[int, int]] = {}
    for e_idx, e in enumerate(endpoints):
        if e.multiplicity < 2 or e.multiplicity % 2 == 1:
            continue
        incident: list[tuple[int, int, float]] = []
        for ai, arc in enumerate(arcs):
            if arc.start_endpoint == e_idx:
                incident.append((ai, 0, arc.start_angle))
            if arc.end_endpoint == e_idx:
                incident.append((ai, 1, arc.end_angle))
        if len(incident) != e.multiplicity:
            raise TraceError(
                f"endpoint {e.location:.6g} has {len(incident)} incident arc "
                f"ends, expected {e.multiplicity}"
            )
        free = list(range(len(incident)))
        while free:
            i = free.pop(0)
            best, best_gap = None, None
            for j in free:
                gap = _angle_gap(incident[i][2] + math.pi, incident[j][2])
                if best is None or gap < best_gap:
                    best, best_gap = j, gap
            if best is None or best_gap > math.pi / e.multiplicity:
                raise TraceError(
                    f"no opposite arc end to pair at endpoint {e.location:.6g}"
                )
            free.remove(best)
            a = incident[i][:2]
            b = incident[best][:2]
            slots[a] = b
            slots[b] = a

    merged: list[np.ndarray] = []
    visited: set[int] = set()
    for ai in range(len(arcs)):
        if ai in visited:
            continue
        # walk back to a free slot so the chain starts at a real end
        slot = (ai, 0)
        guard = 0
        while slot in slots:
            nxt = slots[slot]
            slot = (nxt[0], 1 - nxt[1])
            guard += 1
            if guard > 2 * len(arcs):
                raise TraceError("cyclic analytic merge; image cannot contain loops")
        chain = []
        while True:
            a_idx, entry = slot
            visited.add(a_idx)
            pts = arcs[a_idx].points
            chain.append(pts if entry == 0 else pts[::-1])
            exit_slot = (a_idx, 1 - entry)
            if exit_slot not in slots:
                break
            slot = slots[exit_slot]
        merged.append(np.concatenate(chain))
    return merged


def arc_component_count(arcs: list[Arc]) -> int:
    """Connected components of the traced arc system (shared endpoints or
    shared crossing points connect arcs)."""
    parent = list(range(len(arcs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    by_endpoint: dict[int, list[int]] = {}
    by_crossing: dict[int, list[int]] = {}
    for ai, arc in enumerate(arcs):
        by_endpoint.setdefault(arc.start_endpoint, []).append(ai)
        by_endpoint.setdefault(arc.end_endpoint, []).append(ai)
        for ci in arc.passes_through:
            by_crossing.setdefault(ci, []).append(ai)
    for group in list(by_endpoint.values()) + list(by_crossing.values()):
        for other in group[1:]:
            union(group[0], other)
    return len({find(i) for i in range(len(arcs))})
