import numpy as np

from invimage.errors import AmbiguityError, TraceError
from invimage.membership import distance_to_segment
from invimage.polynomial import Poly


def canon(values, digits=6):
    """Canonically ordered complex list, rounding away float-noise ties."""
    return sorted(
        (complex(v) for v in values),
        key=lambda z: (round(z.real, digits), round(z.imag, digits)),
    )


def close_multiset(got, expected, atol=1e-8):
    got = canon(got)
    expected = canon(expected)
    if len(got) != len(expected):
        return False
    return all(abs(a - b) <= atol for a, b in zip(got, expected))


def hausdorff(points_a, points_b) -> float:
    a = np.asarray(points_a, dtype=complex).ravel()
    b = np.asarray(points_b, dtype=complex).ravel()
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def segment_points(z0, z1, count=600):
    t = np.linspace(0.0, 1.0, count)
    return (1 - t) * complex(z0) + t * complex(z1)


def _dist_to_segments(pts, segs):
    pts = np.asarray(pts, dtype=complex).ravel()
    best = np.full(len(pts), np.inf)
    for a, b in segs:
        a = complex(a)
        ab = complex(b) - a
        denom = abs(ab) ** 2
        if denom == 0:
            best = np.minimum(best, np.abs(pts - a))
            continue
        tt = np.clip(((pts - a) * np.conj(ab)).real / denom, 0.0, 1.0)
        best = np.minimum(best, np.abs(pts - (a + tt * ab)))
    return best


def curve_hausdorff(polylines, segments, dense=400):
    """Hausdorff distance between a union of traced polylines and a union
    of exact segments, both treated as curves (not as point samples)."""
    pts = np.concatenate([np.asarray(p, dtype=complex).ravel() for p in polylines])
    d1 = _dist_to_segments(pts, segments).max()
    chords = []
    for p in polylines:
        p = np.asarray(p, dtype=complex).ravel()
        chords.extend(zip(p[:-1], p[1:]))
    probes = np.concatenate(
        [segment_points(a, b, dense) for a, b in segments]
    )
    d2 = _dist_to_segments(probes, chords).max()
    return float(max(d1, d2))


def random_poly(rng, max_degree=6, real=False, min_degree=2):
    deg = int(rng.integers(min_degree, max_degree + 1))
    coeffs = rng.standard_normal(deg + 1)
    if not real:
        coeffs = coeffs + 1j * rng.standard_normal(deg + 1)
    while abs(coeffs[-1]) < 0.3:
        coeffs[-1] = rng.standard_normal() + (0 if real else 1j * rng.standard_normal())
    return Poly(tuple(coeffs))


def critical_values_clear(T, margin=0.05):
    """True when every critical value stays `margin` away from the border
    of the segment [-1, 1]: strictly inside and clear of the endpoints, or
    strictly outside and clear of the segment."""
    from invimage.geometry import critical_points

    if T.degree < 2:
        return True
    try:
        crits = critical_points(T)
    except AmbiguityError:
        return False
    for z, _ in crits:
        w = T(z)
        if min(abs(w - 1.0), abs(w + 1.0)) <= 1e-8:
            continue  # critical value exactly +-1: an image endpoint, handled exactly
        d = distance_to_segment(w)
        if 0 < d < margin:
            return False
        if abs(w.imag) < margin and abs(abs(w.real) - 1.0) < margin:
            return False
    return True


def analyzable_random_poly(seed, max_degree=6, real=None, margin=0.05, min_separation=0.1):
    """Deterministic rejection sampler for polynomials the whole analysis
    pipeline accepts: clustering succeeds, critical values are not
    borderline, and the zeros of T^2 - 1 are well separated."""
    from invimage.structure import pell_decompose

    rng = np.random.default_rng(seed)
    want_real = bool(seed % 2) if real is None else real
    for _ in range(200):
        T = random_poly(rng, max_degree=max_degree, real=want_real)
        try:
            pell = pell_decompose(T)
        except AmbiguityError:
            continue
        centers = [c.center for c in pell.odd_zeros + pell.even_zeros]
        gaps = [
            abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1 :]
        ]
        if gaps and min(gaps) < min_separation:
            continue
        if not critical_values_clear(T, margin):
            continue
        return T
    raise RuntimeError(f"no analyzable polynomial found for seed {seed}")
