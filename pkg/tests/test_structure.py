import numpy as np
import pytest
from conftest import close_multiset

from invimage.errors import AmbiguityError
from invimage.polynomial import Poly, chebyshev_first_kind, chebyshev_on_segment
from invimage.structure import (
    analytic_arc_count,
    classify_two_arc,
    jordan_arc_count,
    pell_decompose,
    pell_residual,
)

EX1 = Poly((1, 0, -16, 80, -168, 192, -129, 51, -11, 1))
CUSP = Poly((1, 0, 0, 1))  # z^3 + 1


def example4i(a):
    return Poly((-(a * a + 1) / (1 - a * a), 0.0, 2.0 / (1 - a * a)))


def example4ii(a):
    return Poly((1j / a, -1j, 1j / a))


def test_pell_example1():
    pell = pell_decompose(EX1)
    assert pell.ell == 5
    assert pell.nu == 6
    assert pell.h.degree == 10
    assert abs(pell.h.leading - 1.0) < 1e-12
    # u = z (z-1) (z-2)^2, ascending (0, -4, 8, -5, 1)
    assert np.allclose(pell.u.coeffs, (0, -4, 8, -5, 1), atol=1e-6)
    evens = {round(c.center.real, 6): c.multiplicity for c in pell.even_zeros}
    assert evens == {0.0: 2, 2.0: 4}
    odd_mults = sorted(c.multiplicity for c in pell.odd_zeros)
    assert odd_mults == [1] * 9 + [3]
    assert len(pell.endpoints_with_multiplicity) == 12
    assert pell.residual <= 1e-10


def test_pell_example4i():
    pell = pell_decompose(example4i(0.4))
    assert pell.ell == 2
    assert pell.nu == 2
    # h = (z^2 - 1)(z^2 - 0.16)
    assert np.allclose(pell.h.coeffs, (0.16, 0, -1.16, 0, 1), atol=1e-9)
    assert pell.u.degree == 0
    assert abs(pell.u.coeffs[0] - 2.0 / 0.84) < 1e-9
    assert pell.residual <= 1e-12


def test_pell_chebyshev():
    pell = pell_decompose(chebyshev_first_kind(4))
    assert pell.ell == 1
    assert pell.nu == 1
    assert np.allclose(pell.h.coeffs, (-1, 0, 1), atol=1e-9)
    assert pell.u.degree == 3
    assert pell.residual <= 1e-10


def test_analytic_arc_counts():
    assert analytic_arc_count(EX1) == 6
    for n in range(1, 17):
        assert analytic_arc_count(chebyshev_first_kind(n)) == 1
    assert analytic_arc_count(CUSP) == 3


def test_jordan_arc_counts():
    ell, endpoints = jordan_arc_count(EX1)
    assert ell == 5
    assert sum(1 for e in endpoints if abs(e - 1.0) < 1e-8) == 1
    # nine simple endpoints solve T + 1 = 0; spot check the real one
    assert any(abs(e - (-0.215157645913075)) < 1e-9 for e in endpoints)

    ell, endpoints = jordan_arc_count(example4ii(2.0))
    assert ell == 2
    assert close_multiset(endpoints, [1j, -1j, 2 - 1j, 2 + 1j], atol=1e-9)

    ell, endpoints = jordan_arc_count(CUSP)
    assert ell == 2
    r = 2.0 ** (1.0 / 3.0)
    expected = [0, r * np.exp(1j * np.pi / 3), -r, r * np.exp(-1j * np.pi / 3)]
    assert close_multiset(endpoints, expected, atol=1e-9)


def test_classify_two_arc_real_pair():
    cls = classify_two_arc(example4i(0.4))
    assert abs(cls.z_star) < 1e-9
    assert not cls.z_star_is_endpoint
    assert not cls.z_star_in_image  # T(0) = -1.16/0.84, outside [-1, 1]
    assert cls.analytic_arc_count == 2
    assert not cls.arcs_cross


def test_classify_two_arc_crossing():
    cls = classify_two_arc(example4ii(2.0))
    assert abs(cls.z_star - 1.0) < 1e-9
    assert not cls.z_star_is_endpoint
    assert cls.z_star_in_image  # T(1) = 0
    assert cls.analytic_arc_count == 2
    assert cls.arcs_cross


def test_classify_two_arc_cusp():
    cls = classify_two_arc(CUSP)
    assert abs(cls.z_star) < 1e-9
    assert cls.z_star_is_endpoint
    assert cls.z_star_in_image
    assert cls.analytic_arc_count == 3


def test_classify_requires_two_arcs():
    with pytest.raises(ValueError, match="two-arc"):
        classify_two_arc(chebyshev_first_kind(4))


def test_pell_residual_examples():
    t = Poly((-1, 0, 2))
    h = Poly((-1, 0, 1))
    u = Poly((0, 2))
    assert pell_residual(t, h, u) <= 1e-12

    pell = pell_decompose(example4i(0.4))
    assert pell_residual(example4i(0.4), pell.h, pell.u) <= 1e-12

    bad_u = Poly((1e-3, 2))
    assert pell_residual(t, h, bad_u) > 1e-4

    with pytest.raises(ValueError, match="degree mismatch"):
        pell_residual(t, h, Poly((1, 1, 1)))


def test_nu_at_least_ell():
    rng = np.random.default_rng(11)
    for _ in range(25):
        deg = int(rng.integers(2, 6))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        while abs(coeffs[-1]) < 0.3:
            coeffs[-1] = rng.standard_normal() + 1j * rng.standard_normal()
        try:
            pell = pell_decompose(Poly(tuple(coeffs)))
        except AmbiguityError:
            continue
        assert pell.nu >= pell.ell
        assert 1 <= pell.ell <= deg


def test_affine_equivariance_of_endpoints():
    rng = np.random.default_rng(13)
    base = Poly((0.3, -1.1, 0.2, 1.0))
    for _ in range(10):
        a = complex(*rng.uniform(0.5, 1.5, 2))
        b = complex(*rng.uniform(-1, 1, 2))
        moved = base.affine_compose(a, b)
        p0 = pell_decompose(base)
        p1 = pell_decompose(moved)
        assert p0.ell == p1.ell and p0.nu == p1.nu
        assert close_multiset((a * e + b for e in p0.endpoints), p1.endpoints, atol=1e-8)


def test_chebyshev_segment_recovery():
    # ell == 1 iff T is Chebyshev on the segment spanned by its endpoints
    seg = chebyshev_on_segment(5, -0.3 + 0.2j, 1.1 - 0.7j)
    pell = pell_decompose(seg)
    assert pell.ell == 1
    a1, a2 = pell.endpoints
    rebuilt = chebyshev_on_segment(5, a1, a2)
    agree = rebuilt.allclose(seg, rel=1e-8) or rebuilt.allclose(
        chebyshev_on_segment(5, a2, a1), rel=1e-8
    )
    assert agree


def test_uniqueness_reconstruction():
    for T in (EX1, CUSP, chebyshev_first_kind(6), example4ii(1.0)):
        pell = pell_decompose(T)
        assert pell_residual(T, pell.h, pell.u) <= 1e-6
