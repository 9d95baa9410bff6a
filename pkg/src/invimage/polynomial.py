"""Dense complex polynomials with exact-degree bookkeeping.

Coefficients are stored ascending, so ``coeffs[k]`` multiplies ``z**k``.
The zero polynomial is a distinct value (``is_zero``) which every analysis
entry point rejects; explicit leading zeros are rejected at construction.
Arithmetic results are trimmed with a documented cancellation floor so that
forming ``T*T - 1`` cannot inflate the degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Leading coefficients at or below TRIM_REL times the largest coefficient
# magnitude of a result are cancellation debris, not genuine degree.
TRIM_REL = 1e-12

MAX_DEGREE = 64


def _trimmed(values) -> tuple[complex, ...]:
    arr = np.asarray(values, dtype=complex)
    mags = np.abs(arr)
    floor = TRIM_REL * (mags.max() if mags.size else 0.0)
    keep = len(arr)
    while keep > 1 and mags[keep - 1] <= floor:
        keep -= 1
    if keep == 1 and mags[0] <= floor:
        return (0j,)
    return tuple(complex(v) for v in arr[:keep])


@dataclass(frozen=True)
class Poly:
    """Polynomial with dense complex coefficients, ascending by degree."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a polynomial needs at least one coefficient")
        if len(cs) > 1 and abs(cs[-1]) <= TRIM_REL * max(abs(c) for c in cs):
            raise ValueError(
                "leading coefficient must stand clear of the trim floor "
                f"({TRIM_REL} relative to the largest coefficient)"
            )
        if len(cs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(cs) - 1} exceeds supported maximum {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly((0j,))

    @staticmethod
    def constant(c) -> "Poly":
        return Poly((complex(c),))

    @staticmethod
    def identity() -> "Poly":
        """The polynomial z."""
        return Poly((0j, 1 + 0j))

    @staticmethod
    def from_roots(roots, leading=1.0, multiplicities=None) -> "Poly":
        """Build ``leading * prod (z - r)**m`` from roots and multiplicities."""
        result = np.array([complex(leading)])
        mults = multiplicities if multiplicities is not None else [1] * len(roots)
        for r, m in zip(roots, mults):
            factor = np.array([-complex(r), 1.0 + 0j])
            for _ in range(int(m)):
                result = np.convolve(result, factor)
        if len(result) == 1 and result[0] == 0:
            return Poly.zero()
        return Poly(tuple(result))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def require_nonzero(self, what: str = "polynomial") -> "Poly":
        if self.is_zero:
            raise ValueError(f"{what} must not be the zero polynomial")
        return self

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
            for c in self.coeffs[-2::-1]:
                acc = acc * z + c
            return acc
        acc = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc

    def magnitude_bound(self, r: float) -> float:
        """Upper bound sum |c_k| r**k for |p| on the disk of radius r.

        Times machine epsilon this is the natural evaluation-noise scale.
        """
        total = 0.0
        power = 1.0
        for c in self.coeffs:
            total += abs(c) * power
            power *= r
        return total

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "Poly":
        if self.degree == 0:
            raise ValueError("constant has no analysis-relevant derivative")
        cs = tuple(k * self.coeffs[k] for k in range(1, len(self.coeffs)))
        return Poly(cs)

    def derivatives(self, count: int) -> list["Poly"]:
        """[self, p', p'', ...] with `count` derivatives appended."""
        chain = [self]
        for _ in range(count):
            if chain[-1].degree == 0:
                chain.append(Poly.zero())
            else:
                chain.append(chain[-1].derivative())
        return chain

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, float, complex)):
            return Poly((complex(other),))
        return NotImplemented

    def __add__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(q.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        a[: len(q.coeffs)] += q.coeffs
        return Poly(_trimmed(a))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        if self.is_zero or q.is_zero:
            return Poly.zero()
        prod = np.convolve(np.asarray(self.coeffs), np.asarray(q.coeffs))
        return Poly(_trimmed(prod))

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        return self * complex(c)

    def __divmod__(self, divisor: "Poly"):
        """Synthetic division: self = q * divisor + r with deg r < deg divisor."""
        divisor.require_nonzero("divisor")
        rem = np.asarray(self.coeffs, dtype=complex).copy()
        d = np.asarray(divisor.coeffs, dtype=complex)
        dn = len(d) - 1
        if len(rem) - 1 < dn:
            return Poly.zero(), self
        quot = np.zeros(len(rem) - dn, dtype=complex)
        for k in range(len(rem) - 1, dn - 1, -1):
            q = rem[k] / d[dn]
            quot[k - dn] = q
            rem[k - dn : k + 1] -= q * d
        return Poly(_trimmed(quot)), Poly(_trimmed(rem[:dn] if dn else rem[:1]))

    # -- composition -------------------------------------------------------

    def affine_compose(self, a, b) -> "Poly":
        """The polynomial z -> p((z - b) / a); requires a != 0.

        Inverse images transform covariantly: the image of the result is
        a * (image of p) + b.
        """
        a = complex(a)
        b = complex(b)
        if a == 0:
            raise ValueError("affine scale a must be nonzero")
        self.require_nonzero()
        inner = Poly((-b / a, 1.0 / a))  # (z - b) / a
        acc = Poly.constant(self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            acc = acc * inner + c
        # degree is preserved exactly; repair any overzealous trim
        if acc.degree != self.degree:
            raise ValueError("affine composition lost degree; input is ill-scaled")
        return acc

    # -- misc ----------------------------------------------------------------

    def allclose(self, other: "Poly", rel: float = 1e-10) -> bool:
        if len(self.coeffs) != len(other.coeffs):
            return False
        a = np.asarray(self.coeffs)
        b = np.asarray(other.coeffs)
        scale = max(np.abs(a).max(), np.abs(b).max(), 1e-300)
        return bool(np.max(np.abs(a - b)) <= rel * scale)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0 and len(self.coeffs) > 1:
                continue
            terms.append(f"({c:g})z^{k}" if k else f"({c:g})")
        return "Poly[" + " + ".join(terms) + "]"


def chebyshev_first_kind(n: int) -> Poly:
    """Degree-n Chebyshev polynomial of the first kind via the three-term
    recurrence t_{k+1} = 2 z t_k - t_{k-1}."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    return chebyshev_compose(n, Poly.identity())


def chebyshev_compose(n: int, inner: Poly) -> Poly:
    """Chebyshev polynomial of the first kind evaluated on `inner`.

    Runs the recurrence with polynomial arguments, so the result is the
    composition without forming a general power-basis composition.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    inner.require_nonzero()
    prev = Poly.constant(1.0)
    cur = inner
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * inner * cur - prev
    return cur


def chebyshev_on_segment(n: int, a1, a2) -> Poly:
    """Chebyshev polynomial normalized to the complex segment [a1, a2].

    This is t_n((2z - a1 - a2) / (a2 - a1)); its inverse image of [-1, 1]
    is exactly the segment.
    """
    a1 = complex(a1)
    a2 = complex(a2)
    if a1 == a2:
        raise ValueError("degenerate segment")
    base = chebyshev_first_kind(n)
    return base.affine_compose((a2 - a1) / 2.0, (a1 + a2) / 2.0)
