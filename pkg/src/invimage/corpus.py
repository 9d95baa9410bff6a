"""Bundled example polynomials, addressable by name from the CLI.

Parameterized names use a colon: ``example4i:0.4``, ``example4ii:2``,
``chebyshev:7``.  ``example1`` is the degree-9 polynomial
1 + z^2 (z-1)^3 (z-2)^4; ``cusp-cubic`` is z^3 + 1.
"""
from __future__ import annotations

from .polynomial import Poly, chebyshev_first_kind

EXAMPLE1_COEFFS = (1, 0, -16, 80, -168, 192, -129, 51, -11, 1)

_BASE_NAMES = ("example1", "example4i:a", "example4ii:a", "chebyshev:n", "cusp-cubic")


def example_names() -> tuple[str, ...]:
    return _BASE_NAMES


def get_example(name: str) -> tuple[Poly, str]:
    """Resolve a corpus name to (polynomial, label).

    Raises ValueError (listing the valid names) for unknown names or bad
    parameters.
    """
    base, _, arg = name.partition(":")
    try:
        if base == "example1" and not arg:
            return Poly(EXAMPLE1_COEFFS), "example1: 1 + z^2 (z-1)^3 (z-2)^4"
        if base == "example4i":
            a = float(arg)
            if not 0.0 < a < 1.0:
                raise ValueError("example4i needs 0 < a < 1")
            return (
                Poly((-(a * a + 1) / (1 - a * a), 0.0, 2.0 / (1 - a * a))),
                f"example4i a={a:g}: (2z^2 - a^2 - 1) / (1 - a^2)",
            )
        if base == "example4ii":
            a = float(arg)
            if a <= 0.0:
                raise ValueError("example4ii needs a > 0")
            return (
                Poly((1j / a, -1j, 1j / a)),
                f"example4ii a={a:g}: (i/a)(z^2 - a z + 1)",
            )
        if base == "chebyshev":
            n = int(arg)
            if not 1 <= n <= 64:
                raise ValueError("chebyshev needs 1 <= n <= 64")
            return chebyshev_first_kind(n), f"chebyshev degree {n}"
        if base == "cusp-cubic" and not arg:
            return Poly((1, 0, 0, 1)), "cusp-cubic: z^3 + 1"
    except ValueError as exc:
        if "invalid literal" in str(exc) or "could not convert" in str(exc):
            raise ValueError(
                f"bad parameter {arg!r} in example name {name!r}; "
                f"valid names: {', '.join(_BASE_NAMES)}"
            ) from exc
        raise
    raise ValueError(
        f"unknown example {name!r}; valid names: {', '.join(_BASE_NAMES)}"
    )
