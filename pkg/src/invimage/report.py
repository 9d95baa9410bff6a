"""Serializable analysis report.

A `ReportDocument` echoes the input, carries every headline quantity with
the tolerances that produced it, and round-trips losslessly through JSON
(sorted keys, two-space indent), so two runs on the same input emit
byte-identical documents.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .geometry import AnalysisReport
from .polynomial import Poly

TOOL_NAME = "invimage"
TOOL_VERSION = "0.1.0"


def _pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class ReportDocument:
    tool: str = TOOL_NAME
    version: str = TOOL_VERSION
    label: str | None = None
    coeffs: list[list[float]] = field(default_factory=list)
    degree: int | None = None
    nu: int | None = None
    ell: int | None = None
    component_count: int | None = None
    connected: bool | None = None
    endpoints: list[list[float]] = field(default_factory=list)
    endpoints_with_multiplicity: list[list[float]] = field(default_factory=list)
    odd_zeros: list[dict] = field(default_factory=list)
    even_zeros: list[dict] = field(default_factory=list)
    critical_points: list[dict] = field(default_factory=list)
    pell_residual: float | None = None
    two_arc: dict | None = None
    oracle_component_count: int | None = None
    tolerances: dict = field(default_factory=dict)
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str) -> "ReportDocument":
        return ReportDocument(**json.loads(text))


def build_report(T: Poly, analysis: AnalysisReport, label: str | None = None) -> ReportDocument:
    pell = analysis.pell
    two_arc = None
    if analysis.two_arc is not None:
        ta = analysis.two_arc
        two_arc = {
            "z_star": _pair(ta.z_star),
            "z_star_is_endpoint": ta.z_star_is_endpoint,
            "z_star_in_image": ta.z_star_in_image,
            "analytic_arc_count": ta.analytic_arc_count,
            "arcs_cross": ta.arcs_cross,
        }
    return ReportDocument(
        label=label,
        coeffs=[_pair(c) for c in T.coeffs],
        degree=T.degree,
        nu=analysis.nu,
        ell=analysis.ell,
        component_count=analysis.component_count,
        connected=analysis.connected,
        endpoints=[_pair(z) for z in analysis.endpoints],
        endpoints_with_multiplicity=[_pair(z) for z in pell.endpoints_with_multiplicity],
        odd_zeros=[
            {"center": _pair(c.center), "multiplicity": c.multiplicity}
            for c in pell.odd_zeros
        ],
        even_zeros=[
            {"center": _pair(c.center), "multiplicity": c.multiplicity}
            for c in pell.even_zeros
        ],
        critical_points=[
            {
                "location": _pair(c.location),
                "multiplicity": c.multiplicity,
                "in_image": c.in_image,
            }
            for c in analysis.critical_points
        ],
        pell_residual=pell.residual,
        two_arc=two_arc,
        tolerances={"membership": analysis.membership_tol, "pell_residual_max": 1e-6},
    )


def error_report(label: str | None, coeffs, message: str, tolerances: dict | None = None) -> ReportDocument:
    return ReportDocument(
        label=label,
        coeffs=[_pair(c) for c in coeffs],
        error=message,
        tolerances=tolerances or {},
    )
