"""Command line front end.

Subcommands: analyze (full report as JSON), trace (arc samples as CSV,
JSON, or SVG), verify (Pell identity residual), examples (write a bundled
input file).  Exit codes: 0 success, 1 input error, 2 numerical ambiguity,
3 tracing failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import example_names, get_example
from .errors import AmbiguityError, TraceError
from .geometry import bounding_box, component_count, grid_oracle, trace_real_locus
from .polynomial import Poly, chebyshev_first_kind
from .report import ReportDocument, build_report, error_report
from .structure import pell_decompose
from .svgplot import render_svg
from .tracing import image_endpoints, merge_analytic_arcs, trace_arcs


def load_polynomial_text(text: str) -> tuple[Poly, str | None]:
    """Parse a polynomial input document (JSON or line-oriented).

    JSON: {"coeffs": [[re, im], ...], "label": "..."} with coefficients
    ascending.  Line format: one coefficient per line as `re` or `re im`,
    '#' comments allowed.  The leading coefficient must be nonzero and at
    least two coefficients are required.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"input is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "coeffs" not in doc:
            raise ValueError("input JSON must carry a 'coeffs' field")
        raw = doc["coeffs"]
        label = doc.get("label")
        coeffs = []
        for k, pair in enumerate(raw):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValueError(f"coeffs[{k}] must be a [re, im] pair")
            try:
                coeffs.append(complex(float(pair[0]), float(pair[1])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"coeffs[{k}] is not numeric: {pair!r}") from exc
    else:
        label = None
        coeffs = []
        for ln, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) not in (1, 2):
                raise ValueError(f"line {ln}: expected `re` or `re im`, got {body!r}")
            try:
                re = float(parts[0])
                im = float(parts[1]) if len(parts) == 2 else 0.0
            except ValueError as exc:
                raise ValueError(f"line {ln}: not numeric: {body!r}") from exc
            coeffs.append(complex(re, im))
    if len(coeffs) < 2:
        raise ValueError("coeffs: need at least two coefficients (degree >= 1)")
    if coeffs[-1] == 0:
        raise ValueError(f"coeffs[{len(coeffs) - 1}]: leading coefficient is zero")
    return Poly(tuple(coeffs)), label


def polynomial_input_json(T: Poly, label: str | None) -> str:
    doc = {"coeffs": [[c.real, c.imag] for c in T.coeffs]}
    if label is not None:
        doc["label"] = label
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _resolve_input(args) -> tuple[Poly, str | None]:
    if getattr(args, "chebyshev", None) is not None:
        n = args.chebyshev
        return chebyshev_first_kind(n), f"chebyshev degree {n}"
    if not args.input:
        raise ValueError("no input: give an input file or --chebyshev N")
    text = Path(args.input).read_text()
    return load_polynomial_text(text)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("input", nargs="?", help="polynomial input file (JSON or line format)")
    sub.add_argument("--chebyshev", type=int, metavar="N",
                     help="analyze the degree-N Chebyshev polynomial instead of a file")
    sub.add_argument("--tol", type=float, default=None,
                     help="membership tolerance (default: adaptive, echoed in reports)")
    sub.add_argument("--resolution", type=int, default=256,
                     help="grid resolution for the oracle and the real locus (default 256)")
    sub.add_argument("--samples", type=int, default=257,
                     help="samples per traced arc (default 257)")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for randomized validation (reserved; echoed only)")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp from SVG output")


def cmd_analyze(args) -> int:
    T, label = _resolve_input(args)
    try:
        analysis = component_count(T, tol=args.tol)
    except AmbiguityError as exc:
        doc = error_report(label, T.coeffs, str(exc),
                           tolerances={"membership": args.tol} if args.tol else {})
        print(doc.to_json())
        return 2
    doc = build_report(T, analysis, label)
    if args.with_oracle:
        oracle_count, _ = grid_oracle(T, args.resolution, tol=args.tol)
        doc.oracle_component_count = oracle_count
        doc.tolerances["oracle_resolution"] = args.resolution
    print(doc.to_json())
    return 0


def cmd_trace(args) -> int:
    T, label = _resolve_input(args)
    try:
        analysis = component_count(T, tol=args.tol)
        arcs, crossings = trace_arcs(T, samples_per_arc=args.samples)
    except AmbiguityError as exc:
        print(f"numerical ambiguity: {exc}", file=sys.stderr)
        return 2
    except TraceError as exc:
        print(f"tracing failed: {exc}", file=sys.stderr)
        return 3
    endpoints = image_endpoints(T)

    stem = Path(args.input).stem if args.input else f"chebyshev{args.chebyshev}"
    out_path = Path(args.output) if args.output else Path(f"{stem}.{args.format}")

    if args.format == "csv":
        rows = ["arc_id,t,re,im"]
        for i, arc in enumerate(arcs):
            for t, z in zip(arc.t_values, arc.points):
                rows.append(f"{i},{float(t)!r},{float(z.real)!r},{float(z.imag)!r}")
        out_path.write_text("\n".join(rows) + "\n")
    elif args.format == "json":
        doc = {
            "label": label,
            "endpoints": [
                {
                    "location": [e.location.real, e.location.imag],
                    "multiplicity": e.multiplicity,
                    "side": e.side,
                }
                for e in endpoints
            ],
            "arcs": [
                {
                    "start_endpoint": arc.start_endpoint,
                    "end_endpoint": arc.end_endpoint,
                    "passes_through": arc.passes_through,
                    "samples": [
                        [float(t), float(z.real), float(z.imag)]
                        for t, z in zip(arc.t_values, arc.points)
                    ],
                }
                for arc in arcs
            ],
            "crossings": [
                {
                    "location": [float(c.location.real), float(c.location.imag)],
                    "m": c.m,
                    "t": float(c.t),
                    "tangent_angles": [float(a) for a in c.tangent_angles],
                }
                for c in crossings
            ],
        }
        out_path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        merged = merge_analytic_arcs(arcs, endpoints)
        locus = (
            trace_real_locus(T, args.resolution) if args.with_real_locus else None
        )
        counts = {
            "analytic_arc_count": len(merged),
            "jordan_arc_count": analysis.ell,
            "component_count": analysis.component_count,
        }
        svg = render_svg(
            arcs=arcs,
            crossings=crossings,
            endpoints=endpoints,
            box=bounding_box(T),
            counts=counts,
            locus=locus,
            label=label,
            timestamp=not args.no_timestamp,
        )
        out_path.write_text(svg)
    print(str(out_path))
    return 0


def cmd_verify(args) -> int:
    T, label = _resolve_input(args)
    try:
        pell = pell_decompose(T)
    except AmbiguityError as exc:
        print(f"numerical ambiguity: {exc}", file=sys.stderr)
        return 2
    print(f"ell = {pell.ell}")
    print(f"nu = {pell.nu}")
    print(f"pell_residual = {pell.residual!r}")
    return 0 if pell.residual <= 1e-6 else 2


def cmd_examples(args) -> int:
    T, label = get_example(args.name)
    fname = args.output or (args.name.replace(":", "_") + ".json")
    Path(fname).write_text(polynomial_input_json(T, label))
    print(fname)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invimage",
        description="Geometry of the inverse image of [-1, 1] under a complex polynomial",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_analyze = subs.add_parser("analyze", help="full structural report as JSON")
    _add_common(p_analyze)
    p_analyze.add_argument("--with-oracle", action="store_true",
                           help="append the grid-oracle component count to the report")
    p_analyze.set_defaults(func=cmd_analyze)

    p_trace = subs.add_parser("trace", help="trace the arcs and write csv/json/svg")
    _add_common(p_trace)
    p_trace.add_argument("--format", choices=("csv", "json", "svg"), default="svg")
    p_trace.add_argument("--with-real-locus", action="store_true",
                         help="overlay the dotted level set Im T = 0 (svg only)")
    p_trace.add_argument("--output", help="output path (default: input stem + format)")
    p_trace.set_defaults(func=cmd_trace)

    p_verify = subs.add_parser("verify", help="check the Pell identity residual")
    _add_common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_examples = subs.add_parser("examples", help="write a bundled example input file")
    p_examples.add_argument("name", help=f"one of: {', '.join(example_names())}")
    p_examples.add_argument("--output", help="output path")
    p_examples.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except AmbiguityError as exc:
        print(f"numerical ambiguity: {exc}", file=sys.stderr)
        return 2
    except TraceError as exc:
        print(f"tracing failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
