import json

import numpy as np
import pytest

from invimage.cli import load_polynomial_text, main, polynomial_input_json
from invimage.corpus import get_example
from invimage.report import ReportDocument
from invimage.svgplot import read_metadata


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_example(tmp_path, name):
    """Write the corpus example named with a colon (e.g. example4i:0.4)."""
    T, label = get_example(name)
    path = tmp_path / (name.replace(":", "_") + ".json")
    path.write_text(polynomial_input_json(T, label))
    return path


def test_analyze_example1(tmp_path, capsys):
    path = write_example(tmp_path, "example1")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["nu"] == 6
    assert doc["ell"] == 5
    assert doc["component_count"] == 2
    assert doc["connected"] is False
    assert doc["pell_residual"] <= 1e-10
    assert doc["tolerances"]["membership"] > 0


def test_analyze_chebyshev_flag(capsys):
    code, out, _ = run(capsys, "analyze", "--chebyshev", "7")
    assert code == 0
    doc = json.loads(out)
    assert (doc["nu"], doc["ell"], doc["component_count"]) == (1, 1, 1)


def test_analyze_cusp_two_arc_field(tmp_path, capsys):
    path = write_example(tmp_path, "cusp-cubic")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["nu"] == 3 and doc["ell"] == 2 and doc["component_count"] == 1
    assert doc["two_arc"]["analytic_arc_count"] == 3


def test_analyze_is_deterministic(tmp_path, capsys):
    path = write_example(tmp_path, "example4ii:2")
    reference = None
    for _ in range(2):
        code, out, _ = run(capsys, "analyze", str(path))
        assert code == 0
        if reference is None:
            reference = out
        assert out == reference


def test_report_roundtrip(tmp_path, capsys):
    path = write_example(tmp_path, "example4i:0.4")
    code, out, _ = run(capsys, "analyze", str(path))
    doc = ReportDocument.from_json(out)
    assert doc.to_json() + "\n" == out


def test_analyze_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"coeffs": [[1, 0], [0, 0]]}')  # leading zero
    code, out, err = run(capsys, "analyze", str(bad))
    assert code == 1
    assert "coeffs[1]" in err


def test_analyze_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "/nonexistent/path.json")
    assert code == 1
    assert "input error" in err


def test_analyze_ambiguity_exit_code(tmp_path, capsys):
    # borderline critical value: |T(0)| sits exactly on the tolerance band edge
    from invimage.geometry import default_membership_tol
    from invimage.polynomial import Poly

    tol = default_membership_tol(Poly((-1.0, 0.0, 2.0)))
    a = float(np.sqrt(tol / (2.0 + tol)))
    T = Poly((-(a * a + 1) / (1 - a * a), 0.0, 2.0 / (1 - a * a)))
    path = tmp_path / "borderline.json"
    path.write_text(polynomial_input_json(T, "borderline"))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 2
    doc = json.loads(out)
    assert "borderline critical value" in doc["error"]


def test_line_format_input(tmp_path, capsys):
    path = tmp_path / "poly.txt"
    path.write_text("# 2z^2 - 1\n-1\n0\n2\n")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    assert json.loads(out)["ell"] == 1


def test_load_polynomial_text_json():
    T, label = load_polynomial_text('{"coeffs": [[0, 1], [2, 0]], "label": "x"}')
    assert T.coeffs == (1j, 2)
    assert label == "x"
    with pytest.raises(ValueError, match="at least two"):
        load_polynomial_text('{"coeffs": [[1, 0]]}')


def test_trace_csv(tmp_path, capsys):
    out_file = tmp_path / "cheb2.csv"
    code, out, _ = run(
        capsys, "trace", "--chebyshev", "2", "--format", "csv",
        "--output", str(out_file),
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "arc_id,t,re,im"
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert set(data[:, 0]) == {0.0, 1.0}
    # all samples on the real segment [-1, 1]
    assert np.max(np.abs(data[:, 3])) <= 1e-6
    assert np.max(np.abs(data[:, 2])) <= 1.0 + 1e-9


def test_trace_csv_deterministic(tmp_path, capsys):
    texts = []
    for run_idx in range(2):
        out_file = tmp_path / f"run{run_idx}.csv"
        code, _, _ = run(
            capsys, "trace", "--chebyshev", "5", "--format", "csv",
            "--output", str(out_file),
        )
        assert code == 0
        texts.append(out_file.read_text())
    assert texts[0] == texts[1]


def test_trace_svg_metadata_example1(tmp_path, capsys):
    path = write_example(tmp_path, "example1")
    out_file = tmp_path / "fig1.svg"
    code, _, _ = run(
        capsys, "trace", str(path), "--format", "svg", "--with-real-locus",
        "--no-timestamp", "--output", str(out_file),
    )
    assert code == 0
    meta = read_metadata(out_file.read_text())
    assert meta["arc_count"] == 9
    assert meta["analytic_arc_count"] == 6
    assert meta["jordan_arc_count"] == 5
    assert meta["component_count"] == 2
    assert meta["marker_disk_count"] == 3   # zeros of T - 1: 0, 1, 2
    assert meta["marker_circle_count"] == 9  # simple zeros of T + 1
    assert meta["crossing_count"] == 1


def test_trace_svg_deterministic_without_timestamp(tmp_path, capsys):
    path = write_example(tmp_path, "example4ii:1")
    texts = []
    for run_idx in range(2):
        out_file = tmp_path / f"fig{run_idx}.svg"
        code, _, _ = run(
            capsys, "trace", str(path), "--format", "svg", "--no-timestamp",
            "--output", str(out_file),
        )
        assert code == 0
        texts.append(out_file.read_text())
    assert texts[0] == texts[1]


def test_trace_json(tmp_path, capsys):
    path = write_example(tmp_path, "cusp-cubic")
    out_file = tmp_path / "cusp.json"
    code, _, _ = run(
        capsys, "trace", str(path), "--format", "json", "--output", str(out_file)
    )
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert len(doc["arcs"]) == 3
    assert len(doc["endpoints"]) == 4


def test_verify_examples(tmp_path, capsys):
    path = write_example(tmp_path, "example4i:0.4")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert "ell = 2" in out and "nu = 2" in out
    residual = float(out.split("pell_residual = ")[1].strip())
    assert residual <= 1e-12

    path = write_example(tmp_path, "example4ii:2")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    residual = float(out.split("pell_residual = ")[1].strip())
    assert residual <= 1e-12


def test_verify_rejects_corrupt_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"coeffs": [[1, 0], [1, 0], [0, 0]]}')
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 1
    assert "coeffs[2]" in err


def test_examples_roundtrip(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "examples", "example4i:0.4")
    assert code == 0
    fname = out.strip()
    assert fname == "example4i_0.4.json"
    doc = json.loads((tmp_path / fname).read_text())
    assert len(doc["coeffs"]) == 3

    code, out1, _ = run(capsys, "analyze", fname)
    assert code == 0
    code, out2, _ = run(capsys, "analyze", fname)
    assert out1 == out2
    assert json.loads(out1)["ell"] == 2


def test_examples_unknown_name(capsys):
    code, _, err = run(capsys, "examples", "unknown-thing")
    assert code == 1
    assert "valid names" in err
    assert "example1" in err


def test_examples_chebyshev(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "examples", "chebyshev:3")
    assert code == 0
    doc = json.loads((tmp_path / out.strip()).read_text())
    assert doc["coeffs"] == [[0.0, 0.0], [-3.0, 0.0], [0.0, 0.0], [4.0, 0.0]]


def test_analyze_with_oracle(tmp_path, capsys):
    path = write_example(tmp_path, "example4i:0.4")
    code, out, _ = run(capsys, "analyze", str(path), "--with-oracle", "--resolution", "128")
    assert code == 0
    doc = json.loads(out)
    assert doc["oracle_component_count"] == doc["component_count"] == 2
