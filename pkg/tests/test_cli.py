import csv
import io
import json
import math
import subprocess
import sys

import pytest

from blaschke_dyn import blaschke as B
from blaschke_dyn import cli, serialize
from blaschke_dyn.verify import SuiteResult


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _write_fbp(path, f):
    path.write_text(serialize.dumps(serialize.envelope("fbp", product=f)))
    return str(path)


def test_cheby_three_real_zeros(capsys):
    code, out, _ = run(["cheby", "--n", "3", "--t", "0.4"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "blaschke-dyn/1" and doc["kind"] == "cheby"
    zeros = [serialize.decode_complex(z) for z in doc["product"]["zeros"]]
    assert len(zeros) == 3
    assert all(abs(z.imag) < 1e-12 and abs(z) < 1 for z in zeros)


def test_height_of_one_half(capsys):
    code, out, _ = run(["height", "--point", "1/2"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["canonical_estimate"] - math.log(2)) < 1e-12


def test_verify_nesting_passes(capsys):
    code, out, err = run(["verify", "--suite", "nesting", "--t", "0.5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["suites"][0]["max_deviation"] < 1e-8
    assert "PASS" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    def failing(*args, **kwargs):
        return [SuiteResult("nesting", False, 1.0, 1e-8)]

    monkeypatch.setattr(cli, "run_suites", failing)
    code, out, _ = run(["verify", "--suite", "nesting"], capsys)
    assert code == 1 and json.loads(out)["passed"] is False


@pytest.mark.parametrize("argv", [
    ["ellrat", "--n", "3", "--tau", "0,-1"],
    ["ellrat", "--n", "3", "--tau", "nonsense"],
    ["decompose", "--input", "/nonexistent/f.json"],
    ["orbit", "--map", "q^2", "--point", "1/2"],
    ["orbit", "--point", "1//2"],
    ["pair", "--case", "iii", "--m", "2", "--n", "4", "--t", "0.3"],
    ["ritt", "--move", "power", "--k", "2", "--r", "4"],
    ["monodromy", "--input", "/nonexistent/f.json", "--emit", "csv"],
])
def test_input_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_argparse_rejects_nonpositive(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["cheby", "--n", "0", "--t", "0.4"])
    assert exc.value.code == 2


def test_growth_cap_exit_3(capsys):
    code, _, err = run(["orbit", "--point", "1/3", "--steps", "40", "--bit-cap", "1000"], capsys)
    assert code == 3 and "numerical failure" in err


def test_csv_without_form_is_input_error(capsys):
    code, _, _ = run(["ellrat", "--n", "2", "--tau", "0,1", "--emit", "csv"], capsys)
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["cheby", "--n", "4", "--t", "0.3"],
    ["ritt", "--move", "cheby", "--p", "2", "--q", "3", "--t", "0.4"],
    ["pair", "--case", "v", "--a", "0.2", "--b", "0.3"],
    ["intersect", "--point", "1/2", "--point2", "1/2", "--steps", "8"],
    ["verify", "--suite", "ritt", "--draws", "3", "--seed", "7"],
])
def test_byte_identical_output(argv, capsys):
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second and first


def test_emitted_products_round_trip(capsys):
    code, out, _ = run(["ritt", "--move", "power", "--k", "3", "--r", "1", "--a", "0.3,-0.2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["equal"]
    for side in ("lhs", "rhs"):
        f = serialize.fbp_from_json(doc[side])
        assert all(abs(a) < 1 for a in f.zeros) and abs(abs(f.rho) - 1) < 1e-12
        assert B.equals_fbp(f, serialize.fbp_from_json(json.loads(serialize.dumps(f))), 0.0)


def test_compose_decompose_monodromy_via_files(tmp_path, capsys):
    a = _write_fbp(tmp_path / "a.json", B.power_map(2))
    b = _write_fbp(tmp_path / "b.json", B.make_fbp(1.0, [0.3 - 0.1j, -0.2j, 0.0]))
    out_path = tmp_path / "c.json"
    code, out, _ = run(["compose", "--input", a, "--input", b, "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    c = serialize.load_fbp(out_path)
    assert c.degree == 6
    want = B.compose(B.power_map(2), B.make_fbp(1.0, [0.3 - 0.1j, -0.2j, 0.0]))
    assert B.equals_fbp(c, want, 1e-10)

    code, out, _ = run(["monodromy", "--input", str(out_path)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["transitive"] and doc["degree"] == 6
    assert 3 in doc["degree_lattice"]

    code, out, _ = run(["decompose", "--input", str(out_path)], capsys)
    assert code == 0 and json.loads(out)["degree"] == 6


def test_compose_needs_two_inputs(tmp_path, capsys):
    a = _write_fbp(tmp_path / "a.json", B.power_map(2))
    code, _, _ = run(["compose", "--input", a], capsys)
    assert code == 2


def test_orbit_csv(capsys):
    code, out, _ = run(["orbit", "--point", "i", "--steps", "3", "--emit", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows == [["index", "point"], ["0", "i"], ["1", "-1"], ["2", "1"], ["3", "1"]]


def test_intersect_example(capsys):
    code, out, _ = run(["intersect", "--point", "1/2", "--point2", "1/2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["hits"] == [{"i": 0, "j": 0, "point": "1/2"}]


def test_ellrat_critical_values(capsys):
    code, out, _ = run(["ellrat", "--n", "3", "--tau", "0,1", "--critvals"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["critical_values"]) == 4


def test_help_documents_csv_columns():
    res = subprocess.run([sys.executable, "-m", "blaschke_dyn", "--help"],
                         capture_output=True, text=True, check=True)
    assert "CSV columns" in res.stdout and "intersect" in res.stdout
