import csv
import io
import json
import math
from pathlib import Path

import jsonschema
import pytest

from hilbert_tensor import cli
from hilbert_tensor.reports import (
    APPLY_CSV_HEADER,
    BOUND_CSV_HEADER,
    CONSTANTS_CSV_HEADER,
    SEARCH_CSV_HEADER,
    TRAJECTORY_CSV_HEADER,
    canonical,
)

SCHEMAS = Path(__file__).resolve().parents[1] / "schemas"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def test_apply_examples(capsys):
    code, out, _ = run(capsys, "apply", "--coeffs", "[1]", "--m", "2", "--K", "4")
    assert code == 0
    doc = json.loads(out)
    assert [c[0] for c in doc["coeffs"]] == pytest.approx([1, 0.5, 1 / 3, 0.25], rel=1e-15)
    code, out, _ = run(capsys, "apply", "--coeffs", "[0,1]", "--m", "2", "--K", "3")
    assert [c[0] for c in json.loads(out)["coeffs"]] == pytest.approx([0.5, 1 / 3, 0.25], rel=1e-15)


def test_apply_all_paths_from_file(capsys, tmp_path):
    src = tmp_path / "f.json"
    src.write_text(json.dumps([0.4, [-0.3, 0.2], 0.9, -0.1, 0.05]))
    code, out, _ = run(capsys, "apply", "--coeffs", str(src), "--m", "3", "--paths", "all", "--z", "0.5")
    assert code == 0
    pt = json.loads(out)["points"][0]
    assert set(pt["values"]) == {"series", "integral", "mobius"}
    assert pt["max_deviation"] < 1e-8


def test_apply_csv_header(capsys):
    code, out, _ = run(capsys, "apply", "--coeffs", "[1]", "--m", "2", "--K", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == APPLY_CSV_HEADER
    assert float(rows[2][2]) == 0.5


def test_norm_example(capsys):
    code, out, _ = run(capsys, "norm", "--space", "bergman", "--p", "2", "--coeffs", "[0,1]")
    assert code == 0
    assert json.loads(out)["norm"] == pytest.approx(0.70710678, abs=1e-8)
    code, out, _ = run(capsys, "norm", "--space", "hardy", "--p", "2", "--coeffs", "[1]")
    assert json.loads(out)["norm"] == pytest.approx(1.0, abs=1e-12)


def test_constants_example(capsys):
    code, out, _ = run(capsys, "constants", "--regime", "tensor_large_p", "--p", "4")
    assert code == 0
    (row,) = json.loads(out)["constants"]
    assert row["value"] == pytest.approx(math.pi, rel=1e-15)


def test_constants_table_csv(capsys):
    code, out, _ = run(capsys, "constants", "--m", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CONSTANTS_CSV_HEADER
    regimes = {r[1] for r in rows[1:]}
    assert {"matrix_lp", "tensor_large_p", "tensor_small_p", "fh_large_p", "fh_small_p"} <= regimes
    # only in-domain points appear in table mode
    assert all(float(r[2]) >= 12 for r in rows[1:] if r[1] == "fh_large_p")


def test_every_output_embeds_config_and_timestamp(capsys):
    code, out, _ = run(capsys, "norm", "--space", "bergman", "--p", "3", "--coeffs", "[1, 2]")
    doc = json.loads(out)
    assert doc["timestamp"]
    cfg = doc["config"]
    # defaults are resolved, not omitted
    assert cfg["radial_order"] == 64 and cfg["n_theta"] == 256 and cfg["p"] == 3.0


def test_verify_single_and_schema(capsys):
    code, out, _ = run(capsys, "verify", "--coeffs", "[1, 0.5]", "--p", "6", "--m", "3")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("bound_reports.schema.json"))
    assert doc["reports"][0]["holds"] is True


def test_verify_batch_keeps_input_order(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HTL_THREADS", "4")
    names = ["c.json", "a.json", "b.json", "d.json"]
    for i, n in enumerate(names):
        (tmp_path / n).write_text(json.dumps([1, 0.1 * i]))
    code, out, _ = run(capsys, "verify", "--dir", str(tmp_path), "--p", "4", "--m", "2")
    assert code == 0
    assert [r["source"] for r in json.loads(out)["reports"]] == sorted(names)
    monkeypatch.setenv("HTL_THREADS", "1")
    code, serial, _ = run(capsys, "verify", "--dir", str(tmp_path), "--p", "4", "--m", "2")
    a, b = json.loads(out), json.loads(serial)
    assert a["reports"] == b["reports"]


def test_verify_fh_csv(capsys):
    code, out, _ = run(capsys, "verify", "--coeffs", "[1, 1]", "--p", "12", "--m", "4", "--bound", "fh",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == BOUND_CSV_HEADER
    assert rows[1][1] == "fh" and rows[1][-2] == "True"


def test_slice_schema(capsys):
    code, out, _ = run(capsys, "slice", "--coeffs", "[1]", "--p", "4", "--m", "2", "--t", "0.25", "0.5")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("bound_reports.schema.json"))
    assert doc["reports"][1]["rhs"] == pytest.approx(2.0)


def test_search_deterministic_and_schema(capsys, tmp_path):
    traj = tmp_path / "traj.csv"
    argv = ["search", "--p", "4", "--m", "2", "--n", "3", "--seed", "7", "--budget", "60", "--restarts", "2"]
    code, first, _ = run(capsys, *argv, "--trajectory", str(traj))
    assert code == 0
    code, second, _ = run(capsys, *argv, "--trajectory", str(traj))
    assert canonical(first) == canonical(second)
    jsonschema.validate(json.loads(first), schema("search_result.schema.json"))
    rows = list(csv.reader(traj.open()))
    assert rows[0] == TRAJECTORY_CSV_HEADER and len(rows) > 1


def test_search_csv_header(capsys):
    code, out, _ = run(capsys, "search", "--p", "4", "--m", "2", "--n", "2", "--budget", "20", "--format", "csv")
    assert list(csv.reader(io.StringIO(out)))[0] == SEARCH_CSV_HEADER


def test_equivalence(capsys):
    code, out, _ = run(capsys, "equivalence", "--m", "3", "--count", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["n_points"] == 40 and doc["max_deviation"] < 1e-7


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "constants", "--regime", "matrix_lp", "--p", "2", "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["constants"][0]["value"] == pytest.approx(math.pi)


# --- exit codes -----------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["apply", "--coeffs", "[1, nope]", "--m", "2"],
    ["apply", "--coeffs", "[]", "--m", "2"],
    ["apply", "--coeffs", "/no/such/file.json", "--m", "2"],
    ["verify", "--p", "4", "--m", "2"],
])
def test_bad_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "bad input" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["apply", "--m", "2"])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [
    ["norm", "--space", "bergman", "--p", "0.5", "--coeffs", "[1]"],
    ["apply", "--coeffs", "[1]", "--m", "1"],
    ["apply", "--coeffs", "[1]", "--m", "2", "--paths", "integral", "--z", "1.5"],
    ["constants", "--regime", "tensor_large_p", "--p", "3"],
    ["verify", "--coeffs", "[1]", "--p", "2", "--m", "2"],
    ["verify", "--coeffs", "[1]", "--p", "12", "--m", "3", "--bound", "fh"],
    ["slice", "--coeffs", "[1]", "--p", "4", "--m", "2", "--t", "1.0"],
])
def test_domain_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and "domain error" in err


def test_anomaly_exit_code(capsys, monkeypatch):
    from hilbert_tensor import experiments

    monkeypatch.setattr(experiments, "bound_constant", lambda spec: 0.5)
    code, out, err = run(capsys, "search", "--p", "4", "--m", "2", "--n", "2", "--budget", "10")
    assert code == 4 and "anomaly" in err
    # the offending result is still emitted
    assert json.loads(out)["result"]["best_ratio"] > 0.5
    code, out, err = run(capsys, "verify", "--coeffs", "[1]", "--p", "4", "--m", "2")
    assert code == 4
    assert json.loads(out)["reports"][0]["holds"] is False


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("HTL_THREADS", "zero")
    code, _, _ = run(capsys, "verify", "--coeffs", "[1]", "--p", "4", "--m", "2")
    assert code == 2
