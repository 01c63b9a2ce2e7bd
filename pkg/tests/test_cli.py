import io
import json

import jsonschema
import pytest

from kazhdan.cli import load_schema, main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv)
    report = json.loads(text)
    jsonschema.validate(report, load_schema())
    return code, report


def write_matrix(tmp_path, rows, name="m.txt"):
    path = tmp_path / name
    path.write_text(f"{len(rows)} {len(rows[0])}\n" + "\n".join(" ".join(map(str, r)) for r in rows) + "\n")
    return str(path)


def test_constants_value_and_envelope():
    code, rep = run_json(["constants", "--n", "100"])
    assert code == 0 and rep["ok"]
    assert rep["command"] == "constants"
    assert rep["schema_version"] == "1.0"
    assert rep["result"]["kazhdan_lower_Aprime"] == pytest.approx(7.8125e-4)


def test_constants_sweep_csv():
    code, text = run(["constants", "--sweep", "3:12", "--p", "5"])
    assert code == 0
    lines = text.strip().splitlines()
    assert len(lines) == 11
    assert lines[0].split(",")[0] == "n"


def test_constants_chains_and_consistency():
    code, rep = run_json(["constants", "--verify-chains", "--cap", "200"])
    assert code == 0 and all(c["ok"] for c in rep["result"]["chains"])
    code, rep = run_json(["constants", "--consistency", "3:300"])
    assert code == 0
    assert [f["name"] for f in rep["result"]["flags"]] == [
        "proof_line_50_vs_theorem_A_64",
        "remark_33_317_vs_Aprime_42_860",
    ]


def test_constants_needs_a_mode():
    assert run(["constants"])[0] == 2
    assert run(["constants", "--sweep", "3-9"])[0] == 2


def test_factor_from_file_and_expand(tmp_path):
    path = write_matrix(tmp_path, [[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    code, rep = run_json(["factor", "--in", path, "--expand"])
    assert code == 0 and rep["result"]["verified"]
    word = rep["result"]["word"]
    m = [[int(r == c) for c in range(3)] for r in range(3)]
    for i, j, s in word:
        # right-multiplying by I + s*e_ij adds s * column i to column j
        for r in range(3):
            m[r][j] += s * m[r][i]
    assert m == [[2, 1, 0], [1, 1, 0], [0, 0, 1]]


def test_factor_identity_is_empty(tmp_path):
    path = write_matrix(tmp_path, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    code, rep = run_json(["factor", "--in", path])
    assert code == 0
    assert rep["result"]["factors"] == []


def test_factor_random_is_seeded(monkeypatch):
    a = run(["factor", "--random", "5:20", "--seed", "3"])
    b = run(["factor", "--random", "5:20", "--seed", "3"])
    assert a == b and a[0] == 0
    monkeypatch.setenv("KAZH_SEED", "7")
    code, rep = run_json(["factor", "--random", "4:10"])
    assert rep["seed"] == 7
    monkeypatch.setenv("KAZH_SEED", "seven")
    assert run(["factor", "--random", "4:10"])[0] == 2


def test_factor_rejects_bad_input(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("3 3\n1 0 0\n0 1 0\n")
    assert run(["factor", "--in", str(path)])[0] == 2
    assert "line 4" in capsys.readouterr().err
    not_sl = write_matrix(tmp_path, [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "det2.txt")
    assert run(["factor", "--in", not_sl])[0] == 2
    assert run(["factor", "--in", str(tmp_path / "missing.txt")])[0] == 2


def test_reduce_small_system(tmp_path):
    path = write_matrix(tmp_path, [[6, 10, 15]])
    code, rep = run_json(["reduce", "--in", path])
    assert code == 0 and rep["result"]["verified"]
    assert rep["result"]["op_count"] <= 4


def test_reduce_over_prime_field(tmp_path):
    path = write_matrix(tmp_path, [[3, 5, 1, 0], [1, 4, 2, 6]])
    code, rep = run_json(["reduce", "--in", path, "--policy", "Fp-2k", "--modulus", "7"])
    assert code == 0 and rep["result"]["op_count"] <= 3


def test_verify_torus_and_table(tmp_path):
    table = tmp_path / "table.json"
    code, rep = run_json(["verify-torus", "--grid", "512", "--emit-table", str(table)])
    assert code == 0
    assert rep["result"]["partition_violations"] == 0
    assert not any(rep["result"]["identity_violations"].values())
    assert json.loads(table.read_text())
    code, rep = run_json(["verify-torus", "--grid", "8", "--p", "3"])
    assert code == 0 and rep["result"]["bp_cp_violations"] == 0


def test_spectral_and_mix(tmp_path):
    dump = tmp_path / "spec.csv"
    code, rep = run_json(["spectral", "--n", "3", "--p", "2", "--dump-spectrum", str(dump)])
    assert code == 0
    assert rep["result"]["order"] == 168
    assert rep["result"]["bound_checks"]["lower"]["pass"]
    assert len(dump.read_text().splitlines()) == 169
    code, rep = run_json(["mix", "--n", "3", "--p", "2"])
    assert code == 0 and rep["result"]["steps"] > 0


def test_spectral_cap_is_usage_error():
    assert run(["spectral", "--n", "3", "--p", "5", "--cap", "1000"])[0] == 2


def test_report_quick_is_deterministic():
    a = run(["report", "--quick"])
    b = run(["report", "--quick"])
    assert a == b
    assert a[0] == 0
    rep = json.loads(a[1])
    jsonschema.validate(rep, load_schema())
    assert len(rep["result"]["criteria"]) == 9


def test_report_table():
    code, text = run(["report", "--quick", "--format", "table"])
    assert code == 0
    assert text.count("[PASS]") == 9


def test_usage_errors():
    assert run(["bogus"])[0] == 2
    assert run(["constants", "--n", "10", "--nope"])[0] == 2
    assert run(["verify-torus"])[0] == 2
