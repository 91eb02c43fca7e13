import csv
import json

import pytest

from symrack.catalog import module_by_name, rack_by_name
from symrack.cli import main
from symrack.ext import FactorSet


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_validate_catalog_rack(capsys):
    code, rep = run(capsys, "validate", "unknot-sq")
    assert code == 0 and rep["ok"] and rep["results"]["valid"]
    assert rep["inputs"]["target"] == "name:unknot-sq"
    assert set(rep) == {"command", "version", "inputs", "results", "ok", "lines", "timing"}


def test_validate_corrupted_rack_file(tmp_path, capsys):
    obj = rack_by_name("trivial-2").to_json()
    obj.pop("inv_op")
    obj["op"][0][1] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, rep = run(capsys, "validate", str(path))
    assert code == 1
    assert rep["inputs"]["target"].startswith("sha256:")
    assert "bijectivity" in json.dumps(rep["results"])


def test_stored_inverse_table_is_cross_checked(tmp_path, capsys):
    obj = rack_by_name("trivial-2").to_json()
    obj["inv_op"][0][1] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, rep = run(capsys, "validate", str(path))
    assert code == 1
    assert "inverse" in json.dumps(rep["results"])


def test_validate_module_with_a_broken_triple(tmp_path, capsys):
    M = module_by_name("order4-Z4", rack_by_name("unknot-sq"))
    obj = M.to_json()
    obj["psi"]["0,1"] = [[1]]
    path = tmp_path / "mod.json"
    path.write_text(json.dumps(obj))
    code, rep = run(capsys, "validate", str(path))
    assert code == 1
    axioms = {v["axiom"] for v in rep["results"]["violations"]["violations"]}
    assert "M7" in axioms


def test_cohomology_command(capsys):
    code, rep = run(capsys, "cohomology", "--rack", "unknot-sq", "--coeff", "Z/2", "--degree", "2",
                    "--variant", "sr")
    assert code == 0 and rep["results"]["invariant_factors"] == [2]
    code, rep = run(capsys, "cohomology", "--rack", "dihedral-3", "--coeff", "Z", "--degree", "1",
                    "--homology")
    assert code == 0 and rep["results"]["invariant_factors"] == [2]


def test_cohomology_emits_the_complex(tmp_path, capsys):
    path = tmp_path / "cx.json"
    code, _ = run(capsys, "cohomology", "--rack", "unknot-sq", "--module", "order4-Z4", "--degree", "2",
                  "--emit-complex", str(path))
    assert code == 0
    assert json.loads(path.read_text())


def test_h2ext_with_oracle(capsys):
    code, rep = run(capsys, "h2ext", "--rack", "trivial-2-swap", "--coeff", "Z/2", "--variant", "sr",
                    "--oracle")
    res = rep["results"]
    assert code == 0 and res["invariant_factors"] == [2]
    assert (res["cocycles"], res["coboundaries"]) == (2, 1)
    assert res["brute_force"]["invariant_factors"] == [2]
    code, rep = run(capsys, "ext", "h2", "--rack", "trivial-2-swap", "--coeff", "Z/2")
    assert rep["results"]["invariant_factors"] == []


def test_ext_split(tmp_path, capsys):
    X = rack_by_name("trivial-2-swap")
    M = module_by_name("trivial-Z2", X)
    ones = [[(1,), (1,)], [(1,), (1,)]]
    path = tmp_path / "sigma.json"
    path.write_text(json.dumps(FactorSet(M, ones).to_json()))
    code, rep = run(capsys, "ext", "split", "--sigma", str(path), "--variant", "sr")
    assert code == 0 and rep["results"]["valid"] and rep["results"]["split"] is False
    code, rep = run(capsys, "ext", "split", "--sigma", str(path), "--variant", "sq")
    assert code == 1 and not rep["results"]["valid"]


def test_group_commands(capsys):
    code, rep = run(capsys, "group", "show", "--rack", "unknot-sq")
    assert code == 0 and rep["results"]["abelianization"] == [0]
    assert rep["results"]["tietze"] == {"generators": [0], "relators": []}
    code, rep = run(capsys, "group", "h1", "--rack", "unknot-sq", "--coeff", "Z/3")
    assert rep["results"]["invariant_factors"] == [3]
    code, rep = run(capsys, "verify-iso", "--rack", "unknot-sq", "--coeff", "Z/2")
    assert code == 0 and rep["results"]["round_trip_ok"]


def test_verify_iso_finding_gives_exit_one(capsys):
    code, rep = run(capsys, "group", "verify-iso", "--rack", "conj-S3", "--coeff", "Z/3")
    assert code == 1 and not rep["results"]["equal"]
    code, rep = run(capsys, "group", "verify-iso", "--rack", "conj-S3", "--coeff", "Z/3",
                    "--coefficients", "functions")
    assert code == 0


def test_census_csv(tmp_path, capsys):
    path = tmp_path / "census.csv"
    code, rep = run(capsys, "census", "--max-n", "2", "--coeff", "Z/2", "--degrees", "2", "--csv", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == len(rep["results"]["rows"]) == 3
    assert [r["factors"] for r in rows] == ["", "2 2", ""]


def test_suite_single_criterion(capsys):
    code, rep = run(capsys, "suite", "--only", "6", "--quiet")
    assert code == 0 and rep["ok"]
    assert len(rep["lines"]) == 1 and "PASS" in rep["lines"][0]


def test_suite_detects_an_injected_sign_error(capsys):
    code, rep = run(capsys, "suite", "--only", "1", "--inject", "sign", "--quiet")
    assert code == 1 and not rep["ok"]
    assert "FAIL" in rep["lines"][0]


def test_output_file(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, rep = run(capsys, "--out", str(path), "validate", "dihedral-3")
    assert code == 0 and rep is None
    assert json.loads(path.read_text())["results"]["valid"]


@pytest.mark.parametrize("argv,code", [
    (["validate", "no-such-rack"], 2),
    (["cohomology", "--rack", "unknot-sq", "--coeff", "Z/2", "--degree", "-1"], 2),
    (["cohomology", "--rack", "unknot-sq", "--coeff", "Z/2", "--degree", "9"], 3),
    (["cohomology", "--rack", "permrack-2-swap", "--coeff", "Z/2", "--degree", "2", "--variant", "sq"], 1),
    (["h2ext", "--rack", "unknot-sq", "--coeff", "Q"], 2),
    (["nonsense"], 2),
    (["ext", "split", "--sigma", "/nonexistent.json"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    capsys.readouterr()
