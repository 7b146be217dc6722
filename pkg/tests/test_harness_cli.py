import json
import re
import subprocess
import sys

import numpy as np
import pytest

from tripotent.characterizations import POWER_SIDE
from tripotent.cli import main
from tripotent.core import read_matrix, write_matrix
from tripotent.generators import GenSpec, generate, paper_examples
from tripotent.harness import Cell, SuiteConfig, enumerate_cells, run_suite, search_counterexample


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, A in {
        "diag": np.diag([1.0, -1.0, 0.0]),
        "example": paper_examples()["average-star"],
        "three": generate(GenSpec(5, "ThreeOP", seed=4)),
        "rect": np.ones((2, 3)),
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        write_matrix(paths[name], A)
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text("{not json")
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# -- classify ------------------------------------------------------------------

def test_classify_table(capsys, files):
    code, out, _ = run(capsys, "classify", files["diag"])
    assert code == 0
    assert re.search(r"ThreeOP\s+true", out) and "(1, 1, 1)" in out


def test_classify_json_example(capsys, files):
    code, out, _ = run(capsys, "classify", files["example"], "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["classes"]["ThreeOP"]["member"] is False
    assert d["classes"]["N"]["member"] and d["classes"]["EP"]["member"]
    assert "signature" not in d


def test_classify_errors(capsys, files, tmp_path):
    assert run(capsys, "classify", files["bad"])[0] == 2
    assert run(capsys, "classify", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "classify", files["rect"])[0] == 3


# -- pinv / decompose -------------------------------------------------------------

def test_pinv_json_round_trip(capsys, files, tmp_path):
    code, out, _ = run(capsys, "pinv", files["example"], "--format", "json")
    assert code == 0
    p = tmp_path / "pinv.json"
    p.write_text(out)
    assert np.linalg.norm(read_matrix(p) - paper_examples()["average-star-pinv"]) < 1e-12
    assert run(capsys, "pinv", files["rect"])[0] == 0
    assert run(capsys, "pinv", files["bad"])[0] == 2


def test_decompose(capsys, files):
    code, out, _ = run(capsys, "decompose", files["three"], "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["unitarity_residual"] < 1e-10 and d["reconstruction_residual"] < 1e-10
    assert run(capsys, "decompose", files["rect"])[0] == 3
    assert run(capsys, "decompose", files["three"])[0] == 0


# -- check ---------------------------------------------------------------------

def test_check_average_star(capsys, files):
    code, out, _ = run(capsys, "check", files["example"], "--theorem", "average", "--variant", "toStar",
                       "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["condition_holds"] and not d["is_three_op"] and d["exclusion_flag"] is False


def test_check_power_family(capsys, files):
    code, out, _ = run(capsys, "check", files["three"], "--theorem", "power-family", "--variant", "b",
                       "--s", 2, "--t", 0, "--format", "json")
    assert code == 0 and json.loads(out)["condition_holds"]
    code, _, err = run(capsys, "check", files["three"], "--theorem", "power-family", "--variant", "b",
                       "--s", 1, "--t", 2)
    assert code == 5 and "no claim" in err


def test_check_inconsistent_exit_code(capsys, tmp_path):
    p = tmp_path / "two.json"
    write_matrix(p, np.diag([2.0]))
    code, out, _ = run(capsys, "check", p, "--theorem", "linear-family", "--variant", "f", "--format", "json")
    assert code == 4
    assert json.loads(out)["witness"] is not None


def test_check_bad_selection(capsys, files):
    assert run(capsys, "check", files["three"], "--theorem", "nope")[0] == 2
    assert run(capsys, "check", files["three"], "--theorem", "linear-family", "--variant", "z")[0] == 2
    assert run(capsys, "check", files["rect"], "--theorem", "structural")[0] == 3
    assert run(capsys, "check", files["bad"], "--theorem", "structural")[0] == 2


def test_check_tol_flag(capsys, files):
    code, out, _ = run(capsys, "check", files["three"], "--theorem", "canonical-form", "--tol", "1e-3",
                       "--format", "json")
    assert code == 0 and json.loads(out)["condition_holds"]


# -- generate ------------------------------------------------------------------

def test_generate_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--n", 5, "--label", "ThreeOP", "--signature", "2,2,1", "--seed", 3)
    assert code == 0
    p = tmp_path / "g.json"
    p.write_text(out)
    A = read_matrix(p)
    assert np.array_equal(A, generate(GenSpec(5, "ThreeOP", seed=3, signature=(2, 2, 1))))
    code, out, _ = run(capsys, "classify", p, "--format", "json")
    assert json.loads(out)["signature"] == [2, 2, 1]


def test_generate_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("TRIPOTENT_SEED", "17")
    _, out, _ = run(capsys, "generate", "--n", 3, "--label", "H")
    _, again, _ = run(capsys, "generate", "--n", 3, "--label", "H", "--seed", 17)
    assert out == again
    monkeypatch.setenv("TRIPOTENT_SEED", "abc")
    assert run(capsys, "generate", "--n", 3, "--label", "H")[0] == 2


def test_generate_errors(capsys):
    assert run(capsys, "generate", "--n", 3, "--label", "ThreeOP", "--signature", "1,1")[0] == 2
    assert run(capsys, "generate", "--n", 3, "--label", "nope")[0] == 2
    assert run(capsys, "generate", "--n", 1, "--label", "tripotent-nonhermitian")[0] == 2
    assert run(capsys, "generate")[0] == 2


# -- suite and search ----------------------------------------------------------

def test_enumerate_cells_respects_side_conditions():
    cells = enumerate_cells(("power-family",))
    assert Cell("power-family", "b", (("s", 1), ("t", 2))) not in cells
    assert Cell("power-family", "b", (("s", 2), ("t", 0))) in cells
    assert all(POWER_SIDE[c.variant](c.params[0][1], c.params[1][1]) for c in cells)
    # variant (g) excludes s = -t rather than s = t
    assert Cell("power-family", "g", (("s", 2), ("t", 2))) in cells


def test_suite_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(sizes=())
    with pytest.raises(ValueError):
        SuiteConfig(trials_per_cell=0)


def test_suite_average_star_expected_exception():
    cfg = SuiteConfig(sizes=(2, 3), trials_per_cell=3, theorems=("average",),
                      families=("ThreeOP", "normal-unit-modulus-spectrum"))
    rep = run_suite(cfg)
    assert rep.ok
    for st in rep.cells.values():
        assert st.total == 3
    # the lattice spectrum hits +-i/sqrt3 often enough to produce at least one exclusion cell
    big = run_suite(SuiteConfig(sizes=(1,), trials_per_cell=200, theorems=("average",),
                                families=("normal-unit-modulus-spectrum",)))
    assert big.cells[("average/toStar", "normal-unit-modulus-spectrum", 1)].expected_exception > 0
    assert big.ok


def test_suite_reproducible():
    cfg = SuiteConfig(sizes=(1, 2, 3), trials_per_cell=1, seed=5)
    assert run_suite(cfg).grid() == run_suite(cfg).grid()


def test_suite_counts_infeasible_cells():
    rep = run_suite(SuiteConfig(sizes=(1,), trials_per_cell=2, theorems=("structural",)))
    assert ("tripotent-nonhermitian", 1) in rep.infeasible
    assert rep.ok


def test_suite_reports_known_failures():
    rep = run_suite(SuiteConfig(sizes=(2,), trials_per_cell=2, theorems=("linear-family",),
                                families=("hermitian-nontripotent",)))
    assert not rep.ok
    assert ("linear-family/f", "hermitian-nontripotent", 2) in rep.failures
    assert rep.failures[("linear-family/f", "hermitian-nontripotent", 2)].witnesses


def test_suite_cli(capsys, tmp_path):
    conf = tmp_path / "suite.json"
    conf.write_text(json.dumps({"sizes": [2], "trials_per_cell": 1, "theorems": ["average", "structural"]}))
    code, out, _ = run(capsys, "suite", "--config", conf, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["ok"]
    conf.write_text(json.dumps({"sizes": [2], "trials_per_cell": 1, "theorems": ["linear-family"]}))
    code, out, _ = run(capsys, "suite", "--config", conf)
    assert code == 4 and "FAIL linear-family/f" in out
    conf.write_text(json.dumps({"sizes": [], "trials_per_cell": 1}))
    assert run(capsys, "suite", "--config", conf)[0] == 2


def test_search_examples():
    assert search_counterexample("average/toStar", "normal-unit-modulus-spectrum", 0) is None
    found = search_counterexample("average/toStar", "normal-unit-modulus-spectrum", 10_000, seed=1)
    assert found is not None
    A, rep = found
    lam = np.linalg.eigvals(A)
    assert np.min(np.abs(np.abs(lam.imag) - 1 / np.sqrt(3))) < 1e-6
    assert rep.condition_holds and not rep.is_three_op
    assert search_counterexample("average/toA", "all", 3000, seed=2) is None


def test_search_cli(capsys):
    code, out, _ = run(capsys, "search", "--identity", "average/toStar", "--ensemble",
                       "normal-unit-modulus-spectrum", "--budget", 5000, "--seed", 0, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["found"]
    code, out, _ = run(capsys, "search", "--identity", "average/toStar", "--ensemble",
                       "normal-unit-modulus-spectrum", "--budget", 0)
    assert code == 0 and "no counterexample" in out


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "tripotent", "classify", str(files["rect"])],
                          capture_output=True, text=True)
    assert proc.returncode == 3
