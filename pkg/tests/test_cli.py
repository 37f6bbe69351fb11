import csv
import json

import pytest

from torusfill.chains import Chain, boundary, dump_chain
from torusfill.cli import RunConfig, main
from torusfill.constructions import default_pair_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def circle_boundary(tmp_path):
    path = tmp_path / "z.json"
    dump_chain(boundary(Chain.simplex([0, 1, 2]) + Chain.simplex([0, 2, 3])), path)
    return path


# -- verify-steps ------------------------------------------------------------------

def test_verify_steps_green(capsys):
    code, out, _ = run(capsys, "verify-steps", "--k", "2")
    assert code == 0
    assert "all" in out.splitlines()[-1] and "FAIL" not in out


def test_verify_steps_reads_cache(capsys):
    code, _, _ = run(capsys, "verify-steps", "--k", "1", "--cache", str(default_pair_path()))
    assert code == 0


@pytest.mark.parametrize("tamper, step", [("tau:2", "step 1"), ("s:2:3", "step 2"),
                                          ("beta", "step 3"), ("c", "constants")])
def test_verify_steps_tampered(capsys, tamper, step):
    code, out, _ = run(capsys, "verify-steps", "--k", "2", "--tamper", tamper)
    assert code == 1
    assert out.splitlines()[-1].startswith("FAILED") and step in out.splitlines()[-1]


def test_tampered_cache_fails(capsys, tmp_path):
    data = json.loads(default_pair_path().read_text())
    data["alpha"]["terms"][0]["coeff"] *= -1
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify-steps", "--k", "1", "--cache", str(path))
    assert code == 1 and "step 3" in out.splitlines()[-1]


def test_regenerate_needs_cache(capsys):
    with pytest.raises(SystemExit):
        main(["verify-steps", "--regenerate"])


def test_regenerate_writes_cache(capsys, tmp_path):
    path = tmp_path / "pair.json"
    code, _, _ = run(capsys, "fv-bounds", "--k", "1", "--regenerate", "--cache", str(path),
                     "--out", str(tmp_path / "fv.csv"))
    assert code == 0 and json.loads(path.read_text())["alpha"]


# -- fill --------------------------------------------------------------------------

def test_fill_modes_agree(capsys, tmp_path, circle_boundary):
    values = {}
    for mode in ("int", "real", "oracle"):
        out = tmp_path / f"{mode}.json"
        code, _, _ = run(capsys, "fill", str(circle_boundary), "--model", "1,1,1,3",
                         "--mode", mode, "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["provenance"]["command"] == "fill"
        values[mode] = data["value"]
    assert values["oracle"] == values["int"] == [2, 1]
    num, den = values["real"]
    assert num <= 2 * den


def test_fill_zero_chain(capsys, tmp_path):
    path = tmp_path / "zero.json"
    dump_chain(Chain.zero(1, 1), path)
    code, out, _ = run(capsys, "fill", str(path), "--model", "1,1,1,2")
    assert code == 0 and json.loads(out)["value"] == [0, 1]


def test_fill_infeasible(capsys, tmp_path):
    path = tmp_path / "loop.json"
    dump_chain(Chain.simplex([0, 1]), path)
    code, _, err = run(capsys, "fill", str(path), "--model", "1,1,1,3")
    assert code == 3 and "infeasible" in err


def test_fill_budget(capsys, circle_boundary):
    code, _, _ = run(capsys, "fill", str(circle_boundary), "--model", "1,1,1,3",
                     "--mode", "oracle", "--budget", "1")
    assert code == 4
    code, _, err = run(capsys, "fill", str(circle_boundary), "--model", "1,1,1,3",
                       "--max-universe", "5")
    assert code == 4 and "budget" in err


def test_fill_shape_mismatch(capsys, circle_boundary):
    code, _, _ = run(capsys, "fill", str(circle_boundary), "--model", "2,1,1,1")
    assert code == 2


def test_bad_caps_are_usage_errors(capsys, circle_boundary):
    with pytest.raises(SystemExit) as err:
        main(["fill", str(circle_boundary), "--model", "1,1,1,3", "--node-cap", "0"])
    assert err.value.code == 2
    with pytest.raises(ValueError):
        RunConfig(max_universe=-1)


# -- bounds, classification, growth -----------------------------------------------------

def test_fv_bounds(capsys, tmp_path):
    code, _, err = run(capsys, "fv-bounds", "--k", "4", "--isv", "--out-dir", str(tmp_path),
                       "--out", "fv.csv")
    assert code == 0
    lines = (tmp_path / "fv.csv").read_text().splitlines()
    assert lines[0].startswith("# tool: torusfill")
    rows = list(csv.DictReader(l for l in lines if not l.startswith("#")))
    assert [int(r["norm_Wk"]) for r in rows] == [9, 15, 21, 27]
    assert "k=1 isv <= 15" in err


@pytest.mark.parametrize("matrix, text", [
    ("1,1,0,1", "reducible twist; fv_ℤ = 0"),
    ("2,1,1,1", "Anosov; fv_ℤ > 0"),
    ("0,-1,1,0", "periodic of order 4; fv_ℤ = 0"),
])
def test_classify(capsys, matrix, text):
    code, out, _ = run(capsys, "classify", "--matrix", matrix)
    assert code == 0 and out.strip() == text


def test_classify_rejects_bad_matrix(capsys):
    code, _, err = run(capsys, "classify", "--matrix", "1,1,1,1")
    assert code == 2 and "error" in err


def test_growth(capsys, tmp_path):
    out = tmp_path / "g.csv"
    assert main(["growth", "--matrix", "2,1,1,1", "--power", "15", "--out", str(out)]) == 0
    body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    rows = list(csv.DictReader(body))
    assert len(rows) == 15 and all(int(r["ratio_num"]) > 0 for r in rows)


def test_outputs_are_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        main(["delta-table", "--matrix", "2,1,1,1", "--power", "3", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
    assert not list(tmp_path.glob(".torusfill-*"))


# -- layered -----------------------------------------------------------------------

def test_layered_check(capsys, tmp_path):
    out = tmp_path / "tri.json"
    code, _, err = run(capsys, "layered", "--matrix", "2,1,1,1", "--power", "3", "--check",
                       "--out", str(out))
    assert code == 0
    assert "H1 = Z + Z/4 + Z/4" in err
    data = json.loads(out.read_text())
    assert data["tetrahedra"] == 24 and data["provenance"]["power"] == 3


def test_layered_single_power(capsys):
    code, out, err = run(capsys, "layered", "--matrix", "2,1,1,1", "--check")
    assert code == 0 and "H1 = Z (expected Z)" in err
    assert json.loads(out)["tetrahedra"] == 8


def test_layered_periodic_is_usage_error(capsys):
    code, _, _ = run(capsys, "layered", "--matrix", "0,-1,1,0")
    assert code == 2
