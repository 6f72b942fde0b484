import csv
import io
import json
import math
import subprocess
import sys

import pytest

from mgslca.cli import main
from mgslca.dataio import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)["rows"]


def test_validate_fixture(capsys):
    assert run(capsys, "validate")[0] == 0
    assert run(capsys, "validate", str(fixture_path()))[0] == 0


def test_validate_dangling_ref(capsys, tmp_path):
    doc = json.loads(fixture_path().read_text())
    doc["cells"][0]["components"][0]["material"] = "nothing"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "DANGLING_REF" in err


def test_validate_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", str(tmp_path / "absent.json"))[0] == 2


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["impacts", "--format", "xml"])
    assert e.value.code == 2


def test_unknown_cell_exits_1(capsys):
    code, _, err = run(capsys, "impacts", "--cell", "NaS-X")
    assert code == 1
    assert "UNKNOWN_CELL" in err


def test_impacts_five_rows_and_deterministic(capsys):
    first = run(capsys, "impacts", "--cell", "MgS-BL")
    second = run(capsys, "impacts", "--cell", "MgS-BL")
    assert first == second
    rows = as_json(capsys, "impacts", "--cell", "MgS-BL")
    assert [r["category"] for r in rows] == ["GWP", "FDP", "ODP", "MDP", "CED"]
    assert math.isclose(rows[-1]["value"], 1583.0, rel_tol=1e-9)


def test_csv_and_json_hold_the_same_values(capsys):
    for cmd in (["impacts"], ["contrib"], ["evolve", "--evolution", "evo2"], ["compare"], ["scenario-sweep"]):
        rows_json = as_json(capsys, *cmd)
        code, out, _ = run(capsys, *cmd, "--format", "csv")
        assert code == 0
        assert "\r" not in out
        rows_csv = list(csv.DictReader(io.StringIO(out)))
        assert len(rows_csv) == len(rows_json)
        for a, b in zip(rows_csv, rows_json):
            for k, v in b.items():
                if isinstance(v, bool) or v is None:
                    continue
                if isinstance(v, (int, float)):
                    assert float(a[k]) == v
                else:
                    assert a[k] == str(v)


def test_cn_mix_only_moves_electricity_categories(capsys):
    base = {r["category"]: r["value"] for r in as_json(capsys, "impacts", "--cell", "MgS-Evo2")}
    cn = {r["category"]: r["value"] for r in as_json(capsys, "impacts", "--cell", "MgS-Evo2", "--scenario", "cn-mix")}
    assert cn["MDP"] == base["MDP"]
    assert all(cn[k] != base[k] for k in ("GWP", "FDP", "ODP", "CED"))


def test_contrib_shares_and_bms_hot_spot(capsys):
    rows = as_json(capsys, "contrib", "--cell", "MgS-Evo2")
    by_cat = {}
    for r in rows:
        by_cat.setdefault(r["category"], []).append(r)
    for cat, rs in by_cat.items():
        assert math.fsum(r["share_pct"] for r in rs) == pytest.approx(100.0, abs=1e-4)
    assert max(by_cat["MDP"], key=lambda r: r["share_pct"])["group"] == "BMS"
    groups = [r["group"] for r in by_cat["GWP"]]
    assert groups == ["anode", "cathode", "separator", "electrolyte", "housing", "cell manufacture energy", "pack housing", "BMS"]


def test_contrib_single_group(capsys):
    rows = as_json(capsys, "contrib", "--single-group", "battery")
    assert {r["group"] for r in rows} == {"battery"}
    assert all(r["share_pct"] == pytest.approx(100.0) for r in rows)


def test_evolve_evo2(capsys):
    rows = {r["item"]: r["value"] for r in as_json(capsys, "evolve", "--evolution", "evo2")}
    assert rows["separator"] == pytest.approx(29.4, abs=0.05)
    assert rows["electrolyte"] == pytest.approx(451.7, abs=0.05)
    assert rows["housing"] == pytest.approx(44.1, abs=0.05)
    assert rows["cell_energy_density"] == pytest.approx(259.8, abs=0.05)


def test_evolve_from_flags(capsys):
    rows = {
        r["item"]: r["value"]
        for r in as_json(
            capsys, "evolve", "--cell", "MgS-BL", "--target", "housing=0.03",
            *[a for r in ("anode", "cathode_active", "binder", "conductive_additive", "cathode_collector", "separator", "electrolyte") for a in ("--fixed", r)],
        )
    }
    assert rows["housing"] == pytest.approx(114.6, abs=0.05)


def test_anode(capsys):
    rows = as_json(capsys, "anode")
    total = next(r for r in rows if r["item"] == "optimized_anode_mass")
    # 421 * 1.67 / 2.205 + 8.8e-4 * 74 * 1.738e3
    assert total["value"] == pytest.approx(421 * 1.67 / 2.205 + 113.17856, rel=1e-12)
    assert abs(total["value"] - 432.0) <= 1.0


def test_breakeven(capsys):
    code, out, _ = run(capsys, "breakeven", "1583", "4.059", "--format", "csv")
    assert code == 0
    assert "390" in out.splitlines()[1].split(",")


def test_breakeven_negative_return_exits_1(capsys):
    code, _, err = run(capsys, "breakeven", "1583", "0")
    assert code == 1
    assert "NONPOSITIVE_RETURN" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.csv"
    assert run(capsys, "impacts", "--format", "csv", "--out", str(target))[0] == 0
    assert target.read_bytes().count(b"\n") == 6
    assert run(capsys, "impacts", "--out", str(tmp_path / "no" / "dir" / "r.csv"))[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "mgslca", "breakeven", "100", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "100" in out.stdout
