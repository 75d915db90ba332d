import json
from fractions import Fraction

import pytest

from rsymwitt import cli


def _records(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, [json.loads(line) for line in out.out.splitlines()], out.err


def test_report_structure(capsys):
    code, recs, err = _records(capsys, ["search-identities", "--n", "1"])
    assert code == 0 and err == ""
    assert recs[0]["record"] == "config" and recs[0]["schema"] == cli.SCHEMA
    assert recs[-1] == {"record": "summary", "checks": 3, "matched": 3, "mismatched": [], "ok": True}
    check = recs[1]
    assert check["anchor"] == "claim:identity-space" and check["verdict"] == "nullity=3"
    assert set(check) == {"record", "name", "anchor", "verdict", "expected", "match", "payload"}


def test_timing_goes_to_stderr(capsys):
    code, recs, err = _records(capsys, ["deform", "osborn", "--timing"])
    assert code == 0
    assert "seconds" not in json.dumps(recs)
    assert err.strip().splitlines()[0].startswith("osborn/defect")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.ndjson"
    assert cli.main(["deform", "eps4", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text().splitlines()[-1])["ok"] is True


def test_mismatch_sets_exit_code(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"expected": [["novikov/*", "fails"]]}))
    code, recs, _ = _records(capsys, ["check", "novikov", "--manifest", str(manifest)])
    assert code == 1
    assert recs[-1]["mismatched"] == ["novikov/laurent/n=1"]


def test_unknown_name_has_no_expectation(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"expected": []}))
    code, recs, _ = _records(capsys, ["deform", "osborn", "--manifest", str(manifest)])
    assert code == 1 and recs[1]["expected"] is None


@pytest.mark.parametrize("argv", [
    ["verify-standard", "--window", "box:3:1"],
    ["verify-standard", "--window", "ball:2"],
    ["verify-standard", "--family", "divpow"],
    ["verify-standard", "--family", "divpow", "--p", "7", "--n", "2", "--m", "1"],
    ["verify-standard", "--family", "poly", "--window", "all"],
    ["search-identities", "--family", "poly", "--window", "box:5:5"],
])
def test_argument_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert capsys.readouterr().err.startswith("rsymwitt: ")


def test_window_parsing():
    assert cli.parse_window("deg:2") == ("deg", 2)
    assert cli.parse_window("box:-2:2") == ("box", -2, 2)
    with pytest.raises(ValueError):
        cli.parse_window("deg:-1")


def test_json_values():
    assert cli._jsonable(Fraction(3, 4)) == "3/4"
    assert cli._jsonable(Fraction(6, 3)) == "2"
    assert cli._jsonable({1: (Fraction(1, 2), None)}) == {"1": ["1/2", None]}


def test_manifest_first_match_wins():
    m = [["novikov/*/n=1", "holds"], ["novikov/*", "fails"]]
    assert cli.expected_verdict(m, "novikov/poly/n=1") == "holds"
    assert cli.expected_verdict(m, "novikov/poly/n=2") == "fails"
    assert cli.expected_verdict(m, "mixed/x") is None


def test_divided_powers_config_echo(capsys):
    code, recs, _ = _records(capsys, ["verify-standard", "--family", "divpow", "--p", "7", "--m", "1"])
    assert code == 0
    assert recs[0]["config"]["field"] == "fp:7" and recs[0]["config"]["m"] == [1]
    assert recs[1]["payload"]["mode"] == "exhaustive" and recs[1]["payload"]["samples"] == 343


def test_obstruction_report_flags_the_stated_condition(capsys):
    code, recs, _ = _records(capsys, ["deform", "obstruction", "--samples", "4"])
    recs = [r for r in recs if r["record"] == "check"]
    splits = {r["name"]: r["verdict"] for r in recs if r["name"].startswith("obstruction-split")}
    assert splits["obstruction-split/eps1eps4-eps2eps3"] == "exact"
    points = [r for r in recs if r["name"].startswith("obstruction/")]
    assert len(points) == 4
    assert all("computed_condition" in r["payload"] for r in points)
    assert code == (0 if splits["obstruction-split/eps1eps4+eps2eps3"] == "exact" and all(r["match"] for r in points) else 1)


def test_obstruction_grid_is_mixed():
    pts = cli.obstruction_grid(0, 20)
    assert len(set(pts)) == 20
    zero = [p for p in pts if p[0] * p[3] + p[1] * p[2] == 0]
    assert 0 < len(zero) < 20
