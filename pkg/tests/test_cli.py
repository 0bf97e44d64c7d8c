import json

from leibniz2 import io
from leibniz2.cli import main


def _run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def _fixture_names(fixtures_dir):
    return sorted(p.name for p in fixtures_dir.glob("*.alg"))


def test_every_fixture_exit_code(fixtures_dir, expected, capsys):
    assert set(_fixture_names(fixtures_dir)) == set(expected)
    for name, exp in expected.items():
        code, out, err = _run(capsys, "verify", fixtures_dir / name, "--format", "structured")
        assert code == exp["exit"], name
        if code == 2:
            assert exp["location"] in err
            continue
        rep = json.loads(out)
        assert rep["pass"] is (code == 0)
        if "check" in exp:
            chk = next(c for c in rep["checks"] if c["name"] == exp["check"])
            assert not chk["pass"]
            assert chk["failures"][0]["witness"] == exp["witness"], name


def test_text_output(fixtures_dir, capsys):
    code, out, _ = _run(capsys, "verify", fixtures_dir / "bad-chain.alg")
    assert code == 1
    assert "FAIL" in out and "(a)" in out


def test_out_file(fixtures_dir, tmp_path, capsys):
    target = tmp_path / "rep.json"
    code, out, _ = _run(capsys, "verify", fixtures_dir / "e4.alg", "--format", "structured", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["pass"] is True
    code, out, _ = _run(capsys, "report", target)
    assert code == 0 and "PASS" in out
    code, out2, _ = _run(capsys, "report", target, "--format", "structured")
    assert json.loads(out2) == json.loads(target.read_text())


def test_report_of_failure_exits_one(fixtures_dir, tmp_path, capsys):
    target = tmp_path / "rep.json"
    _run(capsys, "verify", fixtures_dir / "bad-leibniz.alg", "--format", "structured", "--out", target)
    assert _run(capsys, "report", target)[0] == 1


def test_kind_flag(fixtures_dir, capsys):
    code, _, err = _run(capsys, "verify", fixtures_dir / "e4.alg", "--kind", "quadruple")
    assert code == 2 and "$.kind" in err


def test_convert_round_trip(fixtures_dir, tmp_path, capsys):
    dg = tmp_path / "dg.alg"
    back = tmp_path / "back.alg"
    assert _run(capsys, "convert", fixtures_dir / "e4.alg", "--direction", "crossed-to-dg", "--out", dg)[0] == 0
    assert _run(capsys, "verify", dg)[0] == 0
    assert _run(capsys, "convert", dg, "--direction", "dg-to-crossed", "--out", back)[0] == 0
    e4 = io.load(fixtures_dir / "e4.alg")
    assert back.read_text() == io.dumps(e4.kind, e4.obj)


def test_convert_quadruple_round_trip(fixtures_dir, tmp_path, capsys):
    sk = tmp_path / "sk.alg"
    q = tmp_path / "q.alg"
    assert _run(capsys, "convert", fixtures_dir / "quadruple.alg", "--direction", "quadruple-to-skeletal",
                "--out", sk)[0] == 0
    assert _run(capsys, "verify", sk)[0] == 0
    assert _run(capsys, "convert", sk, "--direction", "skeletal-to-quadruple", "--out", q)[0] == 0
    orig = io.load(fixtures_dir / "quadruple.alg")
    assert q.read_text() == io.dumps(orig.kind, orig.obj)


def test_convert_preconditions(fixtures_dir, capsys):
    code, _, err = _run(capsys, "convert", fixtures_dir / "skeletal.alg", "--direction", "dg-to-crossed")
    assert code == 1 and "precondition" in err
    code, _, err = _run(capsys, "convert", fixtures_dir / "quadruple-bad.alg",
                        "--direction", "quadruple-to-skeletal")
    assert code == 1 and "cocycle" in err
    code, _, err = _run(capsys, "convert", fixtures_dir / "e4.alg", "--direction", "dg-to-crossed")
    assert code == 2


def test_construct_omni(fixtures_dir, tmp_path, capsys):
    target = tmp_path / "omni.alg"
    code, out, _ = _run(capsys, "construct", "omni", fixtures_dir / "omni-f2.alg", "--out", target)
    assert code == 0 and "PASS" in out
    ref = io.load(fixtures_dir / "omni-derived.alg")
    assert target.read_text() == io.dumps(ref.kind, ref.obj)
    code, out, err = _run(capsys, "construct", "omni", fixtures_dir / "omni-scalar.alg")
    assert code == 0
    assert io.loads(out).kind == "sh-leibniz" and "PASS" in err


def test_construct_leibniz2_and_lie2(fixtures_dir, tmp_path, capsys):
    code, out, _ = _run(capsys, "construct", "leibniz2", fixtures_dir / "tca-r4.alg")
    assert code == 0
    target = tmp_path / "lie2.json"
    code, _, _ = _run(capsys, "construct", "lie2", fixtures_dir / "poisson-r5.alg", "--out", target)
    assert code == 0
    assert io.report_loads(target.read_text()).passed
    code, _, err = _run(capsys, "construct", "lie2", fixtures_dir / "poisson-bad.alg")
    assert code == 1 and "precondition" in err


def test_seed_is_deterministic(fixtures_dir, capsys):
    args = ["verify", fixtures_dir / "tca-r3.alg", "--seed", 7, "--format", "structured"]
    a = json.loads(_run(capsys, *args)[1])
    b = json.loads(_run(capsys, *args)[1])
    a.pop("seconds", None), b.pop("seconds", None)
    assert a == b and a["pass"]
    plain = json.loads(_run(capsys, "verify", fixtures_dir / "tca-r3.alg", "--format", "structured")[1])
    assert sum(c["checked"] for c in a["checks"]) > sum(c["checked"] for c in plain["checks"])


def test_family_flag(fixtures_dir, tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"sections": [{"label": "w", "vf": [[[3], "x1*x2"]], "form": [[[1], "x3"]]}],
                               "forms": [{"label": "g", "form": [[[2], "x1"]]}]}))
    code, out, _ = _run(capsys, "verify", fixtures_dir / "tca-mutated.alg", "--family", fam)
    assert code == 1
    code, _, _ = _run(capsys, "verify", fixtures_dir / "poisson-r3-h.alg", "--family", fam)
    assert code == 0
    fam.write_text("{")
    assert _run(capsys, "verify", fixtures_dir / "tca-r3.alg", "--family", fam)[0] == 2


def test_mutations_from_file(tmp_path, capsys):
    base = {"format": 1, "kind": "exact-tca", "n": 3, "h": [[[1, 2, 3], "x3"]]}
    for mutation, code in [("drop-lie", 1), ("drop-interior", 1), ("drop-h", 0)]:
        f = tmp_path / f"{mutation}.alg"
        f.write_text(json.dumps({**base, "mutation": mutation}))
        assert _run(capsys, "verify", f)[0] == code, mutation
