import json
from fractions import Fraction

import pytest

from lomse import cli, export, params
from lomse.params import LomseTriple, derive_params
from lomse.surd import Surd


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fmt_float_round_trips():
    for x in (0.1, 1 / 3, 1e-300, 11 * 11 ** 0.5 / 4):
        assert float(export.fmt_float(x)) == x


def test_jsonable_exact_values():
    j = export.to_jsonable({"q": Fraction(55, 6), "s": Surd(-3, Fraction(-1, 6), 1)})
    assert j["q"] == "55/6"
    assert j["s"]["exact"] == "-3 + sqrt(-1/6)"
    assert j["s"]["im"] == pytest.approx(6 ** -0.5, rel=1e-15)


def test_csv_round_trip():
    text = export.dumps_csv(["a", "b"], [[1, 0.1], [2, Fraction(1, 3)]], {"x": 1})
    header, rows, meta = export.read_csv(text)
    assert header == ["a", "b"]
    assert rows == [["1", "0.10000000000000001"], ["2", "1/3"]]
    assert meta["config_hash"] == export.config_hash({"x": 1})
    assert "\r" not in text


def test_classify_table(capsys):
    code, out, _ = run(capsys, "classify", "--n-max", "5", "--k-max", "6")
    assert code == 0
    header, rows, _ = export.read_csv(out)
    assert header == cli.CLASSIFY_HEADER
    assert rows[0] == ["3", "2", "2", "4", "5/4", "15/64", "1/16", "I"]
    assert [r[-1] for r in rows] == ["I", "II", "II", "I", "I", "II"]


def test_classify_empty_range(capsys):
    code, out, _ = run(capsys, "classify", "--n-max", "2", "--k-max", "4")
    assert code == 0
    assert export.read_csv(out)[1] == []


def test_solutions_csv(capsys):
    code, out, _ = run(capsys, "solutions", "3,2,4", "--m-max", "2")
    assert code == 0
    _, rows, _ = export.read_csv(out)
    assert [r[0] for r in rows] == ["1", "2"]
    assert float(rows[0][5]) == pytest.approx(1.73e-4, rel=0.01)


def test_solutions_type_i_note(capsys):
    code, out, err = run(capsys, "solutions", "3,2,2", "--m-max", "3")
    assert code == 0
    assert "Type I" in err
    assert len(export.read_csv(out)[1]) == 1


def test_jacobi_json(capsys):
    code, out, _ = run(capsys, "jacobi", "5,4,6", "--count", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == export.SCHEMA
    assert "config_hash" in doc


def test_portrait_files(tmp_path, capsys):
    code, _, _ = run(capsys, "portrait", "3,2,4", "--launch", "fixed", "--t-end", "5",
                     "--out-dir", str(tmp_path))
    assert code == 0
    data = (tmp_path / "portrait_3-2-4_0_fixed.csv").read_text()
    assert len(export.read_csv(data)[1]) == 2
    assert (tmp_path / "portrait_3-2-4_0_fixed.events.csv").exists()


def test_out_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    assert run(capsys, "classify", "--n-max", "3", "--k-max", "2", "-o", "t.csv")[0] == 0
    assert (tmp_path / "t.csv").exists()


@pytest.mark.parametrize("argv,code", [
    (["classify"], 1),
    (["bogus"], 1),
    (["solutions", "4,3,2"], 1),
    (["solutions", "3,2,4", "--m-max", "0"], 1),
    (["foliate", "3,2,4"], 1),
    (["portrait", "3,2,4", "--launch", "nonsense"], 1),
])
def test_exit_codes(capsys, argv, code):
    try:
        got = cli.main(argv)
    except SystemExit as exc:
        got = exc.code
    capsys.readouterr()
    assert got == code


def test_foliate_passes(capsys):
    code, out, _ = run(capsys, "foliate", "3,2,2")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_algebra(capsys):
    code, out, err = run(capsys, "verify", "algebra")
    assert code == 0
    assert "checks passed" in err
    assert all(r[3] == "pass" for r in export.read_csv(out)[1])


def test_corrupted_build_fails_verify(capsys, monkeypatch):
    monkeypatch.setattr(params, "_dyn_disc", lambda n, k: Fraction(1))
    code, out, _ = run(capsys, "verify", "algebra")
    assert code == 3
    assert "FAIL" in out


def test_deterministic_in_process(tmp_path, capsys):
    outputs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.json"
        assert cli.main(["solutions", "5,4,6", "--m-max", "2", "--format", "json",
                         "-o", str(path)]) == 0
        outputs.append(path.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1]


def test_config_hash_changes_with_config():
    P = derive_params(LomseTriple(3, 2, 4))
    h1 = export.config_hash({"triple": P.triple, "m": 1})
    h2 = export.config_hash({"triple": P.triple, "m": 2})
    assert h1 != h2 and len(h1) == 16
