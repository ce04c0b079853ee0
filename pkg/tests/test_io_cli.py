import json

import pytest

from ncsiegel import cli, fixtures, io
from ncsiegel.endo import EndoTuple
from ncsiegel.errors import ParseError
from ncsiegel.rep import ReprSpec
from ncsiegel.scalars import to_capped
from ncsiegel.series import NCSeries


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in [("cubic", fixtures.cubic(8)), ("pair", fixtures.resonant_compliant(6)),
                      ("rho", fixtures.upper_triangular_rep())]:
        p = tmp_path / f"{name}.json"
        p.write_text(io.dumps(obj.to_json()))
        paths[name] = str(p)
    return paths


def run(argv, capsys):
    status = cli.main(argv)
    out = capsys.readouterr()
    return status, (json.loads(out.out) if out.out else None), out.err


# formats ---------------------------------------------------------------------------


def test_round_trips():
    f = fixtures.resonant_compliant(5)
    assert io.loads(io.dumps(f.to_json()), io.endo_from_json) == f
    g = NCSeries(2, 4, 5, {(1, 2): to_capped(7, 5, 8), (2,): 3})
    assert io.loads(io.dumps(g.to_json()), io.series_from_json) == g
    rho = fixtures.non_equivariant_rep()
    back = io.loads(io.dumps(rho.to_json()), io.repr_from_json)
    assert isinstance(back, ReprSpec) and back.to_json() == rho.to_json()


def test_bad_word_letter_has_path_and_offset():
    text = '{"n": 2, "D": 3, "ell": 5, "coeffs": [{"word": [1], "c": 1}, {"word": [2, 9], "c": 2}]}'
    with pytest.raises(ParseError) as info:
        io.loads(text, io.series_from_json)
    err = info.value
    assert err.path == "$.coeffs[1].word[1]"
    assert text[err.offset] == "9"
    assert err.exit_status == 3


@pytest.mark.parametrize("text, path", [
    ('{"n": 1, "D": 2, "ell": 4, "coeffs": []}', "$.ell"),
    ('{"n": 1, "D": 2, "ell": 5, "coeffs": [{"word": [1, 1, 1], "c": 1}]}', "$.coeffs[0].word"),
    ('{"n": 1, "D": 2, "ell": 5, "coeffs": [{"word": [1], "c": "x"}]}', "$.coeffs[0].c"),
    ('{"n": 1, "D": 2, "ell": 5}', "$"),
])
def test_validation_paths(text, path):
    with pytest.raises(ParseError) as info:
        io.loads(text, io.series_from_json)
    assert info.value.path == path and info.value.offset is not None


def test_invalid_json_offset():
    with pytest.raises(ParseError) as info:
        io.loads('{"n": 1,, }', io.series_from_json)
    assert info.value.offset == 8


def test_endo_constant_term_is_a_parse_error():
    text = io.dumps({"components": [NCSeries(1, 2, 5, {(): 1}).to_json()]})
    with pytest.raises(ParseError):
        io.loads(text, io.endo_from_json)


# command line ---------------------------------------------------------------------------


def test_linearize_end_to_end(files, capsys):
    argv = ["linearize", "--in", files["cubic"], "--ell", "5", "--radius-log", "2",
            "--c", "1/10", "--mu", "1"]
    status, report, _ = run(argv, capsys)
    assert status == 0 and report["ok"]
    assert report["residual"]["log_ell"] == "inf"
    assert report["schedule"]["B"] >= 4 and report["schedule"]["steps"]
    psi = io.endo_from_json(report["Psi"])
    assert isinstance(psi, EndoTuple)
    # byte-identical on a second run
    cli.main(argv)
    assert capsys.readouterr().out == io.dumps(report)


def test_exit_codes(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"components": [{"n": 1, "D": 2, "ell": 5, "coeffs": [{"word": [3], "c": 1}]}]}')
    status, _, err = run(["norm", "--in", str(bad)], capsys)
    assert status == 3 and json.loads(err)["path"] == "$.components[0].coeffs[0].word[0]"
    status, _, _ = run(["siegel-check", "--lambda", "126", "--c", "1", "--mu", "1", "--nmax", "20"],
                       capsys)
    assert status == 2
    status, _, err = run(["linearize", "--in", files["cubic"], "--radius-log", "2", "--c", "1/10",
                          "--mu", "1", "--max-steps", "1"], capsys)
    assert status == 5 and json.loads(err)["error"] == "schedule_divergence"
    status, _, _ = run(["norm", "--in", files["cubic"], "--radius-log", "nope"], capsys)
    assert status == 3
    status, _, _ = run(["frobnicate"], capsys)
    assert status == 3


def test_other_commands(files, tmp_path, capsys):
    assert run(["norm", "--in", files["cubic"], "--radius-log", "1"], capsys)[1]["norm"]["log_ell"] == "1"
    status, out, _ = run(["compose", "--in", files["pair"], "--with", files["pair"]], capsys)
    assert status == 0 and out["kind"] == "endo"
    assert run(["jet", "--in", files["cubic"], "--order", "3"], capsys)[1]["block_triangular"]
    assert run(["semisimple", "--in", files["pair"], "--order", "3"], capsys)[1]["semisimple"]
    assert run(["homological", "--in", files["cubic"]], capsys)[0] == 0
    status, out, _ = run(["siegel-step", "--in", files["cubic"], "--radius-log", "3", "--eta", "3/4",
                          "--c", "1/10", "--mu", "1"], capsys)
    assert status == 0 and out["record"]["eta"] == "3/4"
    ec = tmp_path / "ec.json"
    status, out, _ = run(["eigencoords", "--in", files["pair"], "--radius-log", "2", "--c", "1/50",
                          "--mu", "1", "--out", str(ec)], capsys)
    assert status == 0 and out is None and json.loads(ec.read_text())["relation_holds"]
    status, out, _ = run(["unipotence-check", "--in", str(ec), "--rep", files["rho"],
                          "--eigen-weights=-1,-2", "--conj-weights=-1,0,1"], capsys)
    assert status == 0 and out["verdict"] == "unipotent"
    status, out, _ = run(["siegel-fit", "--lambda", "6", "--nmax", "1000"], capsys)
    assert out["params"]["mu"] == "1"
    inv = tmp_path / "psi.json"
    inv.write_text(io.dumps(EndoTuple([NCSeries(1, 5, 5, {(1,): 1, (1, 1): 5})]).to_json()))
    status, out, _ = run(["invert", "--in", str(inv), "--radius-log", "1"], capsys)
    assert status == 0 and out["two_sided"]


def test_capped_backend(files, capsys):
    status, out, _ = run(["linearize", "--in", files["cubic"], "--radius-log", "2", "--c", "1/10",
                          "--mu", "1", "--backend", "capped", "--precision", "30"], capsys)
    assert status == 0 and out["precision"]["backend"] == "capped"


def test_report_dir_and_alias(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path / "reports"))
    status = cli.siegel_check_main(["--lambda", "6/1", "--mu", "1", "--c", "1/10", "--nmax", "500"])
    out = capsys.readouterr().out
    assert status == 0
    assert (tmp_path / "reports" / "siegel-check.json").read_text() == out
    assert json.loads(out)["verdict"] == "holds"


def test_selftest_command(capsys):
    status, out, err = run(["selftest", "--scale", "0.05", "--seed", "3"], capsys)
    assert status == 0 and out["seed"] == 3 and "all checks passed" in err
