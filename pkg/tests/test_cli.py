import json

from click.testing import CliRunner

from logvvmf.cli import main

runner = CliRunner()


def run(args, stdin=None):
    return runner.invoke(main, args, input=stdin, catch_exceptions=False)


def test_gen_c_classify_pipeline():
    r = run(["gen", "C", "--p", "3"])
    assert r.exit_code == 0
    form = r.output
    assert json.loads(form)["k"] == -2
    r = run(["classify"], stdin=form)
    assert r.exit_code == 0
    assert json.loads(r.output)["verdict"] == "Entire"


def test_gen_eisenstein_classify_and_probe():
    r = run(["gen", "eisenstein", "--weight", "4"])
    fx = r.output
    assert r.exit_code == 0
    r = run(["classify"], stdin=fx)
    assert json.loads(r.output)["verdict"] == "NaturalBoundary"
    r = run(["probe", "--gamma", "0,-1,1,0", "--nmax", "200"], stdin=fx)
    assert r.exit_code == 0
    assert abs(json.loads(r.output)["slope"] - 4) < 0.05


def test_check_relations_exit_codes():
    rep = run(["gen", "sigma", "--p", "3"]).output
    r = run(["check", "relations"], stdin=rep)
    assert r.exit_code == 0 and json.loads(r.output)["ok"]
    bad = json.dumps({"S": [["1"]], "T": [["2"]]})
    r = run(["check", "relations"], stdin=bad)
    assert r.exit_code == 1


def test_check_funceq():
    form = run(["gen", "C", "--p", "4"]).output
    r = run(["check", "funceq", "--count", "5", "--seed", "0"], stdin=form)
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["ok"] and out["residual"] == 0.0


def test_check_bol():
    phi = json.dumps({"kind": "poly", "coeffs": ["1", "2", "1/3"]})
    r = run(["check", "bol", "--gamma", "2,1,1,1", "-M", "4"], stdin=phi)
    assert r.exit_code == 0 and json.loads(r.output)["residual"] == 0.0


def test_check_translation():
    blocks = json.dumps([{
        "mu": "1/3", "m": 2,
        "h": [{"mu": "1/3", "nu": 0, "coeffs": [[1, 0]], "exact": True},
              {"mu": "1/3", "nu": 0, "coeffs": [[0.5, 0]], "exact": True}]}])
    r = run(["check", "translation", "--tau", "0.2+1.4i"], stdin=blocks)
    assert r.exit_code == 0 and json.loads(r.output)["ok"]


def test_intertwine_pipeline():
    r1 = json.loads(run(["gen", "sigma", "--p", "2"]).output)
    r2 = json.loads(run(["gen", "sym-power", "--p", "2"]).output)
    r = run(["intertwine"], stdin=json.dumps({"rep1": r1, "rep2": r2}))
    assert r.exit_code == 0 and json.loads(r.output)["found"]


def test_malformed_json_exits_2():
    r = run(["classify"], stdin="{not json")
    assert r.exit_code == 2
    assert "malformed JSON" in r.output


def test_missing_field_exits_2():
    r = run(["classify"], stdin=json.dumps({"k": 0}))
    assert r.exit_code == 2
    assert "form" in r.output


def test_bad_gamma_flag_exits_2():
    form = run(["gen", "C", "--p", "2"]).output
    r = run(["probe", "--gamma", "1,2,3"], stdin=form)
    assert r.exit_code == 2


def test_pretty_flag():
    r = run(["--pretty", "gen", "sigma", "--p", "1"])
    assert "\n  " in r.output


def test_seeded_funceq_deterministic():
    form = run(["gen", "C", "--p", "2"]).output
    out1 = run(["check", "funceq", "--count", "7", "--seed", "3"], stdin=form).output
    out2 = run(["check", "funceq", "--count", "7", "--seed", "3"], stdin=form).output
    assert out1 == out2
