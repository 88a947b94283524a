import json
from pathlib import Path

import jsonschema
import pytest

from baker_kit import cli
from baker_kit.codec import decode_ball, encode_ball, fraction_to_str
from baker_kit.instances import InstanceError, InstanceSpec, evaluate, parse_keyvalue
from baker_kit.numerics import Ball
from baker_kit.reference import ref
from baker_kit.report import ReportDocument, iter_balls, render_text, report_schema

INSTANCES = Path(__file__).resolve().parents[1] / "src" / "baker_kit" / "data" / "instances"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, report_schema())
    return code, doc


@pytest.fixture(scope="module")
def prove_doc(tmp_path_factory):
    path = tmp_path_factory.mktemp("cert") / "cert.json"
    code = cli.main(["prove", "--format", "json", "--out", str(path)])
    return code, path


def test_prove(prove_doc):
    code, path = prove_doc
    assert code == 0 and path.exists()
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, report_schema())
    assert len(doc["body"]["solutions"]) == 18
    assert doc["body"]["verdict"] is True
    assert "timings" in doc and "timings" not in doc["body"]


def test_prove_round_trip(prove_doc):
    _, path = prove_doc
    text = path.read_text()
    doc = ReportDocument.from_json(text)
    assert doc.to_json() == text
    assert ReportDocument.from_dict(doc.to_dict()) == doc
    for where, ball in iter_balls(doc.body):
        assert decode_ball(encode_ball(ball)) == ball, where


def test_prove_body_is_byte_identical(prove_doc, tmp_path):
    _, path = prove_doc
    again = tmp_path / "again.json"
    assert cli.main(["prove", "--format", "json", "--out", str(again)]) == 0
    a = ReportDocument.from_json(path.read_text())
    b = ReportDocument.from_json(again.read_text())
    assert a.body_json() == b.body_json()


def test_prove_low_precision_exit_1(capsys):
    code, doc = run_json(capsys, "prove", "--precision", "32", "--precision-cap", "32")
    assert code == 1 and doc["body"]["status"] == "FAILED"


def test_prove_text(capsys):
    code, out, _ = run(capsys, "prove")
    assert code == 0 and "distinct values: 1, 2, 3, 4, 6, 9, 13" in out


def test_search(capsys):
    code, doc = run_json(capsys, "search", "--m-max", "438", "--n-max", "86", "--k-max", "174")
    assert code == 0 and doc["body"]["distinct_values"] == ["1", "2", "3", "4", "6", "9", "13"]
    code, doc = run_json(capsys, "search", "--m-max", "438", "--n-max", "86", "--k-max", "174", "--squares-only")
    assert sorted(set(doc["body"]["values"]), key=int) == ["1", "4", "9"]
    code, doc = run_json(capsys, "search", "--m-max", "1", "--n-max", "1", "--k-max", "1")
    assert doc["body"]["solutions"] == [[1, 1, 1]]


def test_search_both_orders(capsys):
    _, doc = run_json(capsys, "search", "--m-max", "9", "--n-max", "7", "--k-max", "7", "--both-orders")
    assert [9, 7, 1] in doc["body"]["solutions"]


@pytest.mark.parametrize("argv", [
    ["search", "--m-max", "0", "--n-max", "1", "--k-max", "1"],
    ["search", "--m-max", "-4", "--n-max", "1", "--k-max", "1"],
    ["prove", "--precision", "0"],
    ["prove", "--precision", "512", "--precision-cap", "256"],
    ["cf", "--value", "tau", "--terms", "0"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    assert cli.main(argv) == 2


def test_cf_tau(capsys):
    code, doc = run_json(capsys, "cf", "--value", "tau", "--terms", "73")
    c72 = doc["body"]["convergents"][72]
    assert code == 0
    assert (c72["p"], c72["q"]) == (str(ref("tau_convergent_72_p")), str(ref("tau_convergent_72_q")))
    _, doc = run_json(capsys, "cf", "--value", "tau", "--terms", "72")
    assert doc["body"]["convergents"][71]["q"] == "4021025019685037142147505686136939"


def test_cf_spec_files(capsys):
    _, doc = run_json(capsys, "cf", "--value", str(INSTANCES / "golden_ratio.txt"), "--terms", "10")
    assert doc["body"]["partial_quotients"] == ["1"] * 10
    _, doc = run_json(capsys, "cf", "--value", str(INSTANCES / "tau.txt"), "--terms", "73")
    assert doc["body"]["convergents"][72]["q"] == str(ref("tau_convergent_72_q"))


def test_cf_precision_exhausted(capsys):
    code, doc = run_json(capsys, "cf", "--value", "tau", "--terms", "73", "--precision", "64",
                         "--precision-cap", "128")
    assert code == 1 and doc["body"]["partial_quotients"] == []


def test_cf_missing_spec_file(capsys, tmp_path):
    assert cli.main(["cf", "--value", str(tmp_path / "missing.txt"), "--terms", "3"]) == 2


def test_reduce_round1(capsys):
    code, doc = run_json(capsys, "reduce", str(INSTANCES / "round1.txt"))
    res = doc["body"]["result"]
    assert code == 0 and res["status"] == "SUCCESS" and res["convergent_index"] == 72
    eps = decode_ball(res["epsilon"])
    assert abs(eps.mid - ref("reduction1_epsilon")) < 10 ** -15
    assert res["w_max"] == 173


def test_reduce_round2_n86(capsys):
    code, doc = run_json(capsys, "reduce", str(INSTANCES / "round2_n86.txt"))
    assert code == 0 and decode_ball(doc["body"]["result"]["epsilon"]).lower > 0


def test_reduce_mu_zero(capsys):
    code, doc = run_json(capsys, "reduce", str(INSTANCES / "mu_zero.txt"))
    assert code == 1 and doc["body"]["result"]["status"] == "EPSILON_NONPOSITIVE"


def test_reduce_forced_convergent_below_6M(capsys):
    assert cli.main(["reduce", str(INSTANCES / "round1.txt"), "--convergent", "71"]) == 2


@pytest.mark.parametrize("text", [
    "tau = tau\nmu = mu-5a\nA = 1\nB = gamma\n",                      # missing M
    "tau = tau\nmu = mu-5a\nA = 1\nB = gamma\nM = 1.5\n",             # M not an integer
    "tau = tau\nmu = nonsense\nA = 1\nB = gamma\nM = 5\n",            # unknown constant
    "tau = tau\nmu = mu-5a\nA = 1\nB = 1/2\nM = 5\n",                 # B <= 1
    "tau tau\n",                                                       # no '='
    "tau = tau\ntau = tau\n",                                          # duplicate
    "tau = tau\nmu = mu-5a\nA = 1\nB = gamma\nM = 5\nextra = 3\n",    # unknown key
])
def test_malformed_instances_exit_2(capsys, tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text, encoding="utf-8")
    assert cli.main(["reduce", str(path)]) == 2


def test_constants(capsys):
    code, doc = run_json(capsys, "constants", "--precision", "256")
    assert code == 0 and doc["body"]["precision"] == 256
    alpha = decode_ball(doc["body"]["constants"]["alpha"])
    assert 1.465 < alpha.mid < 1.466


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("BAKER_KIT_PRECISION", "320")
    _, doc = run_json(capsys, "constants")
    assert doc["body"]["precision"] == 320
    monkeypatch.setenv("BAKER_KIT_PRECISION", "many")
    assert cli.main(["constants"]) == 2


def test_text_output(capsys):
    code, out, _ = run(capsys, "reduce", str(INSTANCES / "round1.txt"))
    assert code == 0 and "so w <= 173" in out


def test_instance_values():
    assert evaluate("3/7", 64).contains(ref("h_alpha") * 0 + __import__("fractions").Fraction(3, 7))
    assert evaluate("root:-2,0,1:-1", 128).overlaps(evaluate("root:-2,0,1:1", 128))
    with pytest.raises(InstanceError):
        evaluate("root:-2,0,1:5", 64)
    with pytest.raises(InstanceError):
        evaluate("mu-sqrt5a-over-Fn:0", 64)
    assert parse_keyvalue("# c\n a = 1 # trailing\n") == {"a": "1"}
    spec = InstanceSpec.load(INSTANCES / "round1.txt")
    assert spec.M == ref("absolute_m_bound") and spec.convergent is None


def test_codec_exact():
    from fractions import Fraction
    assert fraction_to_str(Fraction(-3, 8)) == "-0.375"
    assert fraction_to_str(Fraction(1, 3)) == "1/3"
    assert fraction_to_str(Fraction(12)) == "12"
    b = Ball.exact(Fraction(1, 3), 200)
    assert decode_ball(json.loads(json.dumps(encode_ball(b)))) == b


def test_render_text_all_commands(capsys):
    doc = ReportDocument("search", {}, {"count": 0, "solutions": [], "values": [], "distinct_values": []})
    assert "solutions (0)" in render_text(doc)
