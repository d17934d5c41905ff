import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from apsat.certificates import SCHEMA_VERSION, Certificate, CertificateError, load_and_verify, loads
from apsat.cli import main
from apsat.field import VectorSpace, make_field
from apsat.groups import PointSet, make_group
from apsat.groupspec import GroupSpecError, format_group_spec, parse_group_spec
from apsat.predicates import complete_three_ap, three_ap_free, verify


@pytest.mark.parametrize("text, factors", [
    ("Z7", [7]), ("Z3xZ9", [3, 9]), ("Z5^2", [5, 5]), ("Z2^2xZ4", [2, 2, 4]), (" Z1 ", [1]),
])
def test_parse_cyclic(text, factors):
    assert list(parse_group_spec(text).factors) == factors


def test_parse_field():
    V = parse_group_spec("F5^1:2")
    assert isinstance(V, VectorSpace) and V.field.q == 5 and V.dim == 2
    W = parse_group_spec("F2^3:1")
    assert W.order == 8 and format_group_spec(W) == "F2^3:1"
    assert format_group_spec(parse_group_spec("F7:3")) == "F7^1:3"


@pytest.mark.parametrize("text, pos", [
    ("", 0), ("Z0", 1), ("Z5x", 3), ("Z5*Z3", 2), ("Y5", 0), ("F6^1:2", 1), ("F5^1:0", 5), ("Z3^0", 3),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(GroupSpecError) as exc:
        parse_group_spec(text)
    assert exc.value.pos == pos
    assert "^" in str(exc.value)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=4))
def test_group_spec_roundtrip(factors):
    G = make_group(factors)
    assert list(parse_group_spec(format_group_spec(G)).factors) == factors


def test_format_collapses_runs():
    assert format_group_spec(make_group([3, 3, 9, 3])) == "Z3^2xZ9xZ3"


def _cert_text(G, S, pred):
    return Certificate.from_report(G, S, verify(G, S, pred)).dumps()


def test_certificate_roundtrip_and_canonical():
    G = make_group([3, 3])
    S = PointSet(G, [0, 1, 3, 4])
    text = _cert_text(G, S, complete_three_ap())
    obj = json.loads(text)
    assert obj["schema_version"] == SCHEMA_VERSION
    assert obj["set"] == [0, 1, 3, 4] and obj["result"] is True and obj["witness"] is None
    assert text == json.dumps(obj, sort_keys=True, indent=2) + "\n"
    cert, report, matches = load_and_verify(text)
    assert report.holds and matches
    assert loads(cert.dumps()).to_dict() | {"timing": None} == cert.to_dict() | {"timing": None}


def test_failing_certificate_keeps_witness():
    G = make_group([5])
    text = _cert_text(G, PointSet(G, [1, 2, 3]), three_ap_free())
    obj = json.loads(text)
    assert obj["result"] is False and obj["witness"]["type"] == "three_ap"
    _, report, matches = load_and_verify(text)
    assert not report.holds and matches


def test_tampered_set_changes_result():
    G = make_group([3, 3])
    obj = json.loads(_cert_text(G, PointSet(G, [0, 1, 3, 4]), complete_three_ap()))
    obj["set"] = [0, 1, 2, 3]
    _, report, matches = load_and_verify(json.dumps(obj))
    assert not matches


def test_corrupt_witness_rejected():
    G = make_group([5])
    obj = json.loads(_cert_text(G, PointSet(G, [1, 2, 3]), three_ap_free()))
    obj["set"] = [0, 1]
    with pytest.raises(CertificateError, match="witness"):
        loads(json.dumps(obj))
    obj["witness"] = {"type": "three_ap"}
    with pytest.raises(CertificateError, match="witness"):
        loads(json.dumps(obj))


@pytest.mark.parametrize("mutate, msg", [
    (lambda o: o.update(schema_version=99), "schema_version"),
    (lambda o: o.update(set=[3, 1]), "sorted"),
    (lambda o: o.update(group="Z"), "malformed"),
    (lambda o: o.pop("predicate"), "malformed"),
])
def test_bad_certificates(mutate, msg):
    G = make_group([3, 3])
    obj = json.loads(_cert_text(G, PointSet(G, [0, 1, 3, 4]), complete_three_ap()))
    mutate(obj)
    with pytest.raises(CertificateError, match=msg):
        loads(json.dumps(obj))
    with pytest.raises(CertificateError):
        loads("{not json")


# -- command line ---------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_construct_parabola(capsys):
    code, out, _ = run(capsys, "construct", "--name", "parabola", "--group", "F5^1:2")
    obj = json.loads(out)
    assert code == 0 and obj["result"] and len(obj["set"]) == 5
    assert obj["provenance"]["name"] == "parabola"
    assert all(c["result"] for c in obj["extra"]["claims"])


@pytest.mark.parametrize("argv", [
    ["--name", "lines", "--group", "F7^1:2"],
    ["--name", "lines-star", "--group", "F7^1:2"],
    ["--name", "singer", "--n", "2"],
    ["--name", "mrose", "--m", "101"],
    ["--name", "gyok3", "--m", "16"],
    ["--name", "random", "--group", "Z101", "--seed", "3"],
    ["--name", "axes-star", "--a", "Z5", "--b", "Z7"],
])
def test_cli_construct_variants(capsys, argv):
    code, out, _ = run(capsys, "construct", *argv)
    assert code == 0 and json.loads(out)["extra"]["size_matches"] in (True,)


def test_cli_random_is_seeded(capsys):
    a = run(capsys, "construct", "--name", "random", "--group", "Z101", "--seed", "7")[1]
    b = run(capsys, "construct", "--name", "random", "--group", "Z101", "--seed", "7")[1]
    assert json.loads(a)["set"] == json.loads(b)["set"]


def test_cli_verify_failure_prints_witness(capsys):
    code, out, err = run(capsys, "verify", "--group", "Z5", "--set", "1,2,3", "--pred", "3ap-free")
    assert code == 1
    assert "2·2=1+3" in err
    assert json.loads(out)["extra"]["witness_text"]


def test_cli_verify_coordinates(capsys):
    code, out, _ = run(capsys, "verify", "--group", "Z3^2", "--set", "(0,0),(0,1),(1,0),(1,1)", "--pred", "3ap-complete")
    assert code == 0 and json.loads(out)["set"] == [0, 1, 3, 4]


def test_cli_verify_weights(capsys):
    code, _, _ = run(capsys, "verify", "--group", "Z7", "--set", "0,1,3", "--pred", "complete", "--w", "2,-1")
    assert code == 0


def test_cli_certificate_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert run(capsys, "construct", "--name", "lines", "--group", "F5^1:2", "--out", str(path))[0] == 0
    code, out, err = run(capsys, "verify", "--cert", str(path))
    assert code == 0 and "reproduced" in err and json.loads(out)["extra"]["reproduces_stored_result"]
    obj = json.loads(path.read_text())
    obj["set"] = obj["set"][1:]
    path.write_text(json.dumps(obj))
    code, out, err = run(capsys, "verify", "--cert", str(path))
    assert code == 1 and "NOT reproduced" in err


def test_cli_search(capsys):
    code, out, err = run(capsys, "search", "--group", "Z7", "--pred", "complete", "--w", "2,-1")
    assert code == 0 and json.loads(out)["extra"]["search"]["minimum"] == 3
    code, out, err = run(capsys, "search", "--group", "Z5", "--pred", "complete", "--w", "2,-1")
    assert code == 1 and "none exists" in err and json.loads(out)["extra"]["search"]["none_exists"]
    code, _, err = run(capsys, "search", "--group", "Z5^2", "--pred", "3ap-sat", "--budget", "2")
    assert code == 3 and "budget" in err


def test_cli_bounds_and_audit(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "49")
    assert code == 0 and json.loads(out)["bounds"]["SAT_W"]["ceiling"] == 7
    code, out, _ = run(capsys, "audit", "--group", "Z9")
    obj = json.loads(out)
    assert code == 0 and obj["holds"] and obj["minima"]["a(3-AP)"] == 4


@pytest.mark.parametrize("fmt", ["markdown", "csv"])
def test_cli_table(capsys, fmt):
    code, out, _ = run(capsys, "table", "--name", "lines", "--lo", "5", "--hi", "13", "--format", fmt)
    assert code == 0 and len(out.strip().splitlines()) == (6 if fmt == "markdown" else 5)


@pytest.mark.parametrize("argv", [
    ["verify", "--group", "Z0", "--set", "0", "--pred", "sidon"],
    ["verify", "--group", "Z5", "--set", "9", "--pred", "sidon"],
    ["verify", "--group", "Z5"],
    ["construct", "--name", "parabola", "--group", "F2^1:2"],
    ["construct", "--name", "mrose"],
    ["verify", "--cert", "/nonexistent/cert.json"],
])
def test_cli_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "apsat", "bounds", "--n", "9"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["n"] == 9
