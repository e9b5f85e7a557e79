import io
import json
import shutil

import jsonschema
import pytest

from dgdual.cli import default_corpus, main
from dgdual.session import schema


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def corpus_copy(tmp_path):
    dst = tmp_path / "corpus"
    shutil.copytree(default_corpus(), dst)
    return dst


@pytest.fixture
def session_file(tmp_path):
    p = tmp_path / "s.dgd"
    p.write_text("field F = Fp(32003)\nring A = poly(F; x)\nring B = quotient(A; x^2)\n"
                 "map f : A -> B { x -> x }\nmodule k = cyclic(B; x)\nmodule OA = free(A)\n")
    return p


def test_verify_all_passes():
    code, text = run("verify", "all")
    assert code == 0, text
    assert "0 fail, 0 error" in text


def test_verify_json_validates():
    code, text = run("verify", "all", "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, schema())
    assert code == 0 and doc["summary"]["passed"]
    assert {i["name"] for i in doc["instances"]} >= {"bc_x2", "dual_numbers", "smooth_t"}


def test_verify_single_family():
    code, text = run("verify", "base_change", "--instance", "bc_x2", "--window", "-6..6",
                     "--format", "json")
    doc = json.loads(text)
    assert code == 0
    assert [r["command"] for r in doc["reports"]] == ["verify base_change f g OA",
                                                     "verify base_change f g RA"]


def test_corrupted_expected_value_fails(corpus_copy):
    path = corpus_copy / "finite_x2.expected.json"
    data = json.loads(path.read_text())
    rec = next(r for r in data["expected"] if "left" in r)
    first = next(iter(rec["left"]))
    rec["left"][first] = {"dim": 99}
    path.write_text(json.dumps(data))
    code, _ = run("verify", "all", "--corpus", str(corpus_copy))
    assert code == 1


def test_unreadable_expected_file_fails(corpus_copy):
    (corpus_copy / "koszul_x.expected.json").write_text("{not json")
    code, text = run("verify", "all", "--corpus", str(corpus_copy))
    assert code == 1 and "koszul_x" in text


def test_parse_error_exit_code(tmp_path, corpus_copy):
    bad = tmp_path / "bad.dgd"
    bad.write_text("ring A0 = poly(F; x)\n")
    code, text = run("run", str(bad), "--format", "json")
    assert code == 2
    doc = json.loads(text)
    jsonschema.validate(doc, schema())
    assert doc["parse_error"]["type"] == "NameError"
    (corpus_copy / "koszul_x.dgd").write_text("this is not a session\n")
    assert run("verify", "all", "--corpus", str(corpus_copy))[0] == 2


def test_bad_command_line():
    assert run("verify", "nonsense")[0] == 2
    assert run("run")[0] == 2
    assert run("cohomology", "M", "--session", "x.dgd", "--window", "3..1")[0] == 2


def test_run_session_file(session_file):
    with session_file.open("a") as fh:
        fh.write("shriek f OA\nrhom k k window=0..3\n")
    code, text = run("run", str(session_file), "--format", "json")
    doc = json.loads(text)
    assert code == 0
    assert [r["status"] for r in doc["reports"]] == ["ok", "ok"]


def test_failing_command_exit_code(session_file):
    with session_file.open("a") as fh:
        fh.write("resolve k floor=-80\n")
    assert run("run", str(session_file))[0] == 1


def test_gb_shortcut():
    code, text = run("gb", "x^2 - y, x*y - 1", "--vars", "x,y", "--order", "lex", "--format", "json")
    doc = json.loads(text)
    assert code == 0
    assert doc["reports"][0]["result"]["basis"] == ["x - y^2", "y^3 - 1"]
    assert run("gb", "x^2 +", "--vars", "x")[0] == 2


@pytest.mark.parametrize("argv, degrees", [
    (["cohomology", "k", "--degree", "0"], {"0": {"dim": 1}}),
    (["rhom", "k", "k", "--window", "0..2"], {"0": {"dim": 1}, "1": {"dim": 1}, "2": {"dim": 1}}),
    (["shriek", "f", "OA"], {"1": {"dim": 2}}),
    (["rigid", "B"], {"0": {"dim": 2}}),
])
def test_shortcuts(session_file, argv, degrees):
    code, text = run(*argv, "--session", str(session_file), "--format", "json")
    doc = json.loads(text)
    assert code == 0, text
    fp = doc["reports"][0]["fingerprint"]["degrees"]
    assert {i: r for i, r in fp.items() if r != {"dim": 0}} == degrees


def test_shortcut_with_unknown_name(session_file):
    assert run("tensor", "k", "nope", "--session", str(session_file))[0] == 2


def test_missing_file():
    assert run("run", "/nonexistent/file.dgd")[0] == 1
