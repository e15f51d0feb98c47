import json
import subprocess
import sys

import pytest

from hfol.frontend.cli import run_cli

LIFT_DOC = """
signature D {
  nominals: k;
  sorts: s flexible;
  ops: c : -> s;
  rels: p : s;
}
extension DC of D { nominals: z; }
morphism id : D -> D { sort s |-> s; nominal k |-> k; op c |-> c; rel p |-> p; }
model V over DC {
  worlds: v;
  nominal k = v; nominal z = v;
  world v { carrier s = {b}; op c = b; rel p = {b}; }
}
model W over DC {
  worlds: w;
  nominal k = w; nominal z = w;
  world w { carrier s = {a, b}; op c = a; rel p = {a}; }
}
model Bad over DC {
  worlds: w;
  nominal k = w; nominal z = w;
  world w { carrier s = {a}; op c = a; rel p = {}; }
}
theory T over D { p(c); }
"""


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    doc = json.loads(out)
    assert doc.get("exit", code) == code
    return code, doc


@pytest.fixture
def doc(tmp_path):
    path = tmp_path / "lift.hfol"
    path.write_text(LIFT_DOC, encoding="utf-8")
    return str(path)


def test_check_sig(capsys):
    code, out, _ = run(capsys, "check-sig", "counter1")
    assert code == 0
    assert "PASS: signature D: 3 nominals, 0 modalities, 3 sorts (0 rigid)" in out
    code, data = run_json(capsys, "check-sig", "counter2", "--name", "D1")
    assert code == 0 and data["signatures"]["D1"]["rigid_sorts"] == 1
    assert data["schema"] == 1 and data["command"] == "check-sig"


def test_check_morphism(capsys):
    code, out, _ = run(capsys, "check-morphism", "counter2", "morphism=chi2",
                       "--protects-flexible")
    assert code == 1 and "FAIL: does not protect flexible symbols" in out
    assert "witness c2" in out
    code, out, _ = run(capsys, "check-morphism", "counter1", "morphism=chi1", "--injective")
    assert code == 1 and "injective on sorts: False" in out
    code, data = run_json(capsys, "check-morphism", "counter2", "morphism=chi1")
    assert code == 0 and data["report"]["injective_on_sorts"] is True


def test_translate_and_sat(capsys):
    code, out, _ = run(capsys, "translate", "counter1", "morphism=chi1",
                       "sentence=@k3 k2 /\\ c1 = c1")
    assert code == 0 and out.strip() == "@k3 k /\\ c = c"
    code, out, _ = run(capsys, "sat", "counter1", "model=W1M1", "sentence=@k3 c = c3")
    assert code == 0 and out.startswith("true: W1M1 globally")
    code, data = run_json(capsys, "sat", "counter1", "model=VN", "sentence=not k2",
                          "--world", "w")
    assert code == 1 and data["holds"] is False and data["world"] == "w"


def test_reduct_and_pushout(capsys):
    code, out, _ = run(capsys, "reduct", "counter1", "morphism=chi1", "model=W1M1")
    assert code == 0 and out.startswith("model W1M1_reduct over D {")
    code, out, _ = run(capsys, "pushout", "counter1", "span=counter1", "compare=Dp")
    assert code == 0 and "PASS: pushout vertex equals declared signature Dp" in out
    code, data = run_json(capsys, "pushout", "counter1", "span=counter1", "compare=D1")
    assert code == 1 and data["matches"] is False


def test_amalgamate(capsys):
    code, data = run_json(capsys, "amalgamate", "counter2", "span=counter2", "left=W1M1",
                          "right=W2M2")
    assert code == 1 and data["error"].startswith("reducts disagree")
    code, data = run_json(capsys, "amalgamate", "counter1", "span=counter1", "left=W1M1",
                          "right=V2N2")
    assert code == 1 and "reducts disagree" in data["error"]


def test_relativize(capsys):
    code, data = run_json(capsys, "relativize", "counter1", "left=D1", "right=D2")
    assert code == 0 and data["axioms"][0] == "pi1 \\/ pi2"
    code, out, _ = run(capsys, "relativize", "counter1", "left=D1", "right=D2", "--rt",
                       "part=2", "sentence=@k1 c1 = c3")
    assert code == 0 and out.strip() == "pi2 => @k1 (pi2 => c1 = c3#2)"


def test_lift(capsys, doc):
    code, out, _ = run(capsys, "lift", doc, "morphism=id", "extension=DC", "from=V", "model=W",
                       "--probe-depth", "2")
    assert code == 0
    assert "PASS: reduct equals the given model" in out
    assert "PASS: agrees with V" in out
    code, data = run_json(capsys, "lift", doc, "morphism=id", "extension=DC", "from=V",
                          "model=Bad")
    assert code == 1 and data["error"]["code"] == "not-equivalent"


def test_consequence(capsys, doc):
    code, out, _ = run(capsys, "consequence", doc, "theory=T", "sentence=exists x:n . @x p(c)")
    assert code == 0 and out.startswith("PASS: holds after")
    code, data = run_json(capsys, "consequence", doc, "theory=T", "sentence=not p(c)")
    assert code == 1 and data["status"] == "countermodel"
    assert data["countermodel"].startswith("model countermodel over D")


def test_probe(capsys):
    code, data = run_json(capsys, "probe", "counter1", "model=W1M1")
    assert code == 0 and data["probes"] > 0 and "c = c3" in data["holding"]
    code, data = run_json(capsys, "probe", "counter2", "model=W1M1", "other=W1M1")
    assert code == 0 and data["equivalent"] is True and data["witness"] is None


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper", "--case", "counter2")
    assert code == 0 and out.startswith("counter2: PASS")
    code, out, _ = run(capsys, "--json", "verify-paper")
    data = json.loads(out)
    assert code == 0 and data["passed"] and [c["case"] for c in data["cases"]] == \
        ["counter1", "counter2", "counter3"]


@pytest.mark.parametrize("argv, fragment", [
    (["sat", "nowhere.hfol", "model=M", "sentence=p"], "no such file or fixture"),
    (["sat", "counter1", "model=W1M1"], "missing parameter 'sentence'"),
    (["sat", "counter1", "model=W1M1", "sentence=p", "colour=red"], "unknown parameter"),
    (["sat", "counter1", "model=Nope", "sentence=p"], "unknown model 'Nope'"),
    (["sat", "counter1", "model=W1M1", "sentence=c = "], "expected"),
    (["reduct", "counter1", "morphism=chi1", "model=VN"], "not over the target"),
    (["relativize", "counter1", "left=D1", "right=D2", "--rt"], "needs sentence"),
])
def test_input_errors_exit_2(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 2 and fragment in err
    code, data = run_json(capsys, *argv)
    assert code == 2 and fragment in data["error"]


def test_argparse_errors_exit_2(capsys):
    assert run_cli(["no-such-command"]) == 2
    assert run_cli(["sat", "counter1", "--frobnicate"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hfol.frontend.cli", "check-sig", "counter3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "PASS: signature Dp" in proc.stdout
