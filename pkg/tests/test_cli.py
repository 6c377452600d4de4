import json

import pytest

from localduality.cli import main, SUCCESS, VERIFY_FAILED, INPUT_ERROR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_writes_json(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, stdout, _ = run(capsys, "construct", "--input", "circle", "--max-tensor-degree", "4",
                          "--out", str(out))
    assert code == SUCCESS
    doc = json.loads(out.read_text())
    assert doc["command"] == "construct" and doc["duality"] is not None
    assert "circle" in stdout


def test_verify_json_passes(capsys):
    code, stdout, _ = run(capsys, "verify", "--input", "point", "--max-tensor-degree", "4", "--json")
    assert code == SUCCESS
    assert json.loads(stdout)["pass"] is True


def test_verify_interval_skips_duality(capsys):
    code, stdout, _ = run(capsys, "verify", "--input", "interval", "--max-tensor-degree", "4",
                          "--json")
    assert code == SUCCESS
    assert any("fundamental cycle" in w for w in json.loads(stdout)["warnings"])




def test_corrupted_duality_fails(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "construct", "--input", "circle", "--max-tensor-degree", "4", "--out", str(path))
    text = path.read_text()
    doc = json.loads(text)
    flip = json.dumps(doc["duality"]).replace('"1"', '"2"', 1)
    assert flip != json.dumps(doc["duality"])
    doc["duality"] = json.loads(flip)
    path.write_text(json.dumps(doc))
    code, stdout, _ = run(capsys, "verify", "--input", "circle", "--max-tensor-degree", "4",
                          "--duality", str(path), "--json")
    assert code == VERIFY_FAILED
    assert json.loads(stdout)["pass"] is False


def test_overflow_warning(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "construct", "--input", "circle", "--max-tensor-degree", "5", "--out", str(path))
    code, stdout, _ = run(capsys, "verify", "--input", "circle", "--max-tensor-degree", "4",
                          "--duality", str(path), "--json")
    assert any("truncation-overflow" in w for w in json.loads(stdout)["warnings"])


@pytest.mark.parametrize("argv", [
    ["verify", "--input", "missing.json"],
    ["verify", "--input", "circle", "--max-tensor-degree", "1"],
    ["verify", "--input", "circle", "--mu", "sigma=1"],
    ["hochschild", "--input", "interval"],
    ["bernoulli", "--edge", "omega"],
    ["corpus", "--fixtures", "klein"],
    ["construct"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == INPUT_ERROR
    if argv != ["construct"]:
        assert json.loads(err)["error"] == "input-error"


def test_hochschild_point(capsys):
    code, stdout, _ = run(capsys, "hochschild", "--input", "point", "--arity-max", "3",
                          "--samples", "3", "--json")
    assert code == SUCCESS and json.loads(stdout)["counit_defects"] == []


def test_bernoulli_table(capsys):
    code, stdout, _ = run(capsys, "bernoulli", "--max-tensor-degree", "5", "--json")
    assert code == SUCCESS
    rows = json.loads(stdout)["rows"]
    assert rows and all(r["match"] for r in rows)


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, _, _ = run(capsys, "corpus", "--fixtures", "point,interval", "--out", str(d))
        assert code == SUCCESS
    for name in ("point", "interval"):
        assert (a / (name + ".json")).read_bytes() == (b / (name + ".json")).read_bytes()
