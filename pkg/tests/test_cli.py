import json
import subprocess
import sys

import jsonschema
import pytest

from twreduce import schema
from twreduce.cli import main


@pytest.fixture
def c5(tmp_path):
    gr = tmp_path / "c5.gr"
    gr.write_text("c five cycle\np tw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n")
    return gr


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_hamilton_yes(capsys, c5):
    code, out, _ = _run(capsys, "solve", "hamilton", "--gr", str(c5))
    doc = json.loads(out)
    assert code == 0 and doc["answer"] == "yes"
    schema.validate_solve(doc)
    assert doc["schema"] == "v1"


def test_solve_tsp_and_mode_alias(capsys, c5):
    code, out, _ = _run(capsys, "solve", "tsp", "--gr", str(c5), "--no-timing")
    assert code == 0 and json.loads(out)["answer"] == 5
    code, out, _ = _run(capsys, "solve", "hamilton", "--mode", "tsp", "--gr", str(c5))
    assert json.loads(out)["answer"] == 5


def test_solve_tsp_decision_is_usage_error(capsys, c5):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "tsp", "--mode", "decision", "--gr", str(c5)])
    assert exc.value.code == 2


def test_expect_feasible(capsys, tmp_path):
    gr = tmp_path / "p3.gr"
    gr.write_text("p tw 3 2\n1 2\n2 3\n")
    code, out, _ = _run(capsys, "solve", "hamilton", "--gr", str(gr))
    assert code == 0 and json.loads(out)["answer"] == "no"
    code, _, _ = _run(capsys, "solve", "hamilton", "--gr", str(gr), "--expect-feasible")
    assert code == 1


def test_malformed_input_exit_2(capsys, tmp_path):
    gr = tmp_path / "bad.gr"
    gr.write_text("p tw 2 1\n1 7\n")
    code, _, err = _run(capsys, "solve", "hamilton", "--gr", str(gr))
    assert code == 2 and "line 2" in err


def test_bad_decomposition_exit_2(capsys, c5, tmp_path):
    td = tmp_path / "c5.td"
    td.write_text("s td 1 3 5\nb 1 1 2 3\n")
    code, _, err = _run(capsys, "solve", "hamilton", "--gr", str(c5), "--td", str(td))
    assert code == 2 and "vertex" in err


def test_steiner_with_terminals(capsys, c5, tmp_path):
    terms = tmp_path / "c5.terminals"
    terms.write_text("1\n3\n")
    code, out, _ = _run(capsys, "solve", "steiner", "--gr", str(c5), "--terminals", str(terms), "--node-rows")
    doc = json.loads(out)
    assert code == 0 and doc["answer"] == 2
    assert len(doc["stats"]["per_node_rows"]) == doc["stats"]["nodes"]
    with pytest.raises(SystemExit):
        main(["solve", "steiner", "--gr", str(c5)])


def test_decompose_roundtrip(capsys, c5, tmp_path):
    out = tmp_path / "c5.td"
    assert main(["decompose", "--gr", str(c5), "-o", str(out)]) == 0
    code, stdout, _ = _run(capsys, "solve", "tsp", "--gr", str(c5), "--td", str(out))
    assert code == 0 and json.loads(stdout)["width"] == 2


def test_verify_deterministic(capsys):
    _, a, _ = _run(capsys, "verify", "--suite", "reduce", "--trials", "5", "--seed", "3", "--no-timing")
    _, b, _ = _run(capsys, "verify", "--suite", "reduce", "--trials", "5", "--seed", "3", "--no-timing")
    assert a == b and json.loads(a)["pass"] is True


def test_schema_command_and_validation(capsys):
    code, out, _ = _run(capsys, "schema")
    doc = json.loads(out)
    assert code == 0 and "v1" in json.dumps(doc)
    rec = {"schema": "v1", "instance": "x", "problem": "hamilton", "policy": "always", "n": 3, "m": 3,
           "status": "ok", "answer": "yes", "width": 2,
           "stats": {"reduce": {"rows_in": 1, "cols": 1, "xor_word_ops": 0}}}
    with pytest.raises(jsonschema.ValidationError, match="rows_out"):
        schema.validate_bench_record(rec)


def test_module_entry_point(c5):
    r = subprocess.run([sys.executable, "-m", "twreduce", "solve", "hamilton", "--gr", str(c5)],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["answer"] == "yes"
