import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from contacthc.cli import load_schema, main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("result"))
    return code, doc


def write_doc(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def handle_doc(c_sq=("2/7", "1/5"), level="1"):
    return {
        "version": 1,
        "n": 3,
        "morse": {"critical_points": [{"id": "min", "index": 0}, {"id": "h", "index": 1}]},
        "handles": {"h": {"k": 1, "b": "2", "b_prime": "1", "c_sq": list(c_sq), "level": level}},
        "options": {"action_cutoff": "pi"},
    }


def test_index_rotation(capsys):
    code, doc = run_json(capsys, "index", "--rotation", "2", "--T", "4.0")
    assert code == 0 and doc["rows"][0]["mu"] == 3


def test_index_hyperbolic(capsys):
    code, doc = run_json(capsys, "index", "--hyperbolic", "1,1", "--T", "5")
    assert code == 0 and doc["rows"][0]["mu"] == 0


def test_index_keeps_block_order(capsys):
    code, doc = run_json(capsys, "index", "--hyperbolic", "1,2", "--identity", "--rotation", "2", "--T", "pi")
    assert code == 0
    assert doc["meta"]["blocks"] == "hyperbolic(1,2) identity rotation(2)"
    assert doc["rows"][0]["mu"] == 2 and doc["rows"][0]["degenerate"] is True


@pytest.mark.parametrize("argv", [
    ["index", "--rotation", "x", "--T", "1"],
    ["index", "--hyperbolic", "1", "--T", "1"],
    ["index", "--rotation", "-1", "--T", "1"],
])
def test_index_parse_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    code = exc.value.code
    if code is None:
        pytest.fail("expected an exit")
    assert code == 2
    capsys.readouterr()


def test_index_without_blocks_exit_2(capsys):
    code, _, err = run(capsys, "index", "--T", "1")
    assert code == 2 and "at least one" in err


def test_orbits_example(capsys):
    code, doc = run_json(capsys, "orbits", SAMPLES / "handle_n3.json")
    assert code == 0
    got = [(r["l"], r["m"], r["action"]) for r in doc["rows"]]
    assert got == [(3, 1, "1/5pi"), (2, 1, "2/7pi"), (3, 2, "2/5pi"), (2, 2, "4/7pi"),
                   (3, 3, "3/5pi"), (3, 4, "4/5pi"), (2, 3, "6/7pi"), (3, 5, "1pi")]
    assert doc["rows"][0]["mu"] == 3 and doc["rows"][1]["mu"] == 5


def test_orbits_tie_is_degenerate(capsys, tmp_path):
    p = write_doc(tmp_path, handle_doc(("1/3", "1/6")))
    code, doc = run_json(capsys, "orbits", p)
    ties = [r for r in doc["rows"] if r["action_tie"]]
    assert code == 0 and ties
    assert all(not r["nondegenerate"] and r["mu"] is None for r in ties)


def test_orbits_zero_cutoff(capsys):
    code, doc = run_json(capsys, "orbits", SAMPLES / "handle_n3.json", "--cutoff", "0")
    assert code == 0 and doc["rows"] == []


def test_orbits_negative_level(capsys, tmp_path):
    p = write_doc(tmp_path, handle_doc(level="-1"))
    code, _, err = run(capsys, "orbits", p)
    assert code == 4


def test_hc_ball(capsys):
    code, doc = run_json(capsys, "hc", SAMPLES / "ball_n2.json")
    assert code == 0
    assert {r["degree"]: r["rank_chain"] for r in doc["rows"] if r["rank_chain"]} == {2: 1, 4: 1, 6: 1, 8: 1, 10: 1}
    assert all(r["rank_chain"] == r["rank_closed"] for r in doc["rows"])


def test_hc_s3(capsys):
    code, doc = run_json(capsys, "hc", SAMPLES / "s1xs2_sum3.json")
    assert code == 0
    for r in doc["rows"]:
        d = r["degree"]
        expected = 3 if d % 2 else (1 if d >= 2 else 0)
        assert r["rank_chain"] == r["rank_closed"] == expected


def test_hc_target_and_window(capsys):
    code, doc = run_json(capsys, "hc", SAMPLES / "ball_n2.json", "--target", "Mprime",
                         "--window", "0:6", "--m-o", "5", "--route", "chain")
    assert code == 0 and doc["columns"] == ["degree", "rank_chain"]
    assert {r["degree"]: r["rank_chain"] for r in doc["rows"]} == {0: 0, 1: 0, 2: 0, 3: 0, 4: 1, 5: 0, 6: 1}


def test_hc_bad_square_exit_3(capsys, tmp_path):
    doc = {
        "version": 1, "n": 4,
        "morse": {
            "critical_points": [{"id": "m", "index": 0}, {"id": "a", "index": 1},
                                {"id": "b", "index": 2}, {"id": "c", "index": 3}],
            "boundary": [{"from": "a", "to": "b", "a": 1}, {"from": "b", "to": "c", "a": 1}],
        },
    }
    code, _, err = run(capsys, "hc", write_doc(tmp_path, doc))
    assert code == 3 and "BoundarySquare" in err


def test_homology(capsys):
    code, doc = run_json(capsys, "homology", SAMPLES / "cancelling_n3.json")
    assert code == 0
    assert [r["rank"] for r in doc["rows"]] == [1, 1, 0]


def test_words(capsys):
    code, doc = run_json(capsys, "words", "--n", "3", "--mode", "exhaustive")
    assert code == 0 and doc["meta"]["summary"] == "384 words, 0 counterexamples"
    code, doc = run_json(capsys, "words", "--n", "2")
    assert code == 0 and doc["meta"]["summary"] == "2 words, 0 counterexamples"


def test_words_budget(capsys):
    code, _, _ = run(capsys, "words", "--n", "5", "--mode", "exhaustive")
    assert code == 6


def test_words_randomized_records_seed(capsys):
    code, doc = run_json(capsys, "words", "--n", "4", "--mode", "randomized", "--samples", "5000", "--seed", "17")
    assert code == 0 and doc["meta"]["seed"] == 17 and doc["meta"]["words"] == 5000


def test_shift(capsys):
    code, doc = run_json(capsys, "shift", SAMPLES / "ball_n2.json")
    assert code == 0 and all(r["match"] for r in doc["rows"])
    code, doc = run_json(capsys, "shift", SAMPLES / "ball_n2.json", "--window", "4:3")
    assert code == 0 and doc["rows"] == []


def test_shift_s2_n3(capsys, tmp_path):
    doc = {"version": 1, "n": 3, "morse": {"critical_points": [
        {"id": "m", "index": 0}, {"id": "a", "index": 1}, {"id": "b", "index": 1}]}}
    code, out = run_json(capsys, "shift", write_doc(tmp_path, doc), "--window", "0:12")
    assert code == 0 and out["meta"]["mismatches"] == 0


@pytest.mark.parametrize("content", ["{not json", json.dumps({"version": 2, "n": 2, "morse": {"critical_points": []}}),
                                     json.dumps({"version": 1, "n": 2}),
                                     json.dumps({**handle_doc(), "handles": {"h": {"k": 1, "b": "x", "b_prime": "1",
                                                                                  "c_sq": ["1"], "level": "1"}}})])
def test_bad_documents_exit_2(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, _, _ = run(capsys, "homology", p)
    assert code == 2


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "homology", tmp_path / "nope.json")
    assert code == 2


def test_handle_must_match_point(capsys, tmp_path):
    doc = handle_doc()
    doc["handles"]["h"]["k"] = 0
    doc["handles"]["h"]["c_sq"] = ["1", "1", "1"]
    code, _, _ = run(capsys, "orbits", write_doc(tmp_path, doc))
    assert code == 3


def test_csv_and_json_agree(capsys):
    for argv in (["hc", SAMPLES / "s1xs2_sum3.json"], ["orbits", SAMPLES / "handle_n3.json"],
                 ["shift", SAMPLES / "cancelling_n3.json"]):
        _, doc = run_json(capsys, *argv)
        _, out, _ = run(capsys, *argv, "--format", "csv")
        body = [line for line in out.splitlines() if not line.startswith("#")]
        rows = list(csv.DictReader(io.StringIO("\n".join(body))))
        assert len(rows) == len(doc["rows"])
        for r_csv, r_json in zip(rows, doc["rows"]):
            for c in doc["columns"]:
                v = r_json[c]
                expected = "" if v is None else ("true" if v is True else "false" if v is False else str(v))
                if isinstance(v, float):
                    assert float(r_csv[c]) == v
                else:
                    assert r_csv[c] == expected


def test_output_is_deterministic(capsys):
    argv = ["words", "--n", "4", "--mode", "randomized", "--samples", "2000", "--seed", "3"]
    for fmt in ("table", "csv", "json"):
        _, a, _ = run(capsys, *argv, "--format", fmt)
        _, b, _ = run(capsys, *argv, "--format", fmt)
        assert a == b


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "contacthc.cli", "index", "--rotation", "2", "--T", "pi"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "mu" in proc.stdout.splitlines()[4]
