import csv
import json

import pytest

from pretzel_chi.cli import CSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "2,2,-10", "--json", "--no-timing")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == "pretzel-chi/1"
    assert data["verdict"]["status"] == "NotChiSlice"
    assert data["verdict"]["rule"] == "GreeneJabuka"


def test_parse_error_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "1,x,3"])
    assert exc.value.code == 2


def test_resource_limit_exit(capsys):
    code, out, _ = run(capsys, "classify", "2,2,-17", "--node-limit", "2")
    assert code == 3


def test_two_bridge(capsys):
    code, out, _ = run(capsys, "two-bridge", "9", "5", "--json")
    data = json.loads(out)
    assert data["chi_slice"] and data["string"] == [2, 5] and data["dual"] == [3, 2, 2, 2]
    code, out, _ = run(capsys, "two-bridge", "5", "1")
    assert "NONE" in out


def test_plumbing_embed_dinv(capsys):
    _, out, _ = run(capsys, "plumbing", "2,2,-10", "--json")
    data = json.loads(out)
    assert len(data["vertices"]) == 4 and len(data["edges"]) == 3
    _, out, _ = run(capsys, "embed", "2,2,-10", "--json")
    assert len(json.loads(out)["embeddings"]) == 3
    _, out, _ = run(capsys, "dinv", "2,2,-10")
    assert out.count("fires = True") == 3


def test_enumerate_files(tmp_path, capsys):
    c, j = tmp_path / "out.csv", tmp_path / "out.json"
    code, _, _ = run(capsys, "enumerate", "--strands", "3", "--max", "3", "--csv", str(c), "--json", str(j))
    assert code == 0
    rows = list(csv.reader(c.open()))
    assert tuple(rows[0]) == CSV_COLUMNS
    data = json.loads(j.read_text())
    assert data["schema"] == "pretzel-chi/1" and len(data["rows"]) == len(rows) - 1


def test_enumerate_byte_identical(tmp_path, capsys):
    paths = []
    for jobs in ("1", "2"):
        p = tmp_path / f"run{jobs}.json"
        run(capsys, "enumerate", "--strands", "3", "--max", "4", "--json", str(p), "--no-timing", "--jobs", jobs)
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]


def test_crosscheck(capsys):
    code, out, _ = run(capsys, "crosscheck", "1.4", "--max", "4")
    assert code == 0 and "PASS" in out
