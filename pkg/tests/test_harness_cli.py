import json
import subprocess
import sys

import pytest

from cuberes.gallery import GALLERY
from cuberes.harness_cli import (ResultRecord, SweepSpec, enumerate_graphs, main, record_for_graph, run_sweep,
                                 store_append, store_query)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_diagram_json(capsys):
    code, out, _ = run(["--format", "json", "diagram", "1 -2 1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["edges"] == 7 and len(doc["crossings"]) == 3


def test_malformed_word_exit_code(capsys):
    code, _, err = run(["diagram", "0 1"], capsys)
    assert code == 3 and "error" in err


def test_unknown_graph_is_usage_error(capsys):
    code, _, _ = run(["tor", "--graph", "nope"], capsys)
    assert code >= 3


def test_ideals_command(capsys):
    code, out, _ = run(["ideals", "--graph", "kink"], capsys)
    assert code == 0 and out.startswith("graph kink") and "Q:" in out


def test_tor_golden_text(capsys):
    code, out, _ = run(["tor", "--graph", "figure5", "-D", "12", "--side", "Q"], capsys)
    assert code == 0
    assert "q_0 = (1 + 3*T + 2*T^2 - 2*T^3)/(1-T)^4" in out
    assert "q_1 = (3*T^4 + T^5)/(1-T)^4" in out


def test_conjecture_exit_codes(capsys):
    assert run(["conjecture", "--graph", "figure5"], capsys)[0] == 0
    assert run(["conjecture", "--graph", "total"], capsys)[0] == 1


def test_theorem2_and_identity(capsys):
    assert run(["theorem2", "--graph", "figure5"], capsys)[0] == 0
    code, out, _ = run(["identity", "--max-mn", "3"], capsys)
    assert code == 0 and "display verifies: True" in out


def test_euler_command(capsys):
    code, out, _ = run(["euler", "1 -2 1 -2"], capsys)
    assert code == 0 and "matches=True" in out
    assert run(["euler", "1", "--frame", "wedge2"], capsys)[0] == 1


def test_local_overrides_after_subcommand(capsys):
    code, out, _ = run(["tor", "--graph", "kink", "--field", "fp:2", "-D", "4", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["tables"]["N"]["field"] == "fp:2"


def test_store_append_query(tmp_path):
    path = str(tmp_path / "st.jsonl")
    rec = record_for_graph(GALLERY["total"](), "total")
    store_append(path, rec)
    store_append(path, record_for_graph(GALLERY["kink"](), "kink"))
    fails = store_query(path, verdict="fails")
    assert len(fails) == 1 and fails[0].braid_word == "total"
    assert fails[0].first_failure[:2] == [1, 2]
    assert store_query(path, graph_hash=rec.graph_hash)[0].verdict == "fails"
    with open(path, "a") as fh:
        fh.write("{not json\n")
    with pytest.warns(UserWarning):
        assert len(store_query(path)) == 2


def test_sweep_resumes(tmp_path):
    path = str(tmp_path / "st.jsonl")
    spec = SweepSpec(2, 3, gallery=("figure4",))
    first = run_sweep(spec, path)
    assert first["fails"] == 0 and first["checked"] >= 3
    again = run_sweep(spec, path)
    assert again["resumed"] == first["checked"]
    assert all(isinstance(r, ResultRecord) for r in again["records"])


def test_enumerate_dedupes_and_validates():
    spec = SweepSpec(3, 3, "all-resolutions")
    hashes = [S.canonical_hash() for *_, S in enumerate_graphs(spec)]
    assert len(hashes) == len(set(hashes))
    with pytest.raises(ValueError):
        SweepSpec(policy="some")
    with pytest.raises(ValueError):
        SweepSpec(gallery=("nope",))


def test_query_cli(tmp_path, capsys):
    path = str(tmp_path / "st.jsonl")
    assert run(["--store", path, "conjecture", "--graph", "total"], capsys)[0] == 1
    code, out, _ = run(["--store", path, "query", "--verdict", "fails"], capsys)
    assert code == 0 and "fails" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cuberes", "diagram", "1 1 1"], capture_output=True, text=True)
    assert r.returncode == 0 and "3 strands" not in r.stdout and "2 strands" in r.stdout
