import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from subdivlab import __version__
from subdivlab.cli import EXPERIMENT_COLUMNS, main, parse_pattern
from subdivlab.constructions import gq_incidence
from subdivlab.errors import InputError
from subdivlab.io import write_graph

from conftest import complete_bipartite

SCHEMA = json.loads(resources.files("subdivlab").joinpath("schemas/report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


@pytest.fixture
def gq2_file(tmp_path):
    path = tmp_path / "gq2.graph"
    write_graph(gq_incidence(2), path)
    return str(path)


@pytest.fixture
def k50_file(tmp_path):
    path = tmp_path / "k50.graph"
    write_graph(complete_bipartite(50, 50), path)
    return str(path)


def test_bound_table_json(capsys):
    code, doc = report(capsys, "bound-table", "--t-min", "3", "--t-max", "4")
    assert code == 0
    assert doc["version"] == __version__ and doc["config"]["t_max"] == 4
    t3, t4 = doc["rows"]
    assert (t3["upper_exact"], t3["prior_exact"], t3["lower_exact"]) == ("4/3", "323/216", "6/5")
    assert t4["upper_exact"] == "7/5"


def test_bound_table_csv_without_comparisons(capsys):
    code, out, _ = run(capsys, "bound-table", "--format", "csv", "--no-comparisons", "--t-max", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["t"] for r in rows] == ["3", "4", "5"]
    assert set(rows[0]) == {"t", "upper", "upper_exact"}


def test_bound_table_range_checked(capsys):
    code, _, err = run(capsys, "bound-table", "--t-max", "65")
    assert code == 1 and "InvalidParams" in err


def test_verify_locallydense_on_k50(capsys, k50_file):
    code, doc = report(capsys, "verify-lemma", "--which", "locallydense", k50_file)
    assert code == 0 and doc["verdict"] == "holds"
    assert doc["lhs"] == 2 * doc["rhs"]


def test_verify_precondition_failure_exits_2(capsys, gq2_file):
    code, doc = report(capsys, "verify-lemma", "--which", "manylight", gq2_file)
    assert code == 2 and doc["verdict"] == "precondition_failed"


def test_verify_turan_needs_b(capsys, k50_file):
    code, _, err = run(capsys, "verify-lemma", "--which", "turan", k50_file)
    assert code == 1 and "--b" in err


def test_embed_on_gq2_is_a_structured_failure(capsys, gq2_file):
    code, doc = report(capsys, "embed", "--s", "1", "--t", "3", gq2_file)
    assert code == 2
    assert doc["success"] is False and doc["error"] == "ThresholdFailure"
    assert doc["trace"]["failure"]["step"] == 1


def test_embed_success_report(capsys, tmp_path):
    path = tmp_path / "k.graph"
    write_graph(complete_bipartite(6, 6), path)
    code, doc = report(capsys, "embed", "--s", "1", "--t", "3", str(path))
    assert code == 0 and doc["mode"] == "heavy-clique"
    assert set(doc["branch"]) == {"S0", "T0", "T1"}
    assert doc["trace"][0]["kind"] == "heavy-clique"


def test_malformed_graph_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("bip 2 2\n0 1\n")
    code, _, err = run(capsys, "embed", "--s", "1", "--t", "3", str(bad))
    assert code == 1 and "InvalidEdge" in err
    code, _, _ = run(capsys, "embed", "--s", "1", "--t", "3", str(tmp_path / "missing.graph"))
    assert code == 1


def test_usage_errors_exit_1(capsys):
    for argv in (["nope"], ["embed"], ["bound-table", "--format", "xml"], ["bound-table", "--seed", "-1"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    capsys.readouterr()


def test_gen_writes_graph_and_sidecar(capsys, tmp_path):
    out = tmp_path / "d.graph"
    code, doc = report(capsys, "gen", "--kind", "deletion", "--n", "20", "--seed", "3", "--out", str(out))
    assert code == 0 and doc["report"]["verified"] is True
    assert json.loads((tmp_path / "d.graph.json").read_text()) == doc
    assert out.read_text().startswith("graph 20\n")


def test_gen_needs_out(capsys):
    code, _, _ = run(capsys, "gen", "--kind", "gq")
    assert code == 1


def test_regularize_and_pipeline(capsys, tmp_path):
    src = tmp_path / "g.graph"
    code, _ = report(capsys, "gen", "--kind", "random", "--nA", "150", "--nB", "150", "--p", "0.5", "--out", str(src))
    sub = tmp_path / "sub.graph"
    code, doc = report(capsys, "regularize", "--alpha", "1/3", str(src), str(sub))
    assert code == 0 and doc["balanced"] and doc["config"]["alpha"] == "1/3"
    assert sub.read_text().startswith("bip ")
    code, doc = report(capsys, "pipeline", "--s", "1", "--t", "3", str(src))
    assert code == 0 and doc["valid_in_input"] is True


def test_pipeline_too_sparse_exits_2(capsys, tmp_path):
    src = tmp_path / "path.graph"
    src.write_text("graph 5\n0 1\n1 2\n2 3\n3 4\n")
    code, doc = report(capsys, "pipeline", "--s", "1", "--t", "3", str(src))
    assert code == 2 and doc["error"] == "TooSparse"


def test_extremal_command(capsys):
    code, doc = report(capsys, "extremal", "--n", "6", "--pattern", "K3")
    assert code == 0 and doc["value"] == 11 and doc["pattern"] == "sub(K3)"
    code, doc = report(capsys, "extremal", "--n", "6", "--pattern", "K3", "--plain")
    assert doc["value"] == 9


def test_pattern_grammar():
    assert parse_pattern("L1,3")[0].num_edges == 3
    assert parse_pattern("K2,3")[0].num_edges == 6
    assert parse_pattern("K4")[0].num_edges == 6
    assert parse_pattern("C5")[0].num_edges == 5
    with pytest.raises(InputError):
        parse_pattern("P4")


def test_experiment_csv(capsys):
    code, out, _ = run(capsys, "experiment", "--n", "200", "--seeds", "0-4", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == ",".join(EXPERIMENT_COLUMNS)
    assert len(lines) == 7 and lines[-1].startswith("# summary,runs=5")


def test_experiment_empty_seed_list(capsys):
    code, out, _ = run(capsys, "experiment", "--seeds", "", "--format", "csv")
    assert code == 0 and out == ",".join(EXPERIMENT_COLUMNS) + "\n"


def test_experiment_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "experiment", "--seeds", "0", "--n", "50", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and err


def test_experiment_json_and_timing(capsys):
    code, doc = report(capsys, "experiment", "--n", "100", "--seeds", "1,3", "--timing")
    assert [r["seed"] for r in doc["rows"]] == [1, 3]
    assert all("wall_time" in r for r in doc["rows"])
    assert doc["summary"]["runs"] == 2


def test_experiment_pipeline_kind(capsys):
    code, doc = report(capsys, "experiment", "--kind", "pipeline", "--n", "150", "--p", "0.4", "--seeds", "0-1")
    assert code == 0 and doc["summary"]["successes"] == 2


def test_parallel_experiment_matches_serial(capsys):
    argv = ["experiment", "--n", "150", "--seeds", "0-3", "--format", "csv"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", "2")
    assert serial == parallel


@pytest.mark.parametrize(
    "argv",
    [
        ["experiment", "--n", "200", "--seeds", "0-2", "--format", "csv"],
        ["bound-table"],
        ["extremal", "--n", "7", "--pattern", "L1,3"],
    ],
)
def test_byte_identical_reports(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "subdivlab.cli", "bound-table", "--t-max", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["rows"][0]["t"] == 3
