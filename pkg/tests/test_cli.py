import json
import os

import pytest

from inckg.cli import run


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _setup_genapp(capsys):
    code, _, _ = _run(capsys, "fixture", "genapp", "-o", "./fx")
    assert code == 0
    code, _, _ = _run(capsys, "ingest", "./fx/genapp.facts")
    assert code == 0


def test_golden_transcript_ssp3(workdir, capsys):
    _setup_genapp(capsys)
    code, out, _ = _run(capsys, "inc", "create", "ssp3", "--seed", "txn:SSP3")
    assert code == 0
    code, out, _ = _run(capsys, "inc", "expand", "ssp3")
    assert code == 0
    assert "1 transaction, 13 programs, 6 tables" in out
    code, out, _ = _run(capsys, "inc", "show", "ssp3")
    assert code == 0
    assert "1 transaction, 13 programs, 6 tables" in out
    assert "stale: no" in out


def test_retire_report_lgcf(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "lgcf", "--seed", "txn:LGCF")
    _run(capsys, "inc", "expand", "lgcf")
    code, out, _ = _run(capsys, "report", "retire", "lgcf")
    assert code == 0
    assert "SAFE TO RETIRE" in out
    assert out.count("read_only_access") == 1
    assert out.count("log_sink_write") == 1


def test_validate_empty_graph(workdir, capsys):
    code, out, _ = _run(capsys, "validate")
    assert code == 0
    assert "0 violations" in out


def test_validate_reports_violations_with_exit_2(workdir, capsys):
    bad = workdir / "bad.facts"
    bad.write_text('{"rec": "node", "id": "m", "kind": "Module", "name": "m"}\n')
    code, _, err = _run(capsys, "ingest", str(bad))
    assert code == 2  # record was skipped
    # the skipped record never entered the graph, so validate stays clean
    code, out, _ = _run(capsys, "validate")
    assert code == 0


def test_usage_errors_exit_1(workdir, capsys):
    code, _, err = _run(capsys, "inc", "create")  # missing args
    assert code == 1
    code, _, err = _run(capsys, "no-such-command")
    assert code == 1
    code, _, err = _run(capsys, "serve", "--bind", "nonsense")
    assert code == 1


def test_data_errors_exit_2(workdir, capsys):
    _setup_genapp(capsys)
    code, _, err = _run(capsys, "inc", "create", "x", "--seed", "txn:NOPE")
    assert code == 2
    assert "no Transaction named" in err
    code, _, err = _run(capsys, "inc", "expand", "ghost")
    assert code == 2
    code, _, err = _run(capsys, "ingest", "./fx/genapp.manifest")
    assert code == 2  # manifest is JSON but not a facts stream


def test_show_records_format_is_stable_json(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "ssp3", "--seed", "txn:SSP3")
    _run(capsys, "inc", "expand", "ssp3")
    code, out, _ = _run(capsys, "inc", "show", "ssp3", "--format", "records")
    assert code == 0
    doc = json.loads(out)
    assert doc["id"] == "ssp3"
    assert doc["metrics"]["member_count_by_kind"]["Program"] == 13
    assert doc["stale"] is False


def test_interfaces_report_formats(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "lgcf", "--seed", "txn:LGCF")
    _run(capsys, "inc", "expand", "lgcf")
    code, out, _ = _run(capsys, "report", "interfaces", "lgcf",
                        "--interface-type", "inside_out",
                        "--application", "App-CustomerManagement")
    assert code == 0
    assert "LGICVS01" in out and "GENACNTL" in out
    code, out, _ = _run(capsys, "report", "interfaces", "lgcf", "--format", "csv")
    header = out.splitlines()[0]
    assert header == ("interface_type,interfacing_application,calling_node,"
                      "called_node,edge_kind,access_type,role")
    code, out, _ = _run(capsys, "report", "interfaces", "lgcf", "--format", "records")
    rows = [json.loads(line) for line in out.splitlines() if line]
    assert len(rows) == 2
    code, _, _ = _run(capsys, "report", "interfaces", "lgcf", "--format", "csv",
                      "-o", "ifaces.csv")
    assert code == 0
    assert (workdir / "ifaces.csv").exists()


def test_shared_report_cli(workdir, capsys):
    _setup_genapp(capsys)
    code, out, _ = _run(capsys, "report", "shared",
                        "--entry", "txn:SSP1", "--entry", "txn:SSP2",
                        "--entry", "txn:SSP3", "--entry", "txn:SSP4",
                        "--threshold", "2", "--format", "records")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines() if line]
    assert len(rows) == 13
    assert all(r["entry_count"] == 4 for r in rows)


def test_impact_command(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "ssp3", "--seed", "txn:SSP3")
    _run(capsys, "inc", "expand", "ssp3")
    code, out, _ = _run(capsys, "inc", "impact", "ssp3", "prog:LGICVS01",
                        "--format", "records")
    assert code == 0
    doc = json.loads(out)
    assert doc["boundary_after"] - doc["boundary_before"] == doc["delta"]


def test_edit_command_pins(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "ssp3", "--seed", "txn:SSP3")
    _run(capsys, "inc", "expand", "ssp3")
    code, out, _ = _run(capsys, "inc", "edit", "ssp3", "--remove", "table:CLAIM")
    assert code == 0
    code, out, _ = _run(capsys, "inc", "show", "ssp3")
    assert "5 tables" in out
    code, _, err = _run(capsys, "inc", "edit", "ssp3", "--remove", "txn:SSP3")
    assert code == 2
    assert "seed cannot be removed" in err


def test_export_deterministic_across_runs(workdir, capsys):
    _setup_genapp(capsys)
    code, _, _ = _run(capsys, "export", "--format", "dot", "-o", "a.dot")
    assert code == 0
    code, _, _ = _run(capsys, "export", "--format", "dot", "-o", "b.dot")
    assert (workdir / "a.dot").read_text() == (workdir / "b.dot").read_text()
    code, _, _ = _run(capsys, "export", "--format", "graphml", "-o", "g.graphml")
    assert code == 0
    assert (workdir / "g.graphml").read_text().startswith("<?xml")


def test_export_increment_to_stdout(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "lgcf", "--seed", "txn:LGCF")
    _run(capsys, "inc", "expand", "lgcf")
    code, out, _ = _run(capsys, "export", "--increment", "lgcf", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")
    assert 'color="red"' in out


def test_snapshot_env_var_override(workdir, capsys, monkeypatch):
    monkeypatch.setenv("INCR_SNAPSHOT", str(workdir / "alt.snap"))
    _run(capsys, "fixture", "genapp", "-o", "./fx")
    code, _, _ = _run(capsys, "ingest", "./fx/genapp.facts")
    assert code == 0
    assert (workdir / "alt.snap").exists()
    assert not (workdir / "workspace.snap").exists()


def test_inc_list(workdir, capsys):
    _setup_genapp(capsys)
    _run(capsys, "inc", "create", "a", "--seed", "txn:SSP1")
    _run(capsys, "inc", "create", "b", "--seed", "txn:SSP2")
    code, out, _ = _run(capsys, "inc", "list")
    assert code == 0
    assert "a" in out and "b" in out
