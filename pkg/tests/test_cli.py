import json

import pytest

from majlab import cli


def run_cli(args):
    return cli.main(args)


def test_simulate_writes_trace(tmp_path, capsys):
    trace = tmp_path / "out.csv"
    code = run_cli(["simulate", "--n", "200", "--p", "0.1", "--delta", "10",
                    "--seed", "7", "--trace", str(trace), "--format", "csv"])
    assert code == 0
    lines = trace.read_text().strip().split("\n")
    assert lines[0] == "day,c1,c2"
    day0 = lines[1].split(",")
    assert day0[0] == "0" and int(day0[1]) == 110
    assert lines[-1].startswith("# ")
    summary = json.loads(capsys.readouterr().out.strip())
    assert summary["kind"] in ("unanimity", "two_cycle", "cap_reached")


def test_simulate_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_cli(["simulate", "--n", "100", "--p", "0.1", "--delta", "5",
                 "--seed", "3", "--trace", str(path), "--format", "csv"])
    assert a.read_bytes() == b.read_bytes()


def test_simulate_json_format(tmp_path):
    trace = tmp_path / "out.json"
    run_cli(["simulate", "--n", "50", "--p", "0.2", "--delta", "2",
             "--trace", str(trace)])
    data = json.loads(trace.read_text())
    assert data["counts"][0][0] == 0
    assert "termination" in data


def test_oracle_exact_output(capsys):
    code = run_cli(["oracle", "--n", "3", "--colors", "112", "--stat",
                    "winprob", "--p", "0.5"])
    assert code == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[0] == "3/8"
    assert out[1].startswith("# = 0.375")


def test_oracle_float_output(capsys):
    code = run_cli(["oracle", "--n", "3", "--colors", "112", "--stat",
                    "winprob", "--p", "0.5", "--float"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0.375"


def test_oracle_setstat(capsys):
    code = run_cli(["oracle", "--n", "5", "--colors", "11222", "--stat",
                    "setstat", "--which", "s_star", "--p", "1/3"])
    assert code == 0
    assert capsys.readouterr().out.strip().split("\n")[0] == "4/3"


def test_sets_subcommand(tmp_path, capsys):
    code = run_cli(["sets", "--n", "30", "--p", "0.2", "--delta", "2",
                    "--seed", "4", "--w", "0"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert set(data) >= {"u", "v", "s1", "s2", "s_star", "i_g"}
    assert "r_hat" in data
    if "day2_identity" in data:
        assert data["day2_identity"]["holds"]


def test_sets_from_graph_file(tmp_path, capsys):
    from majlab.graphs import ColoredGraph
    g = ColoredGraph.from_edges(6, [(0, 2), (1, 2), (2, 3)],
                                [1, 1, 2, 2, 1, 2])
    path = tmp_path / "g.json"
    path.write_text(g.to_json())
    code = run_cli(["sets", "--graph", str(path), "--u", "0", "--v", "1"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["i_g"] == 1
    assert data["day2_identity"]["holds"]


def test_verify_small_grid(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run_cli(["verify", "appendix-a", "--grid", "small",
                    "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert all(pt["pass"] or not pt["asserted"] for pt in report)
    summary = json.loads(capsys.readouterr().out)
    assert summary["clt_supremum"]["failures"] == 0


def test_verify_exit_3_on_violation(monkeypatch, capsys):
    from majlab.appendix_a import InequalityPoint, InequalityReport

    def broken(grid):
        return InequalityReport(points=[InequalityPoint(
            "clt_supremum", {}, 2.0, 1.0, -1.0, False, True)])

    monkeypatch.setattr(cli, "verify_appendix_a", broken)
    code = run_cli(["verify", "appendix-a", "--grid", "small"])
    assert code == 3


def test_sweep_with_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 40, "p": [0.3]}))
    results = tmp_path / "results.jsonl"
    code = run_cli(["sweep", "--config", str(cfg), "--n", "20",
                    "--delta", "1", "--seed", "5",
                    "--results", str(results)])
    assert code == 0
    rec = json.loads(results.read_text().strip())
    assert rec["trials"] == 40 and rec["p"] == 0.3
    # an explicit flag wins over the config file
    results2 = tmp_path / "results2.jsonl"
    code = run_cli(["sweep", "--config", str(cfg), "--n", "20",
                    "--delta", "1", "--seed", "5", "--trials", "25",
                    "--results", str(results2)])
    assert code == 0
    assert json.loads(results2.read_text().strip())["trials"] == 25


def test_scan_subcommand(capsys):
    code = run_cli(["scan", "--n", "20", "--p", "0.9999", "--trials", "60",
                    "--target", "0.8", "--seed", "2"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["delta_hi"] >= data["delta_lo"]


def test_report_lemmas(tmp_path, capsys):
    out = tmp_path / "lemmas.json"
    code = run_cli(["report", "lemmas", "--n", "60", "--p", "0.2",
                    "--delta", "3", "--trials", "120", "--seed", "9",
                    "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert len(payload["records"]) == 22
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 22


def test_invalid_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        run_cli(["simulate", "--n", "10"])  # missing --p
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run_cli(["bogus"])
    assert exc.value.code == 2


def test_runtime_failure_exit_1(capsys):
    code = run_cli(["sets", "--graph", "/nonexistent/file.json"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_missing_delta_is_runtime_error():
    assert run_cli(["simulate", "--n", "10", "--p", "0.5"]) == 1
