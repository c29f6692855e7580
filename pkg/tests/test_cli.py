"""CLI surface: exit codes, report shapes, end-to-end wiring."""

from __future__ import annotations

import json

import pytest

from bench_cases import write_benchmark
from conftest import write_jar
from corpus_fixture import build_fixture
from jarcompat.classfile import ClassSpec, MethodSpec
from jarcompat.cli import main

HANDLER_V1 = ClassSpec(
    "srv.Handler", kind="interface", methods=(MethodSpec("a", "()V", is_abstract=True),)
)
HANDLER_V2 = ClassSpec(
    "srv.Handler",
    kind="interface",
    methods=(MethodSpec("a", "()V", is_abstract=True), MethodSpec("b", "()V", is_abstract=True)),
)
MOCK = ClassSpec("cli.MockHandler", interfaces=("srv.Handler",), methods=(MethodSpec("a", "()V"),))


@pytest.fixture
def jars(tmp_path):
    return {
        "v1": write_jar(tmp_path / "v1.jar", [HANDLER_V1]),
        "v2": write_jar(tmp_path / "v2.jar", [HANDLER_V2]),
        "client": write_jar(tmp_path / "client.jar", [MOCK]),
        "dir": tmp_path,
    }


def test_delta_gate_detects_breaking(jars, capsys):
    code = main(
        ["delta", str(jars["v1"]), str(jars["v2"]), "--json", "-", "--fail-on-breaking"]
    )
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert code == 1
    assert payload["schemaVersion"] == 1
    assert [c["kind"] for c in payload["changes"]] == ["methodAddedToInterface"]


def test_delta_identical_jars_exit_zero(jars, capsys):
    code = main(["delta", str(jars["v1"]), str(jars["v1"]), "--fail-on-breaking", "--json", "-"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["changes"] == []


def test_delta_corrupt_jar_exit_three(tmp_path, jars, capsys):
    bad = tmp_path / "bad.jar"
    bad.write_bytes(b"not a zip")
    code = main(["delta", str(bad), str(jars["v2"])])
    assert code == 3


def test_delta_csv_output(jars, capsys):
    code = main(["delta", str(jars["v1"]), str(jars["v2"]), "--csv", "-"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "kind,element,stability,detail"
    assert out[1].startswith("methodAddedToInterface,srv.Handler.b()V,stable")


def test_delta_scope_all_flag(tmp_path, capsys):
    beta_v1 = write_jar(
        tmp_path / "beta1.jar",
        [ClassSpec("p.A", methods=(MethodSpec("m", annotations=("x.Beta",)), MethodSpec("keep")))],
    )
    beta_v2 = write_jar(tmp_path / "beta2.jar", [ClassSpec("p.A", methods=(MethodSpec("keep"),))])
    assert main(["delta", str(beta_v1), str(beta_v2), "--fail-on-breaking"]) == 0
    capsys.readouterr()
    assert (
        main(["delta", str(beta_v1), str(beta_v2), "--fail-on-breaking", "--scope", "all"]) == 1
    )


def test_detect_end_to_end(jars, capsys):
    code = main(
        [
            "detect",
            str(jars["v1"]),
            str(jars["v2"]),
            str(jars["client"]),
            "--json",
            "-",
            "--fail-on-broken",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    assert payload["impact"]["broken"] is True
    assert len(payload["detections"]) == 1
    detection = payload["detections"][0]
    assert detection["bcKind"] == "methodAddedToInterface"
    assert detection["useKind"] == "implements"
    assert detection["client"] == "cli.MockHandler"


def test_detect_unrelated_client(tmp_path, jars, capsys):
    loner = write_jar(tmp_path / "loner.jar", [ClassSpec("cli.Loner")])
    code = main(
        ["detect", str(jars["v1"]), str(jars["v2"]), str(loner), "--json", "-", "--fail-on-broken"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["impact"]["broken"] is False
    assert payload["detections"] == []
    assert payload["impact"]["unused"] == 1


def test_classify_examples(capsys):
    assert main(["classify", "3.0.1", "3.1.0"]) == 0
    assert capsys.readouterr().out.startswith("minor")
    assert main(["classify", "0.1.0", "0.2.0"]) == 0
    assert capsys.readouterr().out.startswith("dev")
    assert main(["classify", "1.0.0", "1.0.0"]) == 2
    assert "error" in capsys.readouterr().out


def test_corpus_derive_and_run(tmp_path, capsys):
    artifacts, edges, jar_root = build_fixture(tmp_path / "fixture")
    out_derive = tmp_path / "derived"
    code = main(
        [
            "corpus",
            "derive",
            "--artifacts",
            str(artifacts),
            "--edges",
            str(edges),
            "--jars",
            str(jar_root),
            "--out",
            str(out_derive),
        ]
    )
    assert code == 0
    rows = (out_derive / "upgrades.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 4
    assert {row.split(",")[4] for row in rows[1:]} == {"minor", "major", "patch"}

    out_run = tmp_path / "ran"
    code = main(
        [
            "corpus",
            "run",
            "--artifacts",
            str(artifacts),
            "--edges",
            str(edges),
            "--jars",
            str(jar_root),
            "--out",
            str(out_run),
            "--jobs",
            "1",
            "--sample",
            "all:0.99:0.01",
        ]
    )
    assert code == 0
    assert (out_run / "detections.csv").exists()
    assert (out_run / "sample_sizes.csv").exists()


def test_corpus_schema_error_exit_three(tmp_path):
    artifacts = tmp_path / "artifacts.csv"
    artifacts.write_text("wrong,header\n", encoding="utf-8")
    edges = tmp_path / "edges.csv"
    edges.write_text("kind,scope,from,to\n", encoding="utf-8")
    code = main(
        ["corpus", "derive", "--artifacts", str(artifacts), "--edges", str(edges), "--out", str(tmp_path / "o")]
    )
    assert code == 3


def test_analyze_summary_mode(tmp_path):
    summary = {
        "levels": {
            "major": {"population": 29847, "sample": 10663, "broken": 1250},
            "minor": {"population": 111830, "sample": 14445, "broken": 1130},
            "patch": {"population": 123286, "sample": 14621, "broken": 735},
            "dev": {"population": 28854, "sample": 10533, "broken": 1772},
        }
    }
    summary_path = tmp_path / "table5.json"
    summary_path.write_text(json.dumps(summary), encoding="utf-8")
    out = tmp_path / "report"
    code = main(["analyze", "--out", str(out), "--summary", str(summary_path)])
    assert code == 0
    proportions = (out / "proportions.csv").read_text(encoding="utf-8").splitlines()
    assert "major,29847,10663,1250,11.7" in proportions
    pairwise = (out / "q3_pairwise_fisher.csv").read_text(encoding="utf-8").splitlines()
    major_minor = next(line for line in pairwise if line.startswith("major vs minor"))
    assert ",0.64," in major_minor
    assert major_minor.endswith("***")


def test_analyze_pipeline_results(tmp_path, capsys):
    artifacts, edges, jar_root = build_fixture(tmp_path / "fixture")
    results = tmp_path / "results"
    assert (
        main(
            [
                "corpus", "run",
                "--artifacts", str(artifacts),
                "--edges", str(edges),
                "--jars", str(jar_root),
                "--out", str(results),
            ]
        )
        == 0
    )
    out = tmp_path / "analysis"
    assert main(["analyze", str(results), "--out", str(out)]) == 0
    q1 = (out / "q1_ratios.csv").read_text(encoding="utf-8").splitlines()
    total = next(line for line in q1 if line.startswith("total,"))
    assert total.split(",")[1] == "3"
    assert (out / "report.md").exists()
    assert (out / "q2_trend.csv").exists()


def test_analyze_empty_results(tmp_path):
    results = tmp_path / "results"
    results.mkdir()
    out = tmp_path / "analysis"
    assert main(["analyze", str(results), "--out", str(out)]) == 0
    assert (out / "report.md").exists()


def test_bench_command(tmp_path, capsys):
    manifest = write_benchmark(tmp_path / "bench")
    code = main(["bench", str(manifest), "--json", "-"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["fn"] == 2  # the two documented gaps
    assert payload["invalid"] == []
    capsys.readouterr()
    assert main(["bench", str(manifest)]) == 0
    assert "precision=" in capsys.readouterr().out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["delta"])  # missing positional arguments
    assert exc.value.code == 2


def test_stability_config_flag(tmp_path, capsys):
    config = tmp_path / "stability.cfg"
    config.write_text("[keywords]\nzzz\n[annotations]\n", encoding="utf-8")
    v1 = write_jar(
        tmp_path / "c1.jar",
        [ClassSpec("p.A", methods=(MethodSpec("m", annotations=("x.Beta",)), MethodSpec("keep")))],
    )
    v2 = write_jar(tmp_path / "c2.jar", [ClassSpec("p.A", methods=(MethodSpec("keep"),))])
    # Under the custom config @Beta no longer marks instability, so the
    # removal now counts as a stable break.
    code = main(
        ["delta", str(v1), str(v2), "--fail-on-breaking", "--stability-config", str(config)]
    )
    assert code == 1
