import json
import random

import pytest

from conftest import EX, FIG1_SETTINGS, iri, write_nt
from kg_path_features import hooks
from kg_path_features.cli import build_parser, main
from kg_path_features.features import read_matrix
from kg_path_features.pipeline import resolve_stage, run_pipeline, stage_ingest
from kg_path_features.settings import MiningSettings

FIG1_FLAGS = ["--k", "3", "--t", "2", "--d", "4", "--l-min", "2", "--l-max", "3"]


def args(command, files, *extra):
    return [command, "--graph", str(files.graph), "--seeds", str(files.seeds), *FIG1_FLAGS, *extra]


def test_stages_resolve_in_order():
    assert list(hooks.pipeline_stages) == ["ingest", "canonicalize", "neighbors", "paths", "filter", "emit"]
    assert resolve_stage("ingest") is stage_ingest


def test_run_pipeline(fig1_files):
    ctx = run_pipeline(MiningSettings(**FIG1_SETTINGS), fig1_files.graph, seeds_path=fig1_files.seeds)
    assert ctx.matrix.shape == (2, 6)
    assert set(ctx.report["seconds"]) == set(hooks.pipeline_stages)
    assert ctx.report["canonical"]["seeds"] == 2
    assert ctx.report["neighbors"]["interesting"] == 2
    assert [len(it["added"]) for it in ctx.report["paths"]["iterations"]] == [4, 1, 1]


def test_mine(fig1_files, capsys):
    out = fig1_files.dir / "out"
    assert main(args("mine", fig1_files, "--out", str(out))) == 0
    assert "2 seeds x 6 features" in capsys.readouterr().out
    rows, columns, coo = read_matrix(out)
    assert rows == [iri("n1"), iri("n2")]
    assert [rendered for _, rendered, _ in columns][:3] == [iri("v1"), iri("v6"), f"-[{EX}p4]->({EX}v1)"]
    assert coo.nnz == 12


def test_report_and_dumps(fig1_files):
    report, dumps = fig1_files.dir / "report.json", fig1_files.dir / "dump"
    code = main(args("mine", fig1_files, "--out", str(fig1_files.dir / "out"), "--report", str(report), "--dump-dir", str(dumps)))
    assert code == 0
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["settings"]["d"] == 4 and data["settings"]["l_max"] == 3
    assert data["features"]["after_filter"] == {"neighbor": 2, "path": 1, "pattern": 3}
    assert data["matrix"] == {"rows": 2, "columns": 6}
    iterations = data["paths"]["iterations"]
    assert iterations[1]["replaced"] == [f"-[{EX}p1]->({EX}T1#class)"]
    for name in ("vertices.tsv", "predicates.tsv", "members.tsv", "features.tsv"):
        assert (dumps / name).exists()


def test_config_file_is_overridden_by_flags(fig1_files):
    config = fig1_files.dir / "cfg.json"
    config.write_text(json.dumps({"k": 1, "l_min": 9, "l_max": 9}))
    out = fig1_files.dir / "out"
    assert main(args("mine", fig1_files, "--config", str(config), "--out", str(out))) == 0
    assert len(read_matrix(out)[1]) == 6


def test_nothing_qualifies(fig1_files):
    out = fig1_files.dir / "out"
    code = main(["mine", "--graph", str(fig1_files.graph), "--seeds", str(fig1_files.seeds),
                 "--k", "1", "--l-min", "3", "--out", str(out)])
    assert code == 0
    rows, columns, coo = read_matrix(out)
    assert len(rows) == 2 and columns == [] and coo.nnz == 0


def test_filter_flags(fig1_files, tmp_path):
    group = tmp_path / "hierarchy.txt"
    group.write_text(f"# classes\n{iri('T3')}\n", encoding="utf-8")
    out = tmp_path / "out"
    code = main(args("mine", fig1_files, "--filter-group", f"hierarchy={group}", "--filter", "hierarchy", "--out", str(out)))
    assert code == 0
    assert [kind for kind, _, _ in read_matrix(out)[1]] == ["pattern"]


def test_seed_class(fig1_files):
    out = fig1_files.dir / "out"
    code = main(["mine", "--graph", str(fig1_files.graph), "--seed-class", iri("T1"), *FIG1_FLAGS, "--out", str(out)])
    assert code == 0
    assert read_matrix(out)[0] == [iri("v2"), iri("v4")]


def test_seeds_and_seed_class_exclude_each_other(fig1_files):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["mine", "--graph", "g", "--seeds", "s", "--seed-class", "c", "--out", "o"])


@pytest.mark.parametrize("extra, code", [
    (["--k", "0"], 1),
    (["--l-min", "4"], 1),
    (["--filter", "nope"], 1),
    (["--filter-group", "broken"], 1),
    (["--k", "x"], 1),
    (["--threads", "two"], 1),
])
def test_bad_settings(fig1_files, extra, code):
    assert main(args("mine", fig1_files, "--out", str(fig1_files.dir / "out"), *extra)) == code


def test_missing_graph(fig1_files, caplog):
    code = main(["mine", "--graph", str(fig1_files.dir / "none.nt"), "--seeds", str(fig1_files.seeds), "--out", "o"])
    assert code == 2
    assert "[ingest]" in caplog.text


def test_malformed_graph(fig1_files):
    fig1_files.graph.write_text("<http://ex.org/a> <http://ex.org/p> .\n", encoding="utf-8")
    assert main(args("mine", fig1_files, "--out", str(fig1_files.dir / "out"))) == 2


def test_unknown_seed_class(fig1_files):
    code = main(["stats", "--graph", str(fig1_files.graph), "--seed-class", iri("T9")])
    assert code == 2


def test_stats(fig1_files, capsys):
    assert main(args("stats", fig1_files)) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["configured_d"]["neighbors"] == 8
    assert stats["unbounded_d"]["neighbors"] == 13
    assert stats["configured_d"]["k_full"] == stats["unbounded_d"]["k_full"] == 3
    assert stats["configured_d"]["types"] == 7


def test_oracle(fig1_files, capsys):
    assert main(args("oracle", fig1_files)) == 0
    assert "agrees" in capsys.readouterr().out


@pytest.mark.slow
def test_scales_to_a_generated_graph(tmp_path):
    rng = random.Random(7)
    n, classes = 100_000, 200
    triples = [
        (iri(f"v{rng.randrange(n)}"), iri(f"p{rng.randrange(20)}"), iri(f"v{rng.randrange(n)}"))
        for _ in range(500_000)
    ]
    triples += [(iri(f"v{i}"), "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", iri(f"C{i % classes}")) for i in range(n)]
    triples += [(iri(f"C{i}"), "http://www.w3.org/2000/01/rdf-schema#subClassOf", iri(f"C{i // 4}")) for i in range(1, classes)]
    graph = write_nt(tmp_path / "big.nt", triples)
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("".join(f"{iri(f'v{i}')}\n" for i in range(0, n, n // 500)), encoding="utf-8")
    out, report = tmp_path / "out", tmp_path / "report.json"
    code = main(["mine", "--graph", str(graph), "--seeds", str(seeds), "--k", "3", "--t", "2", "--d", "500",
                 "--l-min", "5", "--threads", "4", "--out", str(out), "--report", str(report)])
    assert code == 0
    assert len(read_matrix(out)[0]) == 500
    paths = json.loads(report.read_text(encoding="utf-8"))["paths"]
    assert paths["generated"] > paths["retained"]


def test_help_still_exits_cleanly():
    with pytest.raises(SystemExit) as e:
        main(["--help"])
    assert e.value.code == 0
