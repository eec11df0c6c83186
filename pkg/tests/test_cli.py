import json

import numpy as np
import pytest

from etlmsc.cli import main


def run_gen(out_dir, samples=90, seed=7, complementary=False, capsys=None):
    argv = [
        "gen",
        "--samples", str(samples),
        "--clusters", "3",
        "--num-views", "3",
        "--dims", "4",
        "--separation", "10",
        "--noise", "1.5",
        "--seed", str(seed),
        "--out", str(out_dir),
    ]
    if complementary:
        argv += ["--complementary", "true"]
    code = main(argv)
    assert code == 0
    return [out_dir / f"view_{v}.csv" for v in (1, 2, 3)], out_dir / "truth.csv"


class TestGen:
    def test_writes_views_and_truth(self, tmp_path, capsys):
        views, truth = run_gen(tmp_path / "corpus")
        for path in views:
            rows = path.read_text().strip().split("\n")
            assert len(rows) == 90
            assert len(rows[0].split(",")) == 4
        labels = truth.read_text().strip().split("\n")
        assert len(labels) == 90
        manifest = json.loads(capsys.readouterr().out)
        assert manifest["samples"] == 90
        assert len(manifest["views"]) == 3

    def test_rerun_is_identical(self, tmp_path):
        views_a, truth_a = run_gen(tmp_path / "a")
        views_b, truth_b = run_gen(tmp_path / "b")
        for a, b in zip(views_a + [truth_a], views_b + [truth_b]):
            assert a.read_bytes() == b.read_bytes()


class TestCluster:
    def test_full_run_outputs(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        views, truth = run_gen(corpus)
        out = tmp_path / "run"
        code = main(
            ["cluster", "--views", *map(str, views), "--truth", str(truth),
             "--clusters", "3", "--seed", "1", "--out", str(out)]
        )
        assert code == 0
        labels = (out / "labels.csv").read_text().strip().split("\n")
        assert len(labels) == 90
        assert all(v in {"0", "1", "2"} for v in labels)
        result = json.loads((out / "result.json").read_text())
        metrics = result["metrics"]
        for key in ("nmi", "acc", "f_score", "precision", "recall"):
            assert 0.0 <= metrics[key] <= 1.0
        assert -1.0 <= metrics["ari"] <= 1.0
        assert result["converged"] is True
        assert result["config"]["clusters"] == 3
        assert result["config"]["lam"] > 0
        assert len(result["trace"]["mu"]) == result["trace"]["iterations"]
        assert len(result["trace"]["iter_seconds"]) == result["trace"]["iterations"]
        zstar = np.loadtxt(out / "zstar.csv", delimiter=",")
        assert zstar.shape == (90, 90)
        assert np.max(np.abs(zstar.sum(axis=1) - 1.0)) < 1e-9

    def test_missing_view_file_exits_one(self, tmp_path, capsys):
        code = main(
            ["cluster", "--views", str(tmp_path / "nope.csv"),
             "--clusters", "3", "--out", str(tmp_path)]
        )
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_without_truth_metrics_null(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, _ = run_gen(corpus, samples=45)
        out = tmp_path / "run"
        code = main(
            ["cluster", "--views", *map(str, views), "--clusters", "3",
             "--out", str(out)]
        )
        assert code == 0
        assert json.loads((out / "result.json").read_text())["metrics"] is None

    def test_unrotated_mode(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, truth = run_gen(corpus, samples=45)
        out = tmp_path / "run"
        code = main(
            ["cluster", "--views", *map(str, views), "--truth", str(truth),
             "--clusters", "3", "--rotated", "false", "--out", str(out)]
        )
        assert code == 0
        result = json.loads((out / "result.json").read_text())
        assert result["config"]["rotated"] is False

    def test_config_file_precedence(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, _ = run_gen(corpus, samples=45)
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"seed": 5, "sigma_ratio": 0.5}))
        out = tmp_path / "run"
        code = main(
            ["cluster", "--views", *map(str, views), "--clusters", "3",
             "--seed", "9", "--config", str(config), "--out", str(out)]
        )
        assert code == 0
        cfg = json.loads((out / "result.json").read_text())["config"]
        assert cfg["seed"] == 9  # flag wins
        assert cfg["sigma_ratio"] == 0.5  # config beats default

    def test_deterministic_given_seed(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, truth = run_gen(corpus, samples=45)
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            assert main(
                ["cluster", "--views", *map(str, views), "--truth", str(truth),
                 "--clusters", "3", "--seed", "3", "--out", str(out)]
            ) == 0
            outs.append((out / "labels.csv").read_bytes())
        assert outs[0] == outs[1]


class TestBaselines:
    def test_labels_files_and_comparison(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, truth = run_gen(corpus, samples=45)
        out = tmp_path / "run"
        code = main(
            ["baselines", "--views", *map(str, views), "--truth", str(truth),
             "--clusters", "3", "--out", str(out)]
        )
        assert code == 0
        for name in ("spc_view_1", "spc_view_2", "spc_view_3", "mean_p", "spc_best", "etlmsc"):
            assert (out / f"labels_{name}.csv").is_file()
        lines = (out / "comparison.csv").read_text().strip().split("\n")
        assert lines[0] == "method,nmi,acc,ari,f_score,precision,recall"
        assert len(lines) == 7
        for line in lines[1:]:
            assert len(line.split(",")) == 7

    def test_single_view_without_truth(self, tmp_path):
        corpus = tmp_path / "corpus"
        views, _ = run_gen(corpus, samples=45)
        out = tmp_path / "run"
        code = main(
            ["baselines", "--views", str(views[0]), "--clusters", "3",
             "--out", str(out)]
        )
        assert code == 0
        assert (out / "labels_spc_view_1.csv").is_file()
        assert (out / "labels_mean_p.csv").is_file()
        assert not (out / "labels_spc_best.csv").exists()
        assert not (out / "comparison.csv").exists()


class TestEval:
    def test_identical_files(self, tmp_path, capsys):
        path = tmp_path / "labels.csv"
        path.write_text("0\n0\n1\n1\n2\n2\n")
        assert main(["eval", str(path), str(path)]) == 0
        metrics = json.loads(capsys.readouterr().out)
        assert all(metrics[k] == 1.0 for k in ("nmi", "acc", "ari", "f_score", "precision", "recall"))

    def test_length_mismatch_exits_one(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text("0\n1\n")
        b.write_text("0\n1\n2\n")
        assert main(["eval", str(a), str(b)]) == 1
        assert "lengths differ" in capsys.readouterr().err

    def test_known_accuracy_case(self, tmp_path, capsys):
        truth = tmp_path / "t.csv"
        pred = tmp_path / "p.csv"
        truth.write_text("0\n0\n1\n1\n2\n2\n")
        pred.write_text("0\n1\n1\n2\n2\n0\n")
        assert main(["eval", str(truth), str(pred)]) == 0
        assert json.loads(capsys.readouterr().out)["acc"] == 0.5

    def test_reproduces_result_json_metrics(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        views, truth = run_gen(corpus, samples=45)
        out = tmp_path / "run"
        assert main(
            ["cluster", "--views", *map(str, views), "--truth", str(truth),
             "--clusters", "3", "--out", str(out)]
        ) == 0
        capsys.readouterr()
        assert main(["eval", str(truth), str(out / "labels.csv")]) == 0
        via_eval = json.loads(capsys.readouterr().out)
        via_result = json.loads((out / "result.json").read_text())["metrics"]
        assert via_eval == via_result
