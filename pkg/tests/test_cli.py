import json
import os

import pytest

from followerlens.cli import main
from followerlens.dataio import write_dataset
from followerlens.simulate import simulate_dataset, write_schedule

from test_simulate import SMALL


@pytest.fixture(scope="module")
def sim_root(tmp_path_factory):
    root = str(tmp_path_factory.mktemp("cli") / "ds")
    d, schedule = simulate_dataset(SMALL)
    write_dataset(d, root)
    write_schedule(schedule, os.path.join(root, "schedule.jsonl"))
    return root


def test_ingest_ok(sim_root, capsys):
    assert main(["ingest", "--root", sim_root]) == 0
    out = capsys.readouterr().out
    assert "accounts" in out and "snapshot series" in out


def test_ingest_validation_findings_exit_2(sim_root, capsys):
    # friend helper accounts have no snapshots and sparse corpora; the
    # simulated data also has hour gaps below the default threshold, so
    # force findings with a tiny gap threshold
    rc = main(["ingest", "--root", sim_root, "--validate", "--gap-threshold", "1"])
    assert rc == 2
    assert "snapshot-gap" in capsys.readouterr().out


def test_ingest_missing_root_usage_error(tmp_path, capsys):
    assert main(["ingest", "--root", str(tmp_path / "nope")]) == 1


def test_ingest_parse_error_exit_1(tmp_path, capsys):
    root = tmp_path / "bad"
    root.mkdir()
    (root / "accounts.jsonl").write_text("not json\n")
    assert main(["ingest", "--root", str(root)]) == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_analyze_writes_report_and_manifest(sim_root, tmp_path):
    out = str(tmp_path / "report.json")
    assert main(["analyze", "--root", sim_root, "--out", out]) == 0
    report = json.load(open(out))
    assert "distributions" in report and "dip_reports" in report
    assert os.path.exists(str(tmp_path / "report_unfollow_entropy.csv"))
    manifest = json.load(open(out + ".manifest.json"))
    assert manifest["command"] == "analyze"
    assert manifest["tool_version"]
    assert any(p.endswith("accounts.jsonl") for p in manifest["input_digests"])


def test_features_deterministic(sim_root, tmp_path):
    out1 = str(tmp_path / "f1.csv")
    out2 = str(tmp_path / "f2.csv")
    assert main(["features", "--root", sim_root, "--out", out1]) == 0
    assert main(["features", "--root", sim_root, "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    header = open(out1).readline().strip().split(",")
    assert header[:3] == ["id", "label", "mask"]
    assert len(header) == 21


def test_audit_urls(sim_root, tmp_path):
    bl = tmp_path / "blacklist.txt"
    bl.write_text("malware.example\n")
    out = str(tmp_path / "audit.json")
    assert main(["audit-urls", "--root", sim_root, "--blacklist", str(bl),
                 "--out", out]) == 0
    report = json.load(open(out))
    assert set(report) >= {"provider_flagged", "spam_tweets", "word_frequencies"}


@pytest.fixture(scope="module")
def features_csv(sim_root, tmp_path_factory):
    out = str(tmp_path_factory.mktemp("feat") / "features.csv")
    assert main(["features", "--root", sim_root, "--out", out]) == 0
    return out


def test_train_evaluate_predict(features_csv, tmp_path, capsys):
    model = str(tmp_path / "model.json")
    assert main(["train", "--features", features_csv, "--out", model]) == 0
    assert json.load(open(model))["format_version"] == 1

    metrics_out = str(tmp_path / "metrics.json")
    assert main(["evaluate", "--model", model, "--features", features_csv,
                 "--out", metrics_out]) == 0
    metrics = json.load(open(metrics_out))
    assert 0.0 <= metrics["accuracy"] <= 1.0
    assert metrics["confusion"]["tp"] + metrics["confusion"]["fn"] == 4

    capsys.readouterr()
    assert main(["predict", "--model", model, "--features", features_csv]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    # every row of the CSV gets a prediction, labeled or not
    assert len(lines) == 8 + 8 * SMALL.friends_per_account
    for line in lines:
        aid, label, score = line.split(",")
        assert label in ("suspicious", "legitimate")
        float(score)


def test_train_deterministic(features_csv, tmp_path):
    m1 = str(tmp_path / "m1.json")
    m2 = str(tmp_path / "m2.json")
    assert main(["train", "--features", features_csv, "--out", m1]) == 0
    assert main(["train", "--features", features_csv, "--out", m2]) == 0
    assert open(m1, "rb").read() == open(m2, "rb").read()


def test_mask_mismatch_exit_3(sim_root, features_csv, tmp_path, capsys):
    partial = str(tmp_path / "ab.csv")
    assert main(["features", "--root", sim_root, "--sets", "AB",
                 "--out", partial]) == 0
    model = str(tmp_path / "model.json")
    assert main(["train", "--features", features_csv, "--out", model]) == 0
    rc = main(["evaluate", "--model", model, "--features", partial,
               "--out", str(tmp_path / "m.json")])
    assert rc == 3
    assert "mask mismatch" in capsys.readouterr().err


def test_train_without_labels_exit_3(sim_root, tmp_path, capsys):
    # strip labels by rewriting the dataset without them
    from followerlens.dataio import load_dataset, Dataset
    from dataclasses import replace as dc_replace
    d = load_dataset(sim_root)
    unlabeled = Dataset(
        accounts={a: dc_replace(p, label=None) for a, p in d.accounts.items()},
        tweets=d.tweets, snapshots=d.snapshots, friends=d.friends)
    root2 = str(tmp_path / "unlabeled")
    write_dataset(unlabeled, root2)
    feats = str(tmp_path / "f.csv")
    assert main(["features", "--root", root2, "--out", feats]) == 0
    rc = main(["train", "--features", feats, "--out", str(tmp_path / "m.json")])
    assert rc == 3
    assert "no labeled rows" in capsys.readouterr().err


def test_simulate_command(tmp_path):
    out = str(tmp_path / "sim")
    assert main(["simulate", "--preset", "separable", "--seed", "5",
                 "--out", out]) == 0
    for name in ("accounts.jsonl", "tweets.jsonl", "snapshots.jsonl",
                 "friends.jsonl", "schedule.jsonl", "manifest.json"):
        assert os.path.exists(os.path.join(out, name))
    manifest = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest["seed"] == 5


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "0.1.0" in capsys.readouterr().out
