"""Command-line interface: one binary, eight subcommands.

Exit codes: 0 success, 1 usage or parse error, 2 validation findings,
3 runtime failure. Reports are written atomically (temp file + rename)
and every command with an output target also writes a run manifest
(``<out>.manifest.json`` or ``manifest.json`` inside an output
directory) with argument, seed and input-digest provenance.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
import time

import click
import numpy as np

from . import __version__
from .churn import anatomy_report
from .dataio import DatasetError, load_dataset, validate_dataset, write_dataset
from .features import (
    FeatureConfig,
    FeatureError,
    default_spam_words,
    extract_all,
    load_spam_words,
    read_features_csv,
    write_features_csv,
)
from .metrics import evaluate as evaluate_model
from .protocol import labels_from_vectors
from .simulate import scenario_presets, simulate_dataset, write_schedule
from .svm import (
    SvmError,
    SvmParams,
    load_model,
    matrix_from_vectors,
    save_model,
    train_svm,
)
from .types import LABEL_LEGITIMATE, LABEL_SUSPICIOUS
from .urlaudit import LocalBlacklistProvider, audit_corpus, spam_word_frequencies

DEFAULT_SEED = 7


class RuntimeFailure(Exception):
    pass


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _input_digests(paths) -> dict[str, str]:
    out = {}
    for p in paths:
        if os.path.isdir(p):
            for name in sorted(os.listdir(p)):
                # another run's provenance is not input data
                if name == "manifest.json" or name.endswith(".manifest.json"):
                    continue
                full = os.path.join(p, name)
                if os.path.isfile(full):
                    out[full] = _digest(full)
        elif os.path.isfile(p):
            out[p] = _digest(p)
    return out


def _write_manifest(manifest_path: str, command: str, seed: int | None,
                    inputs, started: float) -> None:
    obj = {
        "command": command,
        "arguments": sys.argv[1:],
        "seed": seed,
        "input_digests": _input_digests(inputs),
        "tool_version": __version__,
        "duration_seconds": round(time.monotonic() - started, 6),
    }
    _atomic_write(manifest_path, _json_text(obj))


def _dataset_now(d) -> int:
    stamps = [t.created_at for ts in d.tweets.values() for t in ts]
    stamps += [s for series in d.snapshots.values() for s in series.times()]
    return max(stamps, default=0)


@click.group()
@click.version_option(version=__version__, message="%(prog)s %(version)s")
def cli():
    """Follower-churn forensics toolkit."""


@cli.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--validate", "do_validate", is_flag=True, help="Run consistency checks.")
@click.option("--gap-threshold", default=7200, show_default=True,
              help="Snapshot gap threshold in seconds.")
def ingest(root, do_validate, gap_threshold):
    """Load a dataset root; optionally report consistency findings."""
    d = load_dataset(root)
    click.echo(f"loaded {len(d.accounts)} accounts, "
               f"{sum(len(t) for t in d.tweets.values())} tweets, "
               f"{len(d.snapshots)} snapshot series")
    if do_validate:
        report = validate_dataset(d, snapshot_gap_threshold=gap_threshold)
        for f in report.findings:
            click.echo(f"{f.kind}\t{f.subject}\t{f.detail}")
        if not report.clean:
            return 2
    return 0


@cli.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--target", "targets", multiple=True,
              help="Restrict dip/entropy analysis to these targets.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def analyze(root, targets, out):
    """Write the anatomy/dip report plus plot-ready CSV tables."""
    started = time.monotonic()
    d = load_dataset(root)
    report = anatomy_report(d, targets=list(targets) or None)
    _atomic_write(out, _json_text(report.to_json()))
    stem = out[:-5] if out.endswith(".json") else out
    for name, rows in sorted(report.distributions.items()):
        lines = ["value,cum_fraction"]
        lines += [f"{v!r},{f!r}" for v, f in rows]
        _atomic_write(f"{stem}_{name}.csv", "\n".join(lines) + "\n")
    _write_manifest(out + ".manifest.json", "analyze", None, [root], started)
    return 0


@cli.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--sets", default="ABCD", show_default=True)
@click.option("--spam-words", "spam_words_path", type=click.Path(exists=True, dir_okay=False),
              help="One lowercase entry per line; defaults to the bundled list.")
@click.option("--now", "now_ts", type=int, default=None,
              help="Evaluation instant (epoch seconds); default: latest dataset timestamp.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def features(root, sets, spam_words_path, now_ts, out):
    """Extract canonical feature vectors to CSV (one row per account)."""
    started = time.monotonic()
    d = load_dataset(root)
    words = load_spam_words(spam_words_path) if spam_words_path else default_spam_words()
    cfg = FeatureConfig(spam_word_list=words,
                        now=now_ts if now_ts is not None else _dataset_now(d))
    vectors = extract_all(d, cfg, sets)
    tmp = out + ".tmp"
    write_features_csv(tmp, d, vectors)
    os.replace(tmp, out)
    inputs = [root] + ([spam_words_path] if spam_words_path else [])
    _write_manifest(out + ".manifest.json", "features", None, inputs, started)
    return 0


@cli.command("audit-urls")
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--blacklist", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--lang", default=None, help="Language filter for word frequencies.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def audit_urls(root, blacklist, lang, out):
    """Audit tweet URLs against the local blacklist provider."""
    started = time.monotonic()
    d = load_dataset(root)
    provider = LocalBlacklistProvider.from_file(blacklist)
    report = audit_corpus(d, [provider])
    obj = report.to_json()
    obj["word_frequencies"] = [
        {"word": w, "count": c}
        for w, c in spam_word_frequencies(d, report, lang_filter=lang)[:100]
    ]
    _atomic_write(out, _json_text(obj))
    _write_manifest(out + ".manifest.json", "audit-urls", None, [root, blacklist], started)
    return 0


def _matrix_for_model(path, sets):
    rows = read_features_csv(path)
    labeled = [(aid, lab, v) for aid, lab, v in rows if lab]
    if not labeled:
        raise RuntimeFailure(f"no labeled rows in {path}")
    want = set(sets)
    for aid, _, v in labeled:
        missing = want - v.sets
        if missing:
            raise RuntimeFailure(
                f"feature mask mismatch for '{aid}': model needs sets "
                f"{''.join(sorted(want))} but row provides {v.mask_string() or '(none)'}")
    vectors = [v for _, _, v in labeled]
    X, names, ids = matrix_from_vectors(vectors, sets)
    y = labels_from_vectors(
        vectors, {aid: lab for aid, lab, _ in labeled})
    return X, y, names, ids


@cli.command()
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--sets", default="ABCD", show_default=True)
@click.option("--c", "c_value", default=1000.0, show_default=True)
@click.option("--gamma", default="auto", show_default=True,
              help="RBF width, or 'auto' for 1/(n_features * variance).")
@click.option("--seed", default=DEFAULT_SEED, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def train(features_path, sets, c_value, gamma, seed, out):
    """Train one RBF-SVM on every labeled row of a feature CSV."""
    started = time.monotonic()
    g = None if gamma == "auto" else float(gamma)
    X, y, names, _ = _matrix_for_model(features_path, sets)
    params = SvmParams(C=c_value, gamma=g)
    model = train_svm(X, y, params, sets=sets, feature_names=names)
    tmp = out + ".tmp"
    save_model(model, tmp)
    os.replace(tmp, out)
    _write_manifest(out + ".manifest.json", "train", seed, [features_path], started)
    return 0


@cli.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def evaluate(model_path, features_path, out):
    """Evaluate a model on a labeled feature CSV."""
    started = time.monotonic()
    model = load_model(model_path)
    X, y, _, _ = _matrix_for_model(features_path, model.sets)
    metrics = evaluate_model(model, X, y)
    _atomic_write(out, _json_text(metrics.to_json()))
    _write_manifest(out + ".manifest.json", "evaluate", None,
                    [model_path, features_path], started)
    return 0


@cli.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def predict(model_path, features_path):
    """Print id,label,decision for every row of a feature CSV."""
    model = load_model(model_path)
    rows = read_features_csv(features_path)
    want = set(model.sets)
    for aid, _, v in rows:
        missing = want - v.sets
        if missing:
            raise RuntimeFailure(
                f"feature mask mismatch for '{aid}': model needs sets "
                f"{''.join(sorted(want))} but row provides {v.mask_string() or '(none)'}")
    X, _, ids = matrix_from_vectors([v for _, _, v in rows], model.sets)
    scores = model.decision_function(X)
    labels = np.where(scores > 0.0, LABEL_SUSPICIOUS, LABEL_LEGITIMATE)
    for aid, lab, s in zip(ids, labels, scores):
        click.echo(f"{aid},{lab},{float(s)!r}")
    return 0


@cli.command()
@click.option("--preset", required=True,
              type=click.Choice(sorted(scenario_presets().keys())))
@click.option("--seed", default=DEFAULT_SEED, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def simulate(preset, seed, out_dir):
    """Generate a labeled synthetic dataset root plus schedule.jsonl."""
    from dataclasses import replace as dc_replace

    started = time.monotonic()
    cfg = dc_replace(scenario_presets()[preset], seed=seed)
    d, schedule = simulate_dataset(cfg)
    os.makedirs(out_dir, exist_ok=True)
    write_dataset(d, out_dir)
    write_schedule(schedule, os.path.join(out_dir, "schedule.jsonl"))
    _write_manifest(os.path.join(out_dir, "manifest.json"), "simulate", seed, [], started)
    return 0


def main(argv=None) -> int:
    try:
        rc = cli.main(args=argv, standalone_mode=False)
        return int(rc) if isinstance(rc, int) else 0
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        e.show(file=sys.stderr)
        return 1
    except click.ClickException as e:
        e.show(file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        return 1
    except (DatasetError, FeatureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (RuntimeFailure, SvmError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except Exception as e:  # unexpected runtime failure
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
