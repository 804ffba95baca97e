"""Evaluation protocols around the SVM.

The under-sampling ensemble trains k models on all positives plus k
independent negative subsets of matching size; reported metrics are the
mean over the k runs. Cross-validation is stratified; the 70/30 split
mode shares the same seeding contract (all sampling is driven by one
numpy Generator seeded from the caller's seed).
"""
from __future__ import annotations

import numpy as np

from .metrics import Metrics, evaluate, mean_metrics
from .svm import SvmModel, SvmParams, matrix_from_vectors, train_svm
from .types import ALL_SETS, FeatureVector

STAGES = ("A", "AB", "ABC", "ABCD")


class ProtocolError(ValueError):
    pass


def _subset(rng: np.random.Generator, n_from: int, n_take: int) -> np.ndarray:
    # with replacement only when the pool is too small
    replace = n_from < n_take
    return rng.choice(n_from, size=n_take, replace=replace)


def undersample_ensemble(X_pos, X_neg, X_test, y_test, k: int = 10,
                         params: SvmParams = SvmParams(), seed: int = 7,
                         sets: str = ALL_SETS,
                         feature_names=None):
    """Train k under-sampled models, evaluate each on the shared test set.

    Returns (summary dict, per-run Metrics list, models list).
    """
    if k < 1:
        raise ProtocolError("k must be >= 1")
    X_pos = np.asarray(X_pos, dtype=np.float64)
    X_neg = np.asarray(X_neg, dtype=np.float64)
    rng = np.random.default_rng(seed)
    runs: list[Metrics] = []
    models: list[SvmModel] = []
    for _ in range(k):
        idx = _subset(rng, len(X_neg), len(X_pos))
        X = np.vstack([X_pos, X_neg[idx]])
        y = np.concatenate([np.ones(len(X_pos)), -np.ones(len(X_pos))])
        model = train_svm(X, y, params, sets=sets, feature_names=feature_names)
        models.append(model)
        runs.append(evaluate(model, X_test, y_test))
    return mean_metrics(runs), runs, models


def stratified_folds(y, folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Shuffled stratified fold assignment; returns test-index arrays."""
    y = np.asarray(y)
    out: list[list[int]] = [[] for _ in range(folds)]
    for cls in (1, -1):
        idx = np.flatnonzero(y == cls)
        if len(idx) < folds:
            raise ProtocolError(f"class {cls} has fewer than {folds} members")
        idx = idx[rng.permutation(len(idx))]
        for i, j in enumerate(idx):
            out[i % folds].append(int(j))
    return [np.asarray(sorted(f)) for f in out]


def cross_validate(X, y, folds: int = 10, params: SvmParams = SvmParams(),
                   seed: int = 7, ensemble_k: int = 10,
                   sets: str = ALL_SETS, feature_names=None):
    """Stratified k-fold CV of the under-sampling ensemble.

    Returns {"folds": [per-fold summary...], "mean": overall summary} where
    the overall summary averages every per-model run across all folds.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    fold_idx = stratified_folds(y, folds, rng)
    fold_summaries = []
    all_runs: list[Metrics] = []
    for test_idx in fold_idx:
        train_mask = np.ones(len(y), dtype=bool)
        train_mask[test_idx] = False
        Xtr, ytr = X[train_mask], y[train_mask]
        summary, runs, _ = undersample_ensemble(
            Xtr[ytr == 1], Xtr[ytr == -1], X[test_idx], y[test_idx],
            k=ensemble_k, params=params, seed=int(rng.integers(2**32)),
            sets=sets, feature_names=feature_names)
        fold_summaries.append(summary)
        all_runs.extend(runs)
    return {"folds": fold_summaries, "mean": mean_metrics(all_runs)}


def split_eval(X, y, test_fraction: float = 0.3, params: SvmParams = SvmParams(),
               seed: int = 7, ensemble_k: int = 10,
               sets: str = ALL_SETS, feature_names=None):
    """Stratified single train/test split of the ensemble protocol.

    Returns (summary, per-run Metrics, models, test_idx).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    test_parts = []
    for cls in (1, -1):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(len(idx))]
        n_test = max(1, round(len(idx) * test_fraction))
        test_parts.append(idx[:n_test])
    test_idx = np.asarray(sorted(np.concatenate(test_parts)))
    train_mask = np.ones(len(y), dtype=bool)
    train_mask[test_idx] = False
    Xtr, ytr = X[train_mask], y[train_mask]
    summary, runs, models = undersample_ensemble(
        Xtr[ytr == 1], Xtr[ytr == -1], X[test_idx], y[test_idx],
        k=ensemble_k, params=params, seed=int(rng.integers(2**32)),
        sets=sets, feature_names=feature_names)
    return summary, runs, models, test_idx


def labels_from_vectors(vectors: list[FeatureVector], labels: dict[str, str]) -> np.ndarray:
    y = []
    for v in vectors:
        lab = labels.get(v.account)
        if lab not in ("suspicious", "legitimate"):
            raise ProtocolError(f"account '{v.account}' has no usable label")
        y.append(1 if lab == "suspicious" else -1)
    return np.asarray(y)


def incremental_feature_eval(vectors: list[FeatureVector], y,
                             stages=STAGES, folds: int = 10,
                             params: SvmParams = SvmParams(), seed: int = 7,
                             ensemble_k: int = 10) -> dict[str, dict]:
    """Run the full CV+ensemble protocol once per cumulative feature stage."""
    results = {}
    for stage in stages:
        X, names, _ = matrix_from_vectors(vectors, stage)
        results[stage] = cross_validate(
            X, y, folds=folds, params=params, seed=seed,
            ensemble_k=ensemble_k, sets=stage, feature_names=names)
    return results


def feature_importance(models: list[SvmModel], X_test, y_test,
                       seed: int = 7, n_shuffles: int = 10):
    """Permutation importance: mean accuracy drop when one column is shuffled.

    Returns a list of (feature_name, importance) sorted by decreasing
    importance, ties broken by canonical feature order.
    """
    if not models:
        raise ProtocolError("no models")
    X_test = np.asarray(X_test, dtype=np.float64)
    y_test = np.asarray(y_test)
    names = models[0].feature_names
    rng = np.random.default_rng(seed)

    def ensemble_accuracy(M):
        return float(np.mean([
            np.mean(m.predict(M) == y_test) for m in models]))

    baseline = ensemble_accuracy(X_test)
    importances = []
    for c in range(X_test.shape[1]):
        drops = []
        for _ in range(n_shuffles):
            perm = rng.permutation(len(X_test))
            Xp = X_test.copy()
            Xp[:, c] = Xp[perm, c]
            drops.append(baseline - ensemble_accuracy(Xp))
        importances.append(float(np.mean(drops)))
    order = sorted(range(len(names)), key=lambda i: (-importances[i], i))
    return [(names[i], importances[i]) for i in order]
