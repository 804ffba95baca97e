"""Binary classification metrics: confusion matrix, accuracy, precision,
recall, F1 and rank-based AUC (0.5 credit for tied scores)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float | None

    @property
    def confusion_percent(self) -> dict[str, float]:
        """Row-normalized confusion matrix in percent (rows = true class)."""
        pos = self.tp + self.fn
        neg = self.tn + self.fp
        return {
            "true_pos_pred_pos": 100.0 * self.tp / pos if pos else 0.0,
            "true_pos_pred_neg": 100.0 * self.fn / pos if pos else 0.0,
            "true_neg_pred_pos": 100.0 * self.fp / neg if neg else 0.0,
            "true_neg_pred_neg": 100.0 * self.tn / neg if neg else 0.0,
        }

    def to_json(self) -> dict:
        return {
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "confusion_percent": self.confusion_percent,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
        }


def _midranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def auc_score(y_true: np.ndarray, scores: np.ndarray) -> float | None:
    """Mann-Whitney AUC from decision values; None for one-class input."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(np.sum(y_true > 0))
    n_neg = len(y_true) - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = _midranks(scores)
    rank_sum = float(ranks[y_true > 0].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def compute_metrics(y_true, y_pred, scores=None) -> Metrics:
    """Metrics from true labels, predicted labels and optional decision
    values (labels in {+1, -1}; positive = suspicious)."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if len(y_true) == 0:
        raise MetricsError("empty test set")
    if y_true.shape != y_pred.shape:
        raise MetricsError("label arrays differ in length")
    tp = int(np.sum((y_true > 0) & (y_pred > 0)))
    fp = int(np.sum((y_true <= 0) & (y_pred > 0)))
    tn = int(np.sum((y_true <= 0) & (y_pred <= 0)))
    fn = int(np.sum((y_true > 0) & (y_pred <= 0)))
    n = len(y_true)
    accuracy = (tp + tn) / n
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    auc = auc_score(y_true, scores) if scores is not None else None
    return Metrics(tp=tp, fp=fp, tn=tn, fn=fn, accuracy=accuracy,
                   precision=precision, recall=recall, f1=f1, auc=auc)


def evaluate(model, X, y_true) -> Metrics:
    """Confusion counts and rates for a trained model on a test matrix."""
    scores = model.decision_function(X)
    y_pred = np.where(scores > 0.0, 1, -1)
    return compute_metrics(np.asarray(y_true), y_pred, scores)


def mean_metrics(runs: list[Metrics]) -> dict:
    """Mean of the scalar rates over runs, plus summed confusion counts."""
    if not runs:
        raise MetricsError("no runs to average")
    aucs = [m.auc for m in runs if m.auc is not None]
    return {
        "runs": len(runs),
        "accuracy": float(np.mean([m.accuracy for m in runs])),
        "precision": float(np.mean([m.precision for m in runs])),
        "recall": float(np.mean([m.recall for m in runs])),
        "f1": float(np.mean([m.f1 for m in runs])),
        "auc": float(np.mean(aucs)) if aucs else None,
        "confusion_total": {
            "tp": sum(m.tp for m in runs),
            "fp": sum(m.fp for m in runs),
            "tn": sum(m.tn for m in runs),
            "fn": sum(m.fn for m in runs),
        },
    }
