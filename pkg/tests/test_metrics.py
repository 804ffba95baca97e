import numpy as np
import pytest

from followerlens.metrics import (
    Metrics,
    MetricsError,
    auc_score,
    compute_metrics,
    mean_metrics,
)

import oracles


def test_confusion_and_rates_enumerated():
    y_true = [1, 1, 1, 1, -1, -1, -1, -1, -1, -1]
    y_pred = [1, 1, 1, -1, -1, -1, -1, -1, 1, 1]
    m = compute_metrics(y_true, y_pred)
    assert (m.tp, m.fn, m.fp, m.tn) == (3, 1, 2, 4)
    assert m.accuracy == 0.7
    assert m.precision == 3 / 5
    assert m.recall == 3 / 4
    assert m.f1 == pytest.approx(2 * (3 / 5) * (3 / 4) / (3 / 5 + 3 / 4))
    assert m.auc is None
    pct = m.confusion_percent
    assert pct["true_pos_pred_pos"] == 75.0
    assert pct["true_neg_pred_pos"] == pytest.approx(100 * 2 / 6)


def test_degenerate_rates():
    m = compute_metrics([-1, -1], [-1, -1])
    assert m.precision == 0.0 and m.recall == 0.0 and m.f1 == 0.0
    assert m.accuracy == 1.0
    with pytest.raises(MetricsError):
        compute_metrics([], [])
    with pytest.raises(MetricsError):
        compute_metrics([1], [1, -1])


def test_auc_known_cases():
    assert auc_score([1, -1], [2.0, 1.0]) == 1.0
    assert auc_score([1, -1], [1.0, 2.0]) == 0.0
    assert auc_score([1, -1], [1.0, 1.0]) == 0.5
    assert auc_score([1, 1], [1.0, 2.0]) is None
    assert auc_score([1, -1, -1], [2.0, 2.0, 0.0]) == pytest.approx(0.75)


def test_auc_matches_pairwise_brute_force():
    """Rank-based AUC equals brute-force pairwise AUC within 1e-12 on 200
    random score/label sets (including heavy ties)."""
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(4, 60))
        y = np.where(rng.random(n) < 0.5, 1, -1)
        if len(np.unique(y)) < 2:
            y[0] = -y[0]
        if rng.random() < 0.5:
            scores = rng.normal(size=n)
        else:
            scores = rng.integers(0, 5, size=n).astype(float)  # many ties
        got = auc_score(y, scores)
        want = oracles.auc_oracle(list(y), list(scores))
        assert abs(got - want) <= 1e-12


def test_metrics_to_json_round():
    m = compute_metrics([1, -1], [1, -1], scores=[2.0, -1.0])
    j = m.to_json()
    assert j["confusion"] == {"tp": 1, "fp": 0, "tn": 1, "fn": 0}
    assert j["auc"] == 1.0


def test_mean_metrics():
    a = compute_metrics([1, -1], [1, -1], scores=[1.0, -1.0])
    b = compute_metrics([1, -1], [-1, -1], scores=[-1.0, 1.0])
    summary = mean_metrics([a, b])
    assert summary["runs"] == 2
    assert summary["accuracy"] == pytest.approx(0.75)
    assert summary["auc"] == pytest.approx(0.5)
    assert summary["confusion_total"] == {"tp": 1, "fp": 0, "tn": 2, "fn": 1}
    with pytest.raises(MetricsError):
        mean_metrics([])
