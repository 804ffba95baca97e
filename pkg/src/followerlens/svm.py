"""Soft-margin RBF-kernel SVM trained with sequential minimal optimization.

The decision function is f(x) = sum_i coef_i * K(sv_i, x) + bias with
K(u, v) = exp(-gamma * ||u - v||^2). Training standardizes features to
zero mean / unit variance first (the raw features mix seconds, counts and
ratios); absent feature cells are imputed as the column mean, i.e. 0
after scaling. Models serialize to versioned JSON.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .accel import rbf_matrix, smo_solve
from .types import ALL_SETS, FEATURE_NAMES, SET_SLOTS, FeatureVector

MODEL_FORMAT_VERSION = 1

LABEL_POS = 1  # suspicious
LABEL_NEG = -1  # legitimate


class SvmError(ValueError):
    pass


@dataclass(frozen=True)
class SvmParams:
    C: float = 1000.0
    gamma: float | None = None  # None: 1 / (n_features * mean feature variance)
    tolerance: float = 1e-3
    max_iter: int = 200_000

    def __post_init__(self):
        if self.C <= 0 or self.tolerance <= 0:
            raise SvmError("C and tolerance must be positive")
        if self.gamma is not None and self.gamma <= 0:
            raise SvmError("gamma must be positive")


@dataclass(frozen=True)
class Scaler:
    kept: tuple[int, ...]  # input column indices kept (non-constant)
    mean: np.ndarray
    std: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        """Scale kept columns; absent (NaN) cells become 0 after scaling."""
        Z = (X[:, self.kept] - self.mean) / self.std
        return np.nan_to_num(Z, nan=0.0)

    def inverse_transform(self, Z: np.ndarray) -> np.ndarray:
        return Z * self.std + self.mean


def standardize(X: np.ndarray) -> tuple[np.ndarray, Scaler]:
    """Zero-mean unit-variance per column over the present (non-NaN) cells.

    Columns with fewer than two distinct present values are dropped with
    a warning; returns the transformed matrix and the fitted scaler.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise SvmError("empty feature matrix")
    kept = []
    for c in range(X.shape[1]):
        col = X[:, c]
        vals = np.unique(col[~np.isnan(col)])
        if len(vals) < 2:
            warnings.warn(f"dropping constant feature column {c}", stacklevel=2)
        else:
            kept.append(c)
    if not kept:
        raise SvmError("all feature columns constant")
    sub = X[:, kept]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mean = np.nanmean(sub, axis=0)
        std = np.nanstd(sub, axis=0)
    scaler = Scaler(kept=tuple(kept), mean=mean, std=std)
    return scaler.transform(X), scaler


@dataclass(frozen=True)
class SvmModel:
    support_vectors: np.ndarray  # standardized space
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float
    gamma: float
    params: SvmParams
    scaler: Scaler
    sets: str = ALL_SETS
    feature_names: tuple[str, ...] = field(default=FEATURE_NAMES)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Decision values for raw (unscaled) rows matching feature_names."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != len(self.feature_names):
            raise SvmError(
                f"expected {len(self.feature_names)} feature columns, got {X.shape[1]}")
        Z = self.scaler.transform(X)
        K = rbf_matrix(np.ascontiguousarray(Z), self.support_vectors, self.gamma)
        return K @ self.dual_coef + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Labels in {+1, -1}; a decision value of exactly 0 is negative."""
        dv = self.decision_function(X)
        return np.where(dv > 0.0, LABEL_POS, LABEL_NEG)


def train_svm(X: np.ndarray, y: np.ndarray, params: SvmParams = SvmParams(),
              sets: str = ALL_SETS,
              feature_names: tuple[str, ...] | None = None) -> SvmModel:
    """Fit on raw rows (NaN marks absent cells). y must be in {+1, -1}."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise SvmError("X must be 2-D with one label per row")
    if feature_names is None:
        feature_names = (FEATURE_NAMES if X.shape[1] == len(FEATURE_NAMES)
                         else tuple(f"x{i}" for i in range(X.shape[1])))
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise SvmError("labels must be +1 or -1")
    if len(np.unique(y)) < 2:
        raise SvmError("need at least one example of each class")

    Z, scaler = standardize(X)
    if params.gamma is None:
        var = float(Z.var(axis=0).mean())
        gamma = 1.0 / (Z.shape[1] * var) if var > 0 else 1.0
    else:
        gamma = params.gamma

    K = rbf_matrix(Z, Z, gamma)
    # stop an order tighter than the advertised KKT tolerance
    alpha, bias, _ = smo_solve(K, y, float(params.C), params.tolerance * 0.1,
                               params.max_iter)
    sv = alpha > 1e-10
    return SvmModel(
        support_vectors=np.ascontiguousarray(Z[sv]),
        dual_coef=np.ascontiguousarray(alpha[sv] * y[sv]),
        bias=float(bias),
        gamma=gamma,
        params=params,
        scaler=scaler,
        sets=sets,
        feature_names=tuple(feature_names),
    )


def matrix_from_vectors(vectors: list[FeatureVector], sets: str = ALL_SETS):
    """Stack canonical vectors into a raw matrix restricted to the given sets.

    Returns (X, column_names, ids); absent slots become NaN.
    """
    sets = "".join(s for s in ALL_SETS if s in sets.upper())
    cols = [i for s in sets for i in range(SET_SLOTS[s].start, SET_SLOTS[s].stop)]
    names = tuple(FEATURE_NAMES[i] for i in cols)
    X = np.full((len(vectors), len(cols)), np.nan)
    ids = []
    for r, v in enumerate(vectors):
        ids.append(v.account)
        for c, i in enumerate(cols):
            if v.values[i] is not None:
                X[r, c] = v.values[i]
    return X, names, ids


def save_model(model: SvmModel, path: str) -> None:
    obj = {
        "format_version": MODEL_FORMAT_VERSION,
        "sets": model.sets,
        "feature_names": list(model.feature_names),
        "params": {
            "C": model.params.C,
            "gamma": model.params.gamma,
            "tolerance": model.params.tolerance,
            "max_iter": model.params.max_iter,
        },
        "gamma": model.gamma,
        "bias": model.bias,
        "scaler": {
            "kept": list(model.scaler.kept),
            "mean": model.scaler.mean.tolist(),
            "std": model.scaler.std.tolist(),
        },
        "support_vectors": model.support_vectors.tolist(),
        "dual_coef": model.dual_coef.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def load_model(path: str) -> SvmModel:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("format_version") != MODEL_FORMAT_VERSION:
        raise SvmError(f"unsupported model format: {obj.get('format_version')}")
    params = SvmParams(**obj["params"])
    scaler = Scaler(
        kept=tuple(obj["scaler"]["kept"]),
        mean=np.asarray(obj["scaler"]["mean"]),
        std=np.asarray(obj["scaler"]["std"]),
    )
    return SvmModel(
        support_vectors=np.asarray(obj["support_vectors"]),
        dual_coef=np.asarray(obj["dual_coef"]),
        bias=float(obj["bias"]),
        gamma=float(obj["gamma"]),
        params=params,
        scaler=scaler,
        sets=obj["sets"],
        feature_names=tuple(obj["feature_names"]),
    )
