"""Gaussian and Complement Naive Bayes."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

VAR_FLOOR_FRACTION = 1e-9


def gaussian_pdf(x: float, mu: float, sigma: float) -> float:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    z = (x - mu) / sigma
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi * sigma * sigma)


def _check_rows(X, width: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != width:
        raise ValueError(f"expected {width} features, got {X.shape[1]}")
    if not np.isfinite(X).all():
        raise ValueError("input contains non-finite values")
    return X


@dataclass(frozen=True, eq=False)
class GaussianNBModel:
    classes: np.ndarray
    priors: np.ndarray
    means: np.ndarray  # (n_classes, n_features)
    sigmas: np.ndarray
    var_floor: float
    floored_classes: tuple = ()

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = _check_rows(X, self.means.shape[1])
        var = self.sigmas**2
        log_norm = -0.5 * np.log(2.0 * np.pi * var).sum(axis=1)
        sq = ((X[:, None, :] - self.means[None]) ** 2 / var[None]).sum(axis=2)
        return np.log(self.priors)[None] + log_norm[None] - 0.5 * sq

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        # argmax returns the first maximum, i.e. the lowest class index on ties
        return self.classes[np.argmax(self.joint_log_likelihood(X), axis=1)]


def fit_gaussian_nb(X, y) -> GaussianNBModel:
    """Per-class means and sample standard deviations (n-1), class-frequency priors.

    Standard deviations are floored at sqrt(eps) with eps = 1e-9 times the largest
    feature variance; a class with a single row gets the floor directly.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    classes, counts = np.unique(y, return_counts=True)
    max_var = X.var(axis=0, ddof=1).max() if X.shape[0] > 1 and X.shape[1] else 0.0
    eps = VAR_FLOOR_FRACTION * max_var if max_var > 0 else VAR_FLOOR_FRACTION
    floor = math.sqrt(eps)
    means = np.empty((len(classes), X.shape[1]))
    sigmas = np.empty_like(means)
    floored = []
    for i, c in enumerate(classes):
        rows = X[y == c]
        means[i] = rows.mean(axis=0)
        if len(rows) < 2:
            sigmas[i] = floor
            floored.append(c.item() if hasattr(c, "item") else c)
        else:
            sigmas[i] = np.maximum(rows.std(axis=0, ddof=1), floor)
    if floored:
        log.warning("single-row classes %s: standard deviation set to floor %.3g", floored, floor)
    return GaussianNBModel(classes, counts / counts.sum(), means, sigmas, eps, tuple(floored))


def predict_gaussian_nb(model: GaussianNBModel, x) -> tuple:
    """Label and per-class posteriors for a single row."""
    post = model.predict_proba(np.asarray(x, dtype=np.float64)[None])[0]
    return model.classes[int(np.argmax(post))], post


@dataclass(frozen=True, eq=False)
class ComplementNBModel:
    classes: np.ndarray
    weights: np.ndarray  # (n_classes, n_features), normalised log complement probabilities
    alpha: float

    def scores(self, X) -> np.ndarray:
        X = _check_rows(X, self.weights.shape[1])
        if (X < 0).any():
            raise ValueError("Complement NB requires non-negative features")
        return X @ self.weights.T

    def predict(self, X) -> np.ndarray:
        return self.classes[np.argmin(self.scores(X), axis=1)]


def fit_complement_nb(X, y, alpha: float = 1.0) -> ComplementNBModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if (X < 0).any():
        raise ValueError("Complement NB requires non-negative features")
    classes = np.unique(y)
    if len(classes) < 2:
        raise ValueError("Complement NB needs at least two classes (empty complement)")
    per_class = np.stack([X[y == c].sum(axis=0) for c in classes])
    complement = per_class.sum(axis=0)[None] - per_class
    theta = (complement + alpha) / (complement.sum(axis=1, keepdims=True) + alpha * X.shape[1])
    logged = np.log(theta)
    norm = np.abs(logged).sum(axis=1, keepdims=True)
    weights = logged / np.where(norm > 0, norm, 1.0)
    return ComplementNBModel(classes, weights, alpha)


def predict_complement_nb(model: ComplementNBModel, x):
    return model.predict(np.asarray(x, dtype=np.float64)[None])[0]
