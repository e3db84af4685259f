"""K-nearest-neighbours classification over Euclidean distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DISTANCE_OFFSET = 1e-12
WEIGHTINGS = ("uniform", "distance")


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"width mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(((a - b) ** 2).sum()))


def pairwise_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    diff = A[:, None, :] - B[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


@dataclass(frozen=True, eq=False)
class KNNModel:
    X: np.ndarray
    y: np.ndarray
    k: int = 5
    weighting: str = "uniform"

    def __post_init__(self):
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        if not 1 <= self.k <= len(self.X):
            raise ValueError(f"k={self.k} must lie in [1, {len(self.X)}]")
        object.__setattr__(self, "classes", np.unique(self.y))

    def neighbours(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Indices and distances of the k nearest training rows; ties go to the lower row index."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.X.shape[1]:
            raise ValueError(f"expected {self.X.shape[1]} features, got {X.shape[1]}")
        if not np.isfinite(X).all():
            raise ValueError("input contains non-finite values")
        d = pairwise_distances(X, self.X)
        idx = np.argsort(d, axis=1, kind="stable")[:, : self.k]
        return idx, np.take_along_axis(d, idx, axis=1)

    def predict_proba(self, X) -> np.ndarray:
        idx, dist = self.neighbours(X)
        if self.weighting == "uniform":
            w = np.ones_like(dist)
        else:
            exact = dist == 0
            w = np.where(exact.any(axis=1, keepdims=True), exact.astype(float), 1.0 / (dist + DISTANCE_OFFSET))
        codes = np.searchsorted(self.classes, self.y[idx])
        proba = np.zeros((len(idx), len(self.classes)))
        for c in range(len(self.classes)):
            proba[:, c] = (w * (codes == c)).sum(axis=1)
        return proba / proba.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return self.classes[np.argmax(self.predict_proba(X), axis=1)]


def fit_knn(X, y, k: int = 5, weighting: str = "uniform") -> KNNModel:
    return KNNModel(np.asarray(X, dtype=np.float64), np.asarray(y), int(k), weighting)


def knn_predict(model: KNNModel, x) -> tuple:
    proba = model.predict_proba(np.asarray(x, dtype=np.float64)[None])[0]
    return model.classes[int(np.argmax(proba))], proba
