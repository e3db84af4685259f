"""Fold assignment and F1 scoring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

AVERAGING = ("binary", "macro", "weighted")


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    fold: np.ndarray  # fold index per row
    k: int
    seed: int | None
    stratified: bool

    def split(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(training rows, validation rows) for fold i."""
        return np.flatnonzero(self.fold != i), np.flatnonzero(self.fold == i)

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        return (self.split(i) for i in range(self.k))

    def sizes(self) -> np.ndarray:
        return np.bincount(self.fold, minlength=self.k)


def make_folds(y, k: int = 10, seed=None, stratified: bool = True) -> FoldAssignment:
    """Shuffle rows and deal them round-robin into k folds.

    Stratified mode shuffles within each class and deals the classes one after another,
    so both overall and per-class fold counts differ by at most one.
    """
    y = np.asarray(y)
    n = len(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of rows ({n})")
    rng = np.random.default_rng(seed)
    if stratified:
        order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in np.unique(y)])
    else:
        order = rng.permutation(n)
    fold = np.empty(n, dtype=np.int64)
    fold[order] = np.arange(n) % k
    return FoldAssignment(fold, k, seed, stratified)


def confusion_counts(y_true, y_pred, labels: Sequence) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-label TP, FP, FN and support."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    tp = np.array([np.sum((y_true == c) & (y_pred == c)) for c in labels], dtype=np.float64)
    fp = np.array([np.sum((y_true != c) & (y_pred == c)) for c in labels], dtype=np.float64)
    fn = np.array([np.sum((y_true == c) & (y_pred != c)) for c in labels], dtype=np.float64)
    support = np.array([np.sum(y_true == c) for c in labels], dtype=np.float64)
    return tp, fp, fn, support


def _ratio(num, den):
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def per_class_f1(y_true, y_pred, labels: Sequence) -> np.ndarray:
    tp, fp, fn, _ = confusion_counts(y_true, y_pred, labels)
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return _ratio(2 * precision * recall, precision + recall)


def f1_score(y_true, y_pred, averaging: str = "binary", pos_label=1, labels: Sequence | None = None) -> float:
    """F1 with 0/0 taken as 0.

    ``labels`` restricts macro/weighted averaging to a label set; by default it is the
    sorted union of true and predicted labels.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    if len(y_true) == 0:
        raise ValueError("cannot score empty predictions")
    if averaging not in AVERAGING:
        raise ValueError(f"averaging must be one of {AVERAGING}")
    if averaging == "binary":
        return float(per_class_f1(y_true, y_pred, [pos_label])[0])
    if labels is None:
        labels = np.union1d(y_true, y_pred)
    f1 = per_class_f1(y_true, y_pred, labels)
    if averaging == "macro":
        return float(f1.mean())
    _, _, _, support = confusion_counts(y_true, y_pred, labels)
    if support.sum() == 0:
        return 0.0
    return float((f1 * support).sum() / support.sum())
