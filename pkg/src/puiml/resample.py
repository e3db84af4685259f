"""Class balancing by random duplication and SMOTE interpolation."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .neighbors import pairwise_distances

log = logging.getLogger(__name__)


class SmoteError(ValueError):
    """A minority class is too small to build a neighbour set."""

    def __init__(self, label, size: int):
        super().__init__(f"class {label!r} has {size} row(s); SMOTE needs at least 2")
        self.label = label


@dataclass(frozen=True)
class ResamplePlan:
    classes: tuple
    original: tuple[int, ...]
    target: tuple[int, ...]
    seed: int | None

    @property
    def needed(self) -> tuple[int, ...]:
        return tuple(t - o for o, t in zip(self.original, self.target))


@dataclass(frozen=True, eq=False)
class Provenance:
    """Per output row: source row, SMOTE neighbour row (-1 if none), interpolation weight (nan if none).

    Source rows index the input matrix. Original rows are their own source.
    """

    source: np.ndarray
    neighbour: np.ndarray
    lam: np.ndarray

    @property
    def synthetic(self) -> np.ndarray:
        return self.neighbour >= 0


class Resampled(NamedTuple):
    X: np.ndarray
    y: np.ndarray
    provenance: Provenance
    plan: ResamplePlan


def plan_balance(y, seed=None) -> ResamplePlan:
    classes, counts = np.unique(np.asarray(y), return_counts=True)
    if len(classes) < 2:
        raise ValueError("oversampling needs at least two classes")
    top = int(counts.max())
    return ResamplePlan(tuple(c.item() for c in classes), tuple(int(c) for c in counts),
                        (top,) * len(classes), seed)


def _assemble(X, y, plan, chunks_src, chunks_nb, chunks_lam, chunks_X) -> Resampled:
    n = len(X)
    source = np.concatenate([np.arange(n)] + chunks_src).astype(np.int64)
    neighbour = np.concatenate([np.full(n, -1)] + chunks_nb).astype(np.int64)
    lam = np.concatenate([np.full(n, np.nan)] + chunks_lam)
    X_out = np.concatenate([X] + chunks_X, axis=0) if chunks_X else X.copy()
    y_out = np.concatenate([y, y[source[n:]]]) if len(source) > n else y.copy()
    return Resampled(X_out, y_out, Provenance(source, neighbour, lam), plan)


def random_oversample(X, y, seed=None) -> Resampled:
    """Pad every non-majority class with uniform draws (with replacement) from its own rows.

    Originals stay first and in order; duplicates follow, grouped by class in sorted order.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    plan = plan_balance(y, seed)
    rng = np.random.default_rng(seed)
    src, xs = [], []
    for label, need in zip(plan.classes, plan.needed):
        if need == 0:
            continue
        rows = np.flatnonzero(y == label)
        pick = rows[rng.integers(0, len(rows), size=need)]
        src.append(pick)
        xs.append(X[pick])
    return _assemble(X, y, plan, src, [np.full(len(s), -1) for s in src],
                     [np.full(len(s), np.nan) for s in src], xs)


def same_class_neighbours(X: np.ndarray, k: int) -> np.ndarray:
    """k nearest other rows for each row of X (ties to the lower index), as local indices."""
    d = pairwise_distances(X, X)
    np.fill_diagonal(d, np.inf)
    return np.argsort(d, axis=1, kind="stable")[:, :k]


def smote(X, y, k: int = 5, seed=None) -> Resampled:
    """Balance classes with synthetic rows x + lam * (x_nb - x), lam ~ U[0, 1).

    The seed row x is drawn uniformly from its class and x_nb uniformly from its
    k nearest same-class neighbours; k is clamped per class to (class size - 1).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if k < 1:
        raise ValueError("k must be >= 1")
    plan = plan_balance(y, seed)
    rng = np.random.default_rng(seed)
    src, nbs, lams, xs = [], [], [], []
    for label, size, need in zip(plan.classes, plan.original, plan.needed):
        if need == 0:
            continue
        if size < 2:
            raise SmoteError(label, size)
        k_eff = min(k, size - 1)
        if k_eff < k:
            log.info("SMOTE k clamped from %d to %d for class %r", k, k_eff, label)
        rows = np.flatnonzero(y == label)
        nn = same_class_neighbours(X[rows], k_eff)
        seeds = rng.integers(0, size, size=need)
        picks = rng.integers(0, k_eff, size=need)
        lam = rng.random(need)
        seed_rows = rows[seeds]
        nb_rows = rows[nn[seeds, picks]]
        xs.append(X[seed_rows] + lam[:, None] * (X[nb_rows] - X[seed_rows]))
        src.append(seed_rows)
        nbs.append(nb_rows)
        lams.append(lam)
    return _assemble(X, y, plan, src, nbs, lams, xs)
