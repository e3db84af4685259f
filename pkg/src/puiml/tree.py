"""Decision trees with Gini or entropy splitting, and randomised-tree feature importances."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

CRITERIA = ("gini", "entropy")
GAIN_TOL = 1e-12


def _counts(class_counts) -> np.ndarray:
    counts = np.asarray(class_counts, dtype=np.float64)
    if (counts < 0).any():
        raise ValueError("class counts must be non-negative")
    if counts.sum() <= 0:
        raise ValueError("class counts sum to zero")
    return counts


def entropy(class_counts) -> float:
    """Shannon entropy in bits, with 0 * log 0 taken as 0."""
    counts = _counts(class_counts)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def gini(class_counts) -> float:
    counts = _counts(class_counts)
    p = counts / counts.sum()
    return float(1.0 - (p * p).sum())


def _impurity_rows(counts: np.ndarray, criterion: str) -> np.ndarray:
    """Impurity along the last axis of a count array; rows summing to zero give 0."""
    totals = counts.sum(axis=-1, keepdims=True)
    p = counts / np.where(totals > 0, totals, 1.0)
    if criterion == "gini":
        return 1.0 - (p * p).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def impurity(class_counts, criterion: str) -> float:
    if criterion == "gini":
        return gini(class_counts)
    if criterion == "entropy":
        return entropy(class_counts)
    raise ValueError(f"criterion must be one of {CRITERIA}")


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    impurity_before: float
    impurity_after: float

    @property
    def gain(self) -> float:
        return self.impurity_before - self.impurity_after


def _encode(y) -> tuple[np.ndarray, np.ndarray]:
    classes, codes = np.unique(np.asarray(y), return_inverse=True)
    return classes, codes.reshape(-1)


def _midpoint(a: float, b: float) -> float:
    t = (a + b) / 2.0
    # adjacent floats can round the midpoint up onto b
    return a if t >= b else t


def _best_split_codes(X: np.ndarray, codes: np.ndarray, n_classes: int, criterion: str,
                      allow_zero_gain: bool) -> Split | None:
    n, d = X.shape
    if n < 2:
        return None
    onehot = np.eye(n_classes)[codes]
    parent_counts = onehot.sum(axis=0)
    parent = float(_impurity_rows(parent_counts, criterion))
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    valid = xs[1:] != xs[:-1]
    if not valid.any():
        return None
    left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, d, C)
    right = parent_counts[None, None, :] - left
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    child = (n_left * _impurity_rows(left, criterion) + (n - n_left) * _impurity_rows(right, criterion)) / n
    gain = np.where(valid, parent - child, -np.inf)
    best = gain.max()
    if best <= GAIN_TOL and not allow_zero_gain:
        return None
    near = valid & (gain >= best - GAIN_TOL)
    j = int(np.flatnonzero(near.any(axis=0))[0])
    i = int(np.flatnonzero(near[:, j])[0])
    after = float(child[i, j])
    return Split(j, float(_midpoint(xs[i, j], xs[i + 1, j])), parent, min(after, parent))


def best_split(X, y, criterion: str = "gini", allow_zero_gain: bool = False) -> Split | None:
    """Best (feature, midpoint threshold) by impurity reduction.

    Returns None when no candidate reduces impurity. With ``allow_zero_gain`` the best
    candidate is returned even when its gain is zero, which tree growth needs for
    parity-style data where no single split helps at the root.
    Ties go to the lowest feature index, then the lowest threshold.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("X must be a non-empty 2-D matrix")
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    classes, codes = _encode(y)
    return _best_split_codes(X, codes, len(classes), criterion, allow_zero_gain)


@dataclass(frozen=True)
class TreeParams:
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_split: int = 2

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")


@dataclass(eq=False)
class Node:
    counts: np.ndarray
    depth: int
    split: Split | None = None
    left: "Node | None" = None
    right: "Node | None" = None

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def majority(self) -> int:
        return int(np.argmax(self.counts))


@dataclass(frozen=True, eq=False)
class TreeModel:
    root: Node
    classes: np.ndarray
    params: TreeParams = field(default_factory=TreeParams)
    n_features: int | None = None

    def _stops(self, node: Node) -> bool:
        p = self.params
        return (
            node.split is None
            or (p.max_depth is not None and node.depth >= p.max_depth)
            or node.n < p.min_samples_split
        )

    def nodes(self) -> Iterator[Node]:
        """Nodes reachable under the model's stopping rules, depth first."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if not self._stops(node):
                stack.extend([node.right, node.left])

    def is_leaf(self, node: Node) -> bool:
        return self._stops(node)

    @property
    def depth(self) -> int:
        return max(node.depth for node in self.nodes())

    def truncated(self, params: TreeParams) -> "TreeModel":
        """The tree greedy growth would have produced under tighter stopping rules.

        Growth decisions at a node do not depend on depth or size limits, so a tree
        grown with looser limits contains the tighter tree as a prefix.
        """
        base = self.params
        if params.criterion != base.criterion:
            raise ValueError("cannot change criterion by truncation")
        if params.min_samples_split < base.min_samples_split:
            raise ValueError("min_samples_split can only be raised by truncation")
        if base.max_depth is not None and (params.max_depth is None or params.max_depth > base.max_depth):
            raise ValueError("max_depth can only be lowered by truncation")
        return replace(self, params=params)

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.n_features is not None and X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        if not np.isfinite(X).all():
            raise ValueError("input contains non-finite values")
        out = np.empty(len(X), dtype=np.int64)
        stack = [(self.root, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            if self._stops(node):
                out[idx] = node.majority
                continue
            go_left = X[idx, node.split.feature] <= node.split.threshold
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return self.classes[out]

    def render(self, feature_names=None) -> str:
        lines = []

        def walk(node: Node, indent: str):
            counts = ", ".join(str(int(c)) for c in node.counts)
            if self._stops(node):
                lines.append(f"{indent}leaf -> {self.classes[node.majority]} [{counts}]")
                return
            s = node.split
            name = feature_names[s.feature] if feature_names is not None else f"x[{s.feature}]"
            lines.append(f"{indent}{name} <= {s.threshold:.6g}  gain={s.gain:.4f} [{counts}]")
            walk(node.left, indent + "  ")
            walk(node.right, indent + "  ")

        walk(self.root, "")
        return "\n".join(lines)


def fit_tree(X, y, params: TreeParams | None = None) -> TreeModel:
    params = params or TreeParams()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("cannot fit a tree on empty data")
    classes, codes = _encode(y)
    n_classes = len(classes)

    def grow(idx: np.ndarray, depth: int) -> Node:
        node = Node(np.bincount(codes[idx], minlength=n_classes).astype(np.float64), depth)
        if (
            np.count_nonzero(node.counts) <= 1
            or (params.max_depth is not None and depth >= params.max_depth)
            or len(idx) < params.min_samples_split
        ):
            return node
        split = _best_split_codes(X[idx], codes[idx], n_classes, params.criterion, allow_zero_gain=True)
        if split is None:
            return node
        mask = X[idx, split.feature] <= split.threshold
        node.split = split
        node.left = grow(idx[mask], depth + 1)
        node.right = grow(idx[~mask], depth + 1)
        return node

    return TreeModel(grow(np.arange(len(X)), 0), classes, params, X.shape[1])


def predict_tree(model: TreeModel, x):
    return model.predict(np.asarray(x, dtype=np.float64)[None])[0]


def _random_split(X: np.ndarray, codes: np.ndarray, n_classes: int, criterion: str,
                  rng: np.random.Generator) -> Split | None:
    lo, hi = X.min(axis=0), X.max(axis=0)
    parent_counts = np.bincount(codes, minlength=n_classes).astype(np.float64)
    parent = float(_impurity_rows(parent_counts, criterion))
    n = len(codes)
    best = None
    for j in np.flatnonzero(hi > lo):
        t = rng.uniform(lo[j], hi[j])
        mask = X[:, j] <= t
        left = np.bincount(codes[mask], minlength=n_classes).astype(np.float64)
        right = parent_counts - left
        nl = left.sum()
        after = float((nl * _impurity_rows(left, criterion) + (n - nl) * _impurity_rows(right, criterion)) / n)
        if best is None or parent - after > best.gain + GAIN_TOL:
            best = Split(int(j), float(t), parent, min(after, parent))
    return best


def randomized_importance(X, y, n_trees: int = 100, seed: int = 0, criterion: str = "gini") -> np.ndarray:
    """Impurity-decrease importances from an ensemble of extremely randomised trees.

    Each node draws one uniform threshold per non-constant feature and keeps the best of
    those candidates. Per-tree importances are size-weighted decreases, normalised per
    tree, averaged, then normalised again.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] < 2:
        raise ValueError("randomised importance needs at least two rows")
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    classes, codes = _encode(y)
    n_classes, n, d = len(classes), X.shape[0], X.shape[1]
    rng = np.random.default_rng(seed)
    total = np.zeros(d)
    for _ in range(n_trees):
        imp = np.zeros(d)
        stack = [np.arange(n)]
        while stack:
            idx = stack.pop()
            if len(idx) < 2 or len(np.unique(codes[idx])) < 2:
                continue
            split = _random_split(X[idx], codes[idx], n_classes, criterion, rng)
            if split is None:
                continue
            imp[split.feature] += len(idx) / n * split.gain
            mask = X[idx, split.feature] <= split.threshold
            stack.extend([idx[~mask], idx[mask]])
        if imp.sum() > 0:
            total += imp / imp.sum()
    return total / total.sum() if total.sum() > 0 else total
