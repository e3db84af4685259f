"""Per-fold pipelines (scale, oversample, fit, score), cross-validation and grid search."""

from __future__ import annotations

import itertools
import logging
import zlib
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .. import bayes, neighbors, resample, tree
from ..tabular import FeatureMatrix, apply_minmax, apply_scaler, fit_minmax, fit_scaler
from .metrics import FoldAssignment, f1_score

log = logging.getLogger(__name__)

MODEL_IDS = (
    "GaussianNB",
    "ComplementNB",
    "KNN",
    "DT",
    "KNN improved",
    "DT improved",
    "KNN imp.randover",
    "KNN imp.SMOTE",
)
OVERSAMPLERS = ("none", "randover", "smote")

KNN_GRID = tuple(
    {"k": k, "weighting": w}
    for k, w in itertools.product((1, 3, 5, 7, 9, 11, 15), ("uniform", "distance"))
)
DT_GRID = tuple(
    {"criterion": c, "max_depth": d, "min_samples_split": m}
    for c, d, m in itertools.product(("gini", "entropy"), (1, 2, 3, 5, 8, None), (2, 5, 10))
)

DEFAULT_PARAMS: dict[str, dict[str, Any]] = {
    "gaussian_nb": {},
    "complement_nb": {"alpha": 1.0},
    "knn": {"k": 5, "weighting": "uniform"},
    "tree": {"criterion": "gini", "max_depth": None, "min_samples_split": 2},
}


def family_of(model_id: str) -> str:
    if model_id == "GaussianNB":
        return "gaussian_nb"
    if model_id == "ComplementNB":
        return "complement_nb"
    if model_id.startswith("KNN"):
        return "knn"
    if model_id.startswith("DT"):
        return "tree"
    raise ValueError(f"unknown model id {model_id!r}")


def derive_seed(master: int, *keys: int | str) -> int:
    """A 32-bit seed that depends only on the master seed and the key path."""
    key = tuple(k if isinstance(k, int) else zlib.crc32(k.encode("utf-8")) for k in keys)
    return int(np.random.SeedSequence(entropy=int(master), spawn_key=key).generate_state(1)[0])


@dataclass(frozen=True)
class ClassifierSpec:
    model_id: str
    params: Mapping[str, Any] = field(default_factory=dict)
    oversampler: str = "none"
    grid: tuple[Mapping[str, Any], ...] | None = None
    smote_k: int = 5

    def __post_init__(self):
        if self.model_id not in MODEL_IDS:
            raise ValueError(f"model id must be one of {MODEL_IDS}, got {self.model_id!r}")
        if self.oversampler not in OVERSAMPLERS:
            raise ValueError(f"oversampler must be one of {OVERSAMPLERS}")
        expected = {"KNN imp.randover": "randover", "KNN imp.SMOTE": "smote"}.get(self.model_id, "none")
        if self.oversampler != expected:
            raise ValueError(f"{self.model_id} requires oversampler {expected!r}")
        tuned = self.model_id.endswith("improved") or " imp." in self.model_id
        if self.grid is not None and not tuned:
            raise ValueError(f"{self.model_id} is a default-hyperparameter model and takes no grid")
        if self.grid is not None and len(self.grid) == 0:
            raise ValueError("grid must not be empty")

    @property
    def family(self) -> str:
        return family_of(self.model_id)

    def resolved(self, params: Mapping[str, Any] | None = None) -> dict[str, Any]:
        out = dict(DEFAULT_PARAMS[self.family])
        out.update(self.params)
        if params:
            out.update(params)
        return out


def table5_specs(knn_grid=KNN_GRID, dt_grid=DT_GRID) -> tuple[ClassifierSpec, ...]:
    return (
        ClassifierSpec("GaussianNB"),
        ClassifierSpec("ComplementNB"),
        ClassifierSpec("KNN"),
        ClassifierSpec("DT"),
        ClassifierSpec("KNN improved", grid=tuple(knn_grid)),
        ClassifierSpec("DT improved", grid=tuple(dt_grid)),
        ClassifierSpec("KNN imp.randover", oversampler="randover", grid=tuple(knn_grid)),
        ClassifierSpec("KNN imp.SMOTE", oversampler="smote", grid=tuple(knn_grid)),
    )


@dataclass(frozen=True, eq=False)
class FoldAudit:
    """Dataset row ids that touched each stage of one fold."""

    fold: int
    train_rows: np.ndarray
    val_rows: np.ndarray
    scaler_rows: np.ndarray
    resample_sources: np.ndarray
    n_synthetic: int
    flags: tuple[str, ...] = ()

    @property
    def leak_free(self) -> bool:
        train = set(self.train_rows.tolist())
        val = set(self.val_rows.tolist())
        return (
            not train & val
            and set(self.scaler_rows.tolist()) <= train
            and set(self.resample_sources.tolist()) <= train
        )


@dataclass(frozen=True, eq=False)
class CVResult:
    model_id: str
    params: Mapping[str, Any]
    fold_f1: tuple[float, ...]
    mean_f1: float
    seed: int
    averaging: str
    flags: tuple[str, ...] = ()
    audits: tuple[FoldAudit, ...] = ()
    evaluations: int = 1

    @property
    def leak_free(self) -> bool:
        return all(a.leak_free for a in self.audits)


@dataclass(eq=False)
class _PreparedFold:
    X_train: np.ndarray
    y_train: np.ndarray
    X_val: np.ndarray
    y_val: np.ndarray
    audit: FoldAudit


class _ConstantModel:
    def __init__(self, label):
        self.label = label

    def predict(self, X):
        return np.full(len(X), self.label)


def _prepare_fold(spec: ClassifierSpec, X: FeatureMatrix, y: np.ndarray, folds: FoldAssignment,
                  i: int, seed: int) -> _PreparedFold:
    train_idx, val_idx = folds.split(i)
    tr, va = X.take(train_idx), X.take(val_idx)
    flags = []
    if spec.family == "complement_nb":
        mm = fit_minmax(tr)
        Xtr, Xva, scaler_rows = apply_minmax(mm, tr).values, apply_minmax(mm, va).values, mm.fitted_rows
    else:
        sc = fit_scaler(tr)
        if sc.constant:
            flags.append(f"fold {i}: constant column(s) centred only: {','.join(sc.constant)}")
        Xtr, Xva, scaler_rows = apply_scaler(sc, tr).values, apply_scaler(sc, va).values, sc.fitted_rows
    ytr = y[train_idx]
    sources = np.empty(0, dtype=np.int64)
    n_syn = 0
    if spec.oversampler != "none":
        fold_seed = derive_seed(seed, "resample", i)
        if len(np.unique(ytr)) < 2:
            flags.append(f"fold {i}: single-class training fold, oversampling skipped")
        else:
            try:
                if spec.oversampler == "smote":
                    res = resample.smote(Xtr, ytr, k=spec.smote_k, seed=fold_seed)
                else:
                    res = resample.random_oversample(Xtr, ytr, seed=fold_seed)
            except resample.SmoteError as exc:
                flags.append(f"fold {i}: {exc}; fell back to random oversampling")
                res = resample.random_oversample(Xtr, ytr, seed=fold_seed)
            n_syn = len(res.y) - len(ytr)
            prov = res.provenance
            used = np.concatenate([prov.source, prov.neighbour[prov.neighbour >= 0]])
            sources = tr.rows[np.unique(used)]
            Xtr, ytr = res.X, res.y
    audit = FoldAudit(i, X.rows[train_idx], X.rows[val_idx], np.asarray(scaler_rows), sources, n_syn, tuple(flags))
    return _PreparedFold(Xtr, ytr, Xva, y[val_idx], audit)


def _fit(spec: ClassifierSpec, params: Mapping[str, Any], Xtr, ytr, cache: dict | None, key):
    fam = spec.family
    if fam == "gaussian_nb":
        return bayes.fit_gaussian_nb(Xtr, ytr)
    if fam == "complement_nb":
        if len(np.unique(ytr)) < 2:
            return _ConstantModel(ytr[0])
        return bayes.fit_complement_nb(Xtr, ytr, alpha=float(params["alpha"]))
    if fam == "knn":
        return neighbors.fit_knn(Xtr, ytr, k=int(params["k"]), weighting=params["weighting"])
    tp = tree.TreeParams(params["criterion"], params["max_depth"], int(params["min_samples_split"]))
    if cache is None:
        return tree.fit_tree(Xtr, ytr, tp)
    grown_key = (key, "tree", tp.criterion)
    if grown_key not in cache:
        cache[grown_key] = tree.fit_tree(Xtr, ytr, tree.TreeParams(tp.criterion))
    return cache[grown_key].truncated(tp)


def cross_validate(spec: ClassifierSpec, X: FeatureMatrix, y, folds: FoldAssignment, averaging: str = "binary",
                   seed: int = 0, params: Mapping[str, Any] | None = None, cache: dict | None = None) -> CVResult:
    """Score one hyperparameter setting over every fold.

    Scaling and oversampling are fitted on training rows only. A training fold missing a
    class is flagged and macro/weighted F1 is restricted to the classes it saw.
    ``cache`` may be shared across calls on the same (spec, X, y, folds, seed) to reuse
    prepared folds and fully grown trees.
    """
    y = np.asarray(y)
    if len(y) != X.shape[0] or len(folds.fold) != len(y):
        raise ValueError("features, labels and folds disagree on row count")
    resolved = spec.resolved(params)
    all_classes = np.unique(y)
    scores, audits, flags = [], [], []
    for i in range(folds.k):
        pkey = ("fold", i)
        if cache is not None and pkey in cache:
            prep = cache[pkey]
        else:
            prep = _prepare_fold(spec, X, y, folds, i, seed)
            if cache is not None:
                cache[pkey] = prep
        fold_flags = list(prep.audit.flags)
        train_classes = np.unique(prep.y_train)
        labels = None
        if len(train_classes) < len(all_classes):
            missing = sorted(set(all_classes.tolist()) - set(train_classes.tolist()))
            fold_flags.append(f"fold {i}: training rows lack class(es) {missing}; scored on the rest")
            labels = train_classes
        model = _fit(spec, resolved, prep.X_train, prep.y_train, cache, pkey)
        pred = model.predict(prep.X_val)
        scores.append(f1_score(prep.y_val, pred, averaging, labels=labels))
        audits.append(prep.audit)
        flags.extend(fold_flags)
    return CVResult(spec.model_id, resolved, tuple(scores), float(np.mean(scores)), seed, averaging,
                    tuple(flags), tuple(audits))


def grid_search(spec: ClassifierSpec, X: FeatureMatrix, y, folds: FoldAssignment, averaging: str = "binary",
                seed: int = 0) -> tuple[dict[str, Any], CVResult]:
    """Evaluate every grid point on the same folds; the first best mean F1 wins.

    The winning score is the same cross-validated score used for selection (no nested CV),
    so it is optimistically biased.
    """
    if not spec.grid:
        raise ValueError(f"{spec.model_id} has no grid")
    cache: dict = {}
    best: CVResult | None = None
    for point in spec.grid:
        res = cross_validate(spec, X, y, folds, averaging, seed, params=point, cache=cache)
        if best is None or res.mean_f1 > best.mean_f1:
            best = res
    assert best is not None
    winner = CVResult(best.model_id, best.params, best.fold_f1, best.mean_f1, best.seed, best.averaging,
                      best.flags, best.audits, evaluations=len(spec.grid))
    return dict(best.params), winner


def evaluate(spec: ClassifierSpec, X: FeatureMatrix, y, folds: FoldAssignment, averaging: str = "binary",
             seed: int = 0) -> CVResult:
    """Grid search when the classifier spec carries a grid, plain cross-validation otherwise."""
    if spec.grid:
        return grid_search(spec, X, y, folds, averaging, seed)[1]
    return cross_validate(spec, X, y, folds, averaging, seed)
