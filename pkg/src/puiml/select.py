"""Univariate feature scoring and the six per-target feature groups."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .tabular import TARGETS, Dataset, Schema

GROUP_NAMES = ("intrinsic", "intrinsic_best", "extrinsic", "extrinsic_best", "all", "best_of_all")
GROUP_LABELS = {
    "intrinsic": "Int.",
    "intrinsic_best": "Int. best",
    "extrinsic": "Ext.",
    "extrinsic_best": "Ext. best",
    "all": "All",
    "best_of_all": "Best of all",
}
BEST_ROLES = {"intrinsic_best": ("intrinsic",), "extrinsic_best": ("extrinsic",),
              "best_of_all": ("intrinsic", "extrinsic")}

# Published best-variable triples, spelled as printed.
TABLE4_RAW = {
    "UI": {
        "intrinsic_best": ("KRISTELLER", "DIC_NULLIPAROUS", "NUM_LABOURS"),
        "extrinsic_best": ("AQUAGYM", "GROUP", "WEIGHT"),
        "best_of_all": ("AQUAGYM [ex]", "KRISTELLER [in]", "DIC_NULLIPAROUS [in]"),
    },
    "STRESS_UI": {
        "intrinsic_best": ("KRISTELLER", "DIC_NULLIPAROUS", "NUM_LABOURS"),
        "extrinsic_best": ("AQUAGYM", "FREQ_PAPREV", "IPAQ"),
        "best_of_all": ("AQUAGYM [ex]", "KRISTELLER [in]", "DIC_NULLIPAROUS [in]"),
    },
    "FREQ_UI": {
        "intrinsic_best": ("TYPE_PARTO", "EPISIOTOM", "DIC_NULLIPAROUS"),
        "extrinsic_best": ("AQUAGY", "STRENGTH", "PILATES"),
        "best_of_all": ("TYPE_PARTO [in]", "AQUAGYM [ex]", "STRENGTH [ex]"),
    },
    "INT_UI": {
        "intrinsic_best": ("KRISTELLER", "DIC_NULLIPAROUS", "NUM_LABOURS"),
        "extrinsic_best": ("AQUAGYM", "GROUP", "WEIGHT"),
        "best_of_all": ("AQUAGYM [ex]", "KRISTELLER [in]", "DIC_NULLIPAROUS [in]"),
    },
}
NAME_FIXES = {"TYPE_PARTO": "TYPE_LABOUR", "EPISIOTOM": "EPISIOTOMY", "AQUAGY": "AQUAGYM"}


@dataclass(frozen=True)
class FeatureGroupSpec:
    name: str
    target: str
    members: tuple[str, ...]
    provenance: str  # schema-derived, table4-fixed or data-driven
    flagged: tuple[str, ...] = ()  # members with no schema definition
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.name not in GROUP_NAMES:
            raise ValueError(f"group name must be one of {GROUP_NAMES}")
        if self.name in BEST_ROLES and len(self.members) != 3:
            raise ValueError(f"{self.name} must have exactly 3 members, got {self.members}")

    @property
    def executable(self) -> bool:
        return not self.flagged

    def to_json(self) -> dict:
        return {"name": self.name, "target": self.target, "members": list(self.members),
                "provenance": self.provenance, "flagged": list(self.flagged), "notes": list(self.notes)}

    @classmethod
    def from_json(cls, data: dict) -> "FeatureGroupSpec":
        return cls(data["name"], data["target"], tuple(data["members"]), data["provenance"],
                   tuple(data.get("flagged", ())), tuple(data.get("notes", ())))


def anova_f_score(column, y) -> float:
    """One-way ANOVA F: between-class mean square over within-class mean square.

    Zero within-class variance with a non-zero between-class spread scores +inf.
    """
    x = np.asarray(column, dtype=np.float64)
    y = np.asarray(y)
    classes = np.unique(y)
    n, k = len(x), len(classes)
    if k < 2:
        raise ValueError("ANOVA needs at least two classes")
    if n - k < 1:
        raise ValueError("ANOVA needs more rows than classes")
    grand = x.mean()
    ss_between = ss_within = 0.0
    for c in classes:
        xc = x[y == c]
        ss_between += len(xc) * (xc.mean() - grand) ** 2
        ss_within += ((xc - xc.mean()) ** 2).sum()
    ms_between = ss_between / (k - 1)
    ms_within = ss_within / (n - k)
    if ms_within <= 1e-12 * max(ms_between, 1.0):
        return math.inf if ms_between > 1e-12 else 0.0
    return float(ms_between / ms_within)


def select_k_best(X, y, k: int, names: Sequence[str],
                  scorer: Callable[[np.ndarray, np.ndarray], float] = anova_f_score) -> list[str]:
    """Top-k column names by descending score; ties keep the order of ``names``."""
    X = np.asarray(X, dtype=np.float64)
    if k <= 0:
        raise ValueError("k must be positive")
    if k > X.shape[1]:
        raise ValueError(f"k={k} exceeds the {X.shape[1]} available features")
    if len(names) != X.shape[1]:
        raise ValueError("one name per column required")
    scores = [scorer(X[:, j], y) for j in range(X.shape[1])]
    order = sorted(range(len(names)), key=lambda j: -scores[j])
    return [names[j] for j in order[:k]]


def _canonical(token: str) -> tuple[str, str | None]:
    """Strip a role tag like ' [ex]' and repair known misspellings."""
    name, tag = token, None
    if token.endswith("]") and "[" in token:
        name, tag = token[: token.index("[")].strip(), token[token.index("[") + 1 : -1]
    return NAME_FIXES.get(name, name), {"ex": "extrinsic", "in": "intrinsic"}.get(tag or "")


def _table4_group(schema: Schema, target: str, name: str) -> FeatureGroupSpec:
    members, flagged, notes = [], [], []
    listed_role = BEST_ROLES[name][0] if name != "best_of_all" else None
    for token in TABLE4_RAW[target][name]:
        canon, tag = _canonical(token)
        if canon != token.split(" [")[0]:
            notes.append(f"{token.split(' [')[0]} read as {canon}")
        members.append(canon)
        if canon not in schema:
            flagged.append(canon)
            notes.append(f"{canon} has no schema definition; group not executable")
            continue
        role = schema[canon].role
        claimed = tag or listed_role
        if claimed and claimed != role:
            notes.append(f"{canon} listed as {claimed} but its schema role is {role}")
    return FeatureGroupSpec(name, target, tuple(members), "table4-fixed", tuple(flagged), tuple(notes))


def build_groups(schema: Schema, target: str, dataset: Dataset | None = None,
                 mode: str = "replication") -> tuple[FeatureGroupSpec, ...]:
    """The six groups for one target, in reporting order.

    Full groups come from schema roles. Best-3 groups come from the published table in
    replication mode, or from ANOVA-F selection on ``dataset`` in data-driven mode.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")
    if mode not in ("replication", "data-driven"):
        raise ValueError("mode must be 'replication' or 'data-driven'")
    if mode == "data-driven" and dataset is None:
        raise ValueError("data-driven mode needs a dataset")
    universe = {
        "intrinsic": schema.by_role("intrinsic"),
        "extrinsic": schema.by_role("extrinsic"),
    }
    universe["all"] = tuple(n for n in schema.names if n in universe["intrinsic"] + universe["extrinsic"])
    groups = {name: FeatureGroupSpec(name, target, universe[name], "schema-derived")
              for name in ("intrinsic", "extrinsic", "all")}
    for name, roles in BEST_ROLES.items():
        if mode == "replication":
            groups[name] = _table4_group(schema, target, name)
            continue
        pool = [n for n in schema.names if schema[n].role in roles]
        X = np.column_stack([dataset[n].astype(np.float64) for n in pool])
        chosen = select_k_best(X, dataset.labels(target), 3, pool)
        groups[name] = FeatureGroupSpec(name, target, tuple(chosen), "data-driven",
                                        notes=("scored by ANOVA F on the full dataset",))
    return tuple(groups[name] for name in GROUP_NAMES)
