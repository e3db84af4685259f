"""Published F1 results embedded verbatim, plus the summary statistics printed alongside them."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .select import GROUP_NAMES

# Classifier names as printed in the results table, mapped to model ids.
PRINTED_MODEL_NAMES = {
    "GaussianNB": "GaussianNB",
    "ComplementNB": "ComplementNB",
    "KNN": "KNN",
    "Decision tree": "DT",
    "Decision Tree": "DT",
    "DT": "DT",
    "KNN improved": "KNN improved",
    "DT improved": "DT improved",
    "KNN imp. randover": "KNN imp.randover",
    "KNN imp.randover": "KNN imp.randover",
    "KNN imp. SMOTE": "KNN imp.SMOTE",
    "KNN imp.SMOTE": "KNN imp.SMOTE",
}
PRINTED_TARGETS = {"UI": "UI", "Stress UI": "STRESS_UI", "UI Frequency": "FREQ_UI", "UI Intensity": "INT_UI"}
PRINTED_GROUPS = {
    "Int.": "intrinsic", "Intrinsic": "intrinsic", "Int. best": "intrinsic_best", "Intrinsic best": "intrinsic_best",
    "Ext.": "extrinsic", "Extrinsic": "extrinsic", "Ext. best": "extrinsic_best", "Extrinsic best": "extrinsic_best",
    "All": "all", "Best of all": "best_of_all",
}

# Columns: Int., Int. best, Ext., Ext. best, All, Best of all.
# FREQ_UI has no "KNN imp. SMOTE" row in the published table.
TABLE6 = (
    ("UI", "GaussianNB", (0.58, 0.43, 0.37, 0.42, 0.46, 0.33)),
    ("UI", "ComplementNB", (0.10, 0.50, 0.46, 0.58, 0.26, 0.55)),
    ("UI", "KNN", (0.36, 0.30, 0.32, 0.46, 0.26, 0.30)),
    ("UI", "Decision tree", (0.59, 0.39, 0.30, 0.42, 0.26, 0.37)),
    ("UI", "KNN improved", (0.32, 0.30, 0.24, 0.53, 0.26, 0.37)),
    ("UI", "DT improved", (0.43, 0.39, 0.43, 0.51, 0.26, 0.59)),
    ("UI", "KNN imp. randover", (0.53, 0.34, 0.50, 0.70, 0.26, 0.53)),
    ("UI", "KNN imp. SMOTE", (0.43, 0.41, 0.56, 0.62, 0.26, 0.59)),
    ("FREQ_UI", "GaussianNB", (0.18, 0.27, 0.70, 0.60, 0.61, 0.65)),
    ("FREQ_UI", "ComplementNB", (0.22, 0.55, 0.70, 0.71, 0.50, 0.70)),
    ("FREQ_UI", "KNN", (0.67, 0.64, 0.75, 0.56, 0.50, 0.77)),
    ("FREQ_UI", "Decision tree", (0.74, 0.69, 0.72, 0.55, 0.50, 0.73)),
    ("FREQ_UI", "KNN improved", (0.69, 0.73, 0.61, 0.58, 0.50, 0.73)),
    ("FREQ_UI", "DT improved", (0.44, 0.73, 0.77, 0.50, 0.50, 0.73)),
    ("FREQ_UI", "KNN imp. randover", (0.27, 0.32, 0.67, 0.57, 0.50, 0.59)),
    ("INT_UI", "GaussianNB", (0.58, 0.32, 0.37, 0.42, 0.48, 0.33)),
    ("INT_UI", "ComplementNB", (0.11, 0.50, 0.37, 0.58, 0.26, 0.55)),
    ("INT_UI", "KNN", (0.36, 0.30, 0.32, 0.46, 0.26, 0.30)),
    ("INT_UI", "Decision tree", (0.59, 0.37, 0.30, 0.42, 0.26, 0.37)),
    ("INT_UI", "KNN improved", (0.32, 0.34, 0.24, 0.53, 0.26, 0.50)),
    ("INT_UI", "DT improved", (0.43, 0.39, 0.43, 0.51, 0.26, 0.59)),
    ("INT_UI", "KNN imp. randover", (0.53, 0.34, 0.50, 0.70, 0.26, 0.53)),
    ("INT_UI", "KNN imp. SMOTE", (0.44, 0.58, 0.57, 0.71, 0.26, 0.62)),
    ("STRESS_UI", "GaussianNB", (0.46, 0.59, 0.72, 0.87, 0.73, 0.08)),
    ("STRESS_UI", "ComplementNB", (0.34, 0.81, 0.67, 0.64, 0.56, 0.68)),
    ("STRESS_UI", "KNN", (0.73, 0.81, 0.77, 0.73, 0.56, 0.81)),
    ("STRESS_UI", "Decision Tree", (0.59, 0.81, 0.93, 0.93, 0.56, 0.87)),
    ("STRESS_UI", "KNN improved", (0.79, 0.81, 0.71, 0.84, 0.56, 0.81)),
    ("STRESS_UI", "DT improved", (0.73, 0.81, 0.85, 0.93, 0.56, 0.87)),
    ("STRESS_UI", "KNN imp.randover", (0.87, 0.67, 0.70, 0.74, 0.56, 0.79)),
    ("STRESS_UI", "KNN imp.SMOTE", (0.74, 0.74, 0.73, 0.70, 0.56, 0.74)),
)

TABLE7 = {
    "intrinsic": (31, 0.49, 0.20),
    "intrinsic_best": (31, 0.52, 0.19),
    "extrinsic": (31, 0.56, 0.20),
    "extrinsic_best": (31, 0.61, 0.15),
    "all": (31, 0.42, 0.15),
    "best_of_all": (31, 0.58, 0.20),
}

TABLE8 = (
    ("UI", "Extrinsic best", "KNN imp. randover", 0.70),
    ("UI", "Extrinsic best", "KNN imp. SMOTE", 0.62),
    ("UI", "Best of all", "DT improved", 0.59),
    ("Stress UI", "All", "DT", 0.93),
    ("Stress UI", "Extrinsic best", "DT", 0.93),
    ("Stress UI", "Extrinsic best", "DT improved", 0.93),
    ("UI Frequency", "Best of all", "KNN", 0.77),
    ("UI Frequency", "Extrinsic", "DT improved", 0.77),
    ("UI Frequency", "Extrinsic", "KNN", 0.75),
    ("UI Intensity", "Extrinsic best", "KNN imp. SMOTE", 0.71),
    ("UI Intensity", "Extrinsic best", "KNN imp. randover", 0.70),
    ("UI Intensity", "Best of all", "KNN imp. SMOTE", 0.62),
)

# Mean F1 percentages quoted in the discussion of the results.
DISCUSSION_MEANS = {"intrinsic": 48.92, "extrinsic": 55.65, "intrinsic_best": 52.25, "extrinsic_best": 61.35}

# The two printed t-test comparisons, with the group summaries quoted next to them.
PRINTED_TTESTS = (
    {"a": "intrinsic", "b": "extrinsic", "t": -1.960, "df": 30, "p": 0.045,
     "m_a": 0.49, "sd_a": 0.20, "m_b": 0.56, "sd_b": 0.20},
    {"a": "intrinsic_best", "b": "extrinsic_best", "t": -1.960, "df": 30, "p": 0.002,
     "m_a": 0.52, "sd_a": 0.20, "m_b": 0.56, "sd_b": 0.20},
)

TABLE6_SHA256 = "a363395177bf069d062819efd36be15fe583fbc01804ceec4f92039d9b6ca048"


class FixtureCorrupted(ValueError):
    pass


def _digest(rows) -> str:
    canonical = json.dumps([[t, m, list(v)] for t, m, v in rows], separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class PaperFixture:
    rows: tuple = TABLE6
    table7: dict = field(default_factory=lambda: dict(TABLE7))
    table8: tuple = TABLE8

    def checksum(self) -> str:
        return _digest(self.rows)

    def verify_integrity(self) -> None:
        if self.checksum() != TABLE6_SHA256:
            raise FixtureCorrupted("embedded F1 table does not match its pinned checksum")
        for _, _, values in self.rows:
            if len(values) != len(GROUP_NAMES) or not all(0.0 <= v <= 1.0 for v in values):
                raise FixtureCorrupted("fixture values must be six F1 scores in [0, 1]")

    @property
    def matrix(self) -> np.ndarray:
        """(31, 6) F1 matrix in table row order."""
        return np.array([v for _, _, v in self.rows], dtype=np.float64)

    def column(self, group: str) -> np.ndarray:
        return self.matrix[:, GROUP_NAMES.index(group)]

    def cells(self):
        """(target, model id, group, f1) in table row and column order."""
        for target, printed, values in self.rows:
            for group, v in zip(GROUP_NAMES, values):
                yield target, PRINTED_MODEL_NAMES[printed], group, v

