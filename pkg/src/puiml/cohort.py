"""Synthetic cohorts that follow the clinical schema, with a plantable outcome signal.

Everything produced here is synthetic. The shipped marginals are rough, plausible
guesses for a small obstetric cohort; they are not estimates from real patients.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from .clinical import CLINICAL_SCHEMA
from .tabular import Dataset, Schema


class CategoricalMarginal(BaseModel):
    kind: Literal["categorical"] = "categorical"
    probs: list[float]

    @field_validator("probs")
    @classmethod
    def _sums_to_one(cls, v):
        if any(p < 0 for p in v) or abs(sum(v) - 1.0) > 1e-9:
            raise ValueError(f"level probabilities must be non-negative and sum to 1, got {v}")
        return v


class ContinuousMarginal(BaseModel):
    kind: Literal["continuous"] = "continuous"
    mean: float
    sd: float = Field(gt=0)
    low: float | None = None
    high: float | None = None
    integer: bool = False

    @model_validator(mode="after")
    def _range(self):
        if self.low is not None and self.high is not None and self.low >= self.high:
            raise ValueError("low must be below high")
        return self


Marginal = Annotated[Union[CategoricalMarginal, ContinuousMarginal], Field(discriminator="kind")]


class EffectTerm(BaseModel):
    feature: str
    coef: float


class EffectSpec(BaseModel):
    """Linear predictor on the log-odds scale.

    Categorical features enter as their level code, continuous features standardised by
    their configured marginal mean and SD.
    """

    terms: list[EffectTerm] = []
    intercept: float = 0.0
    noise_sd: float = Field(0.0, ge=0)
    thresholds: list[float] | None = None

    @field_validator("thresholds")
    @classmethod
    def _increasing(cls, v):
        if v is not None and any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"thresholds must be strictly increasing, got {v}")
        return v


class CohortConfig(BaseModel):
    n: int = Field(93, ge=1)
    seed: int = 0
    marginals: dict[str, Marginal]
    effects: dict[str, EffectSpec] = {}

    def check(self, schema: Schema) -> None:
        """Validate the config against the schema; raises ValueError."""
        for name in schema.names:
            if name not in self.marginals and name not in self.effects:
                raise ValueError(f"no marginal or effect configured for {name}")
        for name, m in self.marginals.items():
            if name not in schema:
                raise ValueError(f"marginal for unknown column {name}")
            col = schema[name]
            if col.categorical != (m.kind == "categorical"):
                raise ValueError(f"{name}: marginal kind {m.kind} does not match schema")
            if col.categorical and len(m.probs) != len(col.kind.levels):
                raise ValueError(f"{name}: {len(m.probs)} probabilities for {len(col.kind.levels)} levels")
        for target, eff in self.effects.items():
            if target not in schema or schema[target].role != "outcome" or not schema[target].categorical:
                raise ValueError(f"effects must target categorical outcomes, got {target}")
            levels = len(schema[target].kind.levels)
            if levels > 2 and (eff.thresholds is None or len(eff.thresholds) != levels - 1):
                raise ValueError(f"{target} needs {levels - 1} increasing thresholds")
            if levels == 2 and eff.thresholds is not None:
                raise ValueError(f"{target} is binary and takes no thresholds")
            for term in eff.terms:
                if term.feature not in schema or schema[term.feature].role == "outcome":
                    raise ValueError(f"{target}: effect feature {term.feature} must be a non-outcome column")
                if term.feature not in self.marginals:
                    raise ValueError(f"{target}: effect feature {term.feature} has no marginal")

    @classmethod
    def load(cls, path: str | Path) -> "CohortConfig":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _sample_marginal(m, n: int, rng: np.random.Generator) -> np.ndarray:
    if m.kind == "categorical":
        return rng.choice(len(m.probs), size=n, p=np.asarray(m.probs))
    x = rng.normal(m.mean, m.sd, size=n)
    if m.integer:
        x = np.round(x)
    return np.clip(x, m.low if m.low is not None else -np.inf, m.high if m.high is not None else np.inf)


def generate_cohort(config: CohortConfig, schema: Schema = CLINICAL_SCHEMA) -> Dataset:
    """Sample features from their marginals, then each configured outcome.

    Binary outcomes are Bernoulli(sigmoid(eta + noise)); ordinal outcomes count how many
    thresholds the latent eta + noise + Logistic(0, 1) exceeds. Outcomes without an effect
    are drawn from their marginals, independently of everything else.
    """
    config.check(schema)
    rng = np.random.default_rng(config.seed)
    n = config.n
    data: dict[str, np.ndarray] = {}
    for col in schema.columns:
        if col.name in config.effects:
            continue
        data[col.name] = _sample_marginal(config.marginals[col.name], n, rng)
    for col in schema.columns:
        eff = config.effects.get(col.name)
        if eff is None:
            continue
        eta = np.full(n, eff.intercept)
        for term in eff.terms:
            m = config.marginals[term.feature]
            x = data[term.feature].astype(np.float64)
            if m.kind == "continuous":
                x = (x - m.mean) / m.sd
            eta += term.coef * x
        if eff.noise_sd > 0:
            eta += rng.normal(0.0, eff.noise_sd, size=n)
        if eff.thresholds is None:
            data[col.name] = (rng.random(n) < _sigmoid(eta)).astype(np.int64)
        else:
            latent = eta + rng.logistic(0.0, 1.0, size=n)
            data[col.name] = (latent[:, None] > np.asarray(eff.thresholds)[None]).sum(axis=1)
    return Dataset(schema, data)


def _cat(*probs):
    return CategoricalMarginal(probs=list(probs))


def _num(mean, sd, low=None, high=None, integer=False):
    return ContinuousMarginal(mean=mean, sd=sd, low=low, high=high, integer=integer)


DEFAULT_MARGINALS = {
    "AGE": _num(32.0, 4.5, 18, 40, integer=True),
    "NUM_LABOURS": _num(0.6, 0.8, 0, 4, integer=True),
    "DIC_NULLIPAROUS": _cat(0.55, 0.45),
    "HEIGHT": _num(163.0, 6.0, 145, 185),
    "WEIGHT": _num(72.0, 10.0, 45, 110),
    "BMI": _num(24.5, 3.5, 16, 40),
    "CAT_BMI": _cat(0.05, 0.65, 0.30),
    "EXTRA_KG": _num(12.5, 4.0, 0, 25),
    "CAT_EXTRAKG": _cat(0.35, 0.40, 0.18, 0.07),
    "LABOUR_PREP": _cat(0.40, 0.60),
    "PROF_CHBPR": _cat(0.35, 0.45, 0.20),
    "PA_PREV": _cat(0.45, 0.55),
    "FREQ_PAPREV": _cat(0.45, 0.35, 0.20),
    "IPAQ": _cat(0.40, 0.45, 0.15),
    "WALKING": _cat(0.30, 0.70),
    "STRENGTH": _cat(0.80, 0.20),
    "PILATES": _cat(0.75, 0.25),
    "AQUAGYM": _cat(0.80, 0.20),
    "NUM_PA": _num(1.2, 1.0, 0, 5, integer=True),
    "WEEK_LABOUR": _num(39.5, 1.1, 37, 42),
    "INJURY": _cat(0.45, 0.55),
    "EPISIOTOMY": _cat(0.70, 0.30),
    "TEARING": _cat(0.50, 0.38, 0.12),
    "DURATION": _num(8.0, 4.0, 1, 24),
    "LITOTHOMY": _cat(0.30, 0.70),
    "POSTURE": _cat(0.70, 0.15, 0.10, 0.05),
    "ANALGESIA": _cat(0.25, 0.75),
    "TYPE_ANALGESIA": _cat(0.25, 0.05, 0.65, 0.05),
    "TYPE_LABOUR": _cat(0.80, 0.12, 0.08),
    "KRISTELLER": _cat(0.85, 0.15),
    "WEIGHT_BABY": _num(3300.0, 400.0, 2300, 4600),
    "VAS_PERINE": _num(2.0, 2.0, 0, 10),
    "UI": _cat(0.65, 0.35),
    "FREQ_UI": _cat(0.65, 0.28, 0.07),
    "INT_UI": _cat(0.65, 0.22, 0.10, 0.03),
    "AFFECT_UI": _cat(0.75, 0.25),
    "BLADD_HYPER": _cat(0.85, 0.15),
    "STRESS_UI": _cat(0.75, 0.25),
    "UI_PREV": _cat(0.85, 0.08, 0.07),
}


def _effect(terms, intercept=0.0, thresholds=None, noise_sd=0.0):
    return EffectSpec(terms=[EffectTerm(feature=f, coef=c) for f, c in terms],
                      intercept=intercept, thresholds=thresholds, noise_sd=noise_sd)


def default_config(n: int = 93, seed: int = 0) -> CohortConfig:
    """Plausible marginals with modest extrinsic effects; STRESS_UI is the rare outcome."""
    effects = {
        "UI": _effect([("AQUAGYM", -1.0), ("WEIGHT", 0.6), ("EXTRA_KG", 0.4)], intercept=-0.5, noise_sd=0.5),
        "STRESS_UI": _effect([("AQUAGYM", -1.0), ("FREQ_PAPREV", -0.5), ("IPAQ", -0.4)], intercept=-1.0,
                             noise_sd=0.5),
        "FREQ_UI": _effect([("AQUAGYM", -1.0), ("STRENGTH", -0.8), ("PILATES", -0.6)],
                           thresholds=[0.6, 2.5], noise_sd=0.5),
        "INT_UI": _effect([("AQUAGYM", -1.0), ("WEIGHT", 0.6), ("EXTRA_KG", 0.4)],
                          thresholds=[0.6, 1.8, 3.2], noise_sd=0.5),
    }
    return CohortConfig(n=n, seed=seed, marginals=dict(DEFAULT_MARGINALS), effects=effects)


PLANTED_FEATURES = {
    "UI": ("AQUAGYM", "WEIGHT", "EXTRA_KG"),
    "STRESS_UI": ("AQUAGYM", "FREQ_PAPREV", "IPAQ"),
    "FREQ_UI": ("AQUAGYM", "STRENGTH", "PILATES"),
    "INT_UI": ("AQUAGYM", "WEIGHT", "EXTRA_KG"),
}


def planted_config(n: int = 300, seed: int = 0, strength: float = 2.5) -> CohortConfig:
    """Outcomes driven only by three extrinsic variables each; intrinsic variables are pure noise."""
    def terms(target):
        feats = PLANTED_FEATURES[target]
        signs = {"AQUAGYM": -1, "STRENGTH": -1, "PILATES": -1, "FREQ_PAPREV": -1, "IPAQ": -1}
        return [(f, signs.get(f, 1) * strength) for f in feats]

    effects = {
        "UI": _effect(terms("UI"), intercept=0.8),
        "STRESS_UI": _effect(terms("STRESS_UI"), intercept=1.5),
        "FREQ_UI": _effect(terms("FREQ_UI"), thresholds=[-1.0, 1.5]),
        "INT_UI": _effect(terms("INT_UI"), thresholds=[-1.0, 1.0, 3.0]),
    }
    return CohortConfig(n=n, seed=seed, marginals=dict(DEFAULT_MARGINALS), effects=effects)

