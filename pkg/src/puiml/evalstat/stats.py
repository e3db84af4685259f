"""Student t distribution, t-tests and per-group summary statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

T_KINDS = ("paired", "pooled", "welch")

_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _CF_TINY else _CF_TINY)
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _CF_TINY else _CF_TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _CF_TINY else _CF_TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _CF_TINY else _CF_TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _CF_TINY else _CF_TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularised incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + t * t))
    return 1.0 - tail if t > 0 else tail


def t_two_sided_p(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    return min(1.0, betainc(df / 2.0, 0.5, df / (df + t * t)))


@dataclass(frozen=True)
class TTestResult:
    kind: str
    t: float
    df: float
    p: float
    mean_a: float
    mean_b: float
    sd_a: float
    sd_b: float
    n_a: int
    n_b: int


class DegenerateTestError(ValueError):
    pass


def t_test(a: Sequence[float], b: Sequence[float], kind: str = "paired") -> TTestResult:
    """Two-sided t-test of a against b: paired, pooled-variance or Welch."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if kind not in T_KINDS:
        raise ValueError(f"kind must be one of {T_KINDS}")
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two values")
    ma, mb = float(a.mean()), float(b.mean())
    sa, sb = float(a.std(ddof=1)), float(b.std(ddof=1))
    na, nb = len(a), len(b)
    if kind == "paired":
        if na != nb:
            raise ValueError("paired samples must have equal length")
        diff = a - b
        sd = float(diff.std(ddof=1))
        if sd == 0:
            raise DegenerateTestError("paired differences have zero variance")
        t = float(diff.mean()) / (sd / math.sqrt(na))
        df = float(na - 1)
    elif kind == "pooled":
        df = float(na + nb - 2)
        sp2 = ((na - 1) * sa * sa + (nb - 1) * sb * sb) / df
        if sp2 == 0:
            raise DegenerateTestError("both samples have zero variance")
        t = (ma - mb) / math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
    else:
        va, vb = sa * sa / na, sb * sb / nb
        if va + vb == 0:
            raise DegenerateTestError("both samples have zero variance")
        t = (ma - mb) / math.sqrt(va + vb)
        df = (va + vb) ** 2 / (va * va / (na - 1) + vb * vb / (nb - 1))
    return TTestResult(kind, t, df, t_two_sided_p(t, df), ma, mb, sa, sb, na, nb)


@dataclass(frozen=True)
class GroupSummary:
    name: str
    n: int
    mean: float
    sd: float


@dataclass(frozen=True)
class GroupStats:
    groups: tuple[GroupSummary, ...]

    def __getitem__(self, name: str) -> GroupSummary:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)


def group_stats(columns: Mapping[str, Sequence[float]]) -> GroupStats:
    """Mean and sample SD per group; NaN cells (skipped runs) are left out of that group's N."""
    out = []
    for name, values in columns.items():
        v = np.asarray(values, dtype=np.float64)
        v = v[~np.isnan(v)]
        if v.size == 0:
            raise ValueError(f"group {name!r} has no values")
        sd = float(v.std(ddof=1)) if v.size > 1 else float("nan")
        out.append(GroupSummary(name, int(v.size), float(v.mean()), sd))
    return GroupStats(tuple(out))
