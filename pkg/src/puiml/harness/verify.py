"""Recompute the published summary statistics from the embedded F1 table and flag mismatches."""

from __future__ import annotations

from dataclasses import dataclass

from ..evalstat import group_stats, t_test
from ..evalstat.stats import T_KINDS
from ..fixture import DISCUSSION_MEANS, PRINTED_GROUPS, PRINTED_MODEL_NAMES, PRINTED_TARGETS, PRINTED_TTESTS, \
    PaperFixture
from ..select import GROUP_LABELS, GROUP_NAMES
from .report import top_models

MEAN_SD_TOL = 0.01
DISCUSSION_TOL_PP = 0.5
# Printed t and p carry three decimals.
T_TOL = 0.0005
P_TOL = 0.0005


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    observed: str
    ok: bool
    note: str = ""

    def line(self) -> str:
        status = "ok  " if self.ok else "FLAG"
        tail = f"  ({self.note})" if self.note else ""
        return f"[{status}] {self.name}: printed {self.expected}, recomputed {self.observed}{tail}"


@dataclass(frozen=True)
class VerificationReport:
    checksum: str
    checks: tuple[Check, ...]
    ttests: tuple[tuple[str, str, str, float, float, float], ...]  # (a, b, kind, t, df, p)

    @property
    def discrepancies(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def render(self) -> str:
        lines = [f"fixture sha256 {self.checksum}", ""]
        lines += [c.line() for c in self.checks]
        lines += ["", "t-tests recomputed from the F1 table:"]
        for a, b, kind, t, df, p in self.ttests:
            lines.append(f"  {GROUP_LABELS[a]} vs {GROUP_LABELS[b]} [{kind}]: t({df:.2f}) = {t:.4f}, p = {p:.5f}")
        lines += ["", f"{len(self.discrepancies)} discrepancy(ies) flagged"]
        return "\n".join(lines) + "\n"


def _table7_checks(fixture: PaperFixture, stats) -> list[Check]:
    out = []
    for g in GROUP_NAMES:
        n, mean, sd = fixture.table7[g]
        s = stats[g]
        out.append(Check(f"group stats {GROUP_LABELS[g]} N", str(n), str(s.n), s.n == n))
        out.append(Check(f"group stats {GROUP_LABELS[g]} mean", f"{mean:.2f}", f"{s.mean:.4f}",
                         abs(s.mean - mean) <= MEAN_SD_TOL))
        out.append(Check(f"group stats {GROUP_LABELS[g]} SD", f"{sd:.2f}", f"{s.sd:.4f}",
                         abs(s.sd - sd) <= MEAN_SD_TOL))
    return out


def _discussion_checks(stats) -> list[Check]:
    out = []
    for g, pct in DISCUSSION_MEANS.items():
        got = 100 * stats[g].mean
        out.append(Check(f"quoted mean {GROUP_LABELS[g]}", f"{pct:.2f}%", f"{got:.2f}%",
                         abs(got - pct) <= DISCUSSION_TOL_PP))
    return out


def _ttest_checks(fixture: PaperFixture, stats):
    checks, rows = [], []
    for printed in PRINTED_TTESTS:
        a, b = printed["a"], printed["b"]
        label = f"{GROUP_LABELS[a]} vs {GROUP_LABELS[b]}"
        results = {kind: t_test(fixture.column(a), fixture.column(b), kind) for kind in T_KINDS}
        rows += [(a, b, kind, r.t, r.df, r.p) for kind, r in results.items()]
        paired = results["paired"]
        checks.append(Check(f"{label} df", str(printed["df"]), f"{paired.df:g}", paired.df == printed["df"],
                            "paired test"))
        matching = [k for k, r in results.items() if abs(r.t - printed["t"]) <= T_TOL]
        checks.append(Check(f"{label} t", f"{printed['t']:.3f}",
                            ", ".join(f"{k} {r.t:.3f}" for k, r in results.items()), bool(matching),
                            "" if matching else "no test kind reproduces the printed statistic"))
        matching = [k for k, r in results.items() if abs(r.p - printed["p"]) <= P_TOL]
        checks.append(Check(f"{label} p", f"{printed['p']:.3f}",
                            ", ".join(f"{k} {r.p:.4f}" for k, r in results.items()), bool(matching),
                            "" if matching else "no test kind reproduces the printed p-value"))
        for side in ("a", "b"):
            g = printed[side]
            s = stats[g]
            for what, value in (("mean", s.mean), ("SD", s.sd)):
                quoted = printed[("m_" if what == "mean" else "sd_") + side]
                ok = abs(value - quoted) <= MEAN_SD_TOL
                checks.append(Check(f"{label} quoted {GROUP_LABELS[g]} {what}", f"{quoted:.2f}", f"{value:.4f}",
                                    ok, "" if ok else "quoted summary disagrees with the group statistics"))
    return checks, rows


def _top3_checks(fixture: PaperFixture) -> list[Check]:
    computed = top_models(fixture, k=3)
    printed_by_target: dict[str, list[tuple[str, str, float]]] = {}
    for printed_target, printed_group, printed_model, f1 in fixture.table8:
        target = PRINTED_TARGETS[printed_target]
        printed_by_target.setdefault(target, []).append(
            (PRINTED_MODEL_NAMES[printed_model], PRINTED_GROUPS[printed_group], f1))
    lookup = {(t, m, g): v for t, m, g, v in fixture.cells()}
    checks = []
    for target, printed in printed_by_target.items():
        got = [(c.model, c.group, c.f1) for c in computed[target]]
        fmt = "; ".join
        notes, ok = [], sorted(v for *_, v in printed) == sorted(v for *_, v in got)
        for model, group, f1 in (p for p in printed if p not in got):
            cell = lookup.get((target, model, group))
            if cell == f1 and ok:
                # Same score as a computed entry; only the tie-break differs.
                notes.append(f"printed {model}/{GROUP_LABELS[group]} ties at {f1:.2f}; table order picks another")
                continue
            ok = False
            notes.append(f"printed {model}/{GROUP_LABELS[group]} {f1:.2f} but the F1 table cell reads "
                         f"{'absent' if cell is None else f'{cell:.2f}'}")
        checks.append(Check(
            f"top-3 {target}",
            fmt(f"{m}/{GROUP_LABELS[g]}/{v:.2f}" for m, g, v in printed),
            fmt(f"{m}/{GROUP_LABELS[g]}/{v:.2f}" for m, g, v in got),
            ok,
            "; ".join(notes),
        ))
    return checks


def verify_paper_stats(fixture: PaperFixture | None = None) -> VerificationReport:
    """Recompute group statistics, quoted means, t-tests and top-3 lists from the F1 table.

    Refuses to run on a fixture whose checksum does not match. Every printed number is
    listed with its recomputed counterpart; mismatches are flagged, never dropped.
    """
    fixture = fixture or PaperFixture()
    fixture.verify_integrity()
    stats = group_stats({g: fixture.column(g) for g in GROUP_NAMES})
    checks = _table7_checks(fixture, stats) + _discussion_checks(stats)
    tchecks, rows = _ttest_checks(fixture, stats)
    checks += tchecks + _top3_checks(fixture)
    return VerificationReport(fixture.checksum(), tuple(checks), tuple(rows))
