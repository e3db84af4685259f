"""Command-line entry point.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 verification discrepancies.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .clinical import CLINICAL_SCHEMA
from .cohort import CohortConfig, default_config, generate_cohort, planted_config
from .evalstat import AVERAGING
from .fixture import FixtureCorrupted
from .harness import FORMATS, ProtocolConfig, emit_report, load_report, run_protocol, verify_paper_stats
from .tabular import TARGETS, DataError, SchemaError, write_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DISCREPANCY = 0, 1, 2, 3

log = logging.getLogger("puiml")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="puiml", description="Postpartum urinary-incontinence prediction experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run-protocol", help="run every (target, group, model) cell under k-fold CV")
    run.add_argument("--config", type=Path, help="protocol config (JSON)")
    run.add_argument("--csv", type=Path, help="dataset CSV; overrides the config's data source")
    run.add_argument("--schema", type=Path, help="schema JSON for --csv (default: the clinical schema)")
    run.add_argument("--preset", choices=("default", "planted"), help="synthetic cohort preset")
    run.add_argument("--n", type=_positive, help="synthetic cohort size")
    run.add_argument("--seed", type=_seed)
    run.add_argument("--folds", type=int)
    run.add_argument("--groups", choices=("replication", "data-driven"))
    run.add_argument("--f1-averaging", choices=AVERAGING, help="averaging for every target")
    run.add_argument("--targets", nargs="+", choices=TARGETS)
    run.add_argument("--workers", type=_positive)
    run.add_argument("--out", type=Path, default=Path("puiml-out"))
    run.add_argument("--format", choices=FORMATS, default="json")

    gen = sub.add_parser("generate-cohort", help="write a synthetic cohort CSV")
    gen.add_argument("--config", type=Path, help="cohort config (JSON)")
    gen.add_argument("--preset", choices=("default", "planted"), default="default")
    gen.add_argument("--n", type=_positive)
    gen.add_argument("--seed", type=_seed)
    gen.add_argument("--out", type=Path, default=Path("cohort.csv"), help="CSV path")
    gen.add_argument("--schema-out", type=Path, help="also write the schema as JSON")

    ver = sub.add_parser("verify-paper", help="recompute published statistics from the embedded F1 table")
    ver.add_argument("--out", type=Path, help="also write the verification text here")

    rep = sub.add_parser("report", help="re-render a saved JSON report")
    rep.add_argument("input", type=Path, help="report.json or the directory holding it")
    rep.add_argument("--format", choices=FORMATS, default="markdown-table")
    rep.add_argument("--out", type=Path, default=Path("puiml-out"))
    return p


def _protocol_config(args) -> ProtocolConfig:
    base = ProtocolConfig.load(args.config) if args.config else ProtocolConfig()
    data = base.data.model_dump(by_alias=True)
    if args.csv:
        data.update(csv=str(args.csv), cohort=None)
    if args.schema:
        data["schema"] = str(args.schema)
    if args.preset:
        data.update(preset=args.preset, cohort=None, csv=None)
    if args.n:
        data["n"] = args.n
    updates = {"data": data}
    for key in ("seed", "folds", "groups", "workers", "targets"):
        value = getattr(args, key)
        if value is not None:
            updates[key] = value
    if args.f1_averaging:
        updates["f1_averaging"] = {t: args.f1_averaging for t in TARGETS}
    return ProtocolConfig.model_validate({**base.model_dump(by_alias=True), **updates})


def _cmd_run(args) -> int:
    config = _protocol_config(args)
    report = run_protocol(config)
    for path in emit_report(report, args.format, args.out):
        print(path)
    for note in report.notes:
        log.info(note)
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.config:
        cfg = CohortConfig.load(args.config)
        updates = {k: v for k, v in (("n", args.n), ("seed", args.seed)) if v is not None}
        cfg = cfg.model_copy(update=updates)
    else:
        make = planted_config if args.preset == "planted" else default_config
        kwargs = {k: v for k, v in (("n", args.n), ("seed", args.seed)) if v is not None}
        cfg = make(**kwargs)
    dataset = generate_cohort(cfg)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(dataset, args.out)
    if args.schema_out:
        CLINICAL_SCHEMA.save(args.schema_out)
    print(f"{args.out}: {dataset.n_rows} synthetic rows")
    return EXIT_OK


def _cmd_verify(args) -> int:
    result = verify_paper_stats()
    text = result.render()
    sys.stdout.write(text)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
    return EXIT_DISCREPANCY if result.discrepancies else EXIT_OK


def _cmd_report(args) -> int:
    report = load_report(args.input)
    for path in emit_report(report, args.format, args.out):
        print(path)
    return EXIT_OK


COMMANDS = {"run-protocol": _cmd_run, "generate-cohort": _cmd_generate, "verify-paper": _cmd_verify,
            "report": _cmd_report}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DataError, SchemaError, FixtureCorrupted) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValidationError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
