"""Command-line front end: ingest, metrics, train, rules, predict, report."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .analytics import DETERMINISTIC_TIMESTAMP, build_report, format_path, render_report
from .errors import AtRiskError, DataError
from .induction import Criterion, InductionParams, classify, extract_rules, induce_tree, load_model, serialize_model
from .metrics import AttributeScore, score_all
from .schema import Mode, format_csv, parse_csv, parse_schema, validate_dataset

CRITERIA = {"gain-ratio": Criterion.GAIN_RATIO, "info-gain": Criterion.INFO_GAIN}
MODES = {"raw": Mode.RAW_MARKS, "categorical": Mode.CATEGORICAL}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # keep argparse from calling sys.exit so main() can pick the streams
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        raise _HelpShown(message)


class _HelpShown(Exception):
    pass


def metrics_table(scores: Sequence[AttributeScore]) -> str:
    """Fixed-width gain / split info / gain ratio table, six decimals."""
    header = ("Attribute", "Gain", "Split Info", "Gain Ratio")
    rows = [
        (
            s.attribute,
            f"{s.gain:.6f}",
            f"{s.split_info:.6f}",
            "n/a" if s.gain_ratio is None else f"{s.gain_ratio:.6f}",
        )
        for s in scores
    ]
    first = max([len(header[0])] + [len(r[0]) for r in rows])
    nums = [max([len(header[i])] + [len(r[i]) for r in rows]) for i in (1, 2, 3)]

    def line(cells):
        return "  ".join([cells[0].ljust(first)] + [c.rjust(w) for c, w in zip(cells[1:], nums)])

    out = [line(header), "  ".join("-" * w for w in [first] + nums)]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="atrisk", description="Find students at risk of failing the final exam.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a grade sheet and echo it as categorical CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--mode", choices=MODES, default="categorical")

    p = sub.add_parser("metrics", help="gain, split information and gain ratio per attribute")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--mode", choices=MODES, default="categorical")
    p.add_argument("--format", choices=("table", "machine"), default="table")

    p = sub.add_parser("train", help="induce a decision tree and write the model file")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--mode", choices=MODES, default="categorical")
    p.add_argument("--criterion", choices=CRITERIA, default="gain-ratio")
    p.add_argument("--min-support", type=_positive_int, default=1)
    p.add_argument("--max-depth", type=_positive_int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rules", help="print the model as IF-THEN rules")
    p.add_argument("--model", required=True)
    p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("predict", help="classify every student in a grade sheet")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--mode", choices=MODES, default="categorical")
    p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("report", help="summaries, patterns and the at-risk list")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--course-id", required=True)
    p.add_argument("--mode", choices=MODES, default="categorical")
    p.add_argument("--fail-rate-threshold", type=float)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    return parser


class _Context:
    def __init__(self, stdin, stdout):
        self.stdin = stdin
        self.stdout = stdout

    def read(self, path):
        if path == "-":
            return self.stdin.read()
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc.strerror}") from None

    def write_file(self, path, text):
        if path == "-":
            self.stdout.write(text)
            return
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc.strerror}") from None

    def dataset(self, args, schema=None, training=False):
        if schema is None:
            schema = parse_schema(self.read(args.schema))
        data = parse_csv(self.read(args.data), schema, MODES[args.mode])
        problems = validate_dataset(data, training=training)
        if problems:
            raise DataError("; ".join(problems))
        return data


def _cmd_ingest(args, ctx):
    ctx.stdout.write(format_csv(ctx.dataset(args)))


def _cmd_metrics(args, ctx):
    scores = score_all(ctx.dataset(args, training=True))
    if args.format == "table":
        ctx.stdout.write(metrics_table(scores))
    else:
        rows = [
            {"attribute": s.attribute, "gain": s.gain, "split_info": s.split_info, "gain_ratio": s.gain_ratio}
            for s in scores
        ]
        ctx.stdout.write(json.dumps(rows, indent=2) + "\n")


def _cmd_train(args, ctx):
    schema = parse_schema(ctx.read(args.schema))
    data = ctx.dataset(args, schema, training=True)
    criterion = CRITERIA[args.criterion]
    tree = induce_tree(data, criterion, InductionParams(args.min_support, args.max_depth))
    ctx.write_file(args.out, serialize_model(tree, schema, criterion))


def _cmd_rules(args, ctx):
    model = load_model(ctx.read(args.model))
    rules = extract_rules(model.tree)
    if args.format == "text":
        for rule in rules:
            support = ", ".join(f"{k}={v}" for k, v in rule.support.counts.items()) or "none"
            ctx.stdout.write(f"{rule.format(model.schema.target_name)}  [support: {support}]\n")
    else:
        rows = [
            {"conditions": [list(c) for c in r.conditions], "conclusion": r.conclusion,
             "support": dict(r.support.counts)}
            for r in rules
        ]
        ctx.stdout.write(json.dumps(rows, indent=2) + "\n")


def _cmd_predict(args, ctx):
    model = load_model(ctx.read(args.model))
    cohort = ctx.dataset(args, model.schema)
    results = [(rec.student_id, classify(model.tree, rec)) for rec in cohort.records]
    if args.format == "text":
        for sid, pred in results:
            flag = "AT RISK" if pred.at_risk else "ok"
            ctx.stdout.write(f"{sid}\t{pred.label}\t{flag}\t{format_path(pred.path)}\n")
    else:
        rows = [
            {"student_id": sid, "label": p.label, "at_risk": p.at_risk, "path": [list(s) for s in p.path]}
            for sid, p in results
        ]
        ctx.stdout.write(json.dumps(rows, indent=2) + "\n")


def _cmd_report(args, ctx):
    model = load_model(ctx.read(args.model))
    cohort = ctx.dataset(args, model.schema)
    report = build_report(
        model.tree,
        cohort,
        args.course_id,
        model.criterion.value,
        args.fail_rate_threshold,
        DETERMINISTIC_TIMESTAMP if args.deterministic else None,
    )
    ctx.stdout.write(render_report(report, args.format))


COMMANDS = {
    "ingest": _cmd_ingest,
    "metrics": _cmd_metrics,
    "train": _cmd_train,
    "rules": _cmd_rules,
    "predict": _cmd_predict,
    "report": _cmd_report,
}


def main(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    """Run one subcommand; returns 0 on success, 1 on bad data, 2 on bad usage."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _HelpShown:
        return 0
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 2
    try:
        COMMANDS[args.command](args, _Context(stdin, stdout))
    except AtRiskError as exc:
        stderr.write(f"atrisk {args.command}: {exc}\n")
        return 1
    return 0


def run() -> None:
    sys.exit(main())
