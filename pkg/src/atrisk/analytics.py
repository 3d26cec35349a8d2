"""Per-assessment counts, pattern detection and the at-risk report."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import NamedTuple, Optional, Sequence

from .errors import ConfigError, ModelFormatError
from .induction import TreeNode, classify
from .schema import FAIL, PASS, Dataset

DETERMINISTIC_TIMESTAMP = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class AssessmentSummary:
    attribute: str
    pass_count: int
    fail_count: int

    @property
    def total(self) -> int:
        return self.pass_count + self.fail_count

    @property
    def fail_rate(self) -> float:
        return self.fail_count / self.total if self.total else 0.0


class PatternKind(str, Enum):
    ALL_PASS = "all_pass"
    ALL_FAIL = "all_fail"
    HIGH_FAILURE = "high_failure"


@dataclass(frozen=True)
class Pattern:
    kind: PatternKind
    attribute: str
    detail: str = ""


class RiskEntry(NamedTuple):
    student_id: str
    label: str
    path: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class RiskReport:
    course_id: str
    summaries: tuple[AssessmentSummary, ...]
    patterns: tuple[Pattern, ...]
    at_risk: tuple[RiskEntry, ...]
    model_criterion: str
    generated_at: datetime


def summarize(dataset: Dataset) -> list[AssessmentSummary]:
    summaries = []
    for name in dataset.schema.names:
        passed = sum(1 for r in dataset.records if r.values[name] == PASS)
        failed = sum(1 for r in dataset.records if r.values[name] == FAIL)
        summaries.append(AssessmentSummary(name, passed, failed))
    return summaries


def _describe(kind: PatternKind, s: AssessmentSummary, threshold: float) -> str:
    if kind is PatternKind.ALL_PASS:
        return f"100% passing rate ({s.pass_count}/{s.total} passed)"
    if kind is PatternKind.ALL_FAIL:
        return f"no student passed ({s.fail_count}/{s.total} failed)"
    return f"many failures: fail rate {s.fail_rate:.2f} >= {threshold:.2f} ({s.fail_count}/{s.total} failed)"


def detect_patterns(summaries: Sequence[AssessmentSummary], fail_rate_threshold: float = 0.4) -> list[Pattern]:
    """Flag assessments everyone passed, everyone failed, or many failed.

    "Many" means a fail rate at or above ``fail_rate_threshold``.
    """
    if not 0 < fail_rate_threshold <= 1:
        raise ConfigError(f"fail rate threshold must lie in (0, 1], got {fail_rate_threshold!r}")
    patterns = []
    for s in summaries:
        kinds = []
        if s.total and s.fail_count == 0:
            kinds.append(PatternKind.ALL_PASS)
        if s.total and s.pass_count == 0:
            kinds.append(PatternKind.ALL_FAIL)
        if s.total and s.fail_rate >= fail_rate_threshold:
            kinds.append(PatternKind.HIGH_FAILURE)
        patterns += [Pattern(k, s.attribute, _describe(k, s, fail_rate_threshold)) for k in kinds]
    return patterns


def risk_list(model: TreeNode, cohort: Dataset) -> list[RiskEntry]:
    """Students the tree predicts will fail the final, in cohort order."""
    entries = []
    for rec in cohort.records:
        label, at_risk, path = classify(model, rec)
        if at_risk:
            entries.append(RiskEntry(rec.student_id, label, path))
    return entries


def build_report(
    model: TreeNode,
    cohort: Dataset,
    course_id: str,
    criterion: str = "gain_ratio",
    fail_rate_threshold: Optional[float] = None,
    generated_at: Optional[datetime] = None,
) -> RiskReport:
    if fail_rate_threshold is None:
        fail_rate_threshold = cohort.schema.fail_rate_threshold
    summaries = summarize(cohort)
    return RiskReport(
        course_id,
        tuple(summaries),
        tuple(detect_patterns(summaries, fail_rate_threshold)),
        tuple(risk_list(model, cohort)),
        criterion,
        generated_at or datetime.now(timezone.utc),
    )


# --- rendering ------------------------------------------------------------


def _table(header, rows):
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return lines


def format_path(path) -> str:
    return " AND ".join(f"{attr} = {value}" for attr, value in path) or "(root)"


def report_to_json(report: RiskReport) -> dict:
    return {
        "course_id": report.course_id,
        "summaries": [
            {"attribute": s.attribute, "pass": s.pass_count, "fail": s.fail_count} for s in report.summaries
        ],
        "patterns": [{"kind": p.kind.value, "attribute": p.attribute} for p in report.patterns],
        "at_risk": [{"student_id": e.student_id, "path": [list(step) for step in e.path]} for e in report.at_risk],
        "criterion": report.model_criterion,
        "generated_at": report.generated_at.isoformat(),
    }


def render_report(report: RiskReport, format: str = "text") -> str:
    if format == "machine":
        return json.dumps(report_to_json(report), indent=2) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")

    out = [
        f"Course: {report.course_id}",
        f"Criterion: {report.model_criterion}",
        f"Generated: {report.generated_at.isoformat()}",
        "",
        "Assessment summary",
    ]
    out += _table(
        ("Assessment", "Pass", "Fail", "Fail rate"),
        [(s.attribute, str(s.pass_count), str(s.fail_count), f"{s.fail_rate:.2f}") for s in report.summaries],
    )
    out += ["", "Patterns"]
    out += _table(("Assessment", "Pattern", "Detail"), [(p.attribute, p.kind.value, p.detail) for p in report.patterns])
    out += ["", f"Students at risk ({len(report.at_risk)})"]
    out += _table(("Student", "Predicted", "Because"), [(e.student_id, e.label, format_path(e.path)) for e in report.at_risk])
    return "\n".join(out) + "\n"


def parse_report(text: str, fail_rate_threshold: float = 0.4) -> RiskReport:
    """Read a machine-format report back.

    The JSON carries no pattern details, so they are regenerated from the
    summaries using ``fail_rate_threshold``.
    """
    try:
        doc = json.loads(text)
        summaries = tuple(AssessmentSummary(s["attribute"], int(s["pass"]), int(s["fail"])) for s in doc["summaries"])
        by_name = {s.attribute: s for s in summaries}
        patterns = tuple(
            Pattern(
                PatternKind(p["kind"]),
                p["attribute"],
                _describe(PatternKind(p["kind"]), by_name[p["attribute"]], fail_rate_threshold),
            )
            for p in doc["patterns"]
        )
        at_risk = tuple(
            RiskEntry(e["student_id"], FAIL, tuple((a, v) for a, v in e["path"])) for e in doc["at_risk"]
        )
        return RiskReport(
            doc["course_id"],
            summaries,
            patterns,
            at_risk,
            doc["criterion"],
            datetime.fromisoformat(doc["generated_at"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed report: {exc!r}") from None
