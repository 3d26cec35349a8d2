"""Data model, grade-sheet parsing and mark discretization."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import (
    CellError,
    ConfigError,
    DomainError,
    DuplicateAttributeError,
    MissingValueError,
    SchemaMismatchError,
)

PASS = "Pass"
FAIL = "Fail"
CATEGORIES = (PASS, FAIL)

ID_COLUMN = "student_id"


class CourseType(str, Enum):
    WITH_PRACTICAL = "with_practical"
    WITHOUT_PRACTICAL = "without_practical"


class Kind(str, Enum):
    QUIZ = "quiz"
    ASSIGNMENT1 = "assignment1"
    ASSIGNMENT2 = "assignment2"
    MIDTERM = "midterm"
    OTHER = "other"


class Mode(str, Enum):
    RAW_MARKS = "raw_marks"
    CATEGORICAL = "categorical"


# Standard pass marks per assessment kind; OTHER has no default.
DEFAULT_THRESHOLDS = {
    CourseType.WITH_PRACTICAL: {
        Kind.QUIZ: 6.0,
        Kind.ASSIGNMENT1: 4.8,
        Kind.ASSIGNMENT2: 7.2,
        Kind.MIDTERM: 12.0,
    },
    CourseType.WITHOUT_PRACTICAL: {
        Kind.QUIZ: 6.0,
        Kind.ASSIGNMENT1: 6.0,
        Kind.ASSIGNMENT2: 6.0,
        Kind.MIDTERM: 12.0,
    },
}

DEFAULT_FAIL_RATE_THRESHOLD = 0.4


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: Kind = Kind.OTHER
    position: int = 0


@dataclass(frozen=True)
class AttributeSchema:
    """Predictor attributes in declared order plus course-level settings.

    ``thresholds`` maps attribute name to its raw-mark pass threshold. An
    attribute of kind ``other`` without an explicit threshold is absent from
    the map; such a schema can only ingest categorical grade sheets.
    """

    attributes: tuple[Attribute, ...]
    course_type: CourseType = CourseType.WITH_PRACTICAL
    thresholds: Mapping[str, float] = field(default_factory=dict)
    target_name: str = "Final"
    coursework_max: float = 60.0
    final_max: float = 40.0
    total_pass_mark: float = 60.0
    fail_rate_threshold: float = DEFAULT_FAIL_RATE_THRESHOLD

    def __post_init__(self):
        seen = set()
        for attr in self.attributes:
            if not attr.name:
                raise ConfigError("attribute name must be non-empty")
            if attr.name in seen:
                raise DuplicateAttributeError(f"duplicate attribute {attr.name!r}")
            seen.add(attr.name)
        if not self.target_name:
            raise ConfigError("target name must be non-empty")
        if self.target_name in seen:
            raise ConfigError(f"target {self.target_name!r} is also a predictor attribute")
        if self.target_name == ID_COLUMN or ID_COLUMN in seen:
            raise ConfigError(f"{ID_COLUMN!r} is reserved for the identifier column")
        unknown = set(self.thresholds) - seen
        if unknown:
            raise ConfigError(f"threshold for undeclared attribute {sorted(unknown)[0]!r}")
        if not 0 < self.fail_rate_threshold <= 1:
            raise ConfigError("pattern.fail_rate_threshold must lie in (0, 1]")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def position(self, name: str) -> int:
        for i, attr in enumerate(self.attributes):
            if attr.name == name:
                return i
        raise KeyError(name)

    @classmethod
    def build(
        cls,
        attributes: Iterable[tuple[str, Kind | str]],
        course_type: CourseType | str = CourseType.WITH_PRACTICAL,
        overrides: Optional[Mapping[str, float]] = None,
        **settings,
    ) -> "AttributeSchema":
        """Declare ``(name, kind)`` pairs and fill in the standard thresholds."""
        course_type = CourseType(course_type)
        attrs = tuple(Attribute(name, Kind(kind), i) for i, (name, kind) in enumerate(attributes))
        overrides = dict(overrides or {})
        thresholds = {}
        for attr in attrs:
            if attr.name in overrides:
                thresholds[attr.name] = float(overrides.pop(attr.name))
            elif attr.kind in DEFAULT_THRESHOLDS[course_type]:
                thresholds[attr.name] = DEFAULT_THRESHOLDS[course_type][attr.kind]
        if overrides:
            raise ConfigError(f"threshold for undeclared attribute {next(iter(overrides))!r}")
        return cls(attrs, course_type, thresholds, **settings)


@dataclass(frozen=True)
class StudentRecord:
    student_id: str
    values: Mapping[str, str]
    target: Optional[str] = None


@dataclass(frozen=True)
class Dataset:
    schema: AttributeSchema
    records: tuple[StudentRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def where(self, attribute: str, value: str) -> "Dataset":
        """The subset of records whose ``attribute`` equals ``value``."""
        return Dataset(self.schema, tuple(r for r in self.records if r.values.get(attribute) == value))

    def unlabeled(self) -> "Dataset":
        return Dataset(self.schema, tuple(StudentRecord(r.student_id, r.values) for r in self.records))


# --- schema config -------------------------------------------------------

_SCALAR_KEYS = {
    "course_type",
    "target",
    "coursework_max",
    "final_max",
    "total_pass_mark",
    "pattern.fail_rate_threshold",
}


def _number(text, lineno, key):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}", lineno) from None
    if not math.isfinite(value) or value < 0:
        raise ConfigError(f"{key}: expected a finite non-negative number", lineno)
    return value


def parse_schema(config_text: str) -> AttributeSchema:
    """Parse a ``key = value`` schema config.

    Attributes are declared by any ``attribute.<name>.kind`` or
    ``attribute.<name>.threshold`` key, in order of first appearance.
    Blank lines and lines starting with ``#`` are ignored.
    """
    scalars: dict[str, str] = {}
    kinds: dict[str, Kind] = {}
    overrides: dict[str, float] = {}
    order: list[str] = []

    for lineno, raw in enumerate(config_text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not value:
            raise ConfigError(f"{key}: empty value", lineno)

        if key in _SCALAR_KEYS:
            if key in scalars:
                raise ConfigError(f"{key} set twice", lineno)
            scalars[key] = value
            if key == "course_type":
                try:
                    CourseType(value)
                except ValueError:
                    raise ConfigError(f"unknown course_type {value!r}", lineno) from None
            elif key != "target":
                _number(value, lineno, key)
            continue

        if key.startswith("attribute."):
            name, dot, prop = key[len("attribute."):].rpartition(".")
            name = name.strip()
            if not dot or not name:
                raise ConfigError(f"malformed attribute key {key!r}", lineno)
            if prop == "kind":
                if name in kinds:
                    raise DuplicateAttributeError(f"duplicate attribute {name!r}", lineno)
                try:
                    kinds[name] = Kind(value)
                except ValueError:
                    raise ConfigError(f"unknown kind {value!r}", lineno) from None
            elif prop == "threshold":
                if name in overrides:
                    raise DuplicateAttributeError(f"duplicate attribute {name!r}", lineno)
                overrides[name] = _number(value, lineno, key)
            else:
                raise ConfigError(f"unknown key {key!r}", lineno)
            if name not in order:
                order.append(name)
            continue

        raise ConfigError(f"unknown key {key!r}", lineno)

    settings = {}
    if "target" in scalars:
        settings["target_name"] = scalars["target"]
    for key, attr in (
        ("coursework_max", "coursework_max"),
        ("final_max", "final_max"),
        ("total_pass_mark", "total_pass_mark"),
        ("pattern.fail_rate_threshold", "fail_rate_threshold"),
    ):
        if key in scalars:
            settings[attr] = float(scalars[key])

    return AttributeSchema.build(
        [(name, kinds.get(name, Kind.OTHER)) for name in order],
        scalars.get("course_type", CourseType.WITH_PRACTICAL),
        overrides,
        **settings,
    )


def format_schema(schema: AttributeSchema) -> str:
    """Render a schema back to config text; ``parse_schema`` inverts it."""
    lines = [f"course_type = {schema.course_type.value}", f"target = {schema.target_name}"]
    for attr in schema.attributes:
        lines.append(f"attribute.{attr.name}.kind = {attr.kind.value}")
        if attr.name in schema.thresholds:
            lines.append(f"attribute.{attr.name}.threshold = {schema.thresholds[attr.name]!r}")
    lines += [
        f"coursework_max = {schema.coursework_max!r}",
        f"final_max = {schema.final_max!r}",
        f"total_pass_mark = {schema.total_pass_mark!r}",
        f"pattern.fail_rate_threshold = {schema.fail_rate_threshold!r}",
    ]
    return "\n".join(lines) + "\n"


# --- grade sheets --------------------------------------------------------


def discretize_mark(mark: float, threshold: float) -> str:
    """Pass iff ``mark >= threshold``."""
    if not math.isfinite(mark) or mark < 0:
        raise DomainError(f"mark must be finite and non-negative, got {mark!r}")
    return PASS if mark >= threshold else FAIL


def _category(cell: str, row: int, column: str) -> str:
    for cat in CATEGORIES:
        if cell.lower() == cat.lower():
            return cat
    raise CellError(f"expected Pass or Fail, got {cell!r}", row, column)


def parse_csv(csv_text: str, schema: AttributeSchema, mode: Mode | str = Mode.CATEGORICAL) -> Dataset:
    """Read a grade sheet into a Dataset, preserving row order.

    Row numbers in errors count the header as row 1.
    """
    mode = Mode(mode)
    reader = csv.reader(io.StringIO(csv_text))
    header = next(reader, None)
    if header is None:
        raise SchemaMismatchError(ID_COLUMN)
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise CellError("duplicate column name", 1, next(h for h in header if header.count(h) > 1))
    if not header or header[0] != ID_COLUMN:
        raise SchemaMismatchError(ID_COLUMN)
    for name in schema.names:
        if name not in header:
            raise SchemaMismatchError(name)
    allowed = {ID_COLUMN, schema.target_name, *schema.names}
    for name in header:
        if name not in allowed:
            raise CellError("unexpected column", 1, name)
    if mode is Mode.RAW_MARKS:
        for name in schema.names:
            if name not in schema.thresholds:
                raise SchemaMismatchError(f"threshold for {name}")

    index = {name: i for i, name in enumerate(header)}
    has_target = schema.target_name in index
    records = []
    for rowno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise CellError(f"expected {len(header)} cells, got {len(row)}", rowno, ID_COLUMN)
        cells = [c.strip() for c in row]
        sid = cells[0]
        if not sid:
            raise MissingValueError(rowno, ID_COLUMN)
        values = {}
        for name in schema.names:
            cell = cells[index[name]]
            if not cell:
                raise MissingValueError(rowno, name)
            if mode is Mode.CATEGORICAL:
                values[name] = _category(cell, rowno, name)
            else:
                try:
                    mark = float(cell)
                except ValueError:
                    raise CellError(f"not a number: {cell!r}", rowno, name) from None
                try:
                    values[name] = discretize_mark(mark, schema.thresholds[name])
                except DomainError as exc:
                    raise CellError(str(exc), rowno, name) from None
        target = None
        if has_target:
            cell = cells[index[schema.target_name]]
            # an empty target means the student has not sat the final yet
            if cell:
                target = _category(cell, rowno, schema.target_name)
        records.append(StudentRecord(sid, values, target))
    return Dataset(schema, tuple(records))


def format_csv(dataset: Dataset) -> str:
    """Emit a categorical grade sheet; ``parse_csv`` reads it back unchanged."""
    schema = dataset.schema
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([ID_COLUMN, *schema.names, schema.target_name])
    for rec in dataset.records:
        writer.writerow([rec.student_id, *(rec.values[n] for n in schema.names), rec.target or ""])
    return buf.getvalue()


def validate_dataset(dataset: Dataset, training: bool = False) -> list[str]:
    """Every invariant violation as a message; an empty list means valid.

    With ``training=True`` each record must also carry a target label.
    """
    problems = []
    names = dataset.schema.names
    expected = set(names)
    for i, rec in enumerate(dataset.records):
        for name in names:
            if name not in rec.values:
                problems.append(f"record {i} ({rec.student_id}): missing attribute {name!r}")
            elif rec.values[name] not in CATEGORIES:
                problems.append(
                    f"record {i} ({rec.student_id}): attribute {name!r} has invalid value {rec.values[name]!r}"
                )
        for name in sorted(set(rec.values) - expected):
            problems.append(f"record {i} ({rec.student_id}): unknown attribute {name!r}")
        if rec.target is None:
            if training:
                problems.append(f"record {i} ({rec.student_id}): unlabeled record")
        elif rec.target not in CATEGORIES:
            problems.append(f"record {i} ({rec.student_id}): invalid target {rec.target!r}")
    return problems
