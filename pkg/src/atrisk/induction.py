"""Top-down decision tree induction, classification and rule extraction."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import DataError, ModelFormatError
from .metrics import ClassCounts, class_counts, gain_ratio, information_gain, split_info
from .schema import (
    CATEGORIES,
    FAIL,
    Attribute,
    AttributeSchema,
    CourseType,
    Dataset,
    Kind,
    StudentRecord,
    validate_dataset,
)

FORMAT_VERSION = 1

# Leaf-label ties go to Fail so that a borderline node flags its students.
TIE_LABEL = FAIL


class Criterion(str, Enum):
    GAIN_RATIO = "gain_ratio"
    INFO_GAIN = "info_gain"


@dataclass(frozen=True)
class InductionParams:
    min_support: int = 1
    max_depth: Optional[int] = None

    def __post_init__(self):
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")


@dataclass(frozen=True)
class Leaf:
    label: str
    support: ClassCounts = ClassCounts()

    @property
    def purity(self) -> float:
        total = self.support.total
        return self.support[self.label] / total if total else 0.0


@dataclass(frozen=True)
class Internal:
    attribute: str
    branches: Mapping[str, "TreeNode"]
    support: ClassCounts

    @property
    def majority(self) -> str:
        return self.support.majority(TIE_LABEL) or TIE_LABEL


TreeNode = Union[Leaf, Internal]


def _branch_order(keys: Iterable[str]) -> list[str]:
    keys = list(keys)
    return [c for c in CATEGORIES if c in keys] + sorted(k for k in keys if k not in CATEGORIES)


# --- attribute selection --------------------------------------------------


def _admissible(dataset: Dataset, attribute: str, min_support: int) -> bool:
    # at least two branches must carry min_support records each
    sizes = class_counts(dataset, attribute).counts.values()
    return sum(1 for n in sizes if n >= min_support) >= 2


def select_attribute(
    dataset: Dataset,
    candidates: Sequence[str],
    criterion: Criterion | str = Criterion.GAIN_RATIO,
    min_support: int = 1,
) -> Optional[str]:
    """The candidate with the highest score, or None if none has positive gain.

    Under gain ratio, candidates with zero split information are skipped.
    Ties go to the attribute declared first in the schema.
    """
    criterion = Criterion(criterion)
    best, best_score = None, None
    for name in sorted(candidates, key=dataset.schema.position):
        gain = information_gain(dataset, name)
        if gain <= 0 or not _admissible(dataset, name, min_support):
            continue
        if criterion is Criterion.GAIN_RATIO:
            score = gain_ratio(gain, split_info(dataset, name))
            if score is None:
                continue
        else:
            score = gain
        if best_score is None or score > best_score:
            best, best_score = name, score
    return best


# --- induction ------------------------------------------------------------


def induce_tree(
    dataset: Dataset,
    criterion: Criterion | str = Criterion.GAIN_RATIO,
    params: Optional[InductionParams] = None,
) -> TreeNode:
    """Grow an unpruned tree until every leaf is pure or no split helps."""
    criterion = Criterion(criterion)
    params = params or InductionParams()
    if not len(dataset):
        raise DataError("cannot induce a tree from an empty dataset")
    problems = validate_dataset(dataset, training=True)
    if problems:
        raise DataError(problems[0])
    return _grow(dataset, list(dataset.schema.names), criterion, params, 0)


def _grow(dataset, candidates, criterion, params, depth):
    support = class_counts(dataset)
    label = support.majority(TIE_LABEL)
    if len(support.counts) <= 1:
        return Leaf(label, support)
    if params.max_depth is not None and depth >= params.max_depth:
        return Leaf(label, support)

    attribute = select_attribute(dataset, candidates, criterion, params.min_support)
    if attribute is None:
        return Leaf(label, support)

    remaining = [c for c in candidates if c != attribute]
    branches = {}
    for value in CATEGORIES:
        subset = dataset.where(attribute, value)
        if len(subset):
            branches[value] = _grow(subset, remaining, criterion, params, depth + 1)
        else:
            branches[value] = Leaf(label)
    return Internal(attribute, branches, support)


# --- classification -------------------------------------------------------


class Prediction(NamedTuple):
    label: str
    at_risk: bool
    path: tuple[tuple[str, str], ...]


def classify(tree: TreeNode, record: StudentRecord) -> Prediction:
    """Walk the tree along the record's values; Fail means at risk."""
    path = []
    node = tree
    while isinstance(node, Internal):
        if node.attribute not in record.values:
            raise DataError(f"record {record.student_id!r} has no value for {node.attribute!r}")
        value = record.values[node.attribute]
        if value not in node.branches:
            label = node.majority
            return Prediction(label, label == FAIL, tuple(path))
        path.append((node.attribute, value))
        node = node.branches[value]
    return Prediction(node.label, node.label == FAIL, tuple(path))


def leaves(tree: TreeNode) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    return [leaf for key in _branch_order(tree.branches) for leaf in leaves(tree.branches[key])]


def depth(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(depth(child) for child in tree.branches.values())


# --- rules ----------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    conditions: tuple[tuple[str, str], ...]
    conclusion: str
    support: ClassCounts = ClassCounts()

    def matches(self, record: StudentRecord) -> bool:
        return all(record.values.get(attr) == value for attr, value in self.conditions)

    def format(self, target: str = "Final") -> str:
        then = f'{target} = "{self.conclusion}"'
        if not self.conditions:
            return f"THEN {then}"
        test = " AND ".join(f'{attr} = "{value}"' for attr, value in self.conditions)
        return f"IF {test} THEN {then}"


def extract_rules(tree: TreeNode) -> list[Rule]:
    """One rule per leaf, depth-first with Pass branches before Fail."""
    rules = []

    def walk(node, conditions):
        if isinstance(node, Leaf):
            rules.append(Rule(tuple(conditions), node.label, node.support))
            return
        for key in _branch_order(node.branches):
            walk(node.branches[key], conditions + [(node.attribute, key)])

    walk(tree, [])
    return rules


def apply_rules(rules: Sequence[Rule], record: StudentRecord) -> Optional[str]:
    for rule in rules:
        if rule.matches(record):
            return rule.conclusion
    return None


# --- model files ----------------------------------------------------------


class Model(NamedTuple):
    tree: TreeNode
    schema: AttributeSchema
    criterion: Criterion


def _node_to_json(node):
    if isinstance(node, Leaf):
        return {"type": "leaf", "label": node.label, "support": dict(node.support.counts)}
    return {
        "type": "internal",
        "attribute": node.attribute,
        "branches": {k: _node_to_json(node.branches[k]) for k in _branch_order(node.branches)},
        "support": dict(node.support.counts),
    }


def schema_to_json(schema: AttributeSchema) -> dict:
    return {
        "course_type": schema.course_type.value,
        "target": schema.target_name,
        "attributes": [
            {"name": a.name, "kind": a.kind.value, "threshold": schema.thresholds.get(a.name)}
            for a in schema.attributes
        ],
        "coursework_max": schema.coursework_max,
        "final_max": schema.final_max,
        "total_pass_mark": schema.total_pass_mark,
        "fail_rate_threshold": schema.fail_rate_threshold,
    }


def serialize_model(tree: TreeNode, schema: AttributeSchema, criterion: Criterion | str = Criterion.GAIN_RATIO) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "criterion": Criterion(criterion).value,
        "schema": schema_to_json(schema),
        "tree": _node_to_json(tree),
    }
    return json.dumps(doc, indent=2) + "\n"


def _expect_keys(obj, required, optional=(), where="object"):
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where}: expected an object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ModelFormatError(f"{where}: missing key {missing[0]!r}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ModelFormatError(f"{where}: unknown key {unknown[0]!r}")


def _support_from_json(obj, where):
    if not isinstance(obj, dict) or not all(
        isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in obj.values()
    ):
        raise ModelFormatError(f"{where}: support must map labels to non-negative integers")
    return ClassCounts(obj)


def _node_from_json(obj, where="tree"):
    if not isinstance(obj, dict) or obj.get("type") not in ("leaf", "internal"):
        raise ModelFormatError(f"{where}: node type must be 'leaf' or 'internal'")
    if obj["type"] == "leaf":
        _expect_keys(obj, ("type", "label", "support"), where=where)
        if not isinstance(obj["label"], str):
            raise ModelFormatError(f"{where}: label must be text")
        return Leaf(obj["label"], _support_from_json(obj["support"], where))
    _expect_keys(obj, ("type", "attribute", "branches", "support"), where=where)
    if not isinstance(obj["attribute"], str):
        raise ModelFormatError(f"{where}: attribute must be text")
    if not isinstance(obj["branches"], dict) or not obj["branches"]:
        raise ModelFormatError(f"{where}: internal node needs at least one branch")
    branches = {
        key: _node_from_json(child, f"{where}/{obj['attribute']}={key}")
        for key, child in obj["branches"].items()
    }
    return Internal(obj["attribute"], branches, _support_from_json(obj["support"], where))


def schema_from_json(obj) -> AttributeSchema:
    keys = ("course_type", "target", "attributes", "coursework_max", "final_max",
            "total_pass_mark", "fail_rate_threshold")
    _expect_keys(obj, keys, where="schema")
    if not isinstance(obj["attributes"], list):
        raise ModelFormatError("schema: attributes must be a list")
    attrs, thresholds = [], {}
    try:
        for i, a in enumerate(obj["attributes"]):
            _expect_keys(a, ("name", "kind"), ("threshold",), where=f"schema attribute {i}")
            attrs.append(Attribute(a["name"], Kind(a["kind"]), i))
            if a.get("threshold") is not None:
                thresholds[a["name"]] = float(a["threshold"])
        return AttributeSchema(
            tuple(attrs),
            CourseType(obj["course_type"]),
            thresholds,
            obj["target"],
            float(obj["coursework_max"]),
            float(obj["final_max"]),
            float(obj["total_pass_mark"]),
            float(obj["fail_rate_threshold"]),
        )
    except ModelFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"schema: {exc}") from None


def _check_tree(node, schema, seen=()):
    if isinstance(node, Leaf):
        return
    if node.attribute not in schema.names:
        raise ModelFormatError(f"tree tests {node.attribute!r}, which the schema does not declare")
    if node.attribute in seen:
        raise ModelFormatError(f"attribute {node.attribute!r} tested twice on one path")
    for child in node.branches.values():
        _check_tree(child, schema, seen + (node.attribute,))


def load_model(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    _expect_keys(doc, ("format_version", "criterion", "schema", "tree"), where="model")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {doc['format_version']!r}")
    try:
        criterion = Criterion(doc["criterion"])
    except ValueError:
        raise ModelFormatError(f"unknown criterion {doc['criterion']!r}") from None
    schema = schema_from_json(doc["schema"])
    tree = _node_from_json(doc["tree"])
    _check_tree(tree, schema)
    return Model(tree, schema, criterion)


def deserialize_model(text: str) -> tuple[TreeNode, AttributeSchema]:
    model = load_model(text)
    return model.tree, model.schema
