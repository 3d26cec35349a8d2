"""Entropy, information gain, split information and gain ratio over a Dataset.

All quantities are in bits. Sums run over categories in a canonical order
(Pass, Fail, then anything else sorted) so results never depend on the
order in which records were seen.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import DataError
from .schema import CATEGORIES, Dataset

GAIN_EPSILON = 1e-12


def _category_key(category):
    if category in CATEGORIES:
        return (0, CATEGORIES.index(category), "")
    return (1, 0, str(category))


@dataclass(frozen=True)
class ClassCounts:
    counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        ordered = {}
        for key in sorted(self.counts, key=_category_key):
            n = self.counts[key]
            if n < 0:
                raise ValueError(f"negative count for {key!r}")
            if n:
                ordered[key] = int(n)
        object.__setattr__(self, "counts", ordered)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, category):
        return self.counts.get(category, 0)

    def __add__(self, other: "ClassCounts") -> "ClassCounts":
        merged = Counter(self.counts)
        merged.update(other.counts)
        return ClassCounts(merged)

    def majority(self, tie: str = "Fail") -> Optional[str]:
        """Most frequent category; ``tie`` wins any tie it takes part in."""
        if not self.counts:
            return None
        top = max(self.counts.values())
        leaders = [c for c, n in self.counts.items() if n == top]
        return tie if tie in leaders else leaders[0]


@dataclass(frozen=True)
class AttributeScore:
    attribute: str
    gain: float
    split_info: float
    gain_ratio: Optional[float]


def class_counts(dataset: Dataset, over: Optional[str] = None) -> ClassCounts:
    """Frequencies of the target (``over=None``) or of one attribute's values."""
    if over is None:
        labels = [r.target for r in dataset.records]
        if any(label is None for label in labels):
            raise DataError("class counts over the target need every record labeled")
        return ClassCounts(Counter(labels))
    _check_attribute(dataset, over)
    return ClassCounts(Counter(r.values[over] for r in dataset.records))


def entropy(counts: ClassCounts) -> float:
    total = counts.total
    if total == 0:
        return 0.0
    h = 0.0
    for n in counts.counts.values():
        p = n / total
        h -= p * math.log2(p)
    # -0.0 for a single class
    return h if h > 0 else 0.0


def _check_attribute(dataset: Dataset, attribute: str):
    if attribute not in dataset.schema.names:
        raise DataError(f"unknown attribute {attribute!r}")


def _partitions(dataset: Dataset, attribute: str) -> list[ClassCounts]:
    groups: dict[str, Counter] = {}
    for rec in dataset.records:
        if rec.target is None:
            raise DataError(f"record {rec.student_id!r} has no target label")
        groups.setdefault(rec.values[attribute], Counter())[rec.target] += 1
    return [ClassCounts(groups[v]) for v in sorted(groups, key=_category_key)]


def information_gain(dataset: Dataset, attribute: str) -> float:
    """Target entropy minus the size-weighted target entropy of each value's subset."""
    _check_attribute(dataset, attribute)
    total = len(dataset)
    if total == 0:
        return 0.0
    base = entropy(class_counts(dataset))
    remainder = 0.0
    for part in _partitions(dataset, attribute):
        remainder += part.total / total * entropy(part)
    gain = base - remainder
    # an uninformative split can leave +-1 ulp of rounding noise
    return gain if gain > GAIN_EPSILON else 0.0


def split_info(dataset: Dataset, attribute: str) -> float:
    return entropy(class_counts(dataset, attribute))


def gain_ratio(gain: float, split: float) -> Optional[float]:
    """``gain / split``, or None when the split carries no information."""
    if gain < 0 or split < 0:
        raise ValueError("gain and split information must be non-negative")
    if split == 0:
        return None
    return gain / split


def score_attribute(dataset: Dataset, attribute: str) -> AttributeScore:
    gain = information_gain(dataset, attribute)
    split = split_info(dataset, attribute)
    return AttributeScore(attribute, gain, split, gain_ratio(gain, split))


def score_all(dataset: Dataset) -> list[AttributeScore]:
    return [score_attribute(dataset, name) for name in dataset.schema.names]
