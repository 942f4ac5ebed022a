"""Metric taxonomy and path-level aggregation.

A network carries N named metrics.  Each metric aggregates along a path in
one of four ways: additive (sum of node and edge values), multiplicative
(product), or concave (max or min over the union of node and edge values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import EmptyPath, PreconditionError, ValidationError


class MetricKind(str, Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"
    CONCAVE_MAX = "concave_max"
    CONCAVE_MIN = "concave_min"


class Direction(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class Sense(str, Enum):
    AT_MOST = "at_most"
    AT_LEAST = "at_least"


@dataclass(frozen=True)
class MetricSpec:
    index: int
    name: str
    kind: MetricKind
    direction: Direction = Direction.MINIMIZE

    def neutral_value(self) -> float:
        """Element value that leaves this metric's aggregate unchanged."""
        if self.kind is MetricKind.ADDITIVE:
            return 0.0
        if self.kind is MetricKind.MULTIPLICATIVE:
            return 1.0
        if self.kind is MetricKind.CONCAVE_MAX:
            return -math.inf
        return math.inf


@dataclass(frozen=True)
class Constraint:
    metric_index: int
    bound: float
    sense: Sense = Sense.AT_MOST

    def satisfied_by(self, value: float) -> bool:
        if self.sense is Sense.AT_MOST:
            return value <= self.bound
        return value >= self.bound


def validate_metric_specs(specs: Sequence[MetricSpec]) -> tuple[MetricSpec, ...]:
    """Check index contiguity and name uniqueness; returns the specs as a tuple."""
    names = set()
    for i, spec in enumerate(specs):
        if spec.index != i:
            raise ValidationError(f"metric {spec.name!r}: index {spec.index}, expected {i}")
        if spec.name in names:
            raise ValidationError(f"duplicate metric name {spec.name!r}")
        names.add(spec.name)
    return tuple(specs)


def aggregate_path(kind: MetricKind, node_values: Sequence[float],
                   edge_values: Sequence[float]) -> float:
    """Aggregate one metric over a path's node and edge element values."""
    if kind is MetricKind.ADDITIVE:
        return math.fsum(node_values) + math.fsum(edge_values)
    if kind is MetricKind.MULTIPLICATIVE:
        if any(v < 0 for v in node_values) or any(v < 0 for v in edge_values):
            raise PreconditionError("multiplicative metric values must be >= 0")
        out = 1.0
        for v in node_values:
            out *= v
        for v in edge_values:
            out *= v
        return out
    if not node_values and not edge_values:
        raise EmptyPath("concave aggregation over no elements")
    pool = list(node_values) + list(edge_values)
    return max(pool) if kind is MetricKind.CONCAVE_MAX else min(pool)
