"""Scenario documents: a single JSON file describing metrics, nodes, links,
area assignment, signal plans, and simulation parameters.

Schema (version 1)::

    {
      "version": 1,
      "name": "demo",
      "metrics": [{"name": "distance", "kind": "additive",
                   "direction": "minimize"}, ...],
      "nodes":   [{"id": 0, "kind": "intersection", "x": 0, "y": 0,
                   "signalized": false, "terminals": [1, 2],
                   "metrics": {"time": 2.0}}, ...],
      "links":   [{"id": 0, "from": 0, "to": 1, "length_m": 500,
                   "lanes": 2, "speed_limit_kmh": 60,
                   "metrics": {"risk": 0.99}}, ...],
      "tas":     [{"id": 1, "kind": "stub", "tier": "LAN",
                   "nodes": [0, 1]}, ...],
      "signals": [{"node": 3, "offset_s": 0, "phases":
                    [{"id": "main", "connections": "through",
                      "green_s": 30, "yellow_s": 5, "red_s": 30}]}, ...],
      "sim":     {"vehicles": 300, "p_slow": 0.2, ...}
    }

The "version" field is mandatory.  The metric list must contain "distance"
and "time" (both additive); if "metrics" is omitted entirely those two are
assumed.  Per-element metric values not given explicitly default to the
metric's neutral value, except on links where "distance" is always the link
length and "time" defaults to the free-flow traversal time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Any, Mapping

from .errors import ParseError, ValidationError
from .metrics import Direction, MetricKind, MetricSpec
from .network import (NetworkHierarchy, NodeKind, RoadGraph, RoadLink, RoadNode,
                      TasKind, TasTier, partition_into_tas)

SCHEMA_VERSION = 1

DEFAULT_METRICS = (
    {"name": "distance", "kind": "additive", "direction": "minimize"},
    {"name": "time", "kind": "additive", "direction": "minimize"},
)


@dataclass(frozen=True)
class PhaseSpec:
    """One signal phase as declared in the document (connections resolved later)."""

    id: str
    connections: Any  # "through" or explicit [[in_link, lane, out_link, lane], ...]
    green_s: float
    yellow_s: float
    red_s: float


@dataclass(frozen=True)
class SignalSpec:
    node: int
    offset_s: float
    phases: tuple[PhaseSpec, ...]

    @property
    def cycle_s(self) -> float:
        return sum(p.green_s + p.yellow_s + p.red_s for p in self.phases)


@dataclass(frozen=True)
class Scenario:
    name: str
    graph: RoadGraph
    hierarchy: NetworkHierarchy | None
    signals: tuple[SignalSpec, ...]
    sim_params: dict[str, Any] = field(default_factory=dict)

    def signal_nodes(self) -> tuple[int, ...]:
        return tuple(s.node for s in self.signals)


def _require(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return doc[key]


def _metric_specs(doc: Mapping[str, Any]) -> tuple[MetricSpec, ...]:
    raw = doc.get("metrics", list(DEFAULT_METRICS))
    specs = []
    for i, m in enumerate(raw):
        try:
            kind = MetricKind(m.get("kind", "additive"))
            direction = Direction(m.get("direction", "minimize"))
        except ValueError as exc:
            raise ValidationError(f"metric {i}: {exc}") from exc
        specs.append(MetricSpec(i, _require(m, "name", f"metric {i}"), kind, direction))
    names = {s.name for s in specs}
    for needed in ("distance", "time"):
        if needed not in names:
            raise ValidationError(f"metric list must include {needed!r}")
    return tuple(specs)


def _element_values(specs: tuple[MetricSpec, ...], given: Mapping[str, float],
                    where: str, fill: Mapping[str, float] | None = None) -> tuple[float, ...]:
    lookup = dict(fill or {})
    for name, value in given.items():
        if name not in {s.name for s in specs}:
            raise ValidationError(f"{where}: unknown metric {name!r}")
        lookup[name] = float(value)
    return tuple(lookup.get(s.name, s.neutral_value()) for s in specs)


def build_graph(doc: Mapping[str, Any]) -> RoadGraph:
    """Build a validated road graph from a parsed scenario document."""
    version = _require(doc, "version", "document")
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported scenario version {version}")
    specs = _metric_specs(doc)

    nodes = []
    for i, n in enumerate(doc.get("nodes", [])):
        where = f"node {n.get('id', i)}"
        try:
            kind = NodeKind(n.get("kind", "intersection"))
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
        nodes.append(RoadNode(
            id=int(_require(n, "id", where)),
            kind=kind,
            x=float(n.get("x", 0.0)),
            y=float(n.get("y", 0.0)),
            metric_values=_element_values(specs, n.get("metrics", {}), where),
            terminals=tuple(int(t) for t in n.get("terminals", [])),
            signalized=bool(n.get("signalized", False)),
        ))

    links = []
    for i, l in enumerate(doc.get("links", [])):
        where = f"link {l.get('id', i)}"
        length = float(_require(l, "length_m", where))
        speed = float(l.get("speed_limit_kmh", 50.0))
        fill = {"distance": length}
        if speed > 0:
            fill["time"] = length / (speed / 3.6)
        links.append(RoadLink(
            id=int(_require(l, "id", where)),
            src=int(_require(l, "from", where)),
            dst=int(_require(l, "to", where)),
            length_m=length,
            lane_count=int(l.get("lanes", 1)),
            speed_limit_kmh=speed,
            metric_values=_element_values(specs, l.get("metrics", {}), where, fill),
        ))

    return RoadGraph(nodes=tuple(nodes), links=tuple(links), metric_specs=specs)


def build_hierarchy(doc: Mapping[str, Any], graph: RoadGraph) -> NetworkHierarchy | None:
    areas = doc.get("tas")
    if not areas:
        return None
    assignment: dict[int, int] = {}
    kinds: dict[int, tuple[TasKind, TasTier]] = {}
    for a in areas:
        where = f"tas {a.get('id', '?')}"
        tas_id = int(_require(a, "id", where))
        try:
            kinds[tas_id] = (TasKind(a.get("kind", "stub")), TasTier(a.get("tier", "LAN")))
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
        for nid in _require(a, "nodes", where):
            assignment[int(nid)] = tas_id
    return partition_into_tas(graph, assignment, kinds)


def _signal_specs(doc: Mapping[str, Any], graph: RoadGraph) -> tuple[SignalSpec, ...]:
    out = []
    for s in doc.get("signals", []):
        where = f"signal at node {s.get('node', '?')}"
        node = int(_require(s, "node", where))
        if not graph.has_node(node):
            raise ValidationError(f"{where}: node undefined")
        phases = []
        for p in _require(s, "phases", where):
            phases.append(PhaseSpec(
                id=str(_require(p, "id", where)),
                connections=p.get("connections", "through"),
                green_s=float(_require(p, "green_s", where)),
                yellow_s=float(p.get("yellow_s", 0.0)),
                red_s=float(p.get("red_s", 0.0)),
            ))
        if not phases:
            raise ValidationError(f"{where}: no phases")
        out.append(SignalSpec(node=node, offset_s=float(s.get("offset_s", 0.0)),
                              phases=tuple(phases)))
    return tuple(sorted(out, key=lambda s: s.node))


def load_scenario(source: str | FsPath | Mapping[str, Any]) -> Scenario:
    """Load and validate a scenario from a file path or an already-parsed dict."""
    if isinstance(source, (str, FsPath)):
        text = FsPath(source).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise ParseError("scenario document must be a JSON object")
    graph = build_graph(doc)
    hierarchy = build_hierarchy(doc, graph)
    signals = _signal_specs(doc, graph)
    for sig in signals:
        if not graph.node(sig.node).signalized:
            raise ValidationError(f"signal at node {sig.node}: node not marked signalized")
    return Scenario(
        name=str(doc.get("name", "scenario")),
        graph=graph,
        hierarchy=hierarchy,
        signals=signals,
        sim_params=dict(doc.get("sim", {})),
    )
