"""Road network model: nodes, directed multi-links, addressing, and the
partition of the network into transport autonomous systems (areas).

Graphs are immutable after construction and safe to share across threads.
All iteration orders are id-sorted so downstream computations are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import UnknownNode, ValidationError
from .metrics import MetricSpec, validate_metric_specs


class NodeKind(str, Enum):
    INTERSECTION = "intersection"
    INBOUND = "inbound"
    OUTBOUND = "outbound"
    BRIDGE = "bridge"
    TUNNEL = "tunnel"
    TERMINAL = "terminal"


class TasKind(str, Enum):
    STUB = "stub"
    TRANSIT = "transit"


class TasTier(str, Enum):
    LAN = "LAN"
    MAN = "MAN"
    WAN = "WAN"


@dataclass(frozen=True, order=True)
class TransportAddress:
    """Hierarchical logical address: area, node, terminal (0 = node itself)."""

    tas_id: int
    node_id: int
    terminal_id: int = 0

    def __str__(self) -> str:
        return f"{self.tas_id}.{self.node_id}.{self.terminal_id}"

    @classmethod
    def parse(cls, text: str) -> "TransportAddress":
        parts = text.split(".")
        if len(parts) == 2:
            parts.append("0")
        if len(parts) != 3:
            raise ValidationError(f"bad address {text!r}, want tas.node[.terminal]")
        try:
            tas, node, term = (int(p) for p in parts)
        except ValueError as exc:
            raise ValidationError(f"bad address {text!r}: {exc}") from exc
        return cls(tas, node, term)


@dataclass(frozen=True)
class RoadNode:
    id: int
    kind: NodeKind = NodeKind.INTERSECTION
    x: float = 0.0
    y: float = 0.0
    metric_values: tuple[float, ...] = ()
    terminals: tuple[int, ...] = ()
    signalized: bool = False


@dataclass(frozen=True)
class RoadLink:
    id: int
    src: int
    dst: int
    length_m: float
    lane_count: int = 1
    speed_limit_kmh: float = 50.0
    metric_values: tuple[float, ...] = ()

    @property
    def speed_limit_ms(self) -> float:
        return self.speed_limit_kmh / 3.6

    @property
    def free_flow_time_s(self) -> float:
        return self.length_m / self.speed_limit_ms


@dataclass(frozen=True)
class RoadGraph:
    """Directed multigraph over road nodes; parallel links allowed, self-loops not."""

    nodes: tuple[RoadNode, ...]
    links: tuple[RoadLink, ...]
    metric_specs: tuple[MetricSpec, ...]
    _node_by_id: dict[int, RoadNode] = field(repr=False, compare=False, default_factory=dict)
    _link_by_id: dict[int, RoadLink] = field(repr=False, compare=False, default_factory=dict)
    _out: dict[int, tuple[int, ...]] = field(repr=False, compare=False, default_factory=dict)
    _in: dict[int, tuple[int, ...]] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))
        object.__setattr__(self, "links", tuple(sorted(self.links, key=lambda l: l.id)))
        object.__setattr__(self, "metric_specs", validate_metric_specs(self.metric_specs))
        self._validate()
        object.__setattr__(self, "_node_by_id", {n.id: n for n in self.nodes})
        object.__setattr__(self, "_link_by_id", {l.id: l for l in self.links})
        out: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        inc: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for link in self.links:
            out[link.src].append(link.id)
            inc[link.dst].append(link.id)
        object.__setattr__(self, "_out", {n: tuple(sorted(v)) for n, v in out.items()})
        object.__setattr__(self, "_in", {n: tuple(sorted(v)) for n, v in inc.items()})

    def _validate(self) -> None:
        n_metrics = len(self.metric_specs)
        seen_nodes: set[int] = set()
        for node in self.nodes:
            if node.id in seen_nodes:
                raise ValidationError(f"duplicate node id {node.id}")
            seen_nodes.add(node.id)
            if len(node.metric_values) != n_metrics:
                raise ValidationError(
                    f"node {node.id}: {len(node.metric_values)} metric values, expected {n_metrics}")
        seen_links: set[int] = set()
        dist_idx = self.metric_index_or_none("distance")
        for link in self.links:
            if link.id in seen_links:
                raise ValidationError(f"duplicate link id {link.id}")
            seen_links.add(link.id)
            if link.src not in seen_nodes or link.dst not in seen_nodes:
                raise ValidationError(f"link {link.id}: endpoint {link.src}->{link.dst} undefined")
            if link.src == link.dst:
                raise ValidationError(f"link {link.id}: self-loop at node {link.src}")
            if link.length_m <= 0:
                raise ValidationError(f"link {link.id}: nonpositive length {link.length_m}")
            if link.speed_limit_kmh <= 0:
                raise ValidationError(f"link {link.id}: nonpositive speed limit")
            if link.lane_count < 1:
                raise ValidationError(f"link {link.id}: lane_count must be >= 1")
            if len(link.metric_values) != n_metrics:
                raise ValidationError(
                    f"link {link.id}: {len(link.metric_values)} metric values, expected {n_metrics}")
            if dist_idx is not None and link.metric_values[dist_idx] != link.length_m:
                raise ValidationError(
                    f"link {link.id}: distance metric {link.metric_values[dist_idx]} != length {link.length_m}")

    def metric_index_or_none(self, name: str) -> int | None:
        for spec in self.metric_specs:
            if spec.name == name:
                return spec.index
        return None

    def metric_index(self, name: str) -> int:
        idx = self.metric_index_or_none(name)
        if idx is None:
            raise ValidationError(f"no metric named {name!r}")
        return idx

    def node(self, node_id: int) -> RoadNode:
        try:
            return self._node_by_id[node_id]
        except KeyError:
            raise UnknownNode(f"node {node_id}") from None

    def link(self, link_id: int) -> RoadLink:
        return self._link_by_id[link_id]

    def has_node(self, node_id: int) -> bool:
        return node_id in self._node_by_id

    def out_links(self, node_id: int) -> tuple[int, ...]:
        if node_id not in self._out:
            raise UnknownNode(f"node {node_id}")
        return self._out[node_id]

    def in_links(self, node_id: int) -> tuple[int, ...]:
        if node_id not in self._in:
            raise UnknownNode(f"node {node_id}")
        return self._in[node_id]

    def neighbors(self, node_id: int) -> list[tuple[RoadLink, int]]:
        """Out-links of a node with their head nodes, in link-id order."""
        return [(self._link_by_id[lid], self._link_by_id[lid].dst)
                for lid in self.out_links(node_id)]

    def node_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)

    def induced_subgraph(self, node_ids: Iterable[int]) -> "RoadGraph":
        """Subgraph over the given nodes and all links internal to them."""
        keep = set(node_ids)
        for nid in keep:
            if nid not in self._node_by_id:
                raise UnknownNode(f"node {nid}")
        return RoadGraph(
            nodes=tuple(n for n in self.nodes if n.id in keep),
            links=tuple(l for l in self.links if l.src in keep and l.dst in keep),
            metric_specs=self.metric_specs,
        )

    def with_node_values(self, overrides: Mapping[int, tuple[float, ...]]) -> "RoadGraph":
        """Copy with some nodes' metric vectors replaced."""
        nodes = tuple(
            RoadNode(n.id, n.kind, n.x, n.y, overrides.get(n.id, n.metric_values),
                     n.terminals, n.signalized)
            for n in self.nodes)
        return RoadGraph(nodes=nodes, links=self.links, metric_specs=self.metric_specs)

    def with_link_values(self, overrides: Mapping[int, tuple[float, ...]]) -> "RoadGraph":
        """Copy with some links' metric vectors replaced."""
        links = tuple(
            RoadLink(l.id, l.src, l.dst, l.length_m, l.lane_count, l.speed_limit_kmh,
                     overrides.get(l.id, l.metric_values))
            for l in self.links)
        return RoadGraph(nodes=self.nodes, links=links, metric_specs=self.metric_specs)


def neighbors(graph: RoadGraph, node_id: int) -> list[tuple[RoadLink, int]]:
    return graph.neighbors(node_id)


@dataclass(frozen=True)
class TasDescriptor:
    id: int
    kind: TasKind
    tier: TasTier
    member_nodes: frozenset[int]
    border_nodes: frozenset[int]


@dataclass(frozen=True)
class NetworkHierarchy:
    """Partition of a road graph into areas plus the external links between them."""

    graph: RoadGraph
    areas: tuple[TasDescriptor, ...]
    external_links: frozenset[int]
    _node_tas: dict[int, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "areas", tuple(sorted(self.areas, key=lambda a: a.id)))
        mapping: dict[int, int] = {}
        for area in self.areas:
            for nid in area.member_nodes:
                if nid in mapping:
                    raise ValidationError(f"node {nid} assigned to areas {mapping[nid]} and {area.id}")
                mapping[nid] = area.id
        missing = set(self.graph.node_ids()) - set(mapping)
        if missing:
            raise ValidationError(f"nodes not assigned to any area: {sorted(missing)}")
        object.__setattr__(self, "_node_tas", mapping)

    def tas_of(self, node_id: int) -> int:
        try:
            return self._node_tas[node_id]
        except KeyError:
            raise UnknownNode(f"node {node_id}") from None

    def area(self, tas_id: int) -> TasDescriptor:
        for a in self.areas:
            if a.id == tas_id:
                return a
        raise ValidationError(f"no area {tas_id}")

    def is_external(self, link_id: int) -> bool:
        return link_id in self.external_links

    def resolve(self, address: TransportAddress) -> RoadNode:
        """Resolve an address to its node; fails unless the full triple exists."""
        area = None
        for a in self.areas:
            if a.id == address.tas_id:
                area = a
                break
        if area is None or address.node_id not in area.member_nodes:
            raise UnknownNode(f"address {address} does not resolve")
        node = self.graph.node(address.node_id)
        if address.terminal_id != 0 and address.terminal_id not in node.terminals:
            raise UnknownNode(f"address {address}: no terminal {address.terminal_id}")
        return node

    def address_of(self, node_id: int, terminal_id: int = 0) -> TransportAddress:
        return TransportAddress(self.tas_of(node_id), node_id, terminal_id)


def _is_terminal_node(node: RoadNode) -> bool:
    return node.kind is NodeKind.TERMINAL or bool(node.terminals)


def partition_into_tas(graph: RoadGraph, assignment: Mapping[int, int],
                       kinds: Mapping[int, tuple[TasKind, TasTier]]) -> NetworkHierarchy:
    """Partition the graph into areas and classify every link as intra or external.

    ``assignment`` maps every node id to an area id; ``kinds`` gives each
    area its kind and tier.  Border nodes and external links are computed,
    not declared.
    """
    missing = set(graph.node_ids()) - set(assignment)
    if missing:
        raise ValidationError(f"assignment misses nodes {sorted(missing)}")
    members: dict[int, set[int]] = {}
    for nid, tas in sorted(assignment.items()):
        members.setdefault(tas, set()).add(nid)
    for tas_id in members:
        if tas_id not in kinds:
            raise ValidationError(f"area {tas_id} has no (kind, tier) entry")

    external: set[int] = set()
    borders: dict[int, set[int]] = {tas: set() for tas in members}
    for link in graph.links:
        a, b = assignment[link.src], assignment[link.dst]
        if a != b:
            external.add(link.id)
            borders[a].add(link.src)
            borders[b].add(link.dst)

    areas = []
    for tas_id, nodes in sorted(members.items()):
        if not nodes:
            raise ValidationError(f"area {tas_id} is empty")
        kind, tier = kinds[tas_id]
        if kind is TasKind.STUB and not any(_is_terminal_node(graph.node(n)) for n in nodes):
            raise ValidationError(f"stub area {tas_id} contains no terminal node")
        areas.append(TasDescriptor(tas_id, kind, tier,
                                   frozenset(nodes), frozenset(borders[tas_id])))
    return NetworkHierarchy(graph=graph, areas=tuple(areas),
                            external_links=frozenset(external))
