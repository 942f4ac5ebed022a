"""Route selection over road graphs.

Two solvers are provided.  ``best_effort_route`` is plain Dijkstra over a
single additive nonnegative metric.  ``constrained_route`` is an exact
label-setting search over simple paths with Pareto-dominance pruning; it
optimizes any metric kind under any mix of bound constraints, at desk
scale, and is the reference solver the rest of the package composes
(area summaries, hierarchical two-level routing, routing-table export).

Dominance between two partial paths at the same node is only applied when
the candidate dominator has visited a subset of the other's nodes; without
that guard, pruning is unsound for simple-path search.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import Infeasible, NoRoute, PreconditionError, UnknownNode
from .metrics import (Constraint, Direction, MetricKind, Sense, aggregate_path)
from .network import NetworkHierarchy, RoadGraph, RoadLink, TransportAddress


@dataclass(frozen=True)
class Path:
    """A concrete route: node sequence, link sequence, and per-metric aggregates."""

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    values: tuple[float, ...]

    def value(self, metric_index: int) -> float:
        return self.values[metric_index]

    @property
    def hop_count(self) -> int:
        return len(self.links)


def path_from_elements(graph: RoadGraph, nodes: Sequence[int],
                       links: Sequence[int]) -> Path:
    """Build a path and recompute its aggregate vector from element values."""
    nodes = tuple(nodes)
    links = tuple(links)
    if len(links) != max(len(nodes) - 1, 0):
        raise PreconditionError("node/link sequence lengths disagree")
    for i, lid in enumerate(links):
        link = graph.link(lid)
        if link.src != nodes[i] or link.dst != nodes[i + 1]:
            raise PreconditionError(f"link {lid} does not join {nodes[i]}->{nodes[i + 1]}")
    node_vals = [graph.node(n).metric_values for n in nodes]
    link_vals = [graph.link(l).metric_values for l in links]
    values = tuple(
        aggregate_path(spec.kind,
                       [nv[spec.index] for nv in node_vals],
                       [lv[spec.index] for lv in link_vals])
        for spec in graph.metric_specs)
    return Path(nodes, links, values)


@dataclass(frozen=True)
class RouteRequest:
    source: TransportAddress | int
    destination: TransportAddress | int
    objective: int = 0
    direction: Direction | None = None  # default: the metric spec's direction
    constraints: tuple[Constraint, ...] = ()
    horizon: int | None = None


def resolve_endpoint(endpoint: TransportAddress | int,
                     graph: RoadGraph,
                     hierarchy: NetworkHierarchy | None = None) -> int:
    if isinstance(endpoint, TransportAddress):
        if hierarchy is None:
            raise PreconditionError("address endpoints need a network hierarchy")
        return hierarchy.resolve(endpoint).id
    if not graph.has_node(endpoint):
        raise UnknownNode(f"node {endpoint}")
    return int(endpoint)


def _objective_direction(graph: RoadGraph, request: RouteRequest) -> Direction:
    if request.objective >= len(graph.metric_specs):
        raise PreconditionError(f"objective metric {request.objective} undefined")
    return request.direction or graph.metric_specs[request.objective].direction


def build_topology_snapshot(graph: RoadGraph, center: int, horizon: int) -> RoadGraph:
    """Induced subgraph of all nodes within ``horizon`` hops of ``center``,
    hopping over links in either direction."""
    if horizon < 0:
        raise PreconditionError("horizon must be >= 0")
    graph.node(center)
    reached = {center}
    frontier = [center]
    for _ in range(horizon):
        nxt = []
        for nid in frontier:
            for lid in graph.out_links(nid):
                head = graph.link(lid).dst
                if head not in reached:
                    reached.add(head)
                    nxt.append(head)
            for lid in graph.in_links(nid):
                tail = graph.link(lid).src
                if tail not in reached:
                    reached.add(tail)
                    nxt.append(tail)
        frontier = nxt
        if not frontier:
            break
    return graph.induced_subgraph(reached)


def _reaches(graph: RoadGraph, s: int, t: int) -> bool:
    seen = {s}
    stack = [s]
    while stack:
        nid = stack.pop()
        if nid == t:
            return True
        for lid in graph.out_links(nid):
            head = graph.link(lid).dst
            if head not in seen:
                seen.add(head)
                stack.append(head)
    return t in seen


# ---------------------------------------------------------------------------
# Best-effort routing (Dijkstra)
# ---------------------------------------------------------------------------

def best_effort_route(graph: RoadGraph, request: RouteRequest,
                      hierarchy: NetworkHierarchy | None = None) -> Path:
    """Shortest path for a single additive nonnegative metric.

    Ties are broken toward the lexicographically smallest node-id sequence.
    """
    if request.constraints:
        raise PreconditionError("best-effort routing takes no constraints")
    direction = _objective_direction(graph, request)
    if direction is not Direction.MINIMIZE:
        raise PreconditionError("best-effort routing only minimizes")
    spec = graph.metric_specs[request.objective]
    if spec.kind is not MetricKind.ADDITIVE:
        raise PreconditionError("best-effort objective must be additive")
    k = spec.index
    for node in graph.nodes:
        if node.metric_values[k] < 0:
            raise PreconditionError(f"negative value on node {node.id} for metric {spec.name}")
    for link in graph.links:
        if link.metric_values[k] < 0:
            raise PreconditionError(f"negative value on link {link.id} for metric {spec.name}")

    s = resolve_endpoint(request.source, graph, hierarchy)
    t = resolve_endpoint(request.destination, graph, hierarchy)
    work = graph
    if request.horizon is not None:
        work = build_topology_snapshot(graph, s, request.horizon)
        if not work.has_node(t):
            raise NoRoute(f"{t} outside horizon {request.horizon} of {s}")

    start = work.node(s).metric_values[k]
    heap: list[tuple[float, tuple[int, ...], tuple[int, ...]]] = [(start, (s,), ())]
    settled: set[int] = set()
    while heap:
        dist, nodes, links = heapq.heappop(heap)
        here = nodes[-1]
        if here in settled:
            continue
        settled.add(here)
        if here == t:
            return path_from_elements(work, nodes, links)
        for lid in work.out_links(here):
            link = work.link(lid)
            if link.dst in settled:
                continue
            step = dist + link.metric_values[k] + work.node(link.dst).metric_values[k]
            heapq.heappush(heap, (step, nodes + (link.dst,), links + (lid,)))
    raise NoRoute(f"no path {s} -> {t}")


# ---------------------------------------------------------------------------
# Constrained routing (exact label-setting over simple paths)
# ---------------------------------------------------------------------------

def _extend(kind: MetricKind, value: float, *more: float) -> float:
    if kind is MetricKind.ADDITIVE:
        return value + sum(more)
    if kind is MetricKind.MULTIPLICATIVE:
        out = value
        for m in more:
            out *= m
        return out
    if kind is MetricKind.CONCAVE_MAX:
        return max(value, *more)
    return min(value, *more)


@dataclass
class _Label:
    node: int
    nodes: tuple[int, ...]
    links: tuple[int, ...]
    visited: frozenset[int]
    raw: tuple[float, ...]      # running aggregate per tracked metric
    key: tuple[float, ...]      # sign-normalized: smaller is better


class _Tracked:
    """Metrics the solver must carry: the objective plus every constrained one."""

    def __init__(self, graph: RoadGraph, objective: int, direction: Direction,
                 constraints: Sequence[Constraint]):
        pairs: list[tuple[int, float]] = [
            (objective, 1.0 if direction is Direction.MINIMIZE else -1.0)]
        for c in constraints:
            if c.metric_index >= len(graph.metric_specs):
                raise PreconditionError(f"constraint metric {c.metric_index} undefined")
            pairs.append((c.metric_index, 1.0 if c.sense is Sense.AT_MOST else -1.0))
        self.pairs: list[tuple[int, float]] = []
        seen = set()
        for p in pairs:
            if p not in seen:
                seen.add(p)
                self.pairs.append(p)
        self.kinds = [graph.metric_specs[i].kind for i, _ in self.pairs]
        self.checks: dict[int, list[Constraint]] = {}
        for c in constraints:
            self.checks.setdefault(c.metric_index, []).append(c)
        # Early constraint pruning is only sound when the running value is
        # monotone along any extension; derive that from kind + value range.
        lows, highs = _element_ranges(graph)
        self.monotone_up: dict[int, bool] = {}
        self.monotone_down: dict[int, bool] = {}
        for i, _ in self.pairs:
            kind = graph.metric_specs[i].kind
            self.monotone_up[i] = (
                kind is MetricKind.CONCAVE_MAX
                or (kind is MetricKind.ADDITIVE and lows[i] >= 0)
                or (kind is MetricKind.MULTIPLICATIVE and lows[i] >= 1))
            self.monotone_down[i] = (
                kind is MetricKind.CONCAVE_MIN
                or (kind is MetricKind.ADDITIVE and highs[i] <= 0)
                or (kind is MetricKind.MULTIPLICATIVE and 0 <= lows[i] and highs[i] <= 1))

    def start(self, graph: RoadGraph, s: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
        vals = graph.node(s).metric_values
        raw = tuple(vals[i] for i, _ in self.pairs)
        return raw, tuple(v * sign for v, (_, sign) in zip(raw, self.pairs))

    def extend(self, graph: RoadGraph, raw: tuple[float, ...], link: RoadLink
               ) -> tuple[tuple[float, ...], tuple[float, ...]]:
        head_vals = graph.node(link.dst).metric_values
        new_raw = tuple(
            _extend(kind, value, link.metric_values[i], head_vals[i])
            for (i, _), kind, value in zip(self.pairs, self.kinds, raw))
        return new_raw, tuple(v * sign for v, (_, sign) in zip(new_raw, self.pairs))

    def dead_end(self, raw: tuple[float, ...]) -> bool:
        for pos, (i, _) in enumerate(self.pairs):
            for c in self.checks.get(i, ()):
                if c.sense is Sense.AT_MOST and self.monotone_up[i] and raw[pos] > c.bound:
                    return True
                if c.sense is Sense.AT_LEAST and self.monotone_down[i] and raw[pos] < c.bound:
                    return True
        return False

    def feasible(self, raw: tuple[float, ...], constraints: Sequence[Constraint]) -> bool:
        pos_of = {i: p for p, (i, _) in enumerate(self.pairs)}
        return all(c.satisfied_by(raw[pos_of[c.metric_index]]) for c in constraints)


def _element_ranges(graph: RoadGraph) -> tuple[list[float], list[float]]:
    n = len(graph.metric_specs)
    lows = [float("inf")] * n
    highs = [float("-inf")] * n
    for node in graph.nodes:
        for i, v in enumerate(node.metric_values):
            lows[i] = min(lows[i], v)
            highs[i] = max(highs[i], v)
    for link in graph.links:
        for i, v in enumerate(link.metric_values):
            lows[i] = min(lows[i], v)
            highs[i] = max(highs[i], v)
    return lows, highs


def _dominates(a: _Label, b: _Label) -> bool:
    """True when keeping ``b`` can never beat keeping ``a``."""
    if not a.visited <= b.visited:
        return False
    if any(x > y for x, y in zip(a.key, b.key)):
        return False
    if a.key != b.key:
        return True
    return (a.nodes, a.links) <= (b.nodes, b.links)


def _pareto_search(graph: RoadGraph, s: int, t: int, tracked: _Tracked) -> list[_Label]:
    """All non-dominated simple-path labels from s arriving at t."""
    raw, key = tracked.start(graph, s)
    start = _Label(s, (s,), (), frozenset((s,)), raw, key)
    frontier: dict[int, list[_Label]] = {s: [start]}
    queue: deque[_Label] = deque([start])
    while queue:
        label = queue.popleft()
        if label not in frontier.get(label.node, ()):  # pruned after queueing
            continue
        if label.node == t:
            continue  # extensions cannot revisit t on a simple path
        for lid in graph.out_links(label.node):
            link = graph.link(lid)
            head = link.dst
            if head in label.visited:
                continue
            raw, key = tracked.extend(graph, label.raw, link)
            if tracked.dead_end(raw):
                continue
            cand = _Label(head, label.nodes + (head,), label.links + (lid,),
                          label.visited | {head}, raw, key)
            bucket = frontier.setdefault(head, [])
            if any(_dominates(old, cand) for old in bucket):
                continue
            bucket[:] = [old for old in bucket if not _dominates(cand, old)]
            bucket.append(cand)
            queue.append(cand)
    return frontier.get(t, [])


def constrained_route(graph: RoadGraph, request: RouteRequest,
                      hierarchy: NetworkHierarchy | None = None) -> Path:
    """Exact constrained optimum over simple paths.

    Raises ``NoRoute`` when the destination is unreachable and ``Infeasible``
    when paths exist but every one violates a constraint.
    """
    direction = _objective_direction(graph, request)
    s = resolve_endpoint(request.source, graph, hierarchy)
    t = resolve_endpoint(request.destination, graph, hierarchy)
    work = graph
    if request.horizon is not None:
        if request.horizon < 1:
            raise PreconditionError("horizon must be >= 1 when set")
        work = build_topology_snapshot(graph, s, request.horizon)
        if not work.has_node(t):
            raise NoRoute(f"{t} outside horizon {request.horizon} of {s}")
    if not _reaches(work, s, t):
        raise NoRoute(f"no path {s} -> {t}")

    tracked = _Tracked(work, request.objective, direction, request.constraints)
    finals = _pareto_search(work, s, t, tracked)
    feasible = [l for l in finals if tracked.feasible(l.raw, request.constraints)]
    if not feasible:
        raise Infeasible(f"no path {s} -> {t} satisfies all constraints")
    best = min(feasible, key=lambda l: (l.key[0], l.nodes, l.links))
    return path_from_elements(work, best.nodes, best.links)


# ---------------------------------------------------------------------------
# Hierarchical (two-level) routing
# ---------------------------------------------------------------------------

_PSEUDO_BASE = 1 << 20


def border_pair_summary(graph: RoadGraph, hierarchy: NetworkHierarchy, tas_id: int,
                        entry: int, exit: int) -> tuple[float, ...] | None:
    """Optimal intra-area aggregate between two of an area's nodes, counting
    interior nodes and all links but *not* the endpoint nodes themselves.

    Endpoint exclusion lets summaries compose without counting a border node
    twice when segments are concatenated.  Returns None when no intra path
    exists; each metric is summarized independently at its own optimum.
    """
    sub = _neutral_endpoints_subgraph(graph, hierarchy, tas_id, entry, exit)
    values: list[float] = []
    for spec in graph.metric_specs:
        try:
            p = constrained_route(sub, RouteRequest(entry, exit, objective=spec.index))
        except NoRoute:
            return None
        values.append(p.values[spec.index])
    return tuple(values)


def _neutral_endpoints_subgraph(graph: RoadGraph, hierarchy: NetworkHierarchy,
                                tas_id: int, entry: int, exit: int) -> RoadGraph:
    area = hierarchy.area(tas_id)
    sub = graph.induced_subgraph(area.member_nodes)
    neutral = {nid: tuple(spec.neutral_value() for spec in graph.metric_specs)
               for nid in (entry, exit)}
    return sub.with_node_values(neutral)


def hierarchical_route(hierarchy: NetworkHierarchy, graph: RoadGraph,
                       request: RouteRequest) -> Path:
    """Two-level route: solve over border-to-border area summaries, then
    expand each summarized transit into a concrete intra-area path.

    The result is a valid path whose objective is never better than the flat
    optimum; it is equal when each area on the chosen sequence has a single
    usable border pair.  Constraints are enforced end-to-end on the composed
    path, not per segment.
    """
    s = resolve_endpoint(request.source, graph, hierarchy)
    t = resolve_endpoint(request.destination, graph, hierarchy)
    s_tas = hierarchy.tas_of(s)
    t_tas = hierarchy.tas_of(t)
    direction = _objective_direction(graph, request)

    if s_tas == t_tas:
        sub = graph.induced_subgraph(hierarchy.area(s_tas).member_nodes)
        return constrained_route(sub, replace(request, source=s, destination=t))

    # Auxiliary graph: endpoints and border nodes keep their real values;
    # summary pseudo-links carry interior-excluded aggregates.
    aux_ids: set[int] = {s, t}
    for area in hierarchy.areas:
        aux_ids |= area.border_nodes
    aux_nodes = tuple(graph.node(nid) for nid in sorted(aux_ids))
    aux_links: list[RoadLink] = [graph.link(lid) for lid in sorted(hierarchy.external_links)]

    expansions: dict[int, tuple[int, int, int]] = {}  # pseudo id -> (tas, entry, exit)
    next_id = _PSEUDO_BASE
    dist_idx = graph.metric_index_or_none("distance")
    for area in hierarchy.areas:
        entries = sorted(area.border_nodes | ({s} if area.id == s_tas else set()))
        exits = sorted(area.border_nodes | ({t} if area.id == t_tas else set()))
        for u in entries:
            for v in exits:
                if u == v:
                    continue
                values = border_pair_summary(graph, hierarchy, area.id, u, v)
                if values is None:
                    continue
                length = values[dist_idx] if dist_idx is not None and values[dist_idx] > 0 else 1.0
                aux_links.append(RoadLink(next_id, u, v, length_m=length,
                                          metric_values=values))
                expansions[next_id] = (area.id, u, v)
                next_id += 1

    aux = RoadGraph(nodes=aux_nodes, links=tuple(aux_links),
                    metric_specs=graph.metric_specs)
    if not _reaches(aux, s, t):
        raise NoRoute(f"no inter-area path {s} -> {t}")
    tracked = _Tracked(aux, request.objective, direction, request.constraints)
    finals = _pareto_search(aux, s, t, tracked)

    candidates: list[Path] = []
    for label in sorted(finals, key=lambda l: (l.key[0], l.nodes, l.links)):
        nodes: list[int] = [label.nodes[0]]
        links: list[int] = []
        for lid in label.links:
            if lid in expansions:
                tas_id, u, v = expansions[lid]
                sub = _neutral_endpoints_subgraph(graph, hierarchy, tas_id, u, v)
                seg = constrained_route(sub, RouteRequest(
                    u, v, objective=request.objective, direction=request.direction))
                nodes.extend(seg.nodes[1:])
                links.extend(seg.links)
            else:
                link = graph.link(lid)
                nodes.append(link.dst)
                links.append(lid)
        candidates.append(path_from_elements(graph, nodes, links))

    feasible = [p for p in candidates
                if all(c.satisfied_by(p.values[c.metric_index]) for c in request.constraints)]
    if not feasible:
        raise Infeasible(f"no composed path {s} -> {t} satisfies all constraints")
    sign = 1.0 if direction is Direction.MINIMIZE else -1.0
    return min(feasible, key=lambda p: (sign * p.values[request.objective], p.nodes, p.links))


def export_routing_table(graph: RoadGraph, source: int, objective: int = 0
                         ) -> list[dict[str, object]]:
    """Per-destination best-effort next hops from one node, as plain records."""
    rows = []
    for dest in graph.node_ids():
        if dest == source:
            continue
        try:
            path = best_effort_route(graph, RouteRequest(source, dest, objective=objective))
        except NoRoute:
            continue
        rows.append({
            "node": source,
            "destination": dest,
            "next_hop": path.links[0] if path.links else None,
            "values": list(path.values),
        })
    return rows
