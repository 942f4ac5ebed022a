"""tisim: road networks treated as routed, switched networks.

The package models a road network as a directed multigraph with per-element
metric vectors, intersections as time-division crossbar fabrics, route
selection as (constrained) shortest-path problems, traffic control as a
software-defined plane of flow tables, and traffic flow itself as a
cellular automaton.  Everything is deterministic given a seed.
"""

from .errors import (BadCrc, BadMagic, DecodeError, EmptyPath, Infeasible,
                     NoConnection, NoRoute, Overcrowded, ParseError,
                     PolicyMismatch, PreconditionError, TisimError, TooLarge,
                     Truncated, UnknownNode, UnknownVersion, UnstableQueue,
                     ValidationError)
from .metrics import Constraint, Direction, MetricKind, MetricSpec, Sense, aggregate_path
from .network import (NetworkHierarchy, NodeKind, RoadGraph, RoadLink, RoadNode,
                      TasDescriptor, TasKind, TasTier, TransportAddress,
                      neighbors, partition_into_tas)
from .routing import (Path, RouteRequest, best_effort_route,
                      build_topology_snapshot, constrained_route,
                      hierarchical_route, path_from_elements)
from .scenario import Scenario, build_graph, load_scenario

__version__ = "0.1.0"
