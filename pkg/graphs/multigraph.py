# graphs/multigraph.py
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional

import networkx as nx

from .exceptions import GraphError

logger = logging.getLogger(__name__)


def as_rational(value) -> Fraction:
    """ Parses an exact weight: an int, a Fraction or a "p/q" / "p" string. Floats are refused. """
    if isinstance(value, bool):
        raise GraphError(f"Weight {value!r} is not a number.")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise GraphError(f"Weight {value!r} is not an exact rational.")
    raise GraphError(f"Weight {value!r} must be an integer or a 'p/q' string.")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    weight: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"Vertex {x} is not an endpoint of edge {self.id}.")


@dataclass(frozen=True)
class WeightedMultigraph:
    """
    Vertices plus weighted parallel edges. Values are never mutated; every
    operation returns a new graph. `next_id` is the monotone id counter shared
    by vertices and edges, so ids are never reused by later transformations.
    """
    vertices: frozenset
    edges: Mapping[int, Edge]
    next_id: int
    allow_loops: bool = True

    def __post_init__(self):
        for edge in self.edges.values():
            if edge.u not in self.vertices or edge.v not in self.vertices:
                raise GraphError(f"Edge {edge.id} has an endpoint outside the vertex set.")
            if edge.is_loop and not self.allow_loops:
                raise GraphError(f"Edge {edge.id} is a self-loop.")
        used = max([*self.vertices, *self.edges, -1])
        if self.next_id <= used:
            raise GraphError(f"Id counter {self.next_id} would reuse id {used}.")

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable, allow_loops=True, next_id=None):
        """ Builds a graph from vertex ids and (id, u, v, weight) tuples. """
        edge_map = {}
        for eid, u, v, weight in edges:
            if eid in edge_map:
                raise GraphError(f"Duplicate edge id {eid}.")
            edge_map[eid] = Edge(eid, u, v, as_rational(weight))
        vertex_set = frozenset(vertices)
        if next_id is None:
            next_id = max([*vertex_set, *edge_map, -1]) + 1
        return cls(vertex_set, dict(sorted(edge_map.items())), next_id, allow_loops)

    @cached_property
    def incidence(self) -> dict:
        table = {v: [] for v in self.vertices}
        for edge in self.edges.values():
            table[edge.u].append(edge)
            if not edge.is_loop:
                table[edge.v].append(edge)
        return table

    def incident(self, v: int) -> list:
        if v not in self.vertices:
            raise GraphError(f"Unknown vertex {v}.")
        return self.incidence[v]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges.values()), Fraction(0))

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise GraphError(f"Unknown edge {eid}.")

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(sorted(self.vertices))
        for edge in self.edges.values():
            g.add_edge(edge.u, edge.v, key=edge.id, weight=edge.weight)
        return g

    def components(self) -> list:
        """ Vertex sets of the connected components, ordered by their smallest vertex. """
        parts = [frozenset(c) for c in nx.connected_components(self.to_networkx())]
        return sorted(parts, key=min)

    def subgraph(self, keep: Iterable[int]) -> 'WeightedMultigraph':
        keep = frozenset(keep)
        edges = [(e.id, e.u, e.v, e.weight) for e in self.edges.values() if e.u in keep and e.v in keep]
        return WeightedMultigraph.build(keep, edges, self.allow_loops, self.next_id)


def degree(g: WeightedMultigraph, v: int) -> int:
    """ Number of edge-endpoints at v; a self-loop counts twice. """
    return sum(2 if e.is_loop else 1 for e in g.incident(v))


def contract(g: WeightedMultigraph, u: int, v: int):
    """
    Merges u and v into one fresh vertex. Incident edges keep their ids and
    weights; edges between u and v become self-loops. Returns (graph, merged id).
    """
    if u == v:
        raise GraphError(f"Cannot contract vertex {u} with itself.")
    for x in (u, v):
        if x not in g.vertices:
            raise GraphError(f"Unknown vertex {x}.")
    merged = g.next_id
    rename = {u: merged, v: merged}
    edges = [(e.id, rename.get(e.u, e.u), rename.get(e.v, e.v), e.weight) for e in g.edges.values()]
    vertices = (g.vertices - {u, v}) | {merged}
    logger.debug(f"Contracted {u} and {v} into {merged}.")
    return WeightedMultigraph.build(vertices, edges, True, merged + 1), merged


def cut_value(g: WeightedMultigraph, side: Mapping[int, int]) -> Fraction:
    """ Sum of the weights of edges whose endpoints lie on different sides. """
    missing = [v for v in g.vertices if v not in side]
    if missing:
        raise GraphError(f"Vertex {min(missing)} has no side assigned.")
    return sum((e.weight for e in g.edges.values() if side[e.u] != side[e.v]), Fraction(0))


@dataclass(frozen=True)
class SolveStats:
    n: int = 0
    k: int = 0
    branches: int = 1
    infeasible_branches: int = 0
    ledger_total: Fraction = Fraction(0)
    best_mask: int = 0
    wall_ms: Optional[float] = None


@dataclass(frozen=True)
class CutSolution:
    side: Mapping[int, int]
    value: Fraction
    stats: SolveStats = field(default_factory=SolveStats)

    def flipped(self) -> 'CutSolution':
        return CutSolution({v: 1 - s for v, s in self.side.items()}, self.value, self.stats)

    def check(self, g: WeightedMultigraph) -> bool:
        return cut_value(g, self.side) == self.value
