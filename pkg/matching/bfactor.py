# matching/bfactor.py
"""
Maximum-weight b-factors through perfect matching.

Every dual vertex v is replaced by one external vertex per incident edge-end
and d(v) - b(v) internal vertices joined to all external ones by zero-weight
edges. A perfect matching then leaves exactly b(v) external vertices of v to
be matched across real edges.

A self-loop at v only matters when b(v) >= 2. If v carries a single loop and
b(v) is 2 or 3, the loop becomes edges between pairs of v's external vertices
(matching such a pair takes the loop, and at most one pair fits). Any other
loop gets two external vertices of its own, as in the plain reduction.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import networkx as nx

from reductions.duality import DualBFactorInstance, check_feasibility
from .exceptions import InfeasibleError

logger = logging.getLogger(__name__)

EXTERNAL = 'external'
INTERNAL = 'internal'


@dataclass(frozen=True)
class MatchingInstance:
    """ Simple graph on integer nodes; each edge carries `weight` and `origin` (dual edge id or None). """
    graph: nx.Graph
    labels: Mapping[int, tuple]

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    def origin(self, x: int, y: int):
        return self.graph.edges[x, y]['origin']


@dataclass(frozen=True)
class FactorSolution:
    edges: frozenset
    cost: Fraction

    def degrees(self, inst: DualBFactorInstance) -> dict:
        count = {v: 0 for v in inst.graph.vertices}
        for eid in self.edges:
            edge = inst.graph.edges[eid]
            count[edge.u] += 1
            count[edge.v] += 1
        return count


def _paired_loop(inst: DualBFactorInstance, v: int, loops: list, ends: int):
    """ The loop at v that may be folded into external pairs, or None. """
    if len(loops) == 1 and 2 <= inst.b[v] <= 3 and ends >= inst.b[v]:
        return loops[0]
    return None


def gabow_reduce(inst: DualBFactorInstance) -> MatchingInstance:
    problem = check_feasibility(inst)
    if problem:
        raise InfeasibleError(problem)
    g = nx.Graph()
    labels = {}

    def node(label):
        x = len(labels)
        labels[x] = label
        g.add_node(x)
        return x

    loops = {v: [] for v in inst.graph.vertices}
    ends = {v: 0 for v in inst.graph.vertices}
    for edge in inst.graph.edges.values():
        if edge.is_loop:
            loops[edge.u].append(edge)
        else:
            ends[edge.u] += 1
            ends[edge.v] += 1

    paired = {}
    for v in sorted(inst.graph.vertices):
        if inst.b[v] <= 1:
            # a loop counts two, so it can never be taken here
            if ends[v] < inst.b[v]:
                raise InfeasibleError(f"Dual vertex {v} cannot reach b = {inst.b[v]} without its loops.")
            loops[v] = []
        elif _paired_loop(inst, v, loops[v], ends[v]) is not None:
            paired[v] = loops[v].pop()
    kept_loops = {edge.id for found in loops.values() for edge in found}

    external = {v: [] for v in inst.graph.vertices}
    for edge in sorted(inst.graph.edges.values(), key=lambda e: e.id):
        if edge.is_loop and edge.id not in kept_loops:
            continue
        x = node((EXTERNAL, edge.u, edge.id, 0))
        y = node((EXTERNAL, edge.v, edge.id, 1))
        external[edge.u].append(x)
        external[edge.v].append(y)
        g.add_edge(x, y, weight=edge.weight, origin=edge.id)

    for v in sorted(inst.graph.vertices):
        own = external[v]
        if v in paired:
            loop = paired[v]
            for i, x in enumerate(own):
                for y in own[i + 1:]:
                    g.add_edge(x, y, weight=loop.weight, origin=loop.id)
        for j in range(len(own) - inst.b[v]):
            z = node((INTERNAL, v, j))
            for x in own:
                g.add_edge(x, z, weight=Fraction(0), origin=None)
    logger.debug(f"Gabow gadget: {g.number_of_nodes()} nodes, {g.number_of_edges()} edges.")
    return MatchingInstance(g, labels)


def _match_component(g: nx.Graph, values: dict, scale: int, lowest: Fraction) -> set:
    work = nx.Graph()
    work.add_nodes_from(g.nodes)
    for x, y in g.edges:
        w = values[(x, y)] if (x, y) in values else values[(y, x)]
        # all perfect matchings have n/2 edges, so a common shift keeps the optimum
        work.add_edge(x, y, scaled=int(w * scale - lowest) + 1)
    return nx.max_weight_matching(work, maxcardinality=True, weight='scaled')


def max_weight_perfect_matching(g: nx.Graph, weight='weight'):
    """
    Returns (matching, total weight) for a maximum-weight perfect matching of g,
    or raises InfeasibleError. Weights are exact rationals of any sign; the
    blossom solver only ever sees positive integers, one connected component
    at a time.
    """
    n = g.number_of_nodes()
    if n % 2:
        raise InfeasibleError(f"A graph on {n} nodes has no perfect matching.")
    if n == 0:
        return set(), Fraction(0)
    values = {(x, y): Fraction(data[weight]) for x, y, data in g.edges(data=True)}
    scale = math.lcm(*(w.denominator for w in values.values())) if values else 1
    lowest = min((w * scale for w in values.values()), default=Fraction(0))
    matching = set()
    for nodes in sorted(nx.connected_components(g), key=min):
        if len(nodes) % 2:
            raise InfeasibleError(f"A component on {len(nodes)} nodes has no perfect matching.")
        matching |= _match_component(g.subgraph(nodes), values, scale, lowest)
    if not nx.is_perfect_matching(g, matching):
        raise InfeasibleError(f"No perfect matching: best matching covers {2 * len(matching)} of {n} nodes.")
    total = sum((values[(x, y)] if (x, y) in values else values[(y, x)] for x, y in matching), Fraction(0))
    return matching, total


def solve_bfactor(inst: DualBFactorInstance) -> FactorSolution:
    reduced = gabow_reduce(inst)
    matching, total = max_weight_perfect_matching(reduced.graph)
    chosen = frozenset(
        origin for origin in (reduced.origin(x, y) for x, y in matching) if origin is not None
    )
    cost = sum((inst.graph.edges[eid].weight for eid in chosen), Fraction(0))
    if cost != total:
        raise RuntimeError(f"Matching weight {total} differs from factor cost {cost}.")
    solution = FactorSolution(chosen, cost)
    degrees = solution.degrees(inst)
    for v, target in inst.b.items():
        if degrees[v] != target:
            raise RuntimeError(f"Factor has degree {degrees[v]} at dual vertex {v}, expected {target}.")
    return solution
