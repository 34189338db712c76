# solver/oracle.py
"""
Brute-force reference optima. Small instances only; every function refuses
inputs above its size bound (settings ORACLE_MAX_VERTICES / ORACLE_MAX_EDGES,
or an explicit keyword argument).

Infeasibility is reported as None.
"""
import logging
from fractions import Fraction
from typing import Optional

import networkx as nx
from django.conf import settings

from graphs.multigraph import WeightedMultigraph
from .exceptions import OracleBoundError

logger = logging.getLogger(__name__)


def vertex_bound(max_vertices=None) -> int:
    return max_vertices if max_vertices is not None else getattr(settings, 'ORACLE_MAX_VERTICES', 20)


def edge_bound(max_edges=None) -> int:
    return max_edges if max_edges is not None else getattr(settings, 'ORACLE_MAX_EDGES', 24)


class ParityUnionFind:
    """ Union-find where every vertex stores its parity relative to the root of its class. """

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 0 for x in items}

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        total = 0
        for y in reversed(path):
            total ^= self.parity[y]
            self.parity[y] = total
            self.parent[y] = root
        return root

    def relation(self, x) -> int:
        self.find(x)
        return self.parity[x]

    def separate(self, x, y) -> bool:
        """ Records that x and y lie on different sides; False on contradiction. """
        rx, ry = self.find(x), self.find(y)
        px, py = self.parity[x], self.parity[y]
        if rx == ry:
            return px != py
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ 1
        return True


def brute_cmc_cut(g: WeightedMultigraph, constraints=(), max_vertices=None):
    """ (value, side) of a best cut separating every constrained pair, or None. """
    bound = vertex_bound(max_vertices)
    if g.n > bound:
        raise OracleBoundError(f"{g.n} vertices exceed the brute-force bound of {bound}.")
    uf = ParityUnionFind(g.vertices)
    for a, b in constraints:
        if a == b or not uf.separate(a, b):
            return None
    roots = sorted({uf.find(v) for v in g.vertices})
    if not roots:
        return Fraction(0), {}
    index = {r: i for i, r in enumerate(roots)}
    cls = {v: index[uf.find(v)] for v in g.vertices}
    par = {v: uf.relation(v) for v in g.vertices}

    base = Fraction(0)
    touching = [[] for _ in roots]
    for edge in g.edges.values():
        if edge.is_loop:
            continue
        cu, cv = cls[edge.u], cls[edge.v]
        flip = par[edge.u] ^ par[edge.v]
        if flip:
            base += edge.weight
        if cu == cv:
            continue
        touching[cu].append((cv, flip, edge.weight))
        touching[cv].append((cu, flip, edge.weight))

    # the first class stays on side 0; the rest walk a Gray code
    state = [0] * len(roots)
    value = base
    best, best_state = value, list(state)
    for step in range(1, 1 << (len(roots) - 1)):
        c = (step & -step).bit_length()
        for other, flip, weight in touching[c]:
            cut_now = (state[c] ^ state[other] ^ flip) == 1
            value += -weight if cut_now else weight
        state[c] ^= 1
        if value > best:
            best, best_state = value, list(state)
    side = {v: best_state[cls[v]] ^ par[v] for v in g.vertices}
    return best, side


def brute_cmc(g: WeightedMultigraph, constraints=(), max_vertices=None) -> Optional[Fraction]:
    found = brute_cmc_cut(g, constraints, max_vertices)
    return None if found is None else found[0]


def brute_mc(g: WeightedMultigraph, max_vertices=None) -> Fraction:
    return brute_cmc(g, (), max_vertices)


def brute_bfactor(inst, max_edges=None) -> Optional[Fraction]:
    """
    Best total weight of an edge subset giving every vertex v degree exactly
    inst.b[v] (a loop counts two), or None. `inst` needs `graph` and `b`.
    """
    g, b = inst.graph, inst.b
    bound = edge_bound(max_edges)
    if len(g.edges) > bound:
        raise OracleBoundError(f"{len(g.edges)} edges exceed the brute-force bound of {bound}.")
    edges = list(g.edges.values())
    need = {v: b[v] for v in g.vertices}
    # capacity[v]: degree still obtainable from the undecided edges
    capacity = {v: 0 for v in g.vertices}
    for edge in edges:
        capacity[edge.u] += 1
        capacity[edge.v] += 1
    if any(need[v] < 0 or need[v] > capacity[v] for v in g.vertices):
        return None
    best = [None]

    def search(i, total):
        if i == len(edges):
            if all(n == 0 for n in need.values()):
                if best[0] is None or total > best[0]:
                    best[0] = total
            return
        edge = edges[i]
        ends = (edge.u, edge.v)
        for v in ends:
            capacity[v] -= 1
        if all(need[v] >= 1 for v in ends) and (not edge.is_loop or need[edge.u] >= 2):
            for v in ends:
                need[v] -= 1
            if all(need[v] <= capacity[v] for v in ends):
                search(i + 1, total + edge.weight)
            for v in ends:
                need[v] += 1
        if all(need[v] <= capacity[v] for v in ends):
            search(i + 1, total)
        for v in ends:
            capacity[v] += 1

    search(0, Fraction(0))
    return best[0]


def brute_perfect_matching(g: nx.Graph, weight='weight'):
    """ (matching, weight) of a maximum-weight perfect matching by exhaustive pairing, or None. """
    nodes = sorted(g.nodes)
    if len(nodes) % 2:
        return None
    best = [None, None]

    def search(free, chosen, total):
        if not free:
            if best[1] is None or total > best[1]:
                best[0], best[1] = set(chosen), total
            return
        x = free[0]
        for y in free[1:]:
            if g.has_edge(x, y):
                rest = [z for z in free if z not in (x, y)]
                search(rest, chosen + [(x, y)], total + Fraction(g.edges[x, y][weight]))

    search(nodes, [], Fraction(0))
    if best[1] is None:
        return None
    return best[0], best[1]
