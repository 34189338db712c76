# solver/recovery.py
"""
From an optimal b-factor back to a cut of the original graph.
"""
import enum
import logging
from collections import deque
from dataclasses import replace

from graphs.multigraph import CutSolution, WeightedMultigraph, cut_value
from matching.bfactor import FactorSolution
from reductions.branching import ConstrainedInstance
from reductions.duality import BC, CD, DA, LOOP, DualBFactorInstance
from reductions.ledger import (
    DEGREE_ONE, SUBDIVIDE, AddHub, ContractCorners, OffsetLedger, RemoveDegreeOne, Subdivide, TransformLog,
)
from .exceptions import LiftError, VerificationError

logger = logging.getLogger(__name__)


class CaseTag(enum.Enum):
    """ Which crossing edges of a pseudo-face are cut: ac only, both, bd only, neither. """
    CASE1 = frozenset({DA, LOOP})
    CASE2 = frozenset({CD, LOOP})
    CASE3 = frozenset({BC, LOOP})
    CASE4 = frozenset({BC, CD, DA})

    @property
    def cuts_ac(self) -> bool:
        return self in (CaseTag.CASE1, CaseTag.CASE2)

    @property
    def cuts_bd(self) -> bool:
        return self in (CaseTag.CASE2, CaseTag.CASE3)

    @classmethod
    def from_roles(cls, roles) -> 'CaseTag':
        try:
            return cls(frozenset(roles))
        except ValueError:
            raise LiftError(f"Selection {sorted(roles)} at a pseudo-face matches no case.")


def lift_factor_to_cut(leaf: ConstrainedInstance, dual: DualBFactorInstance, factor: FactorSolution) -> CutSolution:
    """
    Cut of the leaf graph whose cut edges are exactly the primal edges of the
    selected dual edges, the constrained edges, and the crossing edges the
    pseudo-face cases call for.
    """
    g = leaf.drawing.graph
    cut = {}
    for eid, primal in dual.primal_edge.items():
        if primal is not None:
            cut[primal] = eid in factor.edges
    for pf in leaf.pseudo_faces:
        at = dual.pseudo_vertex(pf.crossing)
        roles = {
            dual.roles[e.id] for e in dual.graph.incident(at) if e.id in factor.edges
        }
        tag = CaseTag.from_roles(roles)
        cut[pf.constrained_edge] = True
        cut[pf.crossing_edges[0]] = tag.cuts_ac
        cut[pf.crossing_edges[1]] = tag.cuts_bd
    missing = sorted(set(g.edges) - set(cut))
    if missing:
        raise LiftError(f"Edge {missing[0]} has no cut status.")

    side = {}
    for component in g.components():
        root = min(component)
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for edge in g.incident(u):
                x = edge.other(u)
                if x not in side:
                    side[x] = side[u] ^ int(cut[edge.id])
                    queue.append(x)
    for edge in g.edges.values():
        if (side[edge.u] != side[edge.v]) != cut[edge.id]:
            raise LiftError(f"Cut status of edge {edge.id} contradicts the colouring.")
    for a, b in leaf.constraints:
        if side[a] == side[b]:
            raise LiftError(f"Constrained pair ({a}, {b}) ends up on one side.")
    value = cut_value(g, side)
    if value != factor.cost:
        raise LiftError(f"Lifted cut is worth {value}, factor cost is {factor.cost}.")
    return CutSolution(side, value)


def ledger_matches(log: TransformLog, ledger: OffsetLedger) -> bool:
    subdivisions = sum(1 for r in log if isinstance(r, Subdivide))
    pendants = sum(1 for r in log if isinstance(r, RemoveDegreeOne) and r.edge is not None)
    tags = [e.tag for e in ledger.entries]
    return tags.count(SUBDIVIDE) == subdivisions and tags.count(DEGREE_ONE) == pendants


def undo_transforms(cut: CutSolution, log: TransformLog, ledger: OffsetLedger, original: WeightedMultigraph) -> CutSolution:
    """
    Replays the log backwards: merged corners share the merged vertex's side,
    added vertices are dropped and pruned vertices are put back on the side
    that collects their edge when it pays.
    """
    if not ledger_matches(log, ledger):
        raise LiftError("Transform log and offset ledger do not describe the same surgeries.")
    side = dict(cut.side)
    for record in reversed(log.records):
        if isinstance(record, ContractCorners):
            merged = side.pop(record.merged)
            for corner in record.corners:
                side[corner] = merged
        elif isinstance(record, Subdivide):
            for v in record.added_vertices:
                side.pop(v, None)
        elif isinstance(record, AddHub):
            side.pop(record.hub, None)
        elif isinstance(record, RemoveDegreeOne):
            if record.neighbor is None:
                side[record.vertex] = 0
            elif record.weight >= 0:
                side[record.vertex] = 1 - side[record.neighbor]
            else:
                side[record.vertex] = side[record.neighbor]
    missing = sorted(original.vertices - set(side))
    if missing:
        raise LiftError(f"Vertex {missing[0]} has no side after undoing the log.")
    side = {v: side[v] for v in sorted(original.vertices)}
    value = cut.value - ledger.total
    stats = replace(cut.stats, ledger_total=ledger.total)
    return CutSolution(side, value, stats)


def verify_solution(g: WeightedMultigraph, sol: CutSolution) -> CutSolution:
    recomputed = cut_value(g, sol.side)
    if recomputed != sol.value:
        logger.error(f"Verification failed: reported {sol.value}, recomputed {recomputed}.")
        raise VerificationError(sol.value, recomputed)
    return sol
