# reductions/branching.py
"""
Branching on crossings.

For a preprocessed crossing of the edges ac and bd (corners a, b, c, d in
counterclockwise order around the crossing node) an optimal cut either puts
a and b on the same side, in which case the two corners are contracted and
the crossing disappears, or separates them, in which case the crossing is
kept inside a pseudo-face: four zero-weight edges ab, bc, cd, da are drawn
around it and ab becomes a constrained edge.
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

from graphs.embedding import HEAD, TAIL, DrawnInstance
from .exceptions import GadgetError
from .gadgets import crossing_corners, preprocessing_problem
from .ledger import ConstrainCrossing, ContractCorners, OffsetLedger, TransformLog

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PseudoFace:
    crossing: int
    corners: tuple
    cycle_edges: tuple
    crossing_edges: tuple
    alpha: Fraction
    beta: Fraction

    @property
    def constrained_edge(self) -> int:
        return self.cycle_edges[0]

    @property
    def constrained_pair(self) -> tuple:
        return self.corners[0], self.corners[1]

    def as_dict(self) -> dict:
        return {
            'crossing': self.crossing,
            'corners': list(self.corners),
            'cycle_edges': list(self.cycle_edges),
            'crossing_edges': list(self.crossing_edges),
            'alpha': str(self.alpha),
            'beta': str(self.beta),
        }


@dataclass(frozen=True)
class ConstrainedInstance:
    drawing: DrawnInstance
    pseudo_faces: tuple = ()
    constraints: tuple = ()
    ledger: OffsetLedger = field(default_factory=OffsetLedger)
    log: TransformLog = field(default_factory=TransformLog)
    mask: int = 0

    @property
    def protected_edges(self) -> frozenset:
        """ Cycle and crossing edges of pseudo-faces; gadgets must leave them alone. """
        return frozenset(e for pf in self.pseudo_faces for e in pf.cycle_edges + pf.crossing_edges)

    def with_drawing(self, drawing, ledger=None, log=None) -> 'ConstrainedInstance':
        return replace(
            self,
            drawing=drawing,
            ledger=self.ledger + (ledger or OffsetLedger()),
            log=self.log + (log or TransformLog()),
        )


def _check(inst: ConstrainedInstance, node: int):
    problem = preprocessing_problem(inst.drawing, node)
    if problem:
        raise GadgetError(f"Crossing {node} is not preprocessed: {problem}")


def contract_branch(inst: ConstrainedInstance, node: int) -> ConstrainedInstance:
    """ Merges corners a and b into one vertex; the crossing node goes away. """
    _check(inst, node)
    d = inst.drawing
    darts, (a, b, c, _) = crossing_corners(d, node)
    ed = d.edit()
    merged = ed.add_vertex()

    outer = []
    for corner, (sid, end) in ((a, darts[0]), (b, darts[1])):
        inner = (sid, 1 - end)
        out = next(dart for dart in d.rotation[corner] if dart != inner)
        ed.move_end(out, merged)
        out_edge = d.dart_edge(out)
        ed.set_edge(out_edge.id, *[merged if x == corner else x for x in (out_edge.u, out_edge.v)])
        outer.append(out)
        ed.segments.pop(sid)
        ed.edge_segments[d.segments[sid].edge].remove(sid)
        crossing_edge = d.graph.edges[d.segments[sid].edge]
        ed.set_edge(crossing_edge.id, *[merged if x == corner else x for x in (crossing_edge.u, crossing_edge.v)])

    kept = []
    for dart in (darts[2], darts[3]):
        ed.move_end(dart, merged)
        kept.append(dart)

    for gone in (a, b, node):
        ed.rotation[gone] = []
        ed.remove_node(gone)
    ed.rotation[merged] = [outer[0], outer[1], kept[0], kept[1]]

    logger.debug(f"Crossing {node}: contracted corners {a} and {b} into {merged}.")
    return replace(
        inst,
        drawing=ed.finish(),
        log=inst.log.append(ContractCorners(node, (a, b), merged)),
    )


def constrain_branch(inst: ConstrainedInstance, node: int) -> ConstrainedInstance:
    """ Draws the zero-weight cycle ab, bc, cd, da around the crossing and constrains ab. """
    _check(inst, node)
    d = inst.drawing
    darts, corners = crossing_corners(d, node)
    ed = d.edit()
    cycle = []
    for i in range(4):
        p, q = corners[i], corners[(i + 1) % 4]
        eid = ed.add_edge(p, q, 0)
        cycle.append((eid, ed.add_segment(eid, p, q)))
    for i, (sid, end) in enumerate(darts):
        p = corners[i]
        at_corner = (sid, 1 - end)
        to_next = (cycle[i][1], TAIL)
        from_prev = (cycle[(i - 1) % 4][1], HEAD)
        ed.insert_before(p, at_corner, to_next)
        ed.insert_after(p, at_corner, from_prev)

    crossing_edges = (d.segments[darts[0][0]].edge, d.segments[darts[1][0]].edge)
    pseudo = PseudoFace(
        crossing=node,
        corners=corners,
        cycle_edges=tuple(eid for eid, _ in cycle),
        crossing_edges=crossing_edges,
        alpha=d.graph.edges[crossing_edges[0]].weight,
        beta=d.graph.edges[crossing_edges[1]].weight,
    )
    logger.debug(f"Crossing {node}: pseudo-face on corners {corners}, alpha={pseudo.alpha}, beta={pseudo.beta}.")
    return replace(
        inst,
        drawing=ed.finish(),
        pseudo_faces=inst.pseudo_faces + (pseudo,),
        constraints=inst.constraints + (pseudo.constrained_pair,),
        log=inst.log.append(ConstrainCrossing(node, corners, pseudo.cycle_edges)),
    )


def branch_crossing(inst: ConstrainedInstance, node: int):
    """ Returns (contracted, constrained) children of the instance for one crossing. """
    return contract_branch(inst, node), constrain_branch(inst, node)


def enumerate_branches(inst) -> list:
    """
    All 2^k leaves, ordered by bitmask. Bit i of a leaf's mask is set when the
    i-th crossing (ascending node id) was kept as a pseudo-face.
    """
    if isinstance(inst, DrawnInstance):
        inst = ConstrainedInstance(inst)
    crossings = sorted(inst.drawing.crossing_nodes)
    for node in crossings:
        _check(inst, node)
    level = [inst]
    for i, node in enumerate(crossings):
        children = []
        for leaf in level:
            contracted, constrained = branch_crossing(leaf, node)
            children.append(contracted)
            children.append(replace(constrained, mask=constrained.mask | (1 << i)))
        level = children
    level.sort(key=lambda leaf: leaf.mask)
    logger.info(f"Enumerated {len(level)} branch leaves for {len(crossings)} crossing(s).")
    return level
