# reductions/gadgets.py
"""
Value-preserving surgeries on drawn instances.

Every surgery returns the transformed drawing together with an OffsetLedger
delta and TransformLog records, so that mc(after) = mc(before) + delta.total.
"""
import logging
from fractions import Fraction
from typing import Optional

from graphs.embedding import TAIL, HEAD, DrawnInstance, faces, is_one_planar
from graphs.multigraph import WeightedMultigraph, degree
from .exceptions import GadgetError
from .ledger import (
    CONFLICT, DEGREE_ONE, NORMALIZE, PREPROCESS, SUBDIVIDE,
    OffsetLedger, RemoveDegreeOne, Subdivide, TransformLog,
)

logger = logging.getLogger(__name__)


def subdivision_offset(weight) -> Fraction:
    return max(Fraction(0), 2 * Fraction(weight))


def conflict_split(t: int) -> tuple:
    """
    One crossing on each outer replacement edge and the rest on the middle one,
    so every application separates two conflicting neighbours and an edge with
    t crossings is done after ceil((t - 1) / 2) applications.
    """
    if t < 2:
        return (0, t, 0)
    return (1, t - 2, 1)


def subdivide_edge(d: DrawnInstance, eid: int, split=None, reason=CONFLICT, crossing=None):
    """
    Replaces edge eid (u to v, weight w) by the path u - u' - v' - v whose three
    edges all weigh w. `split` gives how many of the edge's crossings, in order
    from u, end up on each of the three new edges.

    Returns (drawing, offset, record) with offset = max(0, 2w).
    """
    if eid not in d.graph.edges:
        raise GadgetError(f"Unknown edge {eid}.")
    edge = d.graph.edges[eid]
    old = d.edge_segments[eid]
    seq = d.node_sequence(eid)
    t = len(old) - 1
    if split is None:
        split = conflict_split(t)
    split = tuple(split)
    if len(split) != 3 or any(not isinstance(n, int) or n < 0 for n in split) or sum(split) != t:
        raise GadgetError(f"Split {split} does not distribute the {t} crossing(s) of edge {eid}.")
    n1, n2, _ = split

    ed = d.edit()
    u1, v1 = ed.add_vertex(), ed.add_vertex()
    full = [*seq[:n1 + 1], u1, *seq[n1 + 1:n1 + n2 + 1], v1, *seq[n1 + n2 + 1:]]
    at_u1, at_v1 = n1 + 1, n1 + n2 + 2
    e1 = ed.add_edge(edge.u, u1, edge.weight)
    e2 = ed.add_edge(u1, v1, edge.weight)
    e3 = ed.add_edge(v1, edge.v, edge.weight)
    fresh = []
    for i, (tail, head) in enumerate(zip(full, full[1:])):
        owner = e1 if i < at_u1 else (e2 if i < at_v1 else e3)
        fresh.append(ed.add_segment(owner, tail, head))

    def shifted(j):
        return j if j <= n1 else (j + 1 if j <= n1 + n2 else j + 2)

    for j, sid in enumerate(old):
        ed.replace_dart(seq[j], (sid, TAIL), (fresh[shifted(j)], TAIL))
        ed.replace_dart(seq[j + 1], (sid, HEAD), (fresh[shifted(j + 1) - 1], HEAD))
    ed.rotation[u1] = [(fresh[at_u1 - 1], HEAD), (fresh[at_u1], TAIL)]
    ed.rotation[v1] = [(fresh[at_v1 - 1], HEAD), (fresh[at_v1], TAIL)]
    ed.forget_edge(eid)

    record = Subdivide(eid, edge.weight, (edge.u, u1, v1, edge.v), (e1, e2, e3), split, reason, crossing)
    offset = subdivision_offset(edge.weight)
    logger.debug(f"Subdivided edge {eid} into {record.edges} with split {split} ({reason}), offset {offset}.")
    return ed.finish(), offset, record


def conflicting_crossings(d: DrawnInstance) -> list:
    """ Pairs of crossing nodes that share an edge. """
    pairs = []
    for eid in d.edge_segments:
        nodes = d.node_sequence(eid)[1:-1]
        pairs.extend((x, y) for i, x in enumerate(nodes) for y in nodes[i + 1:])
    return sorted(tuple(sorted(p)) for p in pairs)


def eliminate_conflicts(d: DrawnInstance):
    """ Subdivides multiply-crossed edges until the drawing is 1-planar. """
    ledger, log = OffsetLedger(), TransformLog()
    k = d.k
    while True:
        crowded = [eid for eid, segs in d.edge_segments.items() if len(segs) > 2]
        if not crowded:
            break
        eid = min(crowded)
        d, offset, record = subdivide_edge(d, eid, conflict_split(d.crossing_count(eid)), CONFLICT)
        ledger = ledger.record(SUBDIVIDE, (eid, *record.edges), offset)
        log = log.append(record)
    if d.k != k:
        raise GadgetError(f"Conflict elimination changed the crossing count from {k} to {d.k}.")
    if log:
        logger.info(f"Eliminated conflicts with {len(log)} subdivision(s), offset {ledger.total}.")
    return d, ledger, log


def preprocess_crossings(d: DrawnInstance):
    """ Subdivides both edges of every crossing so that the crossing sits on their middle edges. """
    if not is_one_planar(d):
        raise GadgetError("Crossing preprocessing needs a 1-planar drawing.")
    ledger, log = OffsetLedger(), TransformLog()
    for node in sorted(d.crossing_nodes):
        darts = d.crossing_darts(node)
        pair = (d.segments[darts[0][0]].edge, d.segments[darts[1][0]].edge)
        for eid in pair:
            d, offset, record = subdivide_edge(d, eid, (0, 1, 0), PREPROCESS, node)
            ledger = ledger.record(SUBDIVIDE, (eid, *record.edges), offset)
            log = log.append(record)
    return d, ledger, log


def crossing_corners(d: DrawnInstance, node: int):
    """ The crossing's darts (labelling a, b, c, d) and the corner vertex at the far end of each. """
    darts = d.crossing_darts(node)
    return darts, tuple(d.segments[sid].node(1 - end) for sid, end in darts)


def preprocessing_problem(d: DrawnInstance, node: int) -> Optional[str]:
    """ None when the crossing's four corners are distinct, of degree 2 and pairwise non-adjacent. """
    if node not in d.crossing_nodes:
        return f"Node {node} is not a crossing."
    darts, corners = crossing_corners(d, node)
    if len(set(corners)) != 4 or any(c in d.crossing_nodes for c in corners):
        return f"Crossing {node} does not have four distinct corner vertices."
    crossing_edges = {d.segments[sid].edge for sid, _ in darts}
    for corner in corners:
        if degree(d.graph, corner) != 2:
            return f"Corner {corner} of crossing {node} has degree {degree(d.graph, corner)}."
        for edge in d.graph.incident(corner):
            if edge.id in crossing_edges:
                continue
            if edge.other(corner) in corners:
                return f"Corners {corner} and {edge.other(corner)} of crossing {node} are adjacent."
            if len(d.edge_segments[edge.id]) > 1:
                return f"Corner {corner} of crossing {node} is shared with another crossing."
    return None


def remove_degree_one(g: WeightedMultigraph):
    """
    Iteratively strips vertices of degree 0 or 1, smallest id first. A pendant
    edge of weight w lowers the optimum by max(0, w).
    """
    ledger, log = OffsetLedger(), TransformLog()
    while True:
        pending = [v for v in sorted(g.vertices) if degree(g, v) <= 1]
        if not pending:
            break
        v = pending[0]
        incident = g.incident(v)
        if incident:
            edge = incident[0]
            record = RemoveDegreeOne(v, edge.id, edge.other(v), edge.weight)
            ledger = ledger.record(DEGREE_ONE, (v, edge.id), max(Fraction(0), edge.weight), -1)
        else:
            record = RemoveDegreeOne(v, None, None)
        g = g.subgraph(g.vertices - {v})
        log = log.append(record)
    return g, ledger, log


def _prune_vertex(d: DrawnInstance, v: int):
    incident = d.graph.incident(v)
    ed = d.edit()
    if incident:
        edge = incident[0]
        ed.remove_edge(edge.id)
        record = RemoveDegreeOne(v, edge.id, edge.other(v), edge.weight)
    else:
        record = RemoveDegreeOne(v, None, None)
    ed.remove_node(v)
    return ed.finish(), record


def prune_drawing(d: DrawnInstance):
    """ remove_degree_one on a drawing; vertices hanging on crossed edges are kept so k survives. """
    ledger, log = OffsetLedger(), TransformLog()
    while True:
        pending = [
            v for v in sorted(d.graph.vertices)
            if degree(d.graph, v) <= 1 and all(len(d.edge_segments[e.id]) == 1 for e in d.graph.incident(v))
        ]
        if not pending:
            break
        d, record = _prune_vertex(d, pending[0])
        if record.edge is not None:
            ledger = ledger.record(DEGREE_ONE, (record.vertex, record.edge), max(Fraction(0), record.weight), -1)
        log = log.append(record)
    if log:
        logger.debug(f"Pruned {len(log)} vertex(es) of degree at most one.")
    return d, ledger, log


def inner_face(d: DrawnInstance, face) -> bool:
    return any(d.dart_node(dart) in d.crossing_nodes for dart in face.boundary)


def normalize_small_faces(d: DrawnInstance, protected=frozenset()):
    """
    Subdivides the lowest-id unprotected boundary edge of every face shorter than
    three until none is left. Faces touching a crossing node are left alone.
    """
    ledger, log = OffsetLedger(), TransformLog()
    while True:
        small = [f for f in faces(d) if len(f) < 3 and not inner_face(d, f)]
        if not small:
            break
        face = small[0]
        candidates = sorted({d.segments[sid].edge for sid, _ in face.boundary} - set(protected))
        if not candidates:
            raise GadgetError(f"Face {face.boundary} has no edge that may be subdivided.")
        eid = candidates[0]
        d, offset, record = subdivide_edge(d, eid, (0, 0, 0), NORMALIZE)
        ledger = ledger.record(SUBDIVIDE, (eid, *record.edges), offset)
        log = log.append(record)
    return d, ledger, log


def replay(d: DrawnInstance, log: TransformLog) -> DrawnInstance:
    """ Re-applies subdivision and pruning records and checks each reproduces its record. """
    for record in log:
        if isinstance(record, Subdivide):
            d, _, again = subdivide_edge(d, record.edge, record.split, record.reason, record.crossing)
        elif isinstance(record, RemoveDegreeOne):
            if record.vertex not in d.graph.vertices:
                raise GadgetError(f"Cannot replay removal of unknown vertex {record.vertex}.")
            d, again = _prune_vertex(d, record.vertex)
        else:
            raise GadgetError(f"{type(record).__name__} records are not replayable.")
        if again != record:
            raise GadgetError(f"Replay diverged at {record}: produced {again}.")
    return d
