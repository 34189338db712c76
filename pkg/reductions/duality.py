# reductions/duality.py
"""
From a constrained leaf to a maximum-weight b-factor instance.

Normal faces are triangulated with zero-weight edges, then every normal face
and every pseudo-face becomes a vertex of the dual multigraph. Each dual
vertex carries one self-loop; taking the loop counts two toward its degree.
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional

from graphs.embedding import faces
from graphs.multigraph import WeightedMultigraph, degree
from .branching import ConstrainedInstance
from .exceptions import GadgetError
from .gadgets import inner_face
from .ledger import AddChord, AddHub

logger = logging.getLogger(__name__)

FACE = 'face'
PSEUDO = 'pseudo'
LOOP = 'loop'
BC, CD, DA = 'bc', 'cd', 'da'


def pseudo_face_weights(alpha, beta) -> dict:
    """ Dual weights of a pseudo-face with crossing edges ac (alpha) and bd (beta). """
    alpha, beta = Fraction(alpha), Fraction(beta)
    return {
        BC: (beta - 2 * alpha) / 3,
        CD: (alpha + beta) / 3,
        DA: (alpha - 2 * beta) / 3,
        LOOP: (2 * alpha + 2 * beta) / 3,
    }


def _fan(ed, boundary: tuple, constrained: set) -> list:
    start = min(range(len(boundary)), key=lambda i: ed.dart_node(boundary[i]))
    face = boundary[start:] + boundary[:start]
    chords = []
    while len(face) > 3:
        u, v = ed.dart_node(face[0]), ed.dart_node(face[2])
        if frozenset((u, v)) in constrained:
            raise GadgetError(f"A chord between constrained vertices {u} and {v} would bound a pseudo-face.")
        eid = ed.add_chord(face, 0, 2)
        sid = ed.edge_segments[eid][0]
        face = ((sid, 0),) + face[2:]
        chords.append(eid)
    return chords


def triangulate(leaf: ConstrainedInstance) -> ConstrainedInstance:
    """
    Splits every normal face longer than three into triangles with zero-weight
    edges: a fan from the smallest boundary vertex, or a hub vertex when the
    boundary visits some vertex twice.
    """
    d = leaf.drawing
    ed = d.edit()
    constrained = {frozenset(pair) for pair in leaf.constraints}
    records = []
    for face in faces(d):
        if inner_face(d, face):
            continue
        if len(face) < 3:
            raise GadgetError(f"Face {face.boundary} has length {len(face)}; normalize small faces first.")
        if len(face) == 3:
            continue
        corners = [d.dart_node(dart) for dart in face.boundary]
        if len(set(corners)) == len(corners):
            records.extend(AddChord(eid) for eid in _fan(ed, face.boundary, constrained))
        else:
            hub, spokes = ed.add_hub(face.boundary)
            records.append(AddHub(hub, tuple(spokes)))
    if not records:
        return leaf
    logger.debug(f"Leaf {leaf.mask}: triangulated with {len(records)} insertion(s).")
    return replace(leaf, drawing=ed.finish(), log=leaf.log.append(*records))


@dataclass(frozen=True)
class DualBFactorInstance:
    graph: WeightedMultigraph
    b: Mapping[int, int]
    primal_edge: Mapping[int, Optional[int]] = field(default_factory=dict)
    loops: Mapping[int, int] = field(default_factory=dict)
    origin: Mapping[int, tuple] = field(default_factory=dict)
    roles: Mapping[int, str] = field(default_factory=dict)

    def degree(self, v: int) -> int:
        return degree(self.graph, v)

    def pseudo_vertex(self, crossing: int) -> int:
        for v, (kind, key) in self.origin.items():
            if kind == PSEUDO and key == crossing:
                return v
        raise KeyError(crossing)


def build_dual(leaf: ConstrainedInstance) -> DualBFactorInstance:
    d = leaf.drawing
    face_list = faces(d)
    pseudo_by_crossing = {pf.crossing: pf for pf in leaf.pseudo_faces}
    constrained = {pf.constrained_edge for pf in leaf.pseudo_faces}
    skipped = constrained | {e for pf in leaf.pseudo_faces for e in pf.crossing_edges}

    next_id = 0
    face_vertex = {}
    origin = {}
    b = {}
    for index, face in enumerate(face_list):
        if inner_face(d, face):
            crossing = next(d.dart_node(x) for x in face.boundary if d.dart_node(x) in d.crossing_nodes)
            if crossing not in pseudo_by_crossing:
                raise GadgetError(f"Crossing {crossing} is not enclosed by a pseudo-face.")
            continue
        if len(face) != 3:
            raise GadgetError(f"Face {face.boundary} is not a triangle.")
        face_vertex[index] = next_id
        origin[next_id] = (FACE, index)
        b[next_id] = 2 - sum(1 for sid, _ in face.boundary if d.segments[sid].edge in constrained)
        next_id += 1
    pseudo_vertex = {}
    for pf in leaf.pseudo_faces:
        pseudo_vertex[pf.crossing] = next_id
        origin[next_id] = (PSEUDO, pf.crossing)
        b[next_id] = 3
        next_id += 1

    face_of = {}
    for index, face in enumerate(face_list):
        for dart in face.boundary:
            face_of[dart] = index

    def dual_end(dart):
        face = face_list[face_of[dart]]
        if inner_face(d, face):
            crossing = next(d.dart_node(x) for x in face.boundary if d.dart_node(x) in d.crossing_nodes)
            return pseudo_vertex[crossing], pseudo_by_crossing[crossing]
        return face_vertex[face_of[dart]], None

    role_of = {}
    for pf in leaf.pseudo_faces:
        weights = pseudo_face_weights(pf.alpha, pf.beta)
        for role, eid in zip((BC, CD, DA), pf.cycle_edges[1:]):
            role_of[eid] = (role, weights[role])

    edges = []
    primal_edge = {}
    roles = {}
    dual_id = next_id
    for edge in d.graph.edges.values():
        if edge.id in skipped:
            continue
        segs = d.edge_segments[edge.id]
        if len(segs) != 1:
            raise GadgetError(f"Edge {edge.id} is still crossed outside a pseudo-face.")
        (x, pf_x), (y, pf_y) = dual_end((segs[0], 0)), dual_end((segs[0], 1))
        if x == y:
            raise GadgetError(f"Edge {edge.id} has the same face on both sides.")
        if pf_x is not None and pf_y is not None:
            raise GadgetError(f"Edge {edge.id} lies between two pseudo-faces.")
        weight = edge.weight
        if edge.id in role_of:
            roles[dual_id], weight = role_of[edge.id]
        elif pf_x is not None or pf_y is not None:
            raise GadgetError(f"Edge {edge.id} borders a pseudo-face but is not one of its cycle edges.")
        edges.append((dual_id, x, y, weight))
        primal_edge[dual_id] = edge.id
        dual_id += 1

    loops = {}
    for v in sorted(origin):
        kind, key = origin[v]
        weight = pseudo_face_weights(pseudo_by_crossing[key].alpha, pseudo_by_crossing[key].beta)[LOOP] if kind == PSEUDO else 0
        edges.append((dual_id, v, v, weight))
        primal_edge[dual_id] = None
        loops[v] = dual_id
        roles[dual_id] = LOOP
        dual_id += 1

    graph = WeightedMultigraph.build(origin, edges, allow_loops=True, next_id=dual_id)
    logger.debug(f"Leaf {leaf.mask}: dual with {graph.n} vertices and {len(graph.edges)} edges.")
    return DualBFactorInstance(graph, b, primal_edge, loops, origin, roles)


def check_feasibility(inst: DualBFactorInstance) -> Optional[str]:
    """ None when no degree target rules a b-factor out, otherwise the reason. """
    for v in sorted(inst.graph.vertices):
        target, d = inst.b[v], inst.degree(v)
        if target < 0:
            return f"Dual vertex {v} has b = {target} < 0."
        if target > d:
            return f"Dual vertex {v} has b = {target} above its degree {d}."
    return None
