# graphs/embedding.py
"""
Combinatorial drawings.

A drawing is stored as the rotation system of its planarization: every
crossing is a degree-4 crossing node splitting the two crossing edges into
segments, and every node carries the counterclockwise cyclic order of the
segment ends ("darts") around it. A dart is the pair (segment id, end) with
end 0 at the segment's tail and 1 at its head; segments are oriented like
their edge, from edge.u to edge.v.

Faces are the orbits of "leave along a dart, then take the next dart
counterclockwise after the one we arrived through". The sphere embedding is
used throughout, so no face is distinguished as the outer one.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional

import networkx as nx

from .exceptions import DrawingError
from .multigraph import Edge, WeightedMultigraph, as_rational

logger = logging.getLogger(__name__)

VERTEX = 'vertex'
CROSSING = 'crossing'
TAIL = 0
HEAD = 1


def twin(dart):
    return (dart[0], 1 - dart[1])


@dataclass(frozen=True)
class Segment:
    id: int
    edge: int
    tail: int
    head: int

    def node(self, end: int) -> int:
        return self.tail if end == TAIL else self.head


@dataclass(frozen=True)
class Face:
    boundary: tuple

    def __len__(self):
        return len(self.boundary)


@dataclass(frozen=True)
class Crossing:
    node: int
    edges: tuple
    positions: tuple


@dataclass(frozen=True)
class DrawnInstance:
    graph: WeightedMultigraph
    crossing_nodes: frozenset
    segments: Mapping[int, Segment]
    edge_segments: Mapping[int, tuple]
    rotation: Mapping[int, tuple]
    next_id: int

    @property
    def k(self) -> int:
        return len(self.crossing_nodes)

    @property
    def nodes(self) -> list:
        return sorted(self.graph.vertices | self.crossing_nodes)

    def kind(self, node: int) -> str:
        return CROSSING if node in self.crossing_nodes else VERTEX

    def dart_node(self, dart) -> int:
        return self.segments[dart[0]].node(dart[1])

    def dart_edge(self, dart) -> Edge:
        return self.graph.edges[self.segments[dart[0]].edge]

    def node_sequence(self, eid: int) -> list:
        """ Nodes met along the edge from edge.u to edge.v, crossings included. """
        segs = [self.segments[s] for s in self.edge_segments[eid]]
        return [segs[0].tail] + [s.head for s in segs]

    def crossing_count(self, eid: int) -> int:
        return len(self.edge_segments[eid]) - 1

    @cached_property
    def crossings(self) -> tuple:
        found = []
        for node in sorted(self.crossing_nodes):
            darts = self.rotation[node]
            pair = (self.segments[darts[0][0]].edge, self.segments[darts[1][0]].edge)
            positions = tuple(self.node_sequence(e).index(node) for e in pair)
            found.append(Crossing(node, pair, positions))
        return tuple(found)

    def crossing_darts(self, node: int) -> tuple:
        """ The four darts at a crossing node, rotated to start at the smallest segment id. """
        darts = self.rotation[node]
        start = min(range(len(darts)), key=lambda i: darts[i][0])
        return darts[start:] + darts[:start]

    def edit(self) -> 'DrawingEditor':
        return DrawingEditor(self)


def trace_faces(rotation: Mapping[int, tuple]) -> list:
    position = {}
    for node, darts in rotation.items():
        for i, dart in enumerate(darts):
            if dart in position:
                raise DrawingError(f"Dart {dart} appears twice in the rotation system (node {node}).")
            position[dart] = (node, i)
    found = []
    seen = set()
    for start in sorted(position):
        if start in seen:
            continue
        boundary = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            boundary.append(dart)
            back = twin(dart)
            if back not in position:
                raise DrawingError(f"Segment {dart[0]} has a dangling end: traversal from {start} does not close.")
            node, i = position[back]
            ring = rotation[node]
            dart = ring[(i + 1) % len(ring)]
        if dart != start:
            raise DrawingError(f"Face traversal from dart {start} does not close.")
        found.append(Face(tuple(boundary)))
    return found


def faces(d: DrawnInstance) -> list:
    """ All faces of the sphere embedding; every dart is used exactly once. """
    return trace_faces(d.rotation)


def skeleton_components(d: DrawnInstance) -> list:
    g = nx.MultiGraph()
    g.add_nodes_from(d.nodes)
    for seg in d.segments.values():
        g.add_edge(seg.tail, seg.head, key=seg.id)
    return sorted((frozenset(c) for c in nx.connected_components(g)), key=min)


def is_one_planar(d: DrawnInstance) -> bool:
    """ True iff no edge takes part in two or more crossings. """
    return all(len(segs) <= 2 for segs in d.edge_segments.values())


def validate(d: DrawnInstance) -> Optional[str]:
    """ Returns None for a valid drawing, otherwise the first violated invariant. """
    nodes = set(d.graph.vertices) | set(d.crossing_nodes)
    if d.graph.vertices & d.crossing_nodes:
        return f"Node {min(d.graph.vertices & d.crossing_nodes)} is both a vertex and a crossing."
    if set(d.rotation) != nodes:
        extra = sorted(set(d.rotation) ^ nodes)
        return f"Node {extra[0]} is missing from the rotation system or unknown."

    seen = set()
    for node in sorted(d.rotation):
        for dart in d.rotation[node]:
            seg = d.segments.get(dart[0])
            if seg is None or dart[1] not in (TAIL, HEAD):
                return f"Node {node} lists unknown dart {dart}."
            if seg.node(dart[1]) != node:
                return f"Node {node} lists dart {dart} whose end lies at node {seg.node(dart[1])}."
            seen.add(dart)
    for sid in sorted(d.segments):
        for end in (TAIL, HEAD):
            if (sid, end) not in seen:
                return f"Segment {sid} end {end} is missing from every rotation."

    owned = {}
    for eid, edge in d.graph.edges.items():
        segs = d.edge_segments.get(eid)
        if not segs:
            return f"Edge {eid} has no segments."
        for sid in segs:
            if sid in owned or d.segments[sid].edge != eid:
                return f"Segment {sid} is not owned by edge {eid} alone."
            owned[sid] = eid
        chain = [d.segments[s] for s in segs]
        if chain[0].tail != edge.u or chain[-1].head != edge.v:
            return f"Segments of edge {eid} do not run from {edge.u} to {edge.v}."
        for left, right in zip(chain, chain[1:]):
            if left.head != right.tail or left.head not in d.crossing_nodes:
                return f"Segments {left.id} and {right.id} of edge {eid} do not meet at a crossing."
    if set(owned) != set(d.segments):
        return f"Segment {min(set(d.segments) - set(owned))} belongs to no edge."

    for node in sorted(d.crossing_nodes):
        darts = d.rotation[node]
        if len(darts) != 4:
            return f"Crossing {node} has degree {len(darts)} instead of 4."
        edges = [d.segments[s].edge for s, _ in darts]
        if edges[0] != edges[2] or edges[1] != edges[3]:
            return f"Crossing {node}: segments of the same edge are not opposite."
        if edges[0] == edges[1]:
            return f"Crossing {node}: edge {edges[0]} crosses itself."

    try:
        face_list = faces(d)
    except DrawingError as exc:
        return exc.message
    face_of = {}
    for i, face in enumerate(face_list):
        for dart in face.boundary:
            face_of[dart] = i
    for component in skeleton_components(d):
        segs = [s for s in d.segments.values() if s.tail in component]
        count = len({face_of[(s.id, end)] for s in segs for end in (TAIL, HEAD)}) if segs else 1
        if len(component) - len(segs) + count != 2:
            return f"Component of node {min(component)} violates Euler's formula (V={len(component)}, E={len(segs)}, F={count})."
    return None


def ensure_valid(d: DrawnInstance) -> DrawnInstance:
    problem = validate(d)
    if problem:
        raise DrawingError(problem, code='invalid_drawing')
    return d


class DrawingEditor:
    """ Mutable working copy of a drawing used by the surgeries; `finish()` freezes it. """

    def __init__(self, drawing: DrawnInstance):
        self.vertices = set(drawing.graph.vertices)
        self.edges = dict(drawing.graph.edges)
        self.crossing_nodes = set(drawing.crossing_nodes)
        self.segments = dict(drawing.segments)
        self.edge_segments = {e: list(s) for e, s in drawing.edge_segments.items()}
        self.rotation = {n: list(r) for n, r in drawing.rotation.items()}
        self.next_id = drawing.next_id

    def allocate(self) -> int:
        fresh = self.next_id
        self.next_id += 1
        return fresh

    def add_vertex(self) -> int:
        v = self.allocate()
        self.vertices.add(v)
        self.rotation[v] = []
        return v

    def add_crossing_node(self) -> int:
        x = self.allocate()
        self.crossing_nodes.add(x)
        self.rotation[x] = []
        return x

    def add_edge(self, u: int, v: int, weight) -> int:
        eid = self.allocate()
        self.edges[eid] = Edge(eid, u, v, as_rational(weight))
        self.edge_segments[eid] = []
        return eid

    def add_segment(self, eid: int, tail: int, head: int) -> int:
        sid = self.allocate()
        self.segments[sid] = Segment(sid, eid, tail, head)
        self.edge_segments[eid].append(sid)
        return sid

    def set_edge(self, eid: int, u: int, v: int):
        self.edges[eid] = Edge(eid, u, v, self.edges[eid].weight)

    def move_end(self, dart, node: int):
        seg = self.segments[dart[0]]
        if dart[1] == TAIL:
            self.segments[seg.id] = Segment(seg.id, seg.edge, node, seg.head)
        else:
            self.segments[seg.id] = Segment(seg.id, seg.edge, seg.tail, node)

    def dart_node(self, dart) -> int:
        return self.segments[dart[0]].node(dart[1])

    def insert_before(self, node: int, anchor, dart):
        ring = self.rotation[node]
        ring.insert(ring.index(anchor), dart)

    def insert_after(self, node: int, anchor, dart):
        ring = self.rotation[node]
        ring.insert(ring.index(anchor) + 1, dart)

    def replace_dart(self, node: int, old, new):
        ring = self.rotation[node]
        ring[ring.index(old)] = new

    def remove_dart(self, node: int, dart):
        self.rotation[node].remove(dart)

    def remove_edge(self, eid: int):
        for sid in list(self.edge_segments[eid]):
            seg = self.segments[sid]
            self.remove_dart(seg.tail, (sid, TAIL))
            self.remove_dart(seg.head, (sid, HEAD))
            del self.segments[sid]
        del self.edge_segments[eid]
        del self.edges[eid]

    def forget_edge(self, eid: int):
        """ Drops an edge and its segments whose darts were already replaced in every rotation. """
        for sid in self.edge_segments.pop(eid):
            del self.segments[sid]
        del self.edges[eid]

    def remove_node(self, node: int):
        if self.rotation.pop(node):
            raise DrawingError(f"Node {node} still has incident segments.")
        self.vertices.discard(node)
        self.crossing_nodes.discard(node)

    def add_chord(self, face: tuple, i: int, j: int, weight=0) -> int:
        """
        Splits a face by a new single-segment edge from corner i to corner j
        (corner i is the node the i-th boundary dart leaves from). Returns the edge id.
        """
        u, v = self.dart_node(face[i]), self.dart_node(face[j])
        eid = self.add_edge(u, v, weight)
        sid = self.add_segment(eid, u, v)
        self.insert_before(u, face[i], (sid, TAIL))
        self.insert_before(v, face[j], (sid, HEAD))
        return eid

    def add_hub(self, face: tuple, weight=0):
        """ Places a new vertex inside a face and joins it to every corner. """
        hub = self.add_vertex()
        spokes = []
        for dart in face:
            corner = self.dart_node(dart)
            eid = self.add_edge(corner, hub, weight)
            sid = self.add_segment(eid, corner, hub)
            self.insert_before(corner, dart, (sid, TAIL))
            spokes.append((eid, sid))
        self.rotation[hub] = [(sid, HEAD) for _, sid in reversed(spokes)]
        return hub, [eid for eid, _ in spokes]

    def finish(self) -> DrawnInstance:
        graph = WeightedMultigraph(frozenset(self.vertices), dict(sorted(self.edges.items())), self.next_id)
        return DrawnInstance(
            graph=graph,
            crossing_nodes=frozenset(self.crossing_nodes),
            segments=dict(sorted(self.segments.items())),
            edge_segments={e: tuple(s) for e, s in sorted(self.edge_segments.items())},
            rotation={n: tuple(r) for n, r in sorted(self.rotation.items())},
            next_id=self.next_id,
        )


def assemble(vertices, crossing_nodes, edges, edge_segments, rotation, next_id=None) -> DrawnInstance:
    """
    Builds a drawing from the combinatorial description: edges as
    (id, u, v, weight), per-edge ordered segment ids and per-node
    counterclockwise lists of segment ids. A rotation entry is either a
    segment id (its end at that node is inferred) or an explicit
    (segment id, end) pair, which is needed only to order the two ends of
    a self-loop; a bare loop id lists the tail end first.
    """
    vertices = frozenset(vertices)
    crossing_nodes = frozenset(crossing_nodes)
    graph = WeightedMultigraph.build(vertices, edges)

    occurrences = {}
    for node, entries in rotation.items():
        for entry in entries:
            sid = entry[0] if isinstance(entry, (tuple, list)) else entry
            occurrences.setdefault(sid, []).append(node)

    segments = {}
    for eid, edge in graph.edges.items():
        sids = list(edge_segments.get(eid, ()))
        if not sids:
            raise DrawingError(f"Edge {eid} has no segments.")
        node = edge.u
        for position, sid in enumerate(sids):
            if sid in segments:
                raise DrawingError(f"Segment {sid} is used twice.")
            seen_at = occurrences.get(sid, [])
            if len(seen_at) != 2 or node not in seen_at:
                raise DrawingError(f"Segment {sid} of edge {eid} must appear at exactly its two end nodes.")
            rest = list(seen_at)
            rest.remove(node)
            head = rest[0]
            last = position == len(sids) - 1
            if last and head != edge.v:
                raise DrawingError(f"Segment {sid} does not end at vertex {edge.v} of edge {eid}.")
            if not last and head not in crossing_nodes:
                raise DrawingError(f"Segment {sid} of edge {eid} must end at a crossing node.")
            segments[sid] = Segment(sid, eid, node, head)
            node = head

    darts = {}
    for node, entries in rotation.items():
        ring = []
        for entry in entries:
            if isinstance(entry, (tuple, list)):
                sid, end = int(entry[0]), entry[1]
                end = {'tail': TAIL, 'head': HEAD}.get(end, end)
            else:
                sid = entry
                seg = segments.get(sid)
                if seg is None:
                    raise DrawingError(f"Node {node} lists unknown segment {sid}.")
                if seg.tail == seg.head:
                    end = HEAD if (sid, TAIL) in ring else TAIL
                else:
                    end = TAIL if seg.tail == node else HEAD
            ring.append((sid, end))
        darts[node] = tuple(ring)
    for node in vertices | crossing_nodes:
        darts.setdefault(node, ())

    used = max([*vertices, *crossing_nodes, *graph.edges, *segments, -1])
    if next_id is None:
        next_id = used + 1
    if next_id <= used:
        raise DrawingError(f"next_id {next_id} would reuse id {used}.")
    return DrawnInstance(
        graph=WeightedMultigraph(graph.vertices, graph.edges, next_id),
        crossing_nodes=crossing_nodes,
        segments=dict(sorted(segments.items())),
        edge_segments={e: tuple(edge_segments[e]) for e in sorted(graph.edges)},
        rotation=dict(sorted(darts.items())),
        next_id=next_id,
    )


def planar_drawing(vertices, edges, rotation) -> DrawnInstance:
    """ Crossing-free drawing: each edge is one segment carrying the edge's own id. """
    edges = list(edges)
    return assemble(vertices, (), edges, {e[0]: (e[0],) for e in edges}, rotation)
