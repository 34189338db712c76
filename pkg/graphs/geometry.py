# graphs/geometry.py
"""
Ingestion of straight-line / polyline drawings.

All coordinates are exact rationals. Degenerate drawings (collinear overlaps,
three edges through one point, a vertex or bend point on another edge) are
rejected with a diagnostic; nothing is ever perturbed because that would
change the number of crossings.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations

from .embedding import HEAD, TAIL, DrawnInstance, Segment
from .exceptions import DrawingError
from .multigraph import WeightedMultigraph, as_rational

logger = logging.getLogger(__name__)


def cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def dot(a, b) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def orientation(a, b, c) -> int:
    value = cross(sub(b, a), sub(c, a))
    return (value > 0) - (value < 0)


def on_piece(p, a, b) -> bool:
    """ True if p lies on the closed segment ab. """
    if orientation(a, b, p) != 0:
        return False
    return dot(sub(p, a), sub(b, a)) >= 0 and dot(sub(p, b), sub(a, b)) >= 0


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def compare_directions(a, b) -> int:
    """ Counterclockwise order of direction vectors starting from the positive x-axis. """
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    turn = cross(a, b)
    return -1 if turn > 0 else (1 if turn < 0 else 0)


@dataclass(frozen=True)
class Piece:
    edge: int
    index: int
    start: tuple
    end: tuple
    start_is_vertex: bool
    end_is_vertex: bool


def _point(raw, where):
    try:
        x, y = raw
        return (as_rational(x), as_rational(y))
    except (TypeError, ValueError) as exc:
        raise DrawingError(f"Bad coordinates for {where}: {raw!r} ({exc}).")


def detect_crossings(vertices, edges) -> DrawnInstance:
    """
    vertices: mapping id -> (x, y); edges: iterable of (id, u, v, weight, bends)
    where bends is a (possibly empty) list of interior polyline points.
    Returns the drawing with one crossing node per proper interior intersection.
    """
    position = {v: _point(p, f"vertex {v}") for v, p in vertices.items()}
    by_point = {}
    for v, p in sorted(position.items()):
        if p in by_point:
            raise DrawingError(f"Vertices {by_point[p]} and {v} share the point {p}.")
        by_point[p] = v

    edge_rows = []
    pieces = []
    for eid, u, v, weight, bends in sorted(edges, key=lambda row: row[0]):
        if u not in position or v not in position:
            raise DrawingError(f"Edge {eid} references an unknown vertex.")
        if u == v:
            raise DrawingError(f"Edge {eid} is a self-loop; geometric drawings must be loop-free.")
        points = [position[u]] + [_point(b, f"bend of edge {eid}") for b in bends] + [position[v]]
        for i, (a, b) in enumerate(zip(points, points[1:])):
            if a == b:
                raise DrawingError(f"Edge {eid} has a zero-length piece at {a}.")
            pieces.append(Piece(eid, i, a, b, i == 0, i == len(points) - 2))
        edge_rows.append((eid, u, v, as_rational(weight), len(points) - 1))

    for v, p in sorted(position.items()):
        for piece in pieces:
            ends = (piece.start if piece.start_is_vertex else None, piece.end if piece.end_is_vertex else None)
            if p in ends:
                continue
            if on_piece(p, piece.start, piece.end):
                raise DrawingError(f"Vertex {v} lies on edge {piece.edge}.")

    hits = []
    for first, second in combinations(pieces, 2):
        hit = _intersect(first, second)
        if hit is not None:
            hits.append(hit)

    seen = {}
    for point, *_ in hits:
        if point in seen:
            raise DrawingError(f"Three or more edges meet at the point {point}.")
        seen[point] = True

    return _build(position, edge_rows, pieces, hits)


def _intersect(first: Piece, second: Piece):
    a, b, c, d = first.start, first.end, second.start, second.end
    same_edge = first.edge == second.edge
    r, s = sub(b, a), sub(d, c)
    denom = cross(r, s)
    if denom == 0:
        if cross(sub(c, a), r) != 0:
            return None
        shared = {a, b} & {c, d}
        length = dot(r, r)
        lo, hi = sorted((dot(sub(c, a), r), dot(sub(d, a), r)))
        overlap = min(hi, length) - max(lo, Fraction(0))
        if overlap > 0:
            raise DrawingError(f"Edges {first.edge} and {second.edge} overlap along a collinear stretch.")
        if overlap == 0 and not shared:
            raise DrawingError(f"Edges {first.edge} and {second.edge} touch end to end at a non-shared point.")
        return None

    t = cross(sub(c, a), s) / denom
    u = cross(sub(c, a), r) / denom
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return None
    point = (a[0] + t * r[0], a[1] + t * r[1])
    interior_first = 0 < t < 1
    interior_second = 0 < u < 1
    if interior_first and interior_second:
        if same_edge:
            raise DrawingError(f"Edge {first.edge} crosses itself at {point}.")
        return (point, first, t, second, u)
    # touching at an end point of at least one piece
    if same_edge and abs(first.index - second.index) == 1 and not (interior_first or interior_second):
        return None
    if not (interior_first or interior_second):
        first_vertex = (t == 0 and first.start_is_vertex) or (t == 1 and first.end_is_vertex)
        second_vertex = (u == 0 and second.start_is_vertex) or (u == 1 and second.end_is_vertex)
        if first_vertex and second_vertex:
            return None
    raise DrawingError(f"Edges {first.edge} and {second.edge} touch at {point} without a proper crossing.")


def _build(position, edge_rows, pieces, hits) -> DrawnInstance:
    ids = [*position, *(row[0] for row in edge_rows), -1]
    next_id = max(ids) + 1

    along = {row[0]: [] for row in edge_rows}
    hits = sorted(hits, key=lambda h: (h[1].edge, h[3].edge, h[1].index, h[2], h[3].index, h[4]))
    crossing_of = {}
    for point, first, t, second, u in hits:
        node = next_id
        next_id += 1
        crossing_of[point] = node
        along[first.edge].append(((first.index, t), node, first))
        along[second.edge].append(((second.index, u), node, second))

    segments = {}
    edge_segments = {}
    directions = {}
    for eid, u, v, weight, count in edge_rows:
        stops = sorted(along[eid], key=lambda item: item[0])
        sequence = [u] + [node for _, node, _ in stops] + [v]
        own = [p for p in pieces if p.edge == eid]
        # direction leaving each stop forward and backward along the edge
        forward = [sub(own[0].end, own[0].start)] + [sub(p.end, p.start) for _, _, p in stops]
        backward = [sub(p.start, p.end) for _, _, p in stops] + [sub(own[-1].start, own[-1].end)]
        sids = []
        for i, (tail, head) in enumerate(zip(sequence, sequence[1:])):
            sid = next_id
            next_id += 1
            segments[sid] = Segment(sid, eid, tail, head)
            directions.setdefault(tail, []).append(((sid, TAIL), forward[i]))
            directions.setdefault(head, []).append(((sid, HEAD), backward[i]))
            sids.append(sid)
        edge_segments[eid] = tuple(sids)

    rotation = {}
    for node in sorted([*position, *crossing_of.values()]):
        entries = directions.get(node, [])
        order = cmp_to_key(lambda x, y: compare_directions(x[1], y[1]))
        entries = sorted(entries, key=order)
        for left, right in zip(entries, entries[1:]):
            if compare_directions(left[1], right[1]) == 0:
                raise DrawingError(f"Two segments leave node {node} in the same direction.")
        rotation[node] = tuple(dart for dart, _ in entries)

    graph = WeightedMultigraph.build(
        position, [(eid, u, v, w) for eid, u, v, w, _ in edge_rows], allow_loops=False, next_id=next_id
    )
    logger.debug(f"Geometric drawing ingested: {len(crossing_of)} crossing(s).")
    return DrawnInstance(
        graph=WeightedMultigraph(graph.vertices, graph.edges, next_id),
        crossing_nodes=frozenset(crossing_of.values()),
        segments=segments,
        edge_segments=edge_segments,
        rotation=rotation,
        next_id=next_id,
    )
