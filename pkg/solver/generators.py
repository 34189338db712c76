# solver/generators.py
"""
Seeded random instances for the oracle suites.

Drawings are built combinatorially: a random plane forest, random chords
inside faces, then k crossings planted by routing a new edge from a corner
of one face, across a segment, to a corner of the neighbouring face.
"""
import logging
import random
from fractions import Fraction

from graphs.embedding import HEAD, TAIL, DrawnInstance, Segment, assemble, ensure_valid, faces
from graphs.multigraph import WeightedMultigraph, degree
from reductions.duality import DualBFactorInstance

logger = logging.getLogger(__name__)

DEFAULT_WEIGHTS = (-5, 5)


def _weight(rng, weights) -> int:
    return rng.randint(*weights)


def _forest(rng, n, components, weights):
    d = assemble(range(n), (), [], {}, {v: () for v in range(n)}, next_id=n)
    ed = d.edit()
    groups = [list(range(n))[i::components] for i in range(components)] if n else []
    for group in groups:
        for i, v in enumerate(group[1:], start=1):
            u = rng.choice(group[:i])
            eid = ed.add_edge(u, v, _weight(rng, weights))
            sid = ed.add_segment(eid, u, v)
            ring = ed.rotation[u]
            ring.insert(rng.randint(0, len(ring)), (sid, TAIL))
            ed.rotation[v].append((sid, HEAD))
    return ed.finish()


def _add_chord(rng, d: DrawnInstance, weights):
    options = []
    for face in faces(d):
        for i, hi in enumerate(face.boundary):
            for j, hj in enumerate(face.boundary):
                u, v = d.dart_node(hi), d.dart_node(hj)
                if i < j and u != v and u in d.graph.vertices and v in d.graph.vertices:
                    options.append((face.boundary, i, j))
    if not options:
        return d
    boundary, i, j = rng.choice(options)
    ed = d.edit()
    ed.add_chord(boundary, i, j, _weight(rng, weights))
    return ed.finish()


def plant_crossing(d: DrawnInstance, segment: int, hp, hq, weight) -> DrawnInstance:
    """
    Routes a new edge from the corner where dart hp starts (in the face right of
    `segment`) across that segment to the corner where dart hq starts (in the
    face on its left).
    """
    seg = d.segments[segment]
    ed = d.edit()
    p, q = ed.dart_node(hp), ed.dart_node(hq)
    x = ed.add_crossing_node()
    eid = ed.add_edge(p, q, weight)
    t_a = ed.add_segment(eid, p, x)
    t_b = ed.add_segment(eid, x, q)
    ed.insert_before(p, hp, (t_a, TAIL))
    ed.insert_before(q, hq, (t_b, HEAD))

    chain = ed.edge_segments[seg.edge]
    at = chain.index(segment)
    ed.segments.pop(segment)
    s_a = ed.allocate()
    s_b = ed.allocate()
    ed.segments[s_a] = Segment(s_a, seg.edge, seg.tail, x)
    ed.segments[s_b] = Segment(s_b, seg.edge, x, seg.head)
    chain[at:at + 1] = [s_a, s_b]
    ed.replace_dart(seg.tail, (segment, TAIL), (s_a, TAIL))
    ed.replace_dart(seg.head, (segment, HEAD), (s_b, HEAD))
    ed.rotation[x] = [(s_b, TAIL), (t_b, TAIL), (s_a, HEAD), (t_a, HEAD)]
    return ed.finish()


def _crossing_options(d: DrawnInstance, one_planar: bool) -> list:
    face_of = {}
    face_list = faces(d)
    for index, face in enumerate(face_list):
        for dart in face.boundary:
            face_of[dart] = index
    options = []
    for sid, seg in d.segments.items():
        if one_planar and len(d.edge_segments[seg.edge]) > 1:
            continue
        f1, f2 = face_of[(sid, TAIL)], face_of[(sid, HEAD)]
        if f1 == f2:
            continue
        for hp in face_list[f1].boundary:
            for hq in face_list[f2].boundary:
                p, q = d.dart_node(hp), d.dart_node(hq)
                if p != q and p in d.graph.vertices and q in d.graph.vertices:
                    options.append((sid, hp, hq))
    return options


def random_drawn_instance(seed, n, k, weights=DEFAULT_WEIGHTS, one_planar=False, components=1, chords=None):
    """ Reproducible drawing on n vertices with exactly k crossings. """
    if k and n < 2:
        raise ValueError("Planting crossings needs at least two vertices.")
    rng = random.Random(seed)
    components = max(1, min(components, n)) if n else 1
    d = _forest(rng, n, components, weights)
    extra = rng.randint(0, n) if chords is None else chords
    for _ in range(extra):
        d = _add_chord(rng, d, weights)
    for _ in range(k):
        options = _crossing_options(d, one_planar)
        while not options:
            before = len(d.graph.edges)
            d = _add_chord(rng, d, weights)
            if len(d.graph.edges) == before:
                raise ValueError(f"No room to plant a crossing in a drawing on {n} vertices.")
            options = _crossing_options(d, one_planar)
        sid, hp, hq = rng.choice(options)
        d = plant_crossing(d, sid, hp, hq, _weight(rng, weights))
    return ensure_valid(d)


def random_graph(seed, n, m, weights=DEFAULT_WEIGHTS) -> WeightedMultigraph:
    """ Loop-free multigraph with n vertices and m random edges. """
    rng = random.Random(seed)
    edges = []
    for eid in range(n, n + m):
        u, v = rng.sample(range(n), 2)
        edges.append((eid, u, v, _weight(rng, weights)))
    return WeightedMultigraph.build(range(n), edges, allow_loops=False)


def random_bfactor_instance(seed, n, m, weights=DEFAULT_WEIGHTS, loops=True) -> DualBFactorInstance:
    """ Multigraph with optional self-loops and targets 0 <= b(v) <= d(v). """
    rng = random.Random(seed)
    edges = []
    for eid in range(n, n + m):
        u = rng.randrange(n)
        v = u if loops and rng.random() < 0.2 else rng.randrange(n)
        if u == v and not loops:
            v = (u + 1) % n
        edges.append((eid, u, v, Fraction(_weight(rng, weights), rng.choice((1, 1, 3)))))
    g = WeightedMultigraph.build(range(n), edges)
    degrees = {v: degree(g, v) for v in g.vertices}
    b = {v: rng.randint(0, degrees[v]) for v in sorted(g.vertices)}
    return DualBFactorInstance(g, b)


def scaling_family(k, n=40, seed=2024) -> DrawnInstance:
    """ Fixed 40-vertex base with k planted crossings; the base does not depend on k. """
    return random_drawn_instance(seed, n, k, weights=(1, 3), one_planar=True, chords=n)
