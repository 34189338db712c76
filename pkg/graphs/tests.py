# graphs/tests.py
import json
from fractions import Fraction
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from .embedding import HEAD, TAIL, assemble, faces, is_one_planar, planar_drawing, validate
from .exceptions import DrawingError, GraphError
from .multigraph import CutSolution, WeightedMultigraph, as_rational, contract, cut_value, degree, format_rational
from .serializers import dump_drawing, load_drawing

FIXTURES = Path(__file__).resolve().parent.parent / 'solver' / 'fixtures'


def fixture(name):
    return json.loads((FIXTURES / name).read_text())


def crossing_document(rotation_at_crossing):
    # edges 5 (0 -> 1) and 8 (2 -> 3) cross at node 4
    return {
        'format': 'combinatorial',
        'nodes': [
            {'id': 0, 'rotation': [6]},
            {'id': 1, 'rotation': [7]},
            {'id': 2, 'rotation': [9]},
            {'id': 3, 'rotation': [10]},
            {'id': 4, 'kind': 'crossing', 'rotation': rotation_at_crossing},
        ],
        'edges': [
            {'id': 5, 'u': 0, 'v': 1, 'weight': '3/2', 'segments': [6, 7]},
            {'id': 8, 'u': 2, 'v': 3, 'weight': -2, 'segments': [9, 10]},
        ],
    }


graph_edges = st.lists(
    st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-5, 5)),
    max_size=12,
)


class MultigraphTests(SimpleTestCase):
    def test_as_rational(self):
        # Test exact parsing and normalisation of weights
        self.assertEqual(as_rational('3/6'), Fraction(1, 2))
        self.assertEqual(as_rational(-4), Fraction(-4))
        self.assertEqual(as_rational(' 7 '), Fraction(7))
        for bad in (1.5, True, 'x/2', '1/0', None):
            with self.assertRaises(GraphError):
                as_rational(bad)

    def test_format_rational(self):
        self.assertEqual(format_rational(Fraction(4, 2)), '2')
        self.assertEqual(format_rational(Fraction(-2, 6)), '-1/3')

    def test_build_rejects_bad_edges(self):
        with self.assertRaises(GraphError):
            WeightedMultigraph.build([0, 1], [(2, 0, 1, 1), (2, 1, 0, 1)])
        with self.assertRaises(GraphError):
            WeightedMultigraph.build([0, 1], [(2, 0, 5, 1)])
        with self.assertRaises(GraphError):
            WeightedMultigraph.build([0], [(1, 0, 0, 1)], allow_loops=False)

    def test_degree_counts_loops_twice(self):
        g = WeightedMultigraph.build([0, 1], [(2, 0, 0, 1), (3, 0, 1, 1), (4, 0, 1, 2)])
        self.assertEqual(degree(g, 0), 4)
        self.assertEqual(degree(g, 1), 2)
        self.assertEqual(g.total_weight, Fraction(4))

    def test_contract_turns_shared_edges_into_loops(self):
        # Test contraction of two adjacent triangle vertices
        g = WeightedMultigraph.build([0, 1, 2], [(3, 0, 1, 5), (4, 1, 2, 1), (5, 2, 0, 1)])
        merged_graph, merged = contract(g, 0, 1)
        self.assertEqual(merged, 6)
        self.assertEqual(merged_graph.vertices, frozenset({2, 6}))
        self.assertTrue(merged_graph.edges[3].is_loop)
        self.assertEqual(merged_graph.next_id, 7)
        with self.assertRaises(GraphError):
            contract(g, 0, 0)
        with self.assertRaises(GraphError):
            contract(g, 0, 9)

    def test_cut_value_needs_every_side(self):
        g = WeightedMultigraph.build([0, 1], [(2, 0, 1, 3)])
        self.assertEqual(cut_value(g, {0: 0, 1: 1}), Fraction(3))
        with self.assertRaises(GraphError):
            cut_value(g, {0: 0})

    def test_components_ordered_by_smallest_vertex(self):
        g = WeightedMultigraph.build([0, 1, 2, 3], [(4, 3, 1, 1)])
        self.assertEqual(g.components(), [frozenset({0}), frozenset({1, 3}), frozenset({2})])

    @settings(max_examples=50, deadline=None)
    @given(graph_edges, st.lists(st.integers(0, 1), min_size=6, max_size=6))
    def test_cut_value_is_flip_symmetric(self, edges, sides):
        g = WeightedMultigraph.build(range(6), [(10 + i, u, v, w) for i, (u, v, w) in enumerate(edges)])
        solution = CutSolution(dict(enumerate(sides)), cut_value(g, dict(enumerate(sides))))
        flipped = solution.flipped()
        self.assertTrue(flipped.check(g))
        self.assertEqual(flipped.value, solution.value)


class EmbeddingTests(SimpleTestCase):
    def test_cycle_has_two_faces(self):
        d = load_drawing(fixture('cycle_5.json'))
        self.assertEqual(d.k, 0)
        self.assertEqual(sorted(len(f) for f in faces(d)), [5, 5])

    def test_single_crossing_document(self):
        d = load_drawing(crossing_document([7, 10, 6, 9]))
        self.assertEqual(d.k, 1)
        self.assertTrue(is_one_planar(d))
        self.assertEqual(d.crossings[0].node, 4)
        self.assertEqual(set(d.crossings[0].edges), {5, 8})
        self.assertEqual(d.graph.edges[5].weight, Fraction(3, 2))
        self.assertEqual(d.node_sequence(8), [2, 4, 3])
        self.assertEqual(len(faces(d)), 1)

    def test_crossing_with_adjacent_segments_of_one_edge_is_rejected(self):
        with self.assertRaises(DrawingError):
            load_drawing(crossing_document([7, 6, 10, 9]))

    def test_rotation_must_list_every_segment_end(self):
        document = crossing_document([7, 10, 6, 9])
        document['nodes'][0]['rotation'] = []
        with self.assertRaises(DrawingError):
            load_drawing(document)

    def test_euler_violation_is_reported(self):
        # two triangles sharing vertex 0 but drawn with interleaved rotations
        edges = [(10, 0, 1, 1), (11, 1, 2, 1), (12, 2, 0, 1), (13, 0, 3, 1), (14, 3, 4, 1), (15, 4, 0, 1)]
        good = planar_drawing(range(5), edges, {
            0: [10, 12, 13, 15], 1: [11, 10], 2: [12, 11], 3: [14, 13], 4: [15, 14],
        })
        self.assertIsNone(validate(good))
        bad = planar_drawing(range(5), edges, {
            0: [10, 13, 12, 15], 1: [11, 10], 2: [12, 11], 3: [14, 13], 4: [15, 14],
        })
        self.assertIn("Euler", validate(bad))

    def test_loop_ends_need_explicit_order(self):
        d = assemble([0, 1], [], [(2, 0, 0, 1), (3, 0, 1, 1)], {2: [2], 3: [3]}, {0: [[2, 'tail'], 3, [2, 'head']], 1: [3]})
        self.assertEqual(d.rotation[0], ((2, TAIL), (3, TAIL), (2, HEAD)))
        self.assertIsNone(validate(d))

    def test_editor_chord_splits_a_face(self):
        d = load_drawing(fixture('cycle_5.json'))
        face = faces(d)[0]
        ed = d.edit()
        eid = ed.add_chord(face.boundary, 0, 2)
        split = ed.finish()
        self.assertIsNone(validate(split))
        self.assertEqual(sorted(len(f) for f in faces(split)), [3, 4, 5])
        self.assertEqual(split.graph.edges[eid].weight, 0)

    def test_editor_hub_joins_every_corner(self):
        d = load_drawing(fixture('cycle_5.json'))
        ed = d.edit()
        hub, spokes = ed.add_hub(faces(d)[0].boundary)
        with_hub = ed.finish()
        self.assertIsNone(validate(with_hub))
        self.assertEqual(len(spokes), 5)
        self.assertEqual(degree(with_hub.graph, hub), 5)
        self.assertEqual(sorted(len(f) for f in faces(with_hub)), [3, 3, 3, 3, 3, 5])


class GeometryTests(SimpleTestCase):
    def test_k5_with_one_crossing(self):
        # Test that AE and BD cross exactly once
        d = load_drawing(fixture('k5_one_crossing.json'))
        self.assertEqual(d.k, 1)
        self.assertEqual(set(d.crossings[0].edges), {8, 10})
        self.assertTrue(is_one_planar(d))
        self.assertEqual(len(d.graph.edges), 10)

    def test_k6_with_three_crossings(self):
        d = load_drawing(fixture('k6_three_crossings.json'))
        self.assertEqual(d.k, 3)
        self.assertTrue(is_one_planar(d))

    def test_convex_k5_is_not_one_planar(self):
        d = load_drawing(fixture('k5_convex.json'))
        self.assertEqual(d.k, 5)
        self.assertFalse(is_one_planar(d))

    def test_grid_is_planar(self):
        d = load_drawing(fixture('grid_3x3.json'))
        self.assertEqual(d.k, 0)
        self.assertEqual(len(faces(d)), 5)

    def test_triple_point_is_rejected(self):
        with self.assertRaisesMessage(DrawingError, 'Three or more edges'):
            load_drawing(fixture('triple_point.json'))

    def test_vertex_on_an_edge_is_rejected(self):
        document = {
            'format': 'geometric',
            'vertices': [{'id': 0, 'x': 0, 'y': 0}, {'id': 1, 'x': 2, 'y': 0}, {'id': 2, 'x': 1, 'y': 0}, {'id': 3, 'x': 1, 'y': 1}],
            'edges': [{'id': 4, 'u': 0, 'v': 1}, {'id': 5, 'u': 2, 'v': 3}],
        }
        with self.assertRaisesMessage(DrawingError, 'Vertex 2 lies on edge 4'):
            load_drawing(document)

    def test_bends_route_around_an_obstacle(self):
        # edge 4 bends over vertex 2 instead of running through it
        document = {
            'format': 'geometric',
            'vertices': [{'id': 0, 'x': 0, 'y': 0}, {'id': 1, 'x': 2, 'y': 0}, {'id': 2, 'x': 1, 'y': 0}, {'id': 3, 'x': 1, 'y': -1}],
            'edges': [{'id': 4, 'u': 0, 'v': 1, 'bends': [[1, 1]]}, {'id': 5, 'u': 2, 'v': 3, 'weight': '1/2'}],
        }
        d = load_drawing(document)
        self.assertEqual(d.k, 0)
        self.assertEqual(d.graph.edges[5].weight, Fraction(1, 2))


class SerializerTests(SimpleTestCase):
    def test_float_weight_is_rejected(self):
        document = fixture('cycle_5.json')
        document['edges'][0]['weight'] = 1.5
        with self.assertRaises(DrawingError):
            load_drawing(document)

    def test_unknown_format_is_rejected(self):
        with self.assertRaisesMessage(DrawingError, 'Unknown format'):
            load_drawing({'format': 'svg'})

    def test_duplicate_ids_are_rejected(self):
        document = fixture('cycle_5.json')
        document['edges'][1]['id'] = 5
        with self.assertRaises(DrawingError):
            load_drawing(document)

    def test_dump_then_load_keeps_the_rotation_system(self):
        d = load_drawing(fixture('k5_one_crossing.json'))
        again = load_drawing(dump_drawing(d))
        self.assertEqual(again.rotation, d.rotation)
        self.assertEqual(again.crossing_nodes, d.crossing_nodes)
        self.assertEqual(again.next_id, d.next_id)
