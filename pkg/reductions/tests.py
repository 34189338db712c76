# reductions/tests.py
import json
from fractions import Fraction
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from graphs.embedding import assemble, faces, is_one_planar, planar_drawing, validate
from graphs.multigraph import WeightedMultigraph
from graphs.serializers import load_drawing
from solver.generators import random_drawn_instance
from solver.oracle import brute_bfactor, brute_cmc, brute_mc
from solver.pipeline import finish_leaf, prepare
from .branching import ConstrainedInstance, enumerate_branches
from .duality import BC, CD, DA, LOOP, PSEUDO, build_dual, check_feasibility, pseudo_face_weights, triangulate
from .exceptions import GadgetError
from .gadgets import (
    conflict_split, conflicting_crossings, eliminate_conflicts, inner_face, normalize_small_faces,
    preprocess_crossings, preprocessing_problem, prune_drawing, remove_degree_one, replay, subdivide_edge,
)
from .ledger import DEGREE_ONE, SUBDIVIDE, OffsetLedger, Subdivide, TransformLog

FIXTURES = Path(__file__).resolve().parent.parent / 'solver' / 'fixtures'

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def fixture(name):
    return load_drawing(json.loads((FIXTURES / name).read_text()))


def crossed_pair():
    # edges 5 (0 -> 1, weight 3/2) and 8 (2 -> 3, weight -2) crossing at node 4
    return load_drawing({
        'format': 'combinatorial',
        'nodes': [
            {'id': 0, 'rotation': [6]},
            {'id': 1, 'rotation': [7]},
            {'id': 2, 'rotation': [9]},
            {'id': 3, 'rotation': [10]},
            {'id': 4, 'kind': 'crossing', 'rotation': [7, 10, 6, 9]},
        ],
        'edges': [
            {'id': 5, 'u': 0, 'v': 1, 'weight': '3/2', 'segments': [6, 7]},
            {'id': 8, 'u': 2, 'v': 3, 'weight': -2, 'segments': [9, 10]},
        ],
    })


def comb(t):
    # edge 2t + 2 runs along the x-axis and is crossed by t vertical edges
    vertices = [{'id': 0, 'x': 0, 'y': 0}, {'id': 1, 'x': t + 1, 'y': 0}]
    edges = [{'id': 2 * t + 2, 'u': 0, 'v': 1, 'weight': 2}]
    for i in range(t):
        low, high = 2 + 2 * i, 3 + 2 * i
        vertices += [{'id': low, 'x': i + 1, 'y': -1}, {'id': high, 'x': i + 1, 'y': 1}]
        edges.append({'id': 2 * t + 3 + i, 'u': low, 'v': high, 'weight': (-1) ** i})
    return load_drawing({'format': 'geometric', 'vertices': vertices, 'edges': edges})


def preprocessed(name):
    d, _, _ = eliminate_conflicts(fixture(name))
    d, _, _ = preprocess_crossings(d)
    return d


class LedgerTests(SimpleTestCase):
    def test_signed_entries(self):
        ledger = OffsetLedger().record(SUBDIVIDE, (1, 2, 3, 4), 4).record(DEGREE_ONE, (5, 6), 3, -1)
        self.assertEqual(len(ledger), 2)
        self.assertEqual(ledger.total, Fraction(1))
        self.assertEqual(ledger.entries[1].as_dict(), {'tag': DEGREE_ONE, 'ids': [5, 6], 'offset': '-3'})

    @given(st.lists(rationals.map(abs)), st.lists(rationals.map(abs)))
    def test_concatenated_ledgers_add_up(self, first, second):
        a = OffsetLedger()
        for i, magnitude in enumerate(first):
            a = a.record(SUBDIVIDE, (i,), magnitude)
        b = OffsetLedger()
        for i, magnitude in enumerate(second):
            b = b.record(DEGREE_ONE, (i,), magnitude, -1)
        self.assertEqual((a + b).total, a.total + b.total)
        self.assertEqual((a + b).total, sum(first, Fraction(0)) - sum(second, Fraction(0)))

    def test_log_append_keeps_order(self):
        first = Subdivide(1, Fraction(1), (0, 7, 8, 2), (9, 10, 11), (0, 0, 0))
        second = Subdivide(9, Fraction(1), (0, 12, 13, 7), (14, 15, 16), (0, 0, 0))
        log = TransformLog().append(first) + TransformLog().append(second)
        self.assertEqual(list(log), [first, second])
        self.assertEqual(first.added_vertices, (7, 8))


class SubdivisionTests(SimpleTestCase):
    def test_conflict_split(self):
        self.assertEqual(conflict_split(1), (0, 1, 0))
        self.assertEqual(conflict_split(2), (1, 0, 1))
        self.assertEqual(conflict_split(3), (1, 1, 1))
        self.assertEqual(conflict_split(5), (1, 3, 1))

    def test_subdivide_crossed_edge(self):
        # Test that the crossing moves onto the middle edge and the offset is 2w
        d = crossed_pair()
        after, offset, record = subdivide_edge(d, 5, (0, 1, 0))
        self.assertIsNone(validate(after))
        self.assertEqual(offset, Fraction(3))
        self.assertEqual(record.endpoints, (0, 11, 12, 1))
        self.assertEqual(record.edges, (13, 14, 15))
        self.assertNotIn(5, after.graph.edges)
        self.assertEqual(after.node_sequence(14), [11, 4, 12])
        self.assertEqual(after.k, 1)
        self.assertTrue(all(after.graph.edges[e].weight == Fraction(3, 2) for e in record.edges))

    def test_negative_edge_has_no_offset(self):
        _, offset, _ = subdivide_edge(crossed_pair(), 8)
        self.assertEqual(offset, Fraction(0))

    def test_bad_split_is_rejected(self):
        with self.assertRaises(GadgetError):
            subdivide_edge(crossed_pair(), 5, (1, 1, 0))
        with self.assertRaises(GadgetError):
            subdivide_edge(crossed_pair(), 99)

    def test_eliminate_conflicts_on_convex_k5(self):
        d = fixture('k5_convex.json')
        self.assertTrue(conflicting_crossings(d))
        after, ledger, log = eliminate_conflicts(d)
        self.assertTrue(is_one_planar(after))
        self.assertEqual(after.k, 5)
        self.assertEqual(conflicting_crossings(after), [])
        self.assertEqual(len(ledger), len(log))
        self.assertEqual(ledger.total, 2 * len(log))
        self.assertIsNone(validate(after))
        self.assertEqual(brute_mc(after.graph) - ledger.total, 6)

    def test_five_crossings_take_two_subdivisions(self):
        d = comb(5)
        after, ledger, log = eliminate_conflicts(d)
        self.assertEqual([r.split for r in log], [(1, 3, 1), (1, 1, 1)])
        self.assertTrue(is_one_planar(after))
        self.assertEqual(after.k, 5)
        self.assertEqual(ledger.total, Fraction(8))
        self.assertEqual(brute_mc(after.graph) - ledger.total, brute_mc(d.graph))

    def test_replay_reproduces_the_surgeries(self):
        d = fixture('k5_convex.json')
        after, _, log = eliminate_conflicts(d)
        again = replay(d, log)
        self.assertEqual(again.rotation, after.rotation)
        self.assertEqual(again.graph, after.graph)

    def test_preprocess_isolates_every_crossing(self):
        d = preprocessed('k6_three_crossings.json')
        self.assertEqual(d.k, 3)
        for node in d.crossing_nodes:
            self.assertIsNone(preprocessing_problem(d, node))

    def test_preprocess_needs_one_planar_input(self):
        with self.assertRaises(GadgetError):
            preprocess_crossings(fixture('k5_convex.json'))

    def test_unpreprocessed_crossing_is_reported(self):
        d = fixture('k5_one_crossing.json')
        node = min(d.crossing_nodes)
        self.assertIsNotNone(preprocessing_problem(d, node))


class PruningTests(SimpleTestCase):
    def test_remove_degree_one_on_a_path(self):
        g = WeightedMultigraph.build([0, 1, 2], [(3, 0, 1, 3), (4, 1, 2, -2)])
        pruned, ledger, log = remove_degree_one(g)
        self.assertEqual(pruned.n, 0)
        self.assertEqual(ledger.total, Fraction(-3))
        self.assertEqual([r.vertex for r in log], [0, 1, 2])
        self.assertIsNone(log.records[-1].edge)

    def test_prune_drawing(self):
        d = planar_drawing([0, 1, 2], [(3, 0, 1, 3), (4, 1, 2, -2)], {0: [3], 1: [3, 4], 2: [4]})
        pruned, ledger, log = prune_drawing(d)
        self.assertEqual(pruned.graph.n, 0)
        self.assertEqual(ledger.total, Fraction(-3))
        self.assertEqual(len(log), 3)
        self.assertIsNone(validate(pruned))

    def test_prune_keeps_crossed_pendants(self):
        d = crossed_pair()
        pruned, ledger, log = prune_drawing(d)
        self.assertEqual(pruned.k, 1)
        self.assertEqual(len(log), 0)


class NormalizeTests(SimpleTestCase):
    def test_digons_are_subdivided(self):
        d = planar_drawing([0, 1], [(2, 0, 1, 1), (3, 0, 1, 1)], {0: [2, 3], 1: [3, 2]})
        self.assertEqual(sorted(len(f) for f in faces(d)), [2, 2])
        after, ledger, log = normalize_small_faces(d)
        self.assertEqual(sorted(len(f) for f in faces(after)), [4, 4])
        self.assertEqual(ledger.total, Fraction(2))
        self.assertEqual(log.records[0].edge, 2)

    def test_protected_edges_are_skipped(self):
        d = planar_drawing([0, 1], [(2, 0, 1, 1), (3, 0, 1, 1)], {0: [2, 3], 1: [3, 2]})
        _, _, log = normalize_small_faces(d, protected={2})
        self.assertEqual(log.records[0].edge, 3)
        with self.assertRaises(GadgetError):
            normalize_small_faces(d, protected={2, 3})

    def test_self_loop_face_becomes_a_triangle(self):
        # loop 2 at vertex 0 encloses a face of length one; edge 3 hangs outside it
        d = assemble(
            [0, 1], [], [(2, 0, 0, 1), (3, 0, 1, 1)], {2: [2], 3: [3]},
            {0: [(2, 'tail'), 3, (2, 'head')], 1: [3]},
        )
        self.assertEqual(sorted(len(f) for f in faces(d)), [1, 3])
        after, ledger, log = normalize_small_faces(d)
        self.assertEqual(sorted(len(f) for f in faces(after)), [3, 5])
        self.assertEqual(ledger.total, Fraction(2))
        self.assertEqual(log.records[0].edge, 2)
        self.assertIsNone(validate(after))
        self.assertEqual(brute_mc(after.graph), brute_mc(d.graph) + ledger.total)


class BranchingTests(SimpleTestCase):
    def test_two_leaves_for_one_crossing(self):
        d = preprocessed('k5_one_crossing.json')
        leaves = enumerate_branches(d)
        self.assertEqual([leaf.mask for leaf in leaves], [0, 1])
        contracted, constrained = leaves
        self.assertEqual(contracted.drawing.k, 0)
        self.assertEqual(contracted.drawing.graph.n, d.graph.n - 1)
        self.assertEqual(constrained.drawing.k, 1)
        self.assertEqual(len(constrained.pseudo_faces), 1)
        pf = constrained.pseudo_faces[0]
        self.assertEqual(constrained.constraints, (pf.constrained_pair,))
        self.assertEqual((pf.alpha, pf.beta), (Fraction(1), Fraction(1)))
        for leaf in leaves:
            self.assertIsNone(validate(leaf.drawing))

    def test_masks_cover_every_branch(self):
        leaves = enumerate_branches(ConstrainedInstance(preprocessed('k6_three_crossings.json')))
        self.assertEqual([leaf.mask for leaf in leaves], list(range(8)))
        for leaf in leaves:
            self.assertEqual(len(leaf.pseudo_faces), bin(leaf.mask).count('1'))
            self.assertIsNone(validate(leaf.drawing))

    def test_branching_needs_preprocessed_crossings(self):
        with self.assertRaises(GadgetError):
            enumerate_branches(fixture('k5_one_crossing.json'))


class DualityTests(SimpleTestCase):
    @given(rationals, rationals)
    def test_pseudo_face_cases(self, alpha, beta):
        # Test that each admissible selection pays exactly the cut crossing edges
        w = pseudo_face_weights(alpha, beta)
        self.assertEqual(w[DA] + w[LOOP], alpha)
        self.assertEqual(w[CD] + w[LOOP], alpha + beta)
        self.assertEqual(w[BC] + w[LOOP], beta)
        self.assertEqual(w[BC] + w[CD] + w[DA], 0)

    def finished_leaves(self, name):
        for leaf in enumerate_branches(preprocessed(name)):
            drawing, ledger, log = normalize_small_faces(leaf.drawing, leaf.protected_edges)
            yield triangulate(leaf.with_drawing(drawing, ledger, log))

    def test_triangulated_leaves(self):
        for leaf in self.finished_leaves('k6_three_crossings.json'):
            self.assertIsNone(validate(leaf.drawing))
            for face in faces(leaf.drawing):
                if not inner_face(leaf.drawing, face):
                    self.assertEqual(len(face), 3)

    def test_dual_degree_targets(self):
        for leaf in self.finished_leaves('k5_one_crossing.json'):
            dual = build_dual(leaf)
            self.assertIsNone(check_feasibility(dual))
            self.assertEqual(len(dual.loops), dual.graph.n)
            for pf in leaf.pseudo_faces:
                v = dual.pseudo_vertex(pf.crossing)
                self.assertEqual(dual.origin[v], (PSEUDO, pf.crossing))
                self.assertEqual(dual.b[v], 3)
                self.assertEqual(dual.graph.edges[dual.loops[v]].weight, Fraction(4, 3))
            for v, target in dual.b.items():
                self.assertIn(target, (1, 2, 3))


class OracleIdentityTests(SimpleTestCase):
    """ Brute-force optima before and after each reduction. """

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(3, 7), st.integers(0, 2), st.integers(0, 50))
    def test_subdivision_adds_its_offset(self, seed, n, k, pick):
        d = random_drawn_instance(seed, n, k)
        eid = sorted(d.graph.edges)[pick % len(d.graph.edges)]
        after, offset, _ = subdivide_edge(d, eid)
        self.assertIsNone(validate(after))
        self.assertEqual(after.k, d.k)
        self.assertEqual(brute_mc(after.graph), brute_mc(d.graph) + offset)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(3, 6), st.integers(2, 4))
    def test_conflict_elimination_keeps_the_optimum(self, seed, n, k):
        d = random_drawn_instance(seed, n, k)
        after, ledger, log = eliminate_conflicts(d)
        self.assertTrue(is_one_planar(after))
        self.assertEqual(after.k, d.k)
        self.assertEqual(len(log), sum(d.crossing_count(e) // 2 for e in d.graph.edges))
        self.assertEqual(brute_mc(after.graph) - ledger.total, brute_mc(d.graph))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(3, 5), st.integers(0, 2))
    def test_best_leaf_is_the_optimum(self, seed, n, k):
        d = random_drawn_instance(seed, n, k)
        values = []
        for leaf in enumerate_branches(prepare(d)):
            value = brute_cmc(leaf.drawing.graph, leaf.constraints)
            if value is not None:
                values.append(value - leaf.ledger.total)
        self.assertEqual(max(values), brute_mc(d.graph))

    def check_finished_leaves(self, d):
        for leaf in enumerate_branches(prepare(d)):
            finished = finish_leaf(leaf)
            before = brute_cmc(leaf.drawing.graph, leaf.constraints)
            after = brute_cmc(finished.drawing.graph, finished.constraints)
            if before is None:
                self.assertIsNone(after)
            else:
                self.assertEqual(after, before + finished.ledger.total - leaf.ledger.total)
            dual = build_dual(finished)
            self.assertLessEqual(max((dual.degree(v) for v in dual.graph.vertices), default=0), 5)
            self.assertEqual(brute_bfactor(dual, max_edges=64), after)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(3, 4), st.integers(0, 1))
    def test_finished_leaf_matches_its_dual(self, seed, n, k):
        self.check_finished_leaves(random_drawn_instance(seed, n, k))

    def test_k5_leaves_match_their_duals(self):
        self.check_finished_leaves(fixture('k5_one_crossing.json'))
