# matching/tests.py
import random
from fractions import Fraction

import networkx as nx
from django.test import SimpleTestCase

from reductions.duality import DualBFactorInstance
from graphs.multigraph import WeightedMultigraph
from solver.generators import random_bfactor_instance
from solver.oracle import brute_bfactor, brute_perfect_matching
from .bfactor import EXTERNAL, INTERNAL, gabow_reduce, max_weight_perfect_matching, solve_bfactor
from .exceptions import InfeasibleError


def weighted_graph(edges):
    g = nx.Graph()
    for x, y, w in edges:
        g.add_edge(x, y, weight=Fraction(w))
    return g


class PerfectMatchingTests(SimpleTestCase):
    def test_perfect_beats_heavier_partial_matching(self):
        # Test that the single heavy middle edge loses to a perfect matching
        g = weighted_graph([(0, 1, -5), (1, 2, 10), (2, 3, -5)])
        matching, total = max_weight_perfect_matching(g)
        self.assertEqual(total, Fraction(-10))
        self.assertTrue(nx.is_perfect_matching(g, matching))

    def test_rational_weights(self):
        g = weighted_graph([(0, 1, '1/3'), (2, 3, '1/6'), (0, 2, '1/2'), (1, 3, '-1/4')])
        _, total = max_weight_perfect_matching(g)
        self.assertEqual(total, Fraction(1, 2))

    def test_odd_or_disconnected_graphs_are_infeasible(self):
        with self.assertRaises(InfeasibleError):
            max_weight_perfect_matching(weighted_graph([(0, 1, 1), (1, 2, 1)]))
        star = weighted_graph([(0, 1, 1), (0, 2, 1), (0, 3, 1)])
        with self.assertRaises(InfeasibleError):
            max_weight_perfect_matching(star)

    def test_components_are_matched_separately(self):
        g = weighted_graph([(0, 1, 2), (2, 3, -1), (3, 4, 5), (4, 5, -1), (2, 5, 1)])
        matching, total = max_weight_perfect_matching(g)
        self.assertEqual(total, Fraction(8))
        self.assertTrue(nx.is_perfect_matching(g, matching))
        two_triangles = weighted_graph([(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)])
        with self.assertRaises(InfeasibleError):
            max_weight_perfect_matching(two_triangles)

    def test_empty_graph(self):
        self.assertEqual(max_weight_perfect_matching(nx.Graph()), (set(), Fraction(0)))

    def test_agrees_with_brute_force(self):
        rng = random.Random(7)
        for seed in range(25):
            g = nx.gnm_random_graph(6, rng.randint(5, 12), seed=seed)
            for x, y in g.edges:
                g.edges[x, y]['weight'] = Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
            expected = brute_perfect_matching(g)
            if expected is None:
                with self.assertRaises(InfeasibleError):
                    max_weight_perfect_matching(g)
            else:
                _, total = max_weight_perfect_matching(g)
                self.assertEqual(total, expected[1], f"seed {seed}")


class BFactorTests(SimpleTestCase):
    def test_gabow_gadget_sizes(self):
        # a triangle with one loop at vertex 0; the loop folds into vertex 0's external pair
        g = WeightedMultigraph.build([0, 1, 2], [(3, 0, 1, 1), (4, 1, 2, 1), (5, 2, 0, 1), (6, 0, 0, 2)])
        inst = DualBFactorInstance(g, {0: 2, 1: 1, 2: 1})
        reduced = gabow_reduce(inst)
        kinds = [label[0] for label in reduced.labels.values()]
        self.assertEqual(kinds.count(EXTERNAL), 6)
        # d - b internal nodes over real edge-ends: (2 - 2) + (2 - 1) + (2 - 1)
        self.assertEqual(kinds.count(INTERNAL), 2)
        self.assertEqual(reduced.n, 8)
        pair = [x for x, label in reduced.labels.items() if label[0] == EXTERNAL and label[1] == 0]
        self.assertEqual(reduced.origin(*pair), 6)

    def test_two_loops_keep_their_own_ends(self):
        g = WeightedMultigraph.build([0, 1], [(2, 0, 1, 1), (3, 0, 0, 1), (4, 0, 0, 1), (5, 0, 1, 1)])
        reduced = gabow_reduce(DualBFactorInstance(g, {0: 4, 1: 0}))
        kinds = [label[0] for label in reduced.labels.values()]
        self.assertEqual(kinds.count(EXTERNAL), 8)
        self.assertEqual(kinds.count(INTERNAL), 4)

    def test_loop_counts_two(self):
        g = WeightedMultigraph.build([0, 1, 2], [(3, 0, 1, 1), (4, 1, 2, 1), (5, 2, 0, 1), (6, 0, 0, 2)])
        factor = solve_bfactor(DualBFactorInstance(g, {0: 2, 1: 0, 2: 0}))
        self.assertEqual(factor.edges, frozenset({6}))
        self.assertEqual(factor.cost, Fraction(2))

    def test_folded_loop_leaves_one_real_edge(self):
        # b = 3 with a heavy loop: the loop and exactly one real edge
        g = WeightedMultigraph.build(
            [0, 1, 2, 3], [(4, 0, 1, 1), (5, 0, 2, 2), (6, 0, 3, 1), (7, 0, 0, 5)],
        )
        factor = solve_bfactor(DualBFactorInstance(g, {0: 3, 1: 0, 2: 1, 3: 0}))
        self.assertEqual(factor.edges, frozenset({5, 7}))
        self.assertEqual(factor.cost, Fraction(7))

    def test_loop_cannot_meet_an_odd_target_of_one(self):
        g = WeightedMultigraph.build([0], [(1, 0, 0, 3)])
        with self.assertRaises(InfeasibleError):
            solve_bfactor(DualBFactorInstance(g, {0: 1}))
        self.assertIsNone(brute_bfactor(DualBFactorInstance(g, {0: 1})))

    def test_targets_above_degree_are_infeasible(self):
        g = WeightedMultigraph.build([0, 1], [(2, 0, 1, 1)])
        with self.assertRaises(InfeasibleError):
            solve_bfactor(DualBFactorInstance(g, {0: 2, 1: 1}))

    def test_agrees_with_brute_force(self):
        for seed in range(100):
            inst = random_bfactor_instance(seed, n=5, m=8)
            expected = brute_bfactor(inst)
            if expected is None:
                with self.assertRaises(InfeasibleError):
                    solve_bfactor(inst)
                continue
            factor = solve_bfactor(inst)
            self.assertEqual(factor.cost, expected, f"seed {seed}")
            self.assertEqual(factor.degrees(inst), dict(inst.b))
