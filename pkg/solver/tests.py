# solver/tests.py
import json
import tempfile
import time
from fractions import Fraction
from io import StringIO
from pathlib import Path
from unittest import mock

from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st
from rest_framework import status
from rest_framework.test import APISimpleTestCase

from graphs.embedding import assemble, is_one_planar, planar_drawing, validate
from graphs.exceptions import DrawingError
from graphs.multigraph import CutSolution, WeightedMultigraph, cut_value
from graphs.serializers import load_drawing
from matching.bfactor import solve_bfactor
from reductions.branching import enumerate_branches
from reductions.duality import build_dual
from reductions.gadgets import subdivide_edge
from reductions.ledger import SUBDIVIDE, OffsetLedger, Subdivide, TransformLog
from .exceptions import LiftError, OracleBoundError, VerificationError
from .generators import random_drawn_instance, random_graph, scaling_family
from .oracle import ParityUnionFind, brute_cmc, brute_cmc_cut, brute_mc
from .pipeline import finish_leaf, prepare, solve_drawing
from .recovery import CaseTag, lift_factor_to_cut, undo_transforms, verify_solution
from .serializers import dump_solution
from .suites import run_seed_suite

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def fixture_path(name):
    return str(FIXTURES / name)


def fixture(name):
    return load_drawing(json.loads((FIXTURES / name).read_text()))


def triangle():
    return WeightedMultigraph.build([0, 1, 2], [(3, 0, 1, 1), (4, 1, 2, 1), (5, 2, 0, 1)])


def crossed_drawing(alpha, beta):
    # edge 5 (0 -> 1) crosses edge 8 (2 -> 3) once; the darts at the crossing start on edge 5
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
            {'id': 5, 'u': 0, 'v': 1, 'weight': str(alpha), 'segments': [6, 7]},
            {'id': 8, 'u': 2, 'v': 3, 'weight': str(beta), 'segments': [9, 10]},
        ],
    })


class PipelineTests(SimpleTestCase):
    def test_k5_with_one_crossing(self):
        # Test the known optimum and the branch count
        solution = solve_drawing(fixture('k5_one_crossing.json'))
        self.assertEqual(solution.value, Fraction(6))
        self.assertEqual(solution.stats.branches, 2)
        self.assertEqual(solution.stats.k, 1)
        self.assertEqual(solution.stats.n, 5)
        self.assertEqual(sorted(solution.side), [0, 1, 2, 3, 4])

    def test_k6_with_three_crossings(self):
        solution = solve_drawing(fixture('k6_three_crossings.json'))
        self.assertEqual(solution.value, Fraction(9))
        self.assertEqual(solution.stats.branches, 8)

    def test_convex_k5_needs_conflict_elimination(self):
        solution = solve_drawing(fixture('k5_convex.json'))
        self.assertEqual(solution.value, Fraction(6))
        self.assertEqual(solution.stats.branches, 32)

    def test_planar_fixtures(self):
        self.assertEqual(solve_drawing(fixture('grid_3x3.json')).value, Fraction(12))
        solution = solve_drawing(fixture('cycle_5.json'))
        self.assertEqual(solution.value, Fraction(4))
        self.assertEqual(solution.stats.branches, 1)

    def test_pruned_path_is_put_back(self):
        d = planar_drawing([0, 1, 2], [(3, 0, 1, 3), (4, 1, 2, -2)], {0: [3], 1: [3, 4], 2: [4]})
        solution = solve_drawing(d)
        self.assertEqual(solution.value, Fraction(3))
        self.assertEqual(solution.stats.ledger_total, Fraction(-3))
        self.assertNotEqual(solution.side[0], solution.side[1])
        self.assertEqual(solution.side[1], solution.side[2])

    def test_all_negative_weights_give_zero(self):
        d = load_drawing(json.loads((FIXTURES / 'cycle_5.json').read_text().replace('"weight": 1', '"weight": -1')))
        self.assertEqual(solve_drawing(d).value, Fraction(0))

    def test_self_loops_are_rejected(self):
        d = assemble([0, 1], [], [(2, 0, 0, 1), (3, 0, 1, 1)], {2: [2], 3: [3]}, {0: [[2, 'tail'], 3, [2, 'head']], 1: [3]})
        with self.assertRaises(DrawingError):
            solve_drawing(d)

    def test_random_drawings_match_brute_force(self):
        report = run_seed_suite(12, seed=100, max_vertices=7, max_crossings=3)
        self.assertEqual(report['failed'], 0, report['failures'])

    def test_seed_suite_is_quick(self):
        started = time.perf_counter()
        report = run_seed_suite(30, seed=0)
        elapsed = time.perf_counter() - started
        self.assertEqual(report['failed'], 0, report['failures'])
        self.assertLess(elapsed, 15, f"30 seeds took {elapsed:.1f}s")

    def test_solver_errors_count_as_failures(self):
        with mock.patch('solver.suites.solve_drawing', side_effect=VerificationError(Fraction(3), Fraction(2))):
            with self.assertLogs('solver.suites', level='ERROR'):
                report = run_seed_suite(3, seed=0, max_vertices=5, max_crossings=1)
        self.assertEqual((report['passed'], report['failed'], report['failures']), (0, 3, [0, 1, 2]))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(2, 12))
    def test_planar_drawings_match_brute_force(self, seed, n):
        d = random_drawn_instance(seed, n, 0)
        solution = solve_drawing(d)
        self.assertEqual(solution.stats.branches, 1)
        self.assertEqual(solution.value, brute_mc(d.graph))

    def test_worker_pool_gives_the_same_answer(self):
        d = fixture('k6_three_crossings.json')
        self.assertEqual(solve_drawing(d, jobs=2).value, solve_drawing(d, jobs=1).value)

    def test_leaf_dumps(self):
        with tempfile.TemporaryDirectory() as directory:
            solve_drawing(fixture('k5_one_crossing.json'), emit_dir=directory)
            names = sorted(p.name for p in Path(directory).iterdir())
            self.assertEqual(names, ['leaf-0.json', 'leaf-1.json'])
            leaf = json.loads((Path(directory) / 'leaf-1.json').read_text())
            self.assertEqual(leaf['mask'], 1)
            self.assertEqual(len(leaf['pseudo_faces']), 1)
            self.assertEqual(len(leaf['constraints']), 1)


class OracleTests(SimpleTestCase):
    def test_brute_mc(self):
        self.assertEqual(brute_mc(triangle()), Fraction(2))
        self.assertEqual(brute_mc(WeightedMultigraph.build([], [])), Fraction(0))

    def test_constraints(self):
        g = triangle()
        self.assertEqual(brute_cmc(g, [(0, 1)]), Fraction(2))
        self.assertIsNone(brute_cmc(g, [(0, 1), (1, 2), (2, 0)]))
        self.assertIsNone(brute_cmc(g, [(1, 1)]))
        value, side = brute_cmc_cut(g, [(2, 0)])
        self.assertNotEqual(side[2], side[0])
        self.assertEqual(cut_value(g, side), value)

    def test_bound(self):
        with self.assertRaises(OracleBoundError):
            brute_mc(triangle(), max_vertices=2)
        with override_settings(ORACLE_MAX_VERTICES=2):
            with self.assertRaises(OracleBoundError):
                brute_mc(triangle())

    def test_parity_union_find(self):
        uf = ParityUnionFind(range(4))
        self.assertTrue(uf.separate(0, 1))
        self.assertTrue(uf.separate(1, 2))
        self.assertEqual(uf.find(0), uf.find(2))
        self.assertEqual(uf.relation(0), uf.relation(2))
        self.assertFalse(uf.separate(0, 2))
        self.assertTrue(uf.separate(0, 3))

    def test_constrained_value_never_exceeds_the_optimum(self):
        for seed in range(10):
            g = random_graph(seed, 6, 9)
            best = brute_mc(g)
            constrained = brute_cmc(g, [(0, 1), (2, 3)])
            self.assertLessEqual(constrained, best)


class RecoveryTests(SimpleTestCase):
    def test_case_tags(self):
        self.assertEqual(CaseTag.from_roles({'da', 'loop'}), CaseTag.CASE1)
        self.assertTrue(CaseTag.CASE2.cuts_ac and CaseTag.CASE2.cuts_bd)
        self.assertFalse(CaseTag.CASE4.cuts_ac or CaseTag.CASE4.cuts_bd)
        self.assertEqual((CaseTag.CASE3.cuts_ac, CaseTag.CASE3.cuts_bd), (False, True))
        with self.assertRaises(LiftError):
            CaseTag.from_roles({'bc'})

    def test_log_and_ledger_must_agree(self):
        log = TransformLog().append(Subdivide(3, Fraction(1), (0, 6, 7, 1), (8, 9, 10), (0, 0, 0)))
        cut = CutSolution({0: 0, 1: 1, 6: 1, 7: 0}, Fraction(3))
        with self.assertRaises(LiftError):
            undo_transforms(cut, log, OffsetLedger(), triangle())

    def test_verify_solution(self):
        g = triangle()
        good = CutSolution({0: 0, 1: 1, 2: 1}, Fraction(2))
        self.assertIs(verify_solution(g, good), good)
        with self.assertRaises(VerificationError) as ctx:
            verify_solution(g, CutSolution({0: 0, 1: 1, 2: 1}, Fraction(3)))
        self.assertEqual(ctx.exception.recomputed, Fraction(2))

    def lift_constrained_leaf(self, alpha, beta):
        leaf = finish_leaf(enumerate_branches(prepare(crossed_drawing(alpha, beta)))[1])
        dual = build_dual(leaf)
        factor = solve_bfactor(dual)
        pf = leaf.pseudo_faces[0]
        at = dual.pseudo_vertex(pf.crossing)
        roles = {dual.roles[e.id] for e in dual.graph.incident(at) if e.id in factor.edges}
        cut = lift_factor_to_cut(leaf, dual, factor)
        self.assertEqual(cut.value, factor.cost)
        return pf, CaseTag.from_roles(roles), [cut.side[c] for c in pf.corners]

    def test_only_ac_cut(self):
        pf, tag, (a, b, c, d) = self.lift_constrained_leaf(Fraction(3, 2), -2)
        self.assertEqual((pf.alpha, pf.beta), (Fraction(3, 2), Fraction(-2)))
        self.assertEqual(tag, CaseTag.CASE1)
        self.assertNotEqual(a, b)
        self.assertEqual((c, d), (b, b))

    def test_neither_crossing_edge_cut(self):
        pf, tag, (a, b, c, d) = self.lift_constrained_leaf(-1, -1)
        self.assertEqual(tag, CaseTag.CASE4)
        self.assertNotEqual(a, b)
        self.assertEqual((c, d), (a, b))

    def test_undo_a_subdivided_triangle(self):
        d = planar_drawing(range(3), [(3, 0, 1, 1), (4, 1, 2, 1), (5, 2, 0, 1)], {0: [3, 5], 1: [4, 3], 2: [5, 4]})
        after, offset, record = subdivide_edge(d, 3)
        ledger = OffsetLedger().record(SUBDIVIDE, (3, *record.edges), offset)
        log = TransformLog().append(record)
        value, side = brute_cmc_cut(after.graph)
        self.assertEqual((value, ledger.total), (Fraction(4), Fraction(2)))
        solution = undo_transforms(CutSolution(side, value), log, ledger, d.graph)
        self.assertEqual(solution.value, Fraction(2))
        self.assertEqual(sorted(solution.side), [0, 1, 2])
        self.assertEqual(cut_value(d.graph, solution.side), Fraction(2))


class GeneratorTests(SimpleTestCase):
    def test_drawn_instances_are_reproducible(self):
        first = random_drawn_instance(3, 8, 3)
        second = random_drawn_instance(3, 8, 3)
        self.assertEqual(first.k, 3)
        self.assertIsNone(validate(first))
        self.assertEqual(first.rotation, second.rotation)

    def test_one_planar_option(self):
        d = random_drawn_instance(5, 8, 4, one_planar=True)
        self.assertEqual(d.k, 4)
        self.assertTrue(is_one_planar(d))

    def test_components(self):
        d = random_drawn_instance(11, 8, 2, components=2)
        self.assertGreaterEqual(len(d.graph.components()), 2)

    def test_scaling_family(self):
        d = scaling_family(3)
        self.assertEqual((d.graph.n, d.k), (40, 3))
        self.assertTrue(is_one_planar(d))

    def test_random_graph_is_loop_free(self):
        g = random_graph(1, 5, 7)
        self.assertEqual(len(g.edges), 7)
        self.assertFalse(any(e.is_loop for e in g.edges.values()))


class SerializerTests(SimpleTestCase):
    def test_dump_solution(self):
        solution = solve_drawing(fixture('cycle_5.json'))
        data = dump_solution(solution)
        self.assertEqual(data['value'], '4')
        self.assertEqual(sorted(data['partition']), ['0', '1', '2', '3', '4'])
        self.assertIn('wall_ms', data['stats'])
        stable = dump_solution(solution, omit_timing=True)
        self.assertNotIn('wall_ms', stable['stats'])
        self.assertEqual(stable['stats']['branches'], 1)


class CommandTests(SimpleTestCase):
    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def test_solve(self):
        output = self.run_command('solve', fixture_path('k5_one_crossing.json'), omit_timing=True)
        data = json.loads(output)
        self.assertEqual(data['value'], '6')
        self.assertEqual(data['stats']['branches'], 2)
        again = self.run_command('solve', fixture_path('k5_one_crossing.json'), omit_timing=True)
        self.assertEqual(output, again)

    def test_solve_rejects_bad_input(self):
        with tempfile.NamedTemporaryFile('w', suffix='.json') as handle:
            handle.write('{not json')
            handle.flush()
            with self.assertRaises(CommandError) as ctx:
                self.run_command('solve', handle.name)
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.run_command('solve', fixture_path('triple_point.json'))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_validate(self):
        output = self.run_command('validate', fixture_path('k5_one_crossing.json'))
        self.assertEqual(output.strip(), 'ok, k=1, 1-planar=true')
        output = self.run_command('validate', fixture_path('k5_convex.json'))
        self.assertEqual(output.strip(), 'ok, k=5, 1-planar=false')

    def test_oracle(self):
        data = json.loads(self.run_command('oracle', fixture_path('k5_one_crossing.json'), constraints='[[0, 1]]'))
        self.assertEqual(data, {'brute_mc': '6', 'brute_cmc': '6'})
        with self.assertRaises(CommandError) as ctx:
            self.run_command('oracle', fixture_path('k5_one_crossing.json'), max_vertices=3)
        self.assertEqual(ctx.exception.returncode, 4)

    def test_seed_suite(self):
        data = json.loads(self.run_command('oracle', seed_suite=4, max_vertices=6, max_crossings=2))
        self.assertEqual((data['checks'], data['passed'], data['failed']), (4, 4, 0))

    def test_seed_suite_failures_exit_with_three(self):
        with mock.patch('solver.suites.solve_drawing', side_effect=LiftError("Every branch leaf is infeasible.")):
            with self.assertRaises(CommandError) as ctx:
                self.run_command('oracle', seed_suite=2, max_vertices=5, max_crossings=1)
        self.assertEqual(ctx.exception.returncode, 3)


class APITests(APISimpleTestCase):
    def document(self, name):
        return json.loads((FIXTURES / name).read_text())

    def test_solve(self):
        response = self.client.post('/api/solve/?omit_timing=true', self.document('k5_one_crossing.json'), format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['value'], '6')
        self.assertNotIn('wall_ms', response.data['stats'])

    def test_solve_invalid_drawing(self):
        response = self.client.post('/api/solve/', self.document('triple_point.json'), format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('Three or more edges', response.data['error'])

    def test_validate(self):
        response = self.client.post('/api/validate/', self.document('k6_three_crossings.json'), format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data, {'valid': True, 'k': 3, 'one_planar': True})

    def test_oracle(self):
        document = {**self.document('cycle_5.json'), 'constraints': [[0, 2]]}
        response = self.client.post('/api/oracle/', document, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data, {'brute_mc': '4', 'brute_cmc': '4'})

    @override_settings(ORACLE_MAX_VERTICES=3)
    def test_oracle_bound(self):
        response = self.client.post('/api/oracle/', self.document('cycle_5.json'), format='json')
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)

    def test_served_without_auth_apps(self):
        self.assertFalse(apps.is_installed('django.contrib.auth'))
        self.assertFalse(apps.is_installed('django.contrib.contenttypes'))
        response = self.client.post('/api/validate/', self.document('cycle_5.json'), format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
