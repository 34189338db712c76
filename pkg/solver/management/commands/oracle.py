# solver/management/commands/oracle.py
import json

from django.core.management.base import BaseCommand, CommandError

from graphs.multigraph import format_rational
from solver.cli import INVALID_INPUT, ORACLE_BOUND, VERIFICATION_FAILED, dumps, read_drawing
from solver.exceptions import OracleBoundError
from solver.oracle import brute_cmc_cut, brute_mc
from solver.serializers import OracleOptionsSerializer
from solver.suites import run_scaling, run_seed_suite


class Command(BaseCommand):
    help = "Brute-force reference optima, the seeded solver-vs-oracle suite and the scaling run."

    def add_arguments(self, parser):
        parser.add_argument('input', nargs='?', help="Drawing document to evaluate by enumeration.")
        parser.add_argument('--constraints', default=None, help='JSON list of pairs that must be separated, e.g. "[[0, 1]]".')
        parser.add_argument('--max-vertices', type=int, default=None, help="Brute-force bound, or the largest suite instance.")
        parser.add_argument('--seed-suite', type=int, default=None, metavar='N', help="Run N seeded solver-vs-oracle checks.")
        parser.add_argument('--seed', type=int, default=0, help="First seed of the suite.")
        parser.add_argument('--max-crossings', type=int, default=None, help="Largest k for the suite or the scaling run.")
        parser.add_argument('--scaling', action='store_true', help="Time the solver on a fixed family for k = 1..max.")
        parser.add_argument('--jobs', type=int, default=1)

    def handle(self, *args, **options):
        if options['seed_suite'] is not None:
            report = run_seed_suite(
                options['seed_suite'],
                seed=options['seed'],
                max_vertices=options['max_vertices'] or 10,
                max_crossings=4 if options['max_crossings'] is None else options['max_crossings'],
                jobs=options['jobs'],
            )
            self.stdout.write(dumps(report))
            if report['failed']:
                raise CommandError(f"{report['failed']} seed(s) disagree with brute force.", returncode=VERIFICATION_FAILED)
            return
        if options['scaling']:
            report = run_scaling(max_crossings=options['max_crossings'] or 10)
            self.stdout.write(dumps(report))
            return
        if not options['input']:
            raise CommandError("Give a drawing, --seed-suite N or --scaling.", returncode=INVALID_INPUT)

        drawing = read_drawing(options['input'])
        constraints = self._constraints(options['constraints'])
        unknown = sorted({v for pair in constraints or () for v in pair} - drawing.graph.vertices)
        if unknown:
            raise CommandError(f"Constraint names unknown vertex {unknown[0]}.", returncode=INVALID_INPUT)
        try:
            payload = {'brute_mc': format_rational(brute_mc(drawing.graph, options['max_vertices']))}
            if constraints is not None:
                found = brute_cmc_cut(drawing.graph, constraints, options['max_vertices'])
                payload['brute_cmc'] = None if found is None else format_rational(found[0])
        except OracleBoundError as exc:
            raise CommandError(str(exc), returncode=ORACLE_BOUND)
        self.stdout.write(dumps(payload))

    def _constraints(self, raw):
        if raw is None:
            return None
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CommandError(f"--constraints is not valid JSON: {exc}", returncode=INVALID_INPUT)
        serializer = OracleOptionsSerializer(data={'constraints': data})
        if not serializer.is_valid():
            raise CommandError(f"Bad --constraints: {serializer.errors}", returncode=INVALID_INPUT)
        return [tuple(pair) for pair in serializer.validated_data['constraints']]
