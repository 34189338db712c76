# solver/management/commands/solve.py
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from reductions.exceptions import GadgetError
from solver.cli import INVALID_INPUT, VERIFICATION_FAILED, dumps, error_text, read_drawing
from solver.exceptions import LiftError, VerificationError
from solver.pipeline import solve_drawing
from solver.serializers import dump_solution


class Command(BaseCommand):
    help = "Computes an exact maximum cut of a drawn graph and prints it as JSON."

    def add_arguments(self, parser):
        parser.add_argument('input', help="Drawing document (combinatorial or geometric JSON).")
        parser.add_argument('--jobs', type=int, default=None, help="Worker processes for the branch leaves.")
        parser.add_argument('--omit-timing', action='store_true', help="Leave wall_ms out of the stats.")
        parser.add_argument(
            '--emit-branch-instances', dest='emit_dir', default=None,
            help="Directory receiving one leaf-<mask>.json per branch leaf.",
        )

    def handle(self, *args, **options):
        if options['jobs'] is not None and options['jobs'] < 1:
            raise CommandError("--jobs must be at least 1.", returncode=INVALID_INPUT)
        drawing = read_drawing(options['input'])
        try:
            solution = solve_drawing(drawing, jobs=options['jobs'], emit_dir=options['emit_dir'])
        except ValidationError as exc:
            raise CommandError(error_text(exc), returncode=INVALID_INPUT)
        except (VerificationError, LiftError, GadgetError) as exc:
            raise CommandError(str(exc), returncode=VERIFICATION_FAILED)
        self.stdout.write(dumps(dump_solution(solution, omit_timing=options['omit_timing'])))
