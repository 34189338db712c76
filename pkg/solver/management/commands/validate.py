# solver/management/commands/validate.py
from django.core.management.base import BaseCommand, CommandError

from graphs.embedding import is_one_planar, validate
from solver.cli import INVALID_INPUT, read_drawing


class Command(BaseCommand):
    help = "Checks a drawing document and reports its crossing count."

    def add_arguments(self, parser):
        parser.add_argument('input', help="Drawing document (combinatorial or geometric JSON).")

    def handle(self, *args, **options):
        drawing = read_drawing(options['input'], check=False)
        problem = validate(drawing)
        if problem:
            raise CommandError(problem, returncode=INVALID_INPUT)
        one_planar = 'true' if is_one_planar(drawing) else 'false'
        self.stdout.write(f"ok, k={drawing.k}, 1-planar={one_planar}")
