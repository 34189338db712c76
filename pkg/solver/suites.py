# solver/suites.py
"""
Seeded end-to-end checks of the solver against brute force, and the soft
scaling run over a fixed family with a growing number of crossings.
"""
import logging
import random
import time

from graphs.exceptions import DrawingError
from matching.exceptions import InfeasibleError
from reductions.exceptions import GadgetError
from .exceptions import LiftError, VerificationError
from .generators import random_drawn_instance, scaling_family
from .oracle import brute_mc
from .pipeline import solve_drawing

logger = logging.getLogger(__name__)

SOLVER_ERRORS = (DrawingError, GadgetError, InfeasibleError, LiftError, VerificationError)


def suite_case(seed, max_vertices=10, max_crossings=4):
    """ The drawing checked for one seed: n, k and the component count are drawn from the seed too. """
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    k = rng.randint(0, max_crossings)
    components = rng.choice((1, 1, 2)) if n >= 4 else 1
    return random_drawn_instance(seed, n, k, components=components)


def run_seed_suite(count, seed=0, max_vertices=10, max_crossings=4, jobs=1) -> dict:
    passed, failures = 0, []
    for i in range(count):
        case_seed = seed + i
        d = suite_case(case_seed, max_vertices, max_crossings)
        expected = brute_mc(d.graph)
        try:
            solution = solve_drawing(d, jobs=jobs)
        except SOLVER_ERRORS as exc:
            logger.error(f"Seed {case_seed}: solver failed with {type(exc).__name__}: {exc}")
            failures.append(case_seed)
            continue
        if solution.value == expected and solution.stats.branches == 2 ** d.k:
            passed += 1
        else:
            logger.error(f"Seed {case_seed}: solver {solution.value}, brute force {expected}.")
            failures.append(case_seed)
    logger.info(f"Seed suite: {passed}/{count} passed.")
    return {'checks': count, 'passed': passed, 'failed': len(failures), 'failures': failures}


def run_scaling(max_crossings=10, n=40) -> dict:
    timings = []
    for k in range(1, max_crossings + 1):
        d = scaling_family(k, n)
        started = time.perf_counter()
        solve_drawing(d)
        timings.append((time.perf_counter() - started) * 1000)
    ratios = [later / earlier for earlier, later in zip(timings, timings[1:]) if earlier > 0]
    return {
        'n': n,
        'timings_ms': {str(k): round(ms, 3) for k, ms in enumerate(timings, start=1)},
        'ratios': [round(r, 3) for r in ratios],
        'within_expected': all(1.5 <= r <= 3.0 for r in ratios),
    }
