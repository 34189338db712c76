# solver/pipeline.py
"""
The full solve: prune, make 1-planar, isolate crossings, branch into 2^k
leaves, solve every leaf through its dual b-factor, and map the best leaf
back to the input graph.
"""
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from django.conf import settings

from graphs.embedding import DrawnInstance, ensure_valid
from graphs.exceptions import DrawingError
from graphs.multigraph import CutSolution, SolveStats
from matching.bfactor import solve_bfactor
from matching.exceptions import InfeasibleError
from reductions.branching import ConstrainedInstance, enumerate_branches
from reductions.duality import build_dual, check_feasibility, triangulate
from reductions.gadgets import eliminate_conflicts, normalize_small_faces, preprocess_crossings, prune_drawing
from .exceptions import LiftError
from .recovery import lift_factor_to_cut, undo_transforms, verify_solution
from .serializers import dump_leaf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeafOutcome:
    leaf: ConstrainedInstance
    cut: Optional[CutSolution] = None
    reason: Optional[str] = None

    @property
    def mask(self) -> int:
        return self.leaf.mask

    @property
    def feasible(self) -> bool:
        return self.cut is not None

    @property
    def corrected_value(self):
        """ Leaf optimum expressed as a value of the input graph. """
        return self.cut.value - self.leaf.ledger.total


def prepare(d: DrawnInstance) -> ConstrainedInstance:
    """ Root instance: pruned, conflict-free and with every crossing preprocessed. """
    ensure_valid(d)
    loops = sorted(e.id for e in d.graph.edges.values() if e.is_loop)
    if loops:
        raise DrawingError(f"Edge {loops[0]} is a self-loop; the solver takes loop-free graphs.", code="self_loop")
    pruned, l1, log1 = prune_drawing(d)
    planar_ish, l2, log2 = eliminate_conflicts(pruned)
    ready, l3, log3 = preprocess_crossings(planar_ish)
    return ConstrainedInstance(ready, ledger=l1 + l2 + l3, log=log1 + log2 + log3)


def finish_leaf(leaf: ConstrainedInstance) -> ConstrainedInstance:
    """ Normalizes and triangulates a branch leaf so its dual can be built. """
    drawing, ledger, log = normalize_small_faces(leaf.drawing, leaf.protected_edges)
    return triangulate(leaf.with_drawing(drawing, ledger, log))


def solve_leaf(leaf: ConstrainedInstance) -> LeafOutcome:
    leaf = finish_leaf(leaf)
    dual = build_dual(leaf)
    problem = check_feasibility(dual)
    if problem:
        return LeafOutcome(leaf, reason=problem)
    try:
        factor = solve_bfactor(dual)
    except InfeasibleError as exc:
        return LeafOutcome(leaf, reason=str(exc))
    return LeafOutcome(leaf, cut=lift_factor_to_cut(leaf, dual, factor))


def solve_leaves(leaves, jobs=1) -> list:
    if jobs > 1 and len(leaves) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(solve_leaf, leaves))
    return [solve_leaf(leaf) for leaf in leaves]


def best_outcome(outcomes):
    """ Highest corrected value; ties go to the smallest branch mask. """
    feasible = [o for o in outcomes if o.feasible]
    if not feasible:
        raise LiftError("Every branch leaf is infeasible.")
    return min(feasible, key=lambda o: (-o.corrected_value, o.mask))


def emit_leaves(outcomes, directory):
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    for outcome in outcomes:
        path = target / f"leaf-{outcome.mask}.json"
        path.write_text(json.dumps(dump_leaf(outcome), sort_keys=True, indent=2) + "\n")
    logger.info(f"Wrote {len(outcomes)} leaf dump(s) to {target}.")


def solve_drawing(d: DrawnInstance, jobs=None, emit_dir=None) -> CutSolution:
    started = time.perf_counter()
    jobs = jobs or getattr(settings, 'SOLVER_DEFAULT_JOBS', 1)
    original = d.graph
    root = prepare(d)
    leaves = enumerate_branches(root)
    outcomes = solve_leaves(leaves, jobs)
    if emit_dir:
        emit_leaves(outcomes, emit_dir)

    infeasible = [o for o in outcomes if not o.feasible]
    for outcome in infeasible:
        logger.warning(f"Branch {outcome.mask} is infeasible: {outcome.reason}")
    best = best_outcome(outcomes)
    solution = undo_transforms(best.cut, best.leaf.log, best.leaf.ledger, original)
    stats = SolveStats(
        n=original.n,
        k=d.k,
        branches=len(leaves),
        infeasible_branches=len(infeasible),
        ledger_total=best.leaf.ledger.total,
        best_mask=best.mask,
        wall_ms=round((time.perf_counter() - started) * 1000, 3),
    )
    solution = verify_solution(original, replace(solution, stats=stats))
    logger.info(f"Solved n={original.n}, k={d.k}: value {solution.value} from branch {best.mask} of {len(leaves)}.")
    return solution
