"""
Unsatisfiable Core Module
Shrinks the constraints behind an inconsistency to a minimal contradictory subset.
"""

import logging
from collections.abc import Iterable, Sequence

from solver.hnf import check_consistency
from solver.matrix import constraints_to_matrix
from units.core import Constraint
from utils.config import Config

logger = logging.getLogger("Solver")


def is_consistent(constraints: Iterable[Constraint]) -> bool:
    return check_consistency(constraints_to_matrix(constraints)).ok


def minimal_core(
    constraints: Sequence[Constraint], candidates: Iterable[int], threshold: int | None = None
) -> list[int]:
    """Indices of a contradictory subset of `candidates`.

    Sets larger than the threshold are shrunk by deletion: each constraint is dropped in turn
    and stays dropped when the rest is still inconsistent, which leaves a minimal core.
    """
    core = sorted(candidates)
    limit = Config.CORE_THRESHOLD if threshold is None else threshold
    if len(core) <= limit:
        return core
    for index in list(core):
        trial = [k for k in core if k != index]
        if not is_consistent(constraints[k] for k in trial):
            core = trial
    logger.debug(f"[SOLVER] core shrunk to {len(core)} constraint(s)")
    return core
