"""The five composition operators over fuzzy processes.

product composes devices and sum composes environments; each splits every
label into three disjoint regions (tolerated by both sides, escape of one
side against reject of the other, and the mirror image) and takes the min of
the two grades that still have a say there. meet and join are plain
pointwise max/min choices between devices or between environments, and
reflect swaps the device and environment views.

All four binary operators require blocking-free operands and, by the region
analysis, always produce blocking-free results. Results are built sparsely:
a label is stored only when its computed grade is positive.
"""

from __future__ import annotations

from ._memo import memoized_op
from .core import (
    GRADE_ZERO,
    FuzzyProcess,
    FuzzySubset,
    Universe,
    _require_same_universe,
)
from .errors import BlockingViolation


def _require_blocking_free(op: str, *processes: FuzzyProcess) -> None:
    for p in processes:
        if not p.is_blocking_free:
            raise BlockingViolation(f"{op} requires blocking-free operands")


def _binary_inputs(op: str, p: FuzzyProcess, q: FuzzyProcess) -> Universe:
    universe = _require_same_universe(p, q)
    _require_blocking_free(op, p, q)
    return universe


@memoized_op
def product(p: FuzzyProcess, q: FuzzyProcess) -> FuzzyProcess:
    """Compose two devices. ``p * q`` also works."""
    universe = _binary_inputs("product", p, q)
    pd, pg = p.delta.as_dict(), p.gamma.as_dict()
    qd, qg = q.delta.as_dict(), q.gamma.as_dict()
    delta: dict = {}
    gamma: dict = {}
    for x in universe:
        dp = pd.get(x, GRADE_ZERO)
        gp = pg.get(x, GRADE_ZERO)
        dq = qd.get(x, GRADE_ZERO)
        gq = qg.get(x, GRADE_ZERO)
        if dp > 0 and dq > 0:
            delta[x] = min(dp, dq)
        if gp > 0 and gq > 0:
            gamma[x] = min(gp, gq)
        elif dp == 0 and gp > 0 and gq == 0 and dq > 0:
            gamma[x] = min(gp, dq)
        elif gp == 0 and dp > 0 and dq == 0 and gq > 0:
            gamma[x] = min(gq, dp)
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, delta),
        FuzzySubset._from_clean(universe, gamma),
    )


@memoized_op
def sum_(p: FuzzyProcess, q: FuzzyProcess) -> FuzzyProcess:
    """Compose two environments: the exact channel mirror of product.
    ``p + q`` also works."""
    universe = _binary_inputs("sum", p, q)
    pd, pg = p.delta.as_dict(), p.gamma.as_dict()
    qd, qg = q.delta.as_dict(), q.gamma.as_dict()
    delta: dict = {}
    gamma: dict = {}
    for x in universe:
        dp = pd.get(x, GRADE_ZERO)
        gp = pg.get(x, GRADE_ZERO)
        dq = qd.get(x, GRADE_ZERO)
        gq = qg.get(x, GRADE_ZERO)
        if dp > 0 and dq > 0:
            delta[x] = min(dp, dq)
        elif dp == 0 and gp > 0 and gq == 0 and dq > 0:
            delta[x] = min(gp, dq)
        elif gp == 0 and dp > 0 and dq == 0 and gq > 0:
            delta[x] = min(gq, dp)
        if gp > 0 and gq > 0:
            gamma[x] = min(gp, gq)
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, delta),
        FuzzySubset._from_clean(universe, gamma),
    )


@memoized_op
def meet(p: FuzzyProcess, q: FuzzyProcess) -> FuzzyProcess:
    """Choice between devices: pointwise max of delta, min of gamma.
    ``p & q`` also works."""
    universe = _binary_inputs("meet", p, q)
    pd, pg = p.delta.as_dict(), p.gamma.as_dict()
    qd, qg = q.delta.as_dict(), q.gamma.as_dict()
    delta: dict = {}
    gamma: dict = {}
    for x in universe:
        d = max(pd.get(x, GRADE_ZERO), qd.get(x, GRADE_ZERO))
        if d > 0:
            delta[x] = d
        g = min(pg.get(x, GRADE_ZERO), qg.get(x, GRADE_ZERO))
        if g > 0:
            gamma[x] = g
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, delta),
        FuzzySubset._from_clean(universe, gamma),
    )


@memoized_op
def join(p: FuzzyProcess, q: FuzzyProcess) -> FuzzyProcess:
    """Choice between environments: pointwise min of delta, max of gamma.
    ``p | q`` also works."""
    universe = _binary_inputs("join", p, q)
    pd, pg = p.delta.as_dict(), p.gamma.as_dict()
    qd, qg = q.delta.as_dict(), q.gamma.as_dict()
    delta: dict = {}
    gamma: dict = {}
    for x in universe:
        d = min(pd.get(x, GRADE_ZERO), qd.get(x, GRADE_ZERO))
        if d > 0:
            delta[x] = d
        g = max(pg.get(x, GRADE_ZERO), qg.get(x, GRADE_ZERO))
        if g > 0:
            gamma[x] = g
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, delta),
        FuzzySubset._from_clean(universe, gamma),
    )


@memoized_op
def reflect(p: FuzzyProcess) -> FuzzyProcess:
    """Swap the device and environment views. ``-p`` also works.

    Needs no blocking-freeness precondition and trivially preserves it.
    """
    return FuzzyProcess(p.gamma, p.delta)
