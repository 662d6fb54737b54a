"""Exhaustive and randomized checking of the operator algebra's laws.

The engine enumerates every blocking-free process over a quantized grade
grid, sweeps each law over all argument tuples (or over seeded random
samples), and reports either Verified with the exact case count or the first
counterexample in enumeration order. Counterexamples are self-validating:
re-running the law on the stored witnesses reproduces the violation.

Equational laws are checked at a chosen equality mode (value-level grade
equality or support-level set equality); relational laws such as the
refinement order properties are boolean and take no mode.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from string import ascii_lowercase
from typing import Callable, Iterable, Iterator, Sequence

from ._memo import op_memo
from .algebra import join, meet, product, reflect, sum_
from .core import (
    EqualityMode,
    FuzzyProcess,
    FuzzySubset,
    GradeLike,
    Universe,
    as_grade,
    bottom,
    equal,
    first_support_difference,
    first_value_difference,
    omega,
    process_flags,
    refines,
    top,
)
from .errors import BudgetExceeded

DEFAULT_BUDGET = 4_000_000


class Grid:
    """A finite, strictly increasing set of grades containing 0 and 1.

    Any finite grade set is closed under min and max, so operator results
    over a grid never leave it.
    """

    __slots__ = ("_grades",)

    def __init__(self, values: Iterable[GradeLike]):
        grades = tuple(sorted({as_grade(v) for v in values}))
        if not grades or grades[0] != 0 or grades[-1] != 1:
            raise ValueError("a grid must contain both 0 and 1")
        self._grades = grades

    @classmethod
    def parse(cls, text: str) -> "Grid":
        return cls(part.strip() for part in text.split(","))

    @property
    def grades(self) -> tuple[Fraction, ...]:
        return self._grades

    def __iter__(self):
        return iter(self._grades)

    def __len__(self) -> int:
        return len(self._grades)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self._grades == other._grades

    def __hash__(self) -> int:
        return hash(self._grades)

    def __repr__(self) -> str:
        return f"Grid({', '.join(str(g) for g in self._grades)})"


DEFAULT_GRID = Grid(["0", "1/2", "1"])


@dataclass(frozen=True)
class Scope:
    """A search space: universe size, grade grid, and check mode.

    samples=None means exhaustive; otherwise the given number of tuples is
    drawn deterministically from the seed.
    """

    universe_size: int
    grid: Grid
    samples: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe_size must be at least 1")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def is_exhaustive(self) -> bool:
        return self.samples is None


@dataclass(frozen=True)
class Verified:
    cases_checked: int


@dataclass(frozen=True)
class Counterexample:
    witnesses: tuple[FuzzyProcess, ...]
    lhs: FuzzyProcess | None
    rhs: FuzzyProcess | None
    first_differing_label: str | None


@dataclass(frozen=True)
class LawVerdict:
    law_id: str
    mode: EqualityMode | None
    scope: Scope
    result: Verified | Counterexample

    @property
    def is_verified(self) -> bool:
        return isinstance(self.result, Verified)

    @property
    def is_counterexample(self) -> bool:
        return isinstance(self.result, Counterexample)


@dataclass(frozen=True)
class Law:
    """One checkable law.

    Equational laws carry lhs/rhs builders (universe first, then the argument
    processes) and are compared at an equality mode; boolean laws carry a
    holds predicate instead.
    """

    law_id: str
    arity: int
    description: str
    lhs: Callable[..., FuzzyProcess] | None = None
    rhs: Callable[..., FuzzyProcess] | None = None
    holds: Callable[..., bool] | None = None

    @property
    def uses_mode(self) -> bool:
        return self.holds is None


def _build_catalogue() -> dict[str, Law]:
    V = EqualityMode.VALUE
    laws = [
        Law("P1.i", 1, "p * p == p",
            lhs=lambda u, p: product(p, p), rhs=lambda u, p: p),
        Law("P1.ii", 3, "p * (q * r) == (p * q) * r",
            lhs=lambda u, p, q, r: product(p, product(q, r)),
            rhs=lambda u, p, q, r: product(product(p, q), r)),
        Law("P1.iii", 2, "p * q == q * p",
            lhs=lambda u, p, q: product(p, q), rhs=lambda u, p, q: product(q, p)),
        Law("P1.iv", 1, "p * OMEGA == p",
            lhs=lambda u, p: product(p, omega(u)), rhs=lambda u, p: p),
        Law("P1.i'", 1, "p + p == p",
            lhs=lambda u, p: sum_(p, p), rhs=lambda u, p: p),
        Law("P1.ii'", 3, "p + (q + r) == (p + q) + r",
            lhs=lambda u, p, q, r: sum_(p, sum_(q, r)),
            rhs=lambda u, p, q, r: sum_(sum_(p, q), r)),
        Law("P1.iii'", 2, "p + q == q + p",
            lhs=lambda u, p, q: sum_(p, q), rhs=lambda u, p, q: sum_(q, p)),
        Law("P1.iv'", 1, "p + OMEGA == p",
            lhs=lambda u, p: sum_(p, omega(u)), rhs=lambda u, p: p),
        Law("P2.i", 1, "--p == p",
            lhs=lambda u, p: reflect(reflect(p)), rhs=lambda u, p: p),
        Law("P2.ii", 2, "p <= q iff -q <= -p",
            holds=lambda u, p, q: refines(p, q) == refines(reflect(q), reflect(p))),
        Law("P2.iii", 1, "p robust iff -p chaotic",
            holds=lambda u, p: process_flags(p).is_robust
            == process_flags(reflect(p)).is_chaotic),
        Law("P3.i", 1, "p & TOP == p",
            lhs=lambda u, p: meet(p, top(u)), rhs=lambda u, p: p),
        Law("P3.ii", 1, "p | TOP == TOP",
            lhs=lambda u, p: join(p, top(u)), rhs=lambda u, p: top(u)),
        Law("P3.iii", 1, "p * TOP == TOP",
            lhs=lambda u, p: product(p, top(u)), rhs=lambda u, p: top(u)),
        Law("P3.iv", 1, "-TOP == BOT",
            lhs=lambda u, p: reflect(top(u)), rhs=lambda u, p: bottom(u)),
        Law("P3.i'", 1, "p | BOT == p",
            lhs=lambda u, p: join(p, bottom(u)), rhs=lambda u, p: p),
        Law("P3.ii'", 1, "p & BOT == BOT",
            lhs=lambda u, p: meet(p, bottom(u)), rhs=lambda u, p: bottom(u)),
        Law("P3.iii'", 1, "p + BOT == BOT",
            lhs=lambda u, p: sum_(p, bottom(u)), rhs=lambda u, p: bottom(u)),
        Law("P4.i", 2, "-(p * q) == -p + -q",
            lhs=lambda u, p, q: reflect(product(p, q)),
            rhs=lambda u, p, q: sum_(reflect(p), reflect(q))),
        Law("P4.ii", 2, "-(p + q) == -p * -q",
            lhs=lambda u, p, q: reflect(sum_(p, q)),
            rhs=lambda u, p, q: product(reflect(p), reflect(q))),
        Law("P4.iii", 2, "-(p & q) == -p | -q",
            lhs=lambda u, p, q: reflect(meet(p, q)),
            rhs=lambda u, p, q: join(reflect(p), reflect(q))),
        Law("P4.iv", 2, "-(p | q) == -p & -q",
            lhs=lambda u, p, q: reflect(join(p, q)),
            rhs=lambda u, p, q: meet(reflect(p), reflect(q))),
        Law("ORDER.reflexive", 1, "p <= p",
            holds=lambda u, p: refines(p, p)),
        Law("ORDER.transitive", 3, "p <= q and q <= r implies p <= r",
            holds=lambda u, p, q, r: not (refines(p, q) and refines(q, r))
            or refines(p, r)),
        Law("ORDER.antisymmetric", 2, "p <= q and q <= p implies p == q",
            holds=lambda u, p, q: not (refines(p, q) and refines(q, p))
            or equal(p, q, V)),
        Law("ORDER.bounds", 1, "BOT <= p <= TOP",
            holds=lambda u, p: refines(bottom(u), p) and refines(p, top(u))),
        Law("LATTICE.glb", 3, "p & q is the greatest lower bound",
            holds=lambda u, p, q, r: refines(meet(p, q), p)
            and refines(meet(p, q), q)
            and (not (refines(r, p) and refines(r, q)) or refines(r, meet(p, q)))),
        Law("LATTICE.lub", 3, "p | q is the least upper bound",
            holds=lambda u, p, q, r: refines(p, join(p, q))
            and refines(q, join(p, q))
            and (not (refines(p, r) and refines(q, r)) or refines(join(p, q), r))),
        Law("CLOSURE.blocking_free", 2, "operators preserve blocking-freeness",
            holds=lambda u, p, q: all(
                result.is_blocking_free
                for result in (
                    product(p, q),
                    sum_(p, q),
                    meet(p, q),
                    join(p, q),
                    reflect(p),
                    reflect(q),
                )
            )),
    ]
    return {law.law_id: law for law in laws}


LAW_CATALOGUE: dict[str, Law] = _build_catalogue()


def select_laws(patterns: Iterable[str] | None = None) -> list[Law]:
    """Resolve law id patterns in catalogue order.

    A pattern matches a law when it equals the id or is a group prefix such
    as "P1" or "ORDER".
    """
    if patterns is None:
        return list(LAW_CATALOGUE.values())
    patterns = list(patterns)
    for pattern in patterns:
        if pattern not in LAW_CATALOGUE and not any(
            law_id.startswith(pattern + ".") for law_id in LAW_CATALOGUE
        ):
            raise ValueError(f"unknown law {pattern!r}")
    return [
        law
        for law_id, law in LAW_CATALOGUE.items()
        if any(law_id == p or law_id.startswith(p + ".") for p in patterns)
    ]


def default_universe(size: int) -> Universe:
    if size <= 26:
        labels = [ascii_lowercase[i] for i in range(size)]
    else:
        labels = [f"x{i + 1}" for i in range(size)]
    return Universe(labels)


def _grid_pairs(grid: Grid, blocking_free: bool) -> list[tuple[Fraction, Fraction]]:
    pairs = [(d, g) for d in grid for g in grid]
    if blocking_free:
        pairs = [(d, g) for d, g in pairs if d > 0 or g > 0]
    return pairs


def count_processes(universe_size: int, grid: Grid, blocking_free: bool = True) -> int:
    per_label = len(grid) ** 2 - (1 if blocking_free else 0)
    return per_label**universe_size


def _assemble(universe: Universe, combo) -> FuzzyProcess:
    delta: dict = {}
    gamma: dict = {}
    for x, (d, g) in zip(universe.labels, combo):
        if d > 0:
            delta[x] = d
        if g > 0:
            gamma[x] = g
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, delta),
        FuzzySubset._from_clean(universe, gamma),
    )


def enumerate_processes(
    universe: Universe,
    grid: Grid,
    blocking_free: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[FuzzyProcess]:
    """Every process whose per-label grade pair lies on the grid, in a fixed
    lexicographic order: labels left to right are most to least significant,
    pairs run delta-major."""
    count = count_processes(len(universe), grid, blocking_free)
    if count > budget:
        raise BudgetExceeded(
            f"{count} processes exceed the budget of {budget}"
        )
    pairs = _grid_pairs(grid, blocking_free)
    for combo in itertools.product(pairs, repeat=len(universe)):
        yield _assemble(universe, combo)


def _resolve(law: str | Law) -> Law:
    if isinstance(law, Law):
        return law
    try:
        return LAW_CATALOGUE[law]
    except KeyError:
        raise ValueError(f"unknown law {law!r}") from None


def _violation(
    law: Law,
    universe: Universe,
    procs: Sequence[FuzzyProcess],
    mode: EqualityMode | None,
) -> Counterexample | None:
    if law.holds is not None:
        if law.holds(universe, *procs):
            return None
        return Counterexample(tuple(procs), None, None, None)
    lhs = law.lhs(universe, *procs)
    rhs = law.rhs(universe, *procs)
    if mode is EqualityMode.VALUE:
        if lhs == rhs:
            return None
        label = first_value_difference(lhs, rhs)
    else:
        if lhs.support_signature == rhs.support_signature:
            return None
        label = first_support_difference(lhs, rhs)
    return Counterexample(tuple(procs), lhs, rhs, label)


def _random_process(
    rng: random.Random, universe: Universe, pairs: Sequence[tuple[Fraction, Fraction]]
) -> FuzzyProcess:
    return _assemble(
        universe, [pairs[rng.randrange(len(pairs))] for _ in universe.labels]
    )


def check_law(
    law: str | Law,
    mode: EqualityMode | None,
    scope: Scope,
    budget: int = DEFAULT_BUDGET,
) -> LawVerdict:
    """Check one law over a scope.

    Exhaustive scopes sweep every argument tuple in enumeration order and are
    fully deterministic; randomized scopes draw tuples from the seeded
    generator. The verdict carries the exact case count or the first failing
    tuple.
    """
    law = _resolve(law)
    if law.uses_mode:
        if mode is None:
            raise ValueError(f"law {law.law_id} needs an equality mode")
        recorded_mode = mode
    else:
        recorded_mode = None
    universe = default_universe(scope.universe_size)
    if scope.is_exhaustive:
        count = count_processes(scope.universe_size, scope.grid)
        if count**law.arity > budget:
            raise BudgetExceeded(
                f"{count}^{law.arity} cases exceed the budget of {budget}; "
                "use a randomized scope"
            )
        stream = enumerate_processes(universe, scope.grid, budget=budget)
        if law.arity == 1:
            tuples = ((p,) for p in stream)
        else:
            tuples = itertools.product(list(stream), repeat=law.arity)
        cases = count**law.arity
    else:
        if scope.samples > budget:
            raise BudgetExceeded(
                f"{scope.samples} samples exceed the budget of {budget}"
            )
        rng = random.Random(scope.seed)
        pairs = _grid_pairs(scope.grid, blocking_free=True)
        tuples = (
            tuple(_random_process(rng, universe, pairs) for _ in range(law.arity))
            for _ in range(scope.samples)
        )
        cases = scope.samples
    with op_memo():
        for procs in tuples:
            cex = _violation(law, universe, procs, recorded_mode)
            if cex is not None:
                return LawVerdict(law.law_id, recorded_mode, scope, cex)
    return LawVerdict(law.law_id, recorded_mode, scope, Verified(cases))


def revalidate(verdict: LawVerdict) -> bool:
    """Re-run the law on a counterexample's witnesses through the plain
    operator API and confirm the violation reproduces."""
    if not verdict.is_counterexample:
        raise ValueError("only counterexample verdicts can be revalidated")
    law = LAW_CATALOGUE[verdict.law_id]
    witnesses = verdict.result.witnesses
    universe = witnesses[0].universe
    return _violation(law, universe, witnesses, verdict.mode) is not None


def _distinct_grades(witnesses: Sequence[FuzzyProcess]) -> list[Fraction]:
    values: set[Fraction] = set()
    for w in witnesses:
        values.update(g for _, g in w.delta.items())
        values.update(g for _, g in w.gamma.items())
    return sorted(values)


def _substitute(
    witnesses: Sequence[FuzzyProcess], old: Fraction, new: Fraction
) -> list[FuzzyProcess] | None:
    """Replace one grade value everywhere; None if a witness would stop
    being blocking-free."""
    replaced = []
    for w in witnesses:
        universe = w.universe
        delta = {x: (new if g == old else g) for x, g in w.delta.items()}
        gamma = {x: (new if g == old else g) for x, g in w.gamma.items()}
        delta = {x: g for x, g in delta.items() if g > 0}
        gamma = {x: g for x, g in gamma.items() if g > 0}
        candidate = FuzzyProcess(
            FuzzySubset._from_clean(universe, delta),
            FuzzySubset._from_clean(universe, gamma),
        )
        if not candidate.is_blocking_free:
            return None
        replaced.append(candidate)
    return replaced


def shrink_counterexample(verdict: LawVerdict) -> LawVerdict:
    """Greedily minimize a counterexample: drop universe labels while the
    violation persists, then merge distinct grade values. Deterministic, and
    the result still self-validates."""
    if not verdict.is_counterexample:
        raise ValueError("only counterexample verdicts can be shrunk")
    law = LAW_CATALOGUE[verdict.law_id]
    witnesses = list(verdict.result.witnesses)
    universe = witnesses[0].universe

    changed = True
    while changed:
        changed = False
        # Pass 1: drop labels one at a time.
        if len(universe) > 1:
            for label in universe.labels:
                smaller = universe.without([label])
                candidate = [w.restricted(smaller) for w in witnesses]
                if _violation(law, smaller, candidate, verdict.mode) is not None:
                    universe = smaller
                    witnesses = candidate
                    changed = True
                    break
            if changed:
                continue
        # Pass 2: merge one distinct grade value into another (or into 0).
        values = _distinct_grades(witnesses)
        targets = sorted(set(values) | {Fraction(0)})
        for old in values:
            for new in targets:
                if new == old:
                    continue
                candidate = _substitute(witnesses, old, new)
                if candidate is None:
                    continue
                if _violation(law, universe, candidate, verdict.mode) is not None:
                    witnesses = candidate
                    changed = True
                    break
            if changed:
                break

    cex = _violation(law, universe, witnesses, verdict.mode)
    if cex is None:
        raise AssertionError("shrinking lost the violation")
    return LawVerdict(verdict.law_id, verdict.mode, verdict.scope, cex)


@dataclass(frozen=True)
class SuiteReport:
    verdicts: tuple[LawVerdict, ...]
    elapsed_seconds: float


def run_suite(
    scopes: Sequence[Scope],
    laws: Iterable[str] | None = None,
    modes: Sequence[EqualityMode] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SuiteReport:
    """Check the selected laws over every scope.

    Equational laws run once per equality mode, boolean laws once per scope.
    Counterexamples are shrunk before they are reported. The report is a
    deterministic function of the configuration, seeds included.
    """
    selected = select_laws(list(laws) if laws is not None else None)
    mode_list = list(modes) if modes else [EqualityMode.VALUE, EqualityMode.SUPPORT]
    verdicts: list[LawVerdict] = []
    started = time.perf_counter()
    for scope in scopes:
        for law in selected:
            law_modes = mode_list if law.uses_mode else [None]
            for mode in law_modes:
                verdict = check_law(law, mode, scope, budget)
                if verdict.is_counterexample:
                    verdict = shrink_counterexample(verdict)
                verdicts.append(verdict)
    elapsed = time.perf_counter() - started
    return SuiteReport(tuple(verdicts), elapsed)
