"""Core value types for fuzzy device-environment contracts.

A process couples two graded views of one finite execution universe: how
strongly the device can drive each execution (delta, accessibility) and how
strongly the environment tolerates it (gamma, acceptability). Grades are
exact rationals in [0, 1]; the algebra only ever compares grades or takes
min/max, so results never leave the grade set and no rounding can occur.

Every type here is immutable after construction and every operation is a
pure function of its inputs, so unrestricted concurrent use is safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from ._memo import memoized_op
from .errors import (
    BlockingViolation,
    DuplicateLabel,
    GradeOutOfRange,
    UniverseMismatch,
    UnknownLabel,
)

GradeLike = Union[Fraction, int, str]

GRADE_ZERO = Fraction(0)
GRADE_ONE = Fraction(1)

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Words the script language claims for itself; universes reject them as
# labels so that canonical printing always parses back.
RESERVED_WORDS = frozenset(
    {"universe", "process", "let", "assert", "delta", "gamma", "OMEGA", "TOP", "BOT"}
)


def as_grade(value: GradeLike) -> Fraction:
    """Convert a value to an exact membership grade in [0, 1].

    Accepts Fraction, int, and strings such as "4/5", "0.7" or "1". Decimal
    strings convert exactly (0.7 becomes 7/10), never through binary floating
    point; float inputs are rejected outright for the same reason.
    """
    if isinstance(value, float):
        raise TypeError(
            "float grades are not accepted; pass a Fraction, int, or string"
        )
    if isinstance(value, Fraction):
        grade = value
    elif isinstance(value, int):
        grade = Fraction(value)
    elif isinstance(value, str):
        grade = Fraction(value.strip())
    else:
        raise TypeError(f"cannot interpret {value!r} as a grade")
    if grade < 0 or grade > 1:
        raise GradeOutOfRange(f"grade {grade} is outside [0, 1]")
    return grade


class Universe:
    """An ordered finite set of execution labels.

    Declaration order is canonical: iteration, printing, enumeration and
    witness reporting all follow it.
    """

    __slots__ = ("_labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise ValueError("a universe must contain at least one label")
        index: dict[str, int] = {}
        for position, label in enumerate(labels):
            if not isinstance(label, str) or not _LABEL_RE.match(label):
                raise ValueError(f"invalid label {label!r}")
            if label in RESERVED_WORDS:
                raise ValueError(f"label {label!r} is a reserved word")
            if label in index:
                raise DuplicateLabel(f"duplicate label {label!r} in universe")
            index[label] = position
        self._labels = labels
        self._index = index

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} is not in the universe") from None

    def without(self, labels: Iterable[str]) -> "Universe":
        dropped = set(labels)
        return Universe(x for x in self._labels if x not in dropped)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Universe):
            return NotImplemented
        return self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"Universe({' '.join(self._labels)})"


class FuzzySubset:
    """A sparse fuzzy subset of a universe.

    Only strictly positive grades are stored; an absent label has grade zero,
    so the key set is exactly the support.
    """

    __slots__ = ("_universe", "_grades", "_support", "_hash")

    def __init__(
        self,
        universe: Universe,
        grades: Union[Mapping[str, GradeLike], Iterable[tuple[str, GradeLike]]],
    ):
        items = grades.items() if isinstance(grades, Mapping) else grades
        positive: dict[str, Fraction] = {}
        seen: set[str] = set()
        for label, raw in items:
            if label not in universe:
                raise UnknownLabel(f"label {label!r} is not in the universe")
            if label in seen:
                raise DuplicateLabel(f"label {label!r} listed twice")
            seen.add(label)
            grade = as_grade(raw)
            if grade > 0:
                positive[label] = grade
        self._universe = universe
        self._grades = {x: positive[x] for x in universe if x in positive}
        self._support = None
        self._hash = None

    @classmethod
    def _from_clean(cls, universe: Universe, grades: dict[str, Fraction]):
        """Internal fast path: grades already validated, positive, and in
        universe order."""
        subset = cls.__new__(cls)
        subset._universe = universe
        subset._grades = grades
        subset._support = None
        subset._hash = None
        return subset

    @property
    def universe(self) -> Universe:
        return self._universe

    @property
    def support(self) -> frozenset[str]:
        if self._support is None:
            self._support = frozenset(self._grades)
        return self._support

    def grade(self, label: str) -> Fraction:
        if label not in self._universe:
            raise UnknownLabel(f"label {label!r} is not in the universe")
        return self._grades.get(label, GRADE_ZERO)

    def items(self) -> Iterator[tuple[str, Fraction]]:
        """(label, grade) pairs of the support, in universe order."""
        return iter(self._grades.items())

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self._grades)

    def restricted(self, universe: Universe) -> "FuzzySubset":
        return FuzzySubset._from_clean(
            universe, {x: g for x, g in self._grades.items() if x in universe}
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FuzzySubset):
            return NotImplemented
        return self._universe == other._universe and self._grades == other._grades

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._universe, tuple(self._grades.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{x}={g}" for x, g in self._grades.items())
        return "{" + body + "}"


class FuzzyProcess:
    """A contract between a device and its environment over one universe.

    The operators mirror the script language: ``p * q`` composes devices,
    ``p + q`` composes environments, ``p & q`` is choice between devices,
    ``p | q`` is choice between environments, unary ``-p`` swaps the two
    views, and ``p <= q`` is refinement (q can substitute for p).
    """

    __slots__ = ("_delta", "_gamma", "_hash", "_support_sig")

    def __init__(self, delta: FuzzySubset, gamma: FuzzySubset):
        if delta.universe != gamma.universe:
            raise UniverseMismatch(
                "delta and gamma must range over the same universe"
            )
        self._delta = delta
        self._gamma = gamma
        self._hash = None
        self._support_sig = None

    @property
    def universe(self) -> Universe:
        return self._delta.universe

    @property
    def delta(self) -> FuzzySubset:
        return self._delta

    @property
    def gamma(self) -> FuzzySubset:
        return self._gamma

    @property
    def is_blocking_free(self) -> bool:
        return len(self._delta.support | self._gamma.support) == len(self.universe)

    @property
    def support_signature(self) -> tuple[frozenset[str], frozenset[str]]:
        if self._support_sig is None:
            self._support_sig = (self._delta.support, self._gamma.support)
        return self._support_sig

    def restricted(self, universe: Universe) -> "FuzzyProcess":
        return FuzzyProcess(
            self._delta.restricted(universe), self._gamma.restricted(universe)
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FuzzyProcess):
            return NotImplemented
        return self._delta == other._delta and self._gamma == other._gamma

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._delta, self._gamma))
        return self._hash

    def __repr__(self) -> str:
        return f"<FuzzyProcess delta={self._delta!r} gamma={self._gamma!r}>"

    def __mul__(self, other: "FuzzyProcess") -> "FuzzyProcess":
        from .algebra import product

        return product(self, other)

    def __add__(self, other: "FuzzyProcess") -> "FuzzyProcess":
        from .algebra import sum_

        return sum_(self, other)

    def __and__(self, other: "FuzzyProcess") -> "FuzzyProcess":
        from .algebra import meet

        return meet(self, other)

    def __or__(self, other: "FuzzyProcess") -> "FuzzyProcess":
        from .algebra import join

        return join(self, other)

    def __neg__(self) -> "FuzzyProcess":
        from .algebra import reflect

        return reflect(self)

    def __le__(self, other: "FuzzyProcess") -> bool:
        return refines(self, other)

    def __ge__(self, other: "FuzzyProcess") -> bool:
        return refines(other, self)


@dataclass(frozen=True)
class Classification:
    """Partition of a universe by the sign of the two grades.

    goals: both positive; escapes: only gamma positive; rejects: only delta
    positive; blockings: both zero. The four sets are disjoint and cover the
    universe.
    """

    goals: frozenset[str]
    escapes: frozenset[str]
    rejects: frozenset[str]
    blockings: frozenset[str]

    @property
    def violations(self) -> frozenset[str]:
        return self.escapes | self.rejects

    @property
    def contract_set(self) -> frozenset[str]:
        return self.goals


class BlockingPolicy(Enum):
    STRICT = "strict"
    REMOVE_BLOCKINGS = "remove-blockings"


class EqualityMode(Enum):
    VALUE = "value"
    SUPPORT = "support"


class ConstantKind(Enum):
    OMEGA = "OMEGA"
    TOP = "TOP"
    BOTTOM = "BOT"


class ExecutionClass(Enum):
    GOAL = "goal"
    ESCAPE = "escape"
    REJECT = "reject"
    BLOCKING = "blocking"


@dataclass(frozen=True)
class ExecutionFlags:
    completely_accessible: bool
    completely_acceptable: bool
    execution_class: ExecutionClass


@dataclass(frozen=True)
class ProcessFlags:
    is_robust: bool
    is_chaotic: bool


def make_process(
    universe: Universe,
    delta_pairs: Iterable[tuple[str, GradeLike]],
    gamma_pairs: Iterable[tuple[str, GradeLike]],
    policy: BlockingPolicy = BlockingPolicy.STRICT,
) -> FuzzyProcess:
    """Build a process from (label, grade) pairs under a blocking policy.

    Zero-grade pairs denote non-membership and are dropped. Labels where both
    channels end up at zero are blocking: under STRICT they raise, under
    REMOVE_BLOCKINGS they are cut out of the universe, so the result is
    blocking-free either way.
    """
    delta = FuzzySubset(universe, delta_pairs)
    gamma = FuzzySubset(universe, gamma_pairs)
    blocked = [
        x for x in universe if x not in delta.support and x not in gamma.support
    ]
    if blocked:
        if policy is BlockingPolicy.STRICT:
            raise BlockingViolation(
                f"blocking executions under strict policy: {' '.join(blocked)}"
            )
        if len(blocked) == len(universe):
            raise BlockingViolation(
                "every execution is blocking; removing them leaves an empty universe"
            )
        universe = universe.without(blocked)
        delta = delta.restricted(universe)
        gamma = gamma.restricted(universe)
    return FuzzyProcess(delta, gamma)


def grades(process: FuzzyProcess, label: str) -> tuple[Fraction, Fraction]:
    """The (delta, gamma) grades of one execution; absent support keys are 0."""
    return (process.delta.grade(label), process.gamma.grade(label))


def classify(process: FuzzyProcess) -> Classification:
    goals, escapes, rejects, blockings = [], [], [], []
    for x in process.universe:
        d = process.delta.grade(x)
        g = process.gamma.grade(x)
        if d > 0 and g > 0:
            goals.append(x)
        elif d == 0 and g > 0:
            escapes.append(x)
        elif d > 0:
            rejects.append(x)
        else:
            blockings.append(x)
    return Classification(
        goals=frozenset(goals),
        escapes=frozenset(escapes),
        rejects=frozenset(rejects),
        blockings=frozenset(blockings),
    )


def execution_flags(process: FuzzyProcess, label: str) -> ExecutionFlags:
    d, g = grades(process, label)
    if d > 0 and g > 0:
        cls = ExecutionClass.GOAL
    elif d == 0 and g > 0:
        cls = ExecutionClass.ESCAPE
    elif d > 0:
        cls = ExecutionClass.REJECT
    else:
        cls = ExecutionClass.BLOCKING
    return ExecutionFlags(
        completely_accessible=d == 1,
        completely_acceptable=g == 1,
        execution_class=cls,
    )


def process_flags(process: FuzzyProcess) -> ProcessFlags:
    """Robust: gamma is 1 everywhere (no demands on the environment).
    Chaotic: delta is 1 everywhere (no guarantees to the environment)."""
    robust = all(process.gamma.grade(x) == 1 for x in process.universe)
    chaotic = all(process.delta.grade(x) == 1 for x in process.universe)
    return ProcessFlags(is_robust=robust, is_chaotic=chaotic)


def constant(kind: ConstantKind, universe: Universe) -> FuzzyProcess:
    """The three distinguished processes over a universe: OMEGA grades both
    channels 1 everywhere, TOP only gamma, BOTTOM only delta."""
    ones = {x: GRADE_ONE for x in universe}
    empty: dict[str, Fraction] = {}
    if kind is ConstantKind.OMEGA:
        d, g = ones, dict(ones)
    elif kind is ConstantKind.TOP:
        d, g = empty, ones
    elif kind is ConstantKind.BOTTOM:
        d, g = ones, empty
    else:
        raise ValueError(f"unknown constant kind {kind!r}")
    return FuzzyProcess(
        FuzzySubset._from_clean(universe, d), FuzzySubset._from_clean(universe, g)
    )


def omega(universe: Universe) -> FuzzyProcess:
    return constant(ConstantKind.OMEGA, universe)


def top(universe: Universe) -> FuzzyProcess:
    return constant(ConstantKind.TOP, universe)


def bottom(universe: Universe) -> FuzzyProcess:
    return constant(ConstantKind.BOTTOM, universe)


def _require_same_universe(p: FuzzyProcess, q: FuzzyProcess) -> Universe:
    if p.universe != q.universe:
        raise UniverseMismatch("processes range over different universes")
    return p.universe


@memoized_op
def refines(p: FuzzyProcess, q: FuzzyProcess) -> bool:
    """True when q can substitute for p: pointwise, q is no more accessible
    and no less acceptable than p."""
    _require_same_universe(p, q)
    pd, pg = p.delta, p.gamma
    qd, qg = q.delta, q.gamma
    return all(
        pd.grade(x) >= qd.grade(x) and pg.grade(x) <= qg.grade(x) for x in p.universe
    )


def equal(p: FuzzyProcess, q: FuzzyProcess, mode: EqualityMode) -> bool:
    _require_same_universe(p, q)
    if mode is EqualityMode.VALUE:
        return p.delta == q.delta and p.gamma == q.gamma
    if mode is EqualityMode.SUPPORT:
        return p.support_signature == q.support_signature
    raise ValueError(f"unknown equality mode {mode!r}")


def first_value_difference(p: FuzzyProcess, q: FuzzyProcess) -> str | None:
    """First label (universe order) where the grades of p and q differ."""
    _require_same_universe(p, q)
    for x in p.universe:
        if p.delta.grade(x) != q.delta.grade(x) or p.gamma.grade(x) != q.gamma.grade(
            x
        ):
            return x
    return None


def first_support_difference(p: FuzzyProcess, q: FuzzyProcess) -> str | None:
    """First label where support membership differs in either channel."""
    _require_same_universe(p, q)
    for x in p.universe:
        if (p.delta.grade(x) > 0) != (q.delta.grade(x) > 0) or (
            p.gamma.grade(x) > 0
        ) != (q.gamma.grade(x) > 0):
            return x
    return None


def first_refinement_violation(p: FuzzyProcess, q: FuzzyProcess) -> str | None:
    """First label where the pointwise refinement conditions fail for p <= q."""
    _require_same_universe(p, q)
    for x in p.universe:
        if p.delta.grade(x) < q.delta.grade(x) or p.gamma.grade(x) > q.gamma.grade(x):
            return x
    return None
