from fractions import Fraction

import pytest
from hypothesis import given

from fuzzproc import (
    BlockingViolation,
    EqualityMode,
    FuzzyProcess,
    FuzzySubset,
    Universe,
    UniverseMismatch,
    bottom,
    equal,
    join,
    meet,
    omega,
    process_flags,
    product,
    reflect,
    refines,
    sum_,
    top,
)
from procgen import processes


def _grade_map(subset):
    return {x: g for x, g in subset.items()}


class TestFixtureTable:
    """The worked results for the P and Q fixtures, frozen exactly."""

    def test_product(self, proc_p, proc_q):
        result = product(proc_p, proc_q)
        assert _grade_map(result.delta) == {"a": Fraction(3, 5)}
        assert _grade_map(result.gamma) == {
            "a": Fraction(2, 5),
            "b": Fraction(3, 10),
            "c": Fraction(7, 10),
        }

    def test_sum(self, proc_p, proc_q):
        result = sum_(proc_p, proc_q)
        assert _grade_map(result.delta) == {
            "a": Fraction(3, 5),
            "b": Fraction(3, 10),
            "c": Fraction(7, 10),
        }
        assert _grade_map(result.gamma) == {"a": Fraction(2, 5)}

    def test_meet(self, proc_p, proc_q):
        result = meet(proc_p, proc_q)
        assert _grade_map(result.delta) == {
            "a": Fraction(4, 5),
            "b": Fraction(1, 2),
            "c": Fraction(9, 10),
        }
        assert _grade_map(result.gamma) == {"a": Fraction(2, 5)}

    def test_join(self, proc_p, proc_q):
        result = join(proc_p, proc_q)
        assert _grade_map(result.delta) == {"a": Fraction(3, 5)}
        assert _grade_map(result.gamma) == {
            "a": Fraction(1),
            "b": Fraction(3, 10),
            "c": Fraction(7, 10),
        }

    def test_reflect(self, proc_p):
        result = reflect(proc_p)
        assert _grade_map(result.delta) == {"a": Fraction(2, 5), "c": Fraction(7, 10)}
        assert _grade_map(result.gamma) == {"a": Fraction(4, 5), "b": Fraction(1, 2)}

    def test_product_with_top(self, proc_p, universe_abc):
        result = product(proc_p, top(universe_abc))
        assert _grade_map(result.delta) == {}
        assert _grade_map(result.gamma) == {
            "a": Fraction(2, 5),
            "b": Fraction(1, 2),
            "c": Fraction(7, 10),
        }

    def test_sum_with_bottom_support_level_only(self, proc_p, universe_abc):
        result = sum_(proc_p, bottom(universe_abc))
        assert equal(result, bottom(universe_abc), EqualityMode.SUPPORT)
        assert not equal(result, bottom(universe_abc), EqualityMode.VALUE)


class TestIdentities:
    def test_product_omega(self, proc_p, universe_abc):
        assert product(proc_p, omega(universe_abc)) == proc_p

    def test_sum_omega(self, proc_p, universe_abc):
        assert sum_(proc_p, omega(universe_abc)) == proc_p

    def test_meet_top(self, proc_p, universe_abc):
        assert meet(proc_p, top(universe_abc)) == proc_p

    def test_meet_bottom(self, proc_p, universe_abc):
        assert meet(proc_p, bottom(universe_abc)) == bottom(universe_abc)

    def test_join_bottom(self, proc_p, universe_abc):
        assert join(proc_p, bottom(universe_abc)) == proc_p

    def test_join_top(self, proc_p, universe_abc):
        assert join(proc_p, top(universe_abc)) == top(universe_abc)


class TestPreconditions:
    def test_universe_mismatch(self, proc_p):
        other = omega(Universe(("a",)))
        for op in (product, sum_, meet, join):
            with pytest.raises(UniverseMismatch):
                op(proc_p, other)

    def test_blocking_inputs_rejected(self, universe_abc, proc_p):
        # Built through the raw constructor: label c is blocking.
        blocked = FuzzyProcess(
            FuzzySubset(universe_abc, [("a", 1)]),
            FuzzySubset(universe_abc, [("b", 1)]),
        )
        assert not blocked.is_blocking_free
        for op in (product, sum_, meet, join):
            with pytest.raises(BlockingViolation):
                op(proc_p, blocked)

    def test_reflect_needs_no_precondition(self, universe_abc):
        blocked = FuzzyProcess(
            FuzzySubset(universe_abc, [("a", 1)]),
            FuzzySubset(universe_abc, [("b", 1)]),
        )
        assert reflect(blocked).delta.support == {"b"}


class TestOperatorSugar:
    def test_dunder_spellings(self, proc_p, proc_q):
        assert proc_p * proc_q == product(proc_p, proc_q)
        assert proc_p + proc_q == sum_(proc_p, proc_q)
        assert (proc_p & proc_q) == meet(proc_p, proc_q)
        assert (proc_p | proc_q) == join(proc_p, proc_q)
        assert -proc_p == reflect(proc_p)


@given(processes(), processes())
def test_commutativity(p, q):
    assert product(p, q) == product(q, p)
    assert sum_(p, q) == sum_(q, p)
    assert meet(p, q) == meet(q, p)
    assert join(p, q) == join(q, p)


@given(processes())
def test_idempotence(p):
    assert product(p, p) == p
    assert sum_(p, p) == p
    assert meet(p, p) == p
    assert join(p, p) == p


@given(processes(), processes())
def test_closure_blocking_free(p, q):
    for result in (product(p, q), sum_(p, q), meet(p, q), join(p, q), reflect(p)):
        assert result.is_blocking_free


@given(processes(), processes())
def test_support_projections(p, q):
    prod = product(p, q)
    assert prod.delta.support == p.delta.support & q.delta.support
    escapes_p = p.gamma.support - p.delta.support
    rejects_p = p.delta.support - p.gamma.support
    escapes_q = q.gamma.support - q.delta.support
    rejects_q = q.delta.support - q.gamma.support
    expected = (
        (p.gamma.support & q.gamma.support)
        | (escapes_p & rejects_q)
        | (rejects_p & escapes_q)
    )
    assert prod.gamma.support == expected
    # The sum is the exact channel mirror.
    added = sum_(p, q)
    assert added.gamma.support == p.gamma.support & q.gamma.support
    expected_delta = (
        (p.delta.support & q.delta.support)
        | (escapes_p & rejects_q)
        | (rejects_p & escapes_q)
    )
    assert added.delta.support == expected_delta


@given(processes())
def test_reflection_involution(p):
    assert reflect(reflect(p)) == p


@given(processes(), processes())
def test_reflection_reverses_refinement(p, q):
    assert refines(p, q) == refines(reflect(q), reflect(p))


@given(processes())
def test_reflection_swaps_robust_and_chaotic(p):
    assert process_flags(p).is_robust == process_flags(reflect(p)).is_chaotic
    assert process_flags(p).is_chaotic == process_flags(reflect(p)).is_robust


@given(processes(), processes())
def test_de_morgan_dualities(p, q):
    assert reflect(product(p, q)) == sum_(reflect(p), reflect(q))
    assert reflect(sum_(p, q)) == product(reflect(p), reflect(q))
    assert reflect(meet(p, q)) == join(reflect(p), reflect(q))
    assert reflect(join(p, q)) == meet(reflect(p), reflect(q))


@given(processes(), processes(), processes())
def test_meet_is_greatest_lower_bound(p, q, r):
    bound = meet(p, q)
    assert refines(bound, p) and refines(bound, q)
    if refines(r, p) and refines(r, q):
        assert refines(r, bound)


@given(processes(), processes(), processes())
def test_join_is_least_upper_bound(p, q, r):
    bound = join(p, q)
    assert refines(p, bound) and refines(q, bound)
    if refines(p, r) and refines(q, r):
        assert refines(bound, r)
