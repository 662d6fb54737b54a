from fractions import Fraction

import pytest

from fuzzproc import (
    BudgetExceeded,
    EqualityMode,
    FuzzyProcess,
    FuzzySubset,
    Grid,
    LAW_CATALOGUE,
    Scope,
    Universe,
    check_law,
    count_processes,
    default_universe,
    enumerate_processes,
    equal,
    omega,
    process_flags,
    product,
    revalidate,
    run_suite,
    select_laws,
    shrink_counterexample,
)

VALUE = EqualityMode.VALUE
SUPPORT = EqualityMode.SUPPORT

GRID3 = Grid(["0", "1/2", "1"])
GRID_FIFTH = Grid(["0", "1/5", "1"])


def _proc(universe, delta, gamma):
    return FuzzyProcess(
        FuzzySubset(universe, delta), FuzzySubset(universe, gamma)
    )


class TestGrid:
    def test_normalizes_and_sorts(self):
        assert Grid(["1", "0", "1/2", "1/2"]).grades == (
            Fraction(0),
            Fraction(1, 2),
            Fraction(1),
        )

    def test_requires_zero_and_one(self):
        with pytest.raises(ValueError):
            Grid(["0", "1/2"])
        with pytest.raises(ValueError):
            Grid(["1/2", "1"])

    def test_parse(self):
        assert Grid.parse("0, 0.5 ,1").grades == GRID3.grades


class TestScope:
    def test_validation(self):
        with pytest.raises(ValueError):
            Scope(0, GRID3)
        with pytest.raises(ValueError):
            Scope(1, GRID3, samples=0)
        with pytest.raises(ValueError):
            Scope(1, GRID3, seed=2**64)

    def test_exhaustive_flag(self):
        assert Scope(1, GRID3).is_exhaustive
        assert not Scope(1, GRID3, samples=10).is_exhaustive


class TestEnumeration:
    def test_counts(self):
        assert len(list(enumerate_processes(default_universe(1), GRID3))) == 8
        assert len(list(enumerate_processes(default_universe(2), GRID3))) == 64
        assert (
            len(list(enumerate_processes(default_universe(1), GRID3, blocking_free=False)))
            == 9
        )

    def test_closed_form_matches(self):
        assert count_processes(1, GRID3) == 8
        assert count_processes(2, GRID3) == 64
        assert count_processes(1, GRID3, blocking_free=False) == 9

    def test_order_is_pair_index_lexicographic(self):
        first = list(enumerate_processes(default_universe(1), GRID3))[:3]
        half = Fraction(1, 2)
        u = default_universe(1)
        assert first[0] == _proc(u, [], [("a", half)])
        assert first[1] == _proc(u, [], [("a", 1)])
        assert first[2] == _proc(u, [("a", half)], [])

    def test_all_blocking_free(self):
        assert all(
            p.is_blocking_free
            for p in enumerate_processes(default_universe(2), GRID3)
        )

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_processes(default_universe(2), GRID3, budget=10))

    def test_omega_is_unique_robust_chaotic(self):
        u = default_universe(2)
        both = [
            p
            for p in enumerate_processes(u, GRID3)
            if process_flags(p).is_robust and process_flags(p).is_chaotic
        ]
        assert both == [omega(u)]


class TestCheckLaw:
    def test_identity_law_verified(self):
        verdict = check_law("P1.iv", VALUE, Scope(1, GRID3))
        assert verdict.is_verified and verdict.result.cases_checked == 8

    def test_associativity_fails_at_value_level(self):
        verdict = check_law("P1.ii", VALUE, Scope(1, GRID_FIFTH))
        assert verdict.is_counterexample
        assert revalidate(verdict)

    def test_known_witness_triple(self):
        # Frozen by hand from the product's region analysis.
        u = default_universe(1)
        fifth = Fraction(1, 5)
        p = _proc(u, [("a", 1)], [("a", fifth)])
        q = _proc(u, [("a", 1)], [])
        r = _proc(u, [], [("a", 1)])
        lhs = product(p, product(q, r))
        rhs = product(product(p, q), r)
        assert lhs == _proc(u, [], [("a", fifth)])
        assert rhs == _proc(u, [], [("a", 1)])
        assert not equal(lhs, rhs, VALUE)
        assert equal(lhs, rhs, SUPPORT)

    def test_associativity_holds_at_support_level(self):
        verdict = check_law("P1.ii", SUPPORT, Scope(1, GRID3))
        assert verdict.is_verified and verdict.result.cases_checked == 512

    def test_top_absorption_split_verdict(self):
        value = check_law("P3.iii", VALUE, Scope(1, GRID3))
        support = check_law("P3.iii", SUPPORT, Scope(1, GRID3))
        assert value.is_counterexample and support.is_verified

    def test_boolean_laws_record_no_mode(self):
        verdict = check_law("ORDER.reflexive", VALUE, Scope(1, GRID3))
        assert verdict.mode is None and verdict.is_verified

    def test_equational_law_requires_mode(self):
        with pytest.raises(ValueError):
            check_law("P1.i", None, Scope(1, GRID3))

    def test_unknown_law(self):
        with pytest.raises(ValueError):
            check_law("P9.i", VALUE, Scope(1, GRID3))

    def test_budget_for_ternary(self):
        with pytest.raises(BudgetExceeded):
            check_law("P1.ii", VALUE, Scope(2, GRID3), budget=1000)

    def test_counterexample_is_first_in_enumeration_order(self):
        a = check_law("P1.ii", VALUE, Scope(1, GRID3))
        b = check_law("P1.ii", VALUE, Scope(1, GRID3))
        assert a == b

    def test_randomized_deterministic_per_seed(self):
        scope = Scope(3, GRID3, samples=500, seed=7)
        assert check_law("P4.i", VALUE, scope) == check_law("P4.i", VALUE, scope)

    def test_randomized_budget(self):
        with pytest.raises(BudgetExceeded):
            check_law("P1.i", VALUE, Scope(1, GRID3, samples=100), budget=10)


class TestShrink:
    def test_shrinks_to_single_label(self):
        verdict = check_law("P1.ii", VALUE, Scope(2, GRID3))
        assert len(verdict.result.witnesses[0].universe) == 2
        shrunk = shrink_counterexample(verdict)
        assert len(shrunk.result.witnesses[0].universe) == 1
        assert revalidate(shrunk)

    def test_shrink_is_idempotent(self):
        verdict = shrink_counterexample(check_law("P1.ii", VALUE, Scope(2, GRID3)))
        again = shrink_counterexample(verdict)
        assert again.result.witnesses == verdict.result.witnesses

    def test_minimal_witness_shrinks_to_itself(self):
        verdict = shrink_counterexample(
            check_law("P3.iii", VALUE, Scope(1, GRID3))
        )
        assert len(verdict.result.witnesses) == 1
        assert len(verdict.result.witnesses[0].universe) == 1

    def test_shrink_rejects_verified(self):
        verdict = check_law("P1.iv", VALUE, Scope(1, GRID3))
        with pytest.raises(ValueError):
            shrink_counterexample(verdict)

    def test_shrunk_witness_grades_stay_on_grid(self):
        verdict = shrink_counterexample(check_law("P1.ii", VALUE, Scope(2, GRID3)))
        allowed = set(GRID3.grades)
        for witness in verdict.result.witnesses:
            for _, grade in witness.delta.items():
                assert grade in allowed
            for _, grade in witness.gamma.items():
                assert grade in allowed


class TestRevalidate:
    def test_rejects_verified(self):
        verdict = check_law("P1.iv", VALUE, Scope(1, GRID3))
        with pytest.raises(ValueError):
            revalidate(verdict)

    def test_counterexample_survives_larger_grid(self):
        # Grades of a witness embed unchanged into any supergrid, and the
        # violation does not depend on the grid at all.
        verdict = check_law("P1.ii", VALUE, Scope(1, GRID3))
        supergrid = Grid(["0", "1/4", "1/2", "3/4", "1"])
        assert all(
            g in set(supergrid.grades)
            for w in verdict.result.witnesses
            for _, g in list(w.delta.items()) + list(w.gamma.items())
        )
        assert revalidate(verdict)


class TestSelectLaws:
    def test_all_laws_by_default(self):
        assert len(select_laws()) == len(LAW_CATALOGUE) == 29

    def test_group_prefix(self):
        assert [law.law_id for law in select_laws(["P2"])] == [
            "P2.i",
            "P2.ii",
            "P2.iii",
        ]

    def test_exact_id(self):
        assert [law.law_id for law in select_laws(["P1.ii'"])] == ["P1.ii'"]

    def test_unknown_pattern(self):
        with pytest.raises(ValueError):
            select_laws(["NOPE"])


class TestRunSuite:
    def test_deterministic(self):
        config = dict(scopes=[Scope(1, GRID3)], laws=["P1", "ORDER"])
        assert run_suite(**config).verdicts == run_suite(**config).verdicts

    def test_counterexamples_are_shrunk_and_valid(self):
        report = run_suite([Scope(2, GRID3)], laws=["P1.ii", "P3.iii"])
        cexs = [v for v in report.verdicts if v.is_counterexample]
        assert cexs
        for verdict in cexs:
            assert len(verdict.result.witnesses[0].universe) == 1
            assert revalidate(verdict)

    def test_value_verified_implies_support_verified(self):
        report = run_suite([Scope(1, GRID3)])
        by_key = {(v.law_id, v.mode): v for v in report.verdicts}
        for (law_id, mode), verdict in by_key.items():
            if mode is VALUE and verdict.is_verified:
                assert by_key[(law_id, SUPPORT)].is_verified

    def test_modes_filter(self):
        report = run_suite([Scope(1, GRID3)], laws=["P1.i", "ORDER.reflexive"], modes=[VALUE])
        assert [(v.law_id, v.mode) for v in report.verdicts] == [
            ("P1.i", VALUE),
            ("ORDER.reflexive", None),
        ]


class TestDefaultUniverse:
    def test_letters(self):
        assert default_universe(3).labels == ("a", "b", "c")

    def test_large(self):
        assert default_universe(27).labels[:2] == ("x1", "x2")
