import random

import pytest

from src.errors import IlpError, IlpOverflowError
from src.ilp import (
    EQ,
    GE,
    LE,
    BoundariedIlp,
    BoundarySet,
    Constraint,
    DomainInterval,
    box,
    check_assignment,
    domain_rows,
    extract_subsystem,
    is_normalized,
    make_ilp,
    normalize,
    pin_variable,
    substitute_variable,
    substitute_variables,
)
from src.oracle import brute_feasible

from .factories import random_ilp


def _solutions(ilp) -> set[tuple[int, ...]]:
    return {values for values in box(ilp.domains) if check_assignment(ilp, dict(enumerate(values)))}


class TestConstraint:
    def test_it_sorts_coefficients(self):
        constraint = Constraint.of({2: 1, 0: -3}, LE, 4)

        assert constraint.coeffs == ((0, -3), (2, 1))
        assert constraint.support == frozenset({0, 2})

    def test_it_rejects_zero_coefficients(self):
        with pytest.raises(IlpError):
            Constraint.of({0: 0}, LE, 1)

    def test_it_rejects_repeated_variables(self):
        with pytest.raises(IlpError):
            Constraint.of([(0, 1), (0, 2)], LE, 1)

    def test_it_rejects_coefficients_beyond_64_bits(self):
        with pytest.raises(IlpOverflowError):
            Constraint.of({0: 1 << 63}, LE, 0)

    def test_negation_flips_the_relation(self):
        negated = Constraint.of({0: 2, 1: -1}, GE, 3).negated()

        assert negated == Constraint.of({0: -2, 1: 1}, LE, -3)


class TestIlp:
    def test_it_rejects_empty_domains(self):
        with pytest.raises(IlpError):
            DomainInterval(2, 1)

    def test_it_rejects_unknown_variables(self):
        with pytest.raises(IlpError):
            make_ilp([(0, 1)], [Constraint.of({1: 1}, LE, 0)])

    def test_it_looks_up_names(self):
        ilp = make_ilp([(0, 1), (0, 1)], names=["a", "b"])

        assert ilp.index_of("b") == 1
        with pytest.raises(IlpError):
            ilp.index_of("c")


class TestNormalize:
    def test_it_splits_equalities(self):
        ilp = make_ilp([(0, 3), (0, 3)], [Constraint.of({0: 1, 1: 1}, EQ, 3), Constraint.of({0: 1}, GE, 1)])
        normalized = normalize(ilp)

        assert is_normalized(normalized)
        assert normalized.constraints == (
            Constraint.of({0: 1, 1: 1}, LE, 3),
            Constraint.of({0: -1, 1: -1}, LE, -3),
            Constraint.of({0: -1}, LE, -1),
        )

    def test_it_is_the_identity_on_normalized_systems(self):
        ilp = make_ilp([(0, 1)], [Constraint.of({0: 1}, LE, 0)])

        assert normalize(ilp) is ilp

    def test_it_preserves_the_feasible_set(self):
        ilp = make_ilp([(0, 2), (0, 2)], [Constraint.of({0: 1, 1: -1}, EQ, 1)])
        normalized = normalize(ilp)

        for x in range(3):
            for y in range(3):
                assert check_assignment(ilp, {0: x, 1: y}) == check_assignment(normalized, {0: x, 1: y})


class TestCheckAssignment:
    def test_it_checks_domains(self):
        ilp = make_ilp([(0, 1)])

        assert check_assignment(ilp, {0: 1})
        assert not check_assignment(ilp, {0: 2})

    def test_it_rejects_partial_assignments(self):
        ilp = make_ilp([(0, 1), (0, 1)])

        with pytest.raises(IlpError):
            check_assignment(ilp, {0: 1})


class TestSubstitution:
    def test_it_moves_fixed_values_to_the_right_hand_side(self):
        ilp = make_ilp([(0, 3), (0, 3), (0, 3)], [Constraint.of({0: 2, 1: 1, 2: -1}, LE, 5)])
        residual, mapping = substitute_variables(ilp, {1: 3})

        assert mapping == {0: 0, 2: 1}
        assert residual.constraints == (Constraint.of({0: 2, 1: -1}, LE, 2),)

    def test_it_keeps_rows_with_empty_support(self):
        ilp = make_ilp([(0, 1)], [Constraint.of({0: 1}, LE, 0)])
        residual = substitute_variable(ilp, 0, 1)

        assert residual.n == 0
        assert residual.constraints == (Constraint((), LE, -1),)
        assert not check_assignment(residual, {})

    def test_it_rejects_values_outside_the_domain(self):
        ilp = make_ilp([(0, 1)])

        with pytest.raises(IlpError):
            substitute_variable(ilp, 0, 2)

    def test_pinning_narrows_the_domain(self):
        ilp = pin_variable(make_ilp([(0, 4)]), 0, 3)

        assert ilp.variables[0].domain == DomainInterval(3, 3)

    def test_pinning_keeps_exactly_the_matching_solutions(self):
        rng = random.Random(67)

        for _ in range(80):
            ilp = random_ilp(rng, rng.randint(1, 5), 3)
            index, value = rng.randrange(ilp.n), rng.randint(0, 2)
            expected = {values for values in _solutions(ilp) if values[index] == value}
            pinned = pin_variable(ilp, index, value)

            assert _solutions(pinned) == expected
            assert brute_feasible(pinned).feasible == bool(expected)

    def test_pinning_commutes_with_normalizing(self):
        rng = random.Random(71)

        for _ in range(60):
            ilp = random_ilp(rng, rng.randint(1, 5), 3)
            index, value = rng.randrange(ilp.n), rng.randint(0, 2)

            first = pin_variable(normalize(ilp), index, value)
            second = normalize(pin_variable(ilp, index, value))

            assert is_normalized(first) and is_normalized(second)
            assert _solutions(first) == _solutions(second)

    def test_substitution_keeps_the_matching_solutions_without_the_column(self):
        rng = random.Random(73)

        for _ in range(80):
            ilp = random_ilp(rng, rng.randint(1, 5), 3)
            index, value = rng.randrange(ilp.n), rng.randint(0, 2)
            expected = {values[:index] + values[index + 1 :] for values in _solutions(ilp) if values[index] == value}
            residual = substitute_variable(ilp, index, value)

            assert _solutions(residual) == expected
            assert brute_feasible(residual).feasible == bool(expected)


class TestDomainRows:
    def test_it_emits_two_bound_rows_per_variable(self):
        ilp = make_ilp([(-1, 2), (0, 1)])

        assert domain_rows(ilp, [0]) == (Constraint.of({0: 1}, LE, 2), Constraint.of({0: -1}, LE, 1))


class TestExtractSubsystem:
    def test_it_reindexes_in_ascending_order(self):
        ilp = make_ilp(
            [(0, 1)] * 4,
            [Constraint.of({1: 1, 3: 1}, LE, 1), Constraint.of({0: 1, 2: 1}, LE, 1)],
            names=["a", "b", "c", "d"],
        )
        sub, mapping = extract_subsystem(ilp, [3, 1], [0])

        assert mapping == {1: 0, 3: 1}
        assert sub.names == ("b", "d")
        assert sub.constraints == (Constraint.of({0: 1, 1: 1}, LE, 1),)

    def test_it_rejects_rows_reaching_outside(self):
        ilp = make_ilp([(0, 1)] * 2, [Constraint.of({0: 1, 1: 1}, LE, 1)])

        with pytest.raises(IlpError):
            extract_subsystem(ilp, [0], [0])


class TestBoundaried:
    def test_it_rejects_repeated_boundary_variables(self):
        with pytest.raises(IlpError):
            BoundariedIlp(make_ilp([(0, 1)] * 2), (1, 1))

    def test_complement_is_taken_in_the_domain_box(self):
        feasible = BoundarySet(2, frozenset({(0, 0), (1, 1)}))
        blocked = feasible.complement([DomainInterval(0, 1), DomainInterval(0, 1)])

        assert blocked.sorted() == [(0, 1), (1, 0)]

    def test_it_rejects_tuples_of_the_wrong_arity(self):
        with pytest.raises(IlpError):
            BoundarySet(2, frozenset({(0,)}))
