import random
from fractions import Fraction

import pytest

from src.errors import LpError
from src.ilp import LE, Constraint, make_ilp
from src.lp import LpSystem, lp_feasible
from src.oracle import brute_feasible

from .factories import network_ilp, random_ilp


class TestLpSystem:
    def test_it_appends_bound_rows(self):
        system = LpSystem.from_ilp(make_ilp([(0, 2)], [Constraint.of({0: 1}, ">=", 1)]))

        assert system.rows == ((-1,), (1,), (-1,))
        assert system.rhs == (-1, 2, 0)

    def test_it_rejects_ragged_rows(self):
        with pytest.raises(LpError):
            LpSystem(((1, 0), (1,)), (0, 0), 2)


class TestLpFeasible:
    def test_a_box_is_feasible(self):
        feasible, point = lp_feasible(LpSystem(((1,), (-1,)), (3, -1), 1))

        assert feasible
        assert 1 <= point[0] <= 3

    def test_crossing_bounds_are_infeasible(self):
        feasible, point = lp_feasible(LpSystem(((1,), (-1,)), (1, -2), 1))

        assert not feasible
        assert point is None

    def test_it_finds_fractional_points(self):
        # 2x = 1 within [0, 1]
        system = LpSystem(((2,), (-2,), (1,), (-1,)), (1, -1, 1, 0), 1)

        feasible, point = lp_feasible(system)

        assert feasible
        assert point == (Fraction(1, 2),)

    def test_unbounded_variables_are_refused(self):
        with pytest.raises(LpError):
            lp_feasible(LpSystem(((1, 1),), (0,), 2))

    def test_negative_boxes_are_handled(self):
        system = LpSystem(((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)), (-2, 5, 3, 3, -6), 2)

        feasible, point = lp_feasible(system)

        assert feasible
        assert system.satisfied_by(point)

    def test_network_systems_are_integral(self):
        rng = random.Random(31)

        for _ in range(200):
            ilp = network_ilp(rng, rng.randint(1, 6), rng.randint(1, 3))
            feasible, point = lp_feasible(LpSystem.from_ilp(ilp))

            assert feasible == brute_feasible(ilp).feasible
            if feasible:
                assert LpSystem.from_ilp(ilp).satisfied_by(point)

    def test_a_fractional_relaxation_need_not_be_integral(self):
        # x = 1/2 satisfies the relaxation, no 0/1 point does
        ilp = make_ilp([(0, 1)] * 2, [Constraint.of({0: 2, 1: 2}, LE, 1), Constraint.of({0: 2}, ">=", 1)])

        feasible, _ = lp_feasible(LpSystem.from_ilp(ilp))

        assert feasible
        assert not brute_feasible(ilp).feasible

    def test_adding_a_row_never_makes_a_system_feasible(self):
        rng = random.Random(37)

        for _ in range(100):
            n = rng.randint(1, 5)
            base = LpSystem.from_ilp(random_ilp(rng, n, rng.randint(2, 3)))
            extra = tuple(rng.randint(-2, 2) for _ in range(n))
            grown = LpSystem(base.rows + (extra,), base.rhs + (rng.randint(-3, 3),), n)

            feasible, point = lp_feasible(grown)

            if feasible:
                assert lp_feasible(base)[0]
                assert base.satisfied_by(point)
