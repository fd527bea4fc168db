import itertools
from contextlib import nullcontext as does_not_raise
from fractions import Fraction

import mpmath
import pytest

from toric_theta_tools.constants import Precision
from toric_theta_tools.constants import Tolerances
from toric_theta_tools.error_codes import AmbientMismatchError
from toric_theta_tools.error_codes import FanIncompleteError
from toric_theta_tools.error_codes import InadmissibleError
from toric_theta_tools.error_codes import RayNotInConeError
from toric_theta_tools.error_codes import SingularSystemError
from toric_theta_tools.hyperbolic import completion_report
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import evaluate
from toric_theta_tools.toric import ambient_data
from toric_theta_tools.toric import curve_boundary_multiplicities
from toric_theta_tools.toric import divisor_class_oracle
from toric_theta_tools.toric import fan_fragment
from toric_theta_tools.toric import fragment_ray_system
from toric_theta_tools.toric import intersect_character_curve
from toric_theta_tools.toric import intersection_series
from toric_theta_tools.toric import precise_main_pairing
from toric_theta_tools.toric import relation_coefficients
from toric_theta_tools.weil import conjugate_action
from toric_theta_tools.weil import weil_action

U = validate_even_lattice([[0, 1], [1, 0]], name="U")
U_A1 = validate_even_lattice([[0, 1, 0], [1, 0, 0], [0, 0, -2]], name="U+A1(-1)")
L = validate_even_lattice([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], name="L")
LINE = [1, 0, 0, 0]

U1 = fan_fragment(U, [(1, 1)], (1, 0), (0, 1))
U2 = fan_fragment(U, [(1, 1)], (2, 1), (1, 2))
F2 = fan_fragment(U_A1, [(1, 0, 0), (1, 1, 0)], (1, 1, 1), (1, 1, -1))
F3 = fan_fragment(U_A1, [(1, 1, 0), (3, 2, 0)], (1, 1, 1), (2, 1, -1))


@pytest.fixture
def ambient(u_k_iso):
    return ambient_data(L, LINE, U, u_k_iso)


class TestFanFragment:
    @pytest.mark.parametrize(
        ("fragment", "expected"),
        [
            (U1, (-1,)),
            (U2, (-3,)),
            (F2, (0, -2)),
            (F3, (0, -1)),
        ],
    )
    def test_relation_coefficients(self, fragment, expected) -> None:
        assert relation_coefficients(fragment) == expected
        assert relation_coefficients(fragment.swapped()) == expected

    @pytest.mark.parametrize(
        ("sigma", "plus", "minus", "expectation"),
        [
            ([(1, 1)], (1, 0), (0, 1), does_not_raise()),
            ([(1, 1)], (3, 1), (0, 1), pytest.raises(SingularSystemError)),
            ([], (1, 0), (0, 1), pytest.raises(SingularSystemError)),
            ([(1, 1)], (1, 0), (-1, 0), pytest.raises(RayNotInConeError)),
        ],
    )
    def test_validation(self, sigma, plus, minus, expectation) -> None:
        with expectation:
            fan_fragment(U, sigma, plus, minus)

    def test_swapped(self) -> None:
        swapped = U2.swapped()
        assert swapped.plus_ray == (1, 2)
        assert swapped.minus_ray == (2, 1)
        assert curve_boundary_multiplicities(swapped) == curve_boundary_multiplicities(U2)


class TestCurveIntersection:
    @pytest.mark.parametrize(
        ("fragment", "fan"),
        [
            (U1, [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]),
            (U2, [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]),
            (F2, [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 1, -1), (0, 1, 0)]),
        ],
    )
    def test_matches_divisor_class(self, fragment, fan) -> None:
        for vector in itertools.product(range(-5, 6), repeat=fragment.K.rank):
            assert intersect_character_curve(vector, fragment) == divisor_class_oracle(vector, fragment, fan)

    def test_symmetry(self) -> None:
        for vector in itertools.product(range(-5, 6), repeat=3):
            negated = tuple(-v for v in vector)
            assert intersect_character_curve(vector, F3) == intersect_character_curve(negated, F3)

    @pytest.mark.parametrize("vector", [(1, 1), (3, 2), (-1, -4)])
    def test_same_sign_vanishes(self, vector) -> None:
        assert intersect_character_curve(vector, U1) == 0

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("fragment", [U1, U2, F2, F3])
    def test_homogeneous(self, fragment, k) -> None:
        for vector in itertools.product(range(-3, 4), repeat=fragment.K.rank):
            scaled = tuple(k * v for v in vector)
            assert intersect_character_curve(scaled, fragment) == k * intersect_character_curve(vector, fragment)

    def test_values(self) -> None:
        assert intersect_character_curve((1, -1), U1) == 1
        assert intersect_character_curve((2, -2), U1) == 2

    def test_incomplete_fan(self) -> None:
        with pytest.raises(FanIncompleteError):
            divisor_class_oracle((1, -1), U1, [(1, 0), (1, 1)])


class TestAmbientData:
    @pytest.mark.parametrize(
        ("lattice", "k_lattice", "k_iso", "expectation"),
        [
            (L, U, None, does_not_raise()),
            (U, U, None, pytest.raises(AmbientMismatchError)),
            (L, U_A1, None, pytest.raises(AmbientMismatchError)),
            (L, U, [[2, 0], [0, 1]], pytest.raises(AmbientMismatchError)),
            (L, validate_even_lattice([[0, 2], [2, 0]]), None, pytest.raises(AmbientMismatchError)),
        ],
    )
    def test_validation(self, u_k_iso, lattice, k_lattice, k_iso, expectation) -> None:
        with expectation:
            ambient_data(lattice, LINE[: lattice.rank], k_lattice, k_iso or u_k_iso)

    def test_intersection_series(self, ambient) -> None:
        series = intersection_series(ambient, U1, 10)
        zero = series.group.zero
        assert series.group.order == 1
        assert series.coefficient(1, zero) == 2
        expected = {n: Fraction(0) for n in range(11)}
        for vector in itertools.product(range(-10, 11), repeat=2):
            norm = -U.q(vector)
            if 0 < norm <= 10:
                expected[int(norm)] += intersect_character_curve(vector, U1)
        assert [series.coefficient(n, zero) for n in range(11)] == [expected[n] for n in range(11)]

    @pytest.mark.parametrize("fragment", [U1, U2])
    def test_precise_main_pairing(self, ambient, fragment) -> None:
        report = precise_main_pairing(ambient, fragment, 12)
        assert report.pairing.is_zero()
        assert report.matches
        assert report.constant_term == 0

    @pytest.mark.parametrize("fragment", [U1, U2])
    def test_intersection_series_non_negative(self, ambient, fragment) -> None:
        series = intersection_series(ambient, fragment, 12)
        assert all(c >= 0 for vector in series.terms.values() for c in vector.values())

    @pytest.mark.parametrize("fragment", [U1, U2])
    def test_intersection_series_swap(self, ambient, fragment) -> None:
        series = intersection_series(ambient, fragment, 12)
        assert intersection_series(ambient, fragment.swapped(), 12).terms == series.terms

    def test_fragment_must_live_on_k(self, ambient) -> None:
        with pytest.raises(AmbientMismatchError):
            intersection_series(ambient, F2, 2)


class TestFragmentCompletion:
    def test_composite_level_is_rejected(self) -> None:
        with pytest.raises(InadmissibleError):
            completion_report(fragment_ray_system(F3), 6)

    def test_rank_three_candidate_has_valid_support(self) -> None:
        candidate = completion_report(fragment_ray_system(F2), 8).candidate
        assert not candidate.is_zero()
        assert candidate.weight == Fraction(5, 2)
        assert candidate.support_violations() == []

    @pytest.mark.parametrize("tau", [mpmath.mpc("0", "1.1"), mpmath.mpc("0.2", "1.1")])
    def test_rank_three_candidate_is_modular(self, tau) -> None:
        candidate = completion_report(fragment_ray_system(F2), 12).candidate
        elements = candidate.group.elements
        action = conjugate_action(weil_action(candidate.group))
        with mpmath.workdps(Precision.DIGITS):
            tau = mpmath.mpc(tau)
            base = evaluate(candidate, tau)
            shifted = evaluate(candidate, tau + 1)
            inverted = evaluate(candidate, -1 / tau)
            factor = mpmath.exp(mpmath.mpf(5) / 2 * mpmath.log(tau))
            for row, gamma in enumerate(elements):
                assert abs(shifted[gamma] - action.rho_T[row, row] * base[gamma]) < Tolerances.TRANSFORMATION
                expected = factor * mpmath.fsum(action.rho_S[row, col] * base[delta] for col, delta in enumerate(elements))
                assert abs(inverted[gamma] - expected) < Tolerances.TRANSFORMATION
