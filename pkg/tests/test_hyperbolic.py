# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from contextlib import nullcontext as does_not_raise
from fractions import Fraction

import pytest
import sympy

from toric_theta_tools.constants import Tolerances
from toric_theta_tools.error_codes import IsotropicRayError
from toric_theta_tools.error_codes import NotHyperbolicError
from toric_theta_tools.error_codes import RayNotInConeError
from toric_theta_tools.error_codes import RelationViolatedError
from toric_theta_tools.error_codes import ZeroVectorError
from toric_theta_tools.hyperbolic import completed_weight
from toric_theta_tools.hyperbolic import completion_report
from toric_theta_tools.hyperbolic import enumerate_support
from toric_theta_tools.hyperbolic import eval_completed
from toric_theta_tools.hyperbolic import hyperbolic_setup
from toric_theta_tools.hyperbolic import majorant_form
from toric_theta_tools.hyperbolic import p_plus
from toric_theta_tools.hyperbolic import pair_constant
from toric_theta_tools.hyperbolic import phi_c
from toric_theta_tools.hyperbolic import ray_system
from toric_theta_tools.hyperbolic import theta_plus
from toric_theta_tools.hyperbolic import verify_transformations
from toric_theta_tools.hyperbolic import vigneras_residual
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import add

U = validate_even_lattice([[0, 1], [1, 0]], name="U")
A1 = validate_even_lattice([[2]], name="A1")
U_SETUP = hyperbolic_setup(U, (1, 1))
ISOTROPIC_RAYS = [(1, 0), (0, 1), (1, 1)]
ANISOTROPIC_RAYS = [(2, 1), (1, 2), (1, 1)]


@pytest.fixture
def isotropic_system():
    return ray_system(U_SETUP, ISOTROPIC_RAYS, [1, 1, -1])


@pytest.fixture
def anisotropic_system():
    return ray_system(U_SETUP, ANISOTROPIC_RAYS, [1, 1, -3])


class TestRaySystem:
    @pytest.mark.parametrize(
        ("rays", "coeffs", "expectation"),
        [
            (ISOTROPIC_RAYS, [1, 1, -1], does_not_raise()),
            (ISOTROPIC_RAYS, [1, 1], pytest.raises(RelationViolatedError)),
            ([(1, -1), (0, 1)], [1, 1], pytest.raises(RayNotInConeError)),
            ([(-1, 0), (0, 1)], [1, 1], pytest.raises(RayNotInConeError)),
            ([(0, 0), (0, 1)], [1, 0], pytest.raises(ZeroVectorError)),
            (ISOTROPIC_RAYS, [1, 1, 1], pytest.raises(RelationViolatedError)),
        ],
    )
    def test_validation(self, rays, coeffs, expectation) -> None:
        with expectation:
            ray_system(U_SETUP, rays, coeffs)

    @pytest.mark.parametrize(
        ("gram", "witness", "expectation"),
        [
            ([[0, 1], [1, 0]], (1, 1), does_not_raise()),
            ([[-2]], (1,), pytest.raises(NotHyperbolicError)),
            ([[0, 1], [1, 0]], (1, -1), pytest.raises(RayNotInConeError)),
        ],
    )
    def test_setup(self, gram, witness, expectation) -> None:
        with expectation:
            hyperbolic_setup(validate_even_lattice(gram), witness)

    def test_imprimitive_rays_are_normalized(self, caplog) -> None:
        rs = ray_system(hyperbolic_setup(A1, (1,)), [(1,), (2,)], [2, -1])
        assert rs.rays == ((1,), (1,))
        assert rs.coeffs == (2, -2)
        assert "imprimitive" in caplog.text

    def test_weight(self, isotropic_system) -> None:
        assert isotropic_system.weight == 2
        assert isotropic_system.has_isotropic_rays
        assert isotropic_system.active == [0, 1, 2]


class TestThetaPlus:
    @pytest.mark.parametrize(
        ("vector", "expected"),
        [
            ((1, -1), 2),
            ((2, -1), 2),
            ((2, -2), 4),
            ((1, 1), 0),
            ((-3, -1), 0),
        ],
    )
    def test_p_plus(self, isotropic_system, vector, expected) -> None:
        assert p_plus(vector, isotropic_system) == expected

    def test_prefactor(self) -> None:
        rs = ray_system(U_SETUP, ISOTROPIC_RAYS, [1, 1, -1], prefactor=Fraction(1, 2))
        assert p_plus((1, -1), rs) == 1

    @pytest.mark.parametrize(
        ("bound", "expected"),
        [
            (1, [(-1, 1), (1, -1)]),
            (2, [(-2, 1), (-1, 1), (-1, 2), (1, -2), (1, -1), (2, -1)]),
            (0, []),
        ],
    )
    def test_support(self, isotropic_system, bound, expected) -> None:
        assert enumerate_support(isotropic_system, bound) == expected

    def test_coefficients(self, isotropic_system) -> None:
        series = theta_plus(isotropic_system, 4)
        zero = U.discriminant.zero
        # sum over d | n of 2 min(d, n/d), counted for both signs
        assert [series.coefficient(n, zero) for n in range(5)] == [0, 4, 8, 8, 16]
        assert series.weight == 2

    def test_concatenation_is_additive(self, isotropic_system, anisotropic_system) -> None:
        joined = ray_system(U_SETUP, [*ISOTROPIC_RAYS, *ANISOTROPIC_RAYS], [1, 1, -1, 1, 1, -3])
        expected = add(theta_plus(isotropic_system, 6), theta_plus(anisotropic_system, 6))
        assert theta_plus(joined, 6).terms == expected.terms

    @pytest.mark.parametrize(("rays", "coeffs"), [(ISOTROPIC_RAYS, [1, 1, -1]), (ANISOTROPIC_RAYS, [1, 1, -3])])
    def test_sign_flip(self, rays, coeffs) -> None:
        flipped = ray_system(
            hyperbolic_setup(U, (-1, -1)),
            [tuple(-v for v in ray) for ray in rays],
            coeffs,
        )
        assert theta_plus(flipped, 6).terms == theta_plus(ray_system(U_SETUP, rays, coeffs), 6).terms


class TestCompletion:
    def test_isotropic_candidate_vanishes(self) -> None:
        rs = ray_system(U_SETUP, ISOTROPIC_RAYS, [1, 1, -1], prefactor=Fraction(1, 2))
        report = completion_report(rs, 20)
        assert report.candidate.is_zero()
        assert report.weight == 2
        assert len(report.iso_terms) == 2
        assert len(report.aniso_terms) == 1

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_candidate_vanishes_per_level(self, level) -> None:
        rs = ray_system(U_SETUP, [(1, 0), (0, 1), (1, level)], [1, level, -1])
        assert completion_report(rs, 10).candidate.is_zero()

    def test_rank_one_candidate_vanishes(self) -> None:
        rs = ray_system(hyperbolic_setup(A1, (1,)), [(1,), (2,)], [2, -1])
        report = completion_report(rs, 6)
        assert report.theta_plus.is_zero()
        assert report.candidate.is_zero()

    def test_completed_weight_solves_vigneras_equation(self, anisotropic_system) -> None:
        for point in ((0.3, -0.7), (1.2, 0.4)):
            residual = vigneras_residual(lambda x: completed_weight(x, anisotropic_system), U, point)
            assert abs(residual) < Tolerances.VIGNERAS

    def test_isotropic_rays_have_no_numeric_completion(self, isotropic_system) -> None:
        with pytest.raises(IsotropicRayError):
            eval_completed(isotropic_system, 1j, 5)
        with pytest.raises(IsotropicRayError):
            phi_c((1, 0), (1, 0), U)


class TestTransformations:
    def test_anisotropic_system_is_modular(self, anisotropic_system) -> None:
        report = verify_transformations(anisotropic_system, [1j, 0.25 + 0.5j], 30, Tolerances.TRANSFORMATION)
        assert report.passed
        assert all(r < Tolerances.TRANSFORMATION for r in (*report.s_residuals, *report.t_residuals))
        assert all(m < Tolerances.TRANSFORMATION for m in (*report.s_margins, *report.t_margins))
        assert set(report.to_dict()) == {"residuals", "tail_bounds", "pass"}

    def test_pair_constant(self) -> None:
        assert pair_constant((2, 1), (1, 2), U) == Fraction(8, 17)

    @pytest.mark.parametrize("ray", [(1, 1), (2, 1), (1, 3)])
    def test_majorant_is_positive_definite(self, ray) -> None:
        form = sympy.Matrix(majorant_form(U, ray))
        assert form.is_positive_definite
