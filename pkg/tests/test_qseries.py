from contextlib import nullcontext as does_not_raise
from fractions import Fraction

import mpmath
import pytest

from toric_theta_tools.error_codes import GroupMismatchError
from toric_theta_tools.lattice import sublattice
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import MapDirection
from toric_theta_tools.qseries import VectorValuedQSeries
from toric_theta_tools.qseries import add
from toric_theta_tools.qseries import apply_map
from toric_theta_tools.qseries import evaluate
from toric_theta_tools.qseries import monomial
from toric_theta_tools.qseries import scalar_multiply
from toric_theta_tools.qseries import scale
from toric_theta_tools.qseries import subtract
from toric_theta_tools.qseries import tensor
from toric_theta_tools.qseries import truncate
from toric_theta_tools.special import e2_series
from toric_theta_tools.special import theta_definite
from toric_theta_tools.weil import pull_push_maps
from toric_theta_tools.zagier import zagier_F

A1_NEG = validate_even_lattice([[-2]], name="A1(-1)")
A2_NEG = validate_even_lattice([[-2, -1], [-1, -2]], name="A2(-1)")
PLANE_NEG = validate_even_lattice([[-2, 0], [0, -2]], name="A1(-1)+A1(-1)")


class TestVectorValuedQSeries:
    def test_build_drops_zeros_and_excess_terms(self) -> None:
        group = A1_NEG.discriminant
        series = VectorValuedQSeries.build(
            group,
            {
                Fraction(0): {(0,): Fraction(1), (1,): Fraction(0)},
                Fraction(1, 4): {(1,): Fraction(0)},
                Fraction(3): {(0,): Fraction(5)},
            },
            2,
        )
        assert series.exponents() == [Fraction(0)]
        assert series.coefficient(0, (0,)) == 1
        assert series.coefficient(3, (0,)) == 0
        assert series.bound == 2

    def test_arithmetic(self) -> None:
        theta = theta_definite(A1_NEG, 3)
        doubled = add(theta, theta)
        assert doubled == scale(theta, 2)
        assert subtract(theta, theta).is_zero()
        assert truncate(theta, 1).bound == 1
        assert truncate(theta, 1).exponents() == [Fraction(0), Fraction(1, 4), Fraction(1)]

    @pytest.mark.parametrize(
        ("other", "expectation"),
        [
            (theta_definite(A1_NEG, 1), does_not_raise()),
            (zagier_F(2, 1).holo, pytest.raises(GroupMismatchError)),
        ],
    )
    def test_group_mismatch(self, other, expectation) -> None:
        with expectation:
            add(theta_definite(A1_NEG, 1), other)

    def test_tensor(self) -> None:
        f = theta_definite(A1_NEG, 2)
        product = tensor(f, f)
        assert product.group.cyclic_orders == (2, 2)
        assert product.bound == 2
        # two vectors of norm 1/4 in each factor
        assert product.coefficient(Fraction(1, 2), (1, 1)) == 4
        assert product.coefficient(Fraction(1, 4), (0, 1)) == 2
        assert product.weight == 1

    def test_scalar_multiply(self) -> None:
        group = A1_NEG.discriminant
        product = scalar_multiply(monomial(group, 0, group.zero, bound=5), e2_series(3))
        assert product.bound == 3
        assert [product.coefficient(n, group.zero) for n in range(4)] == [1, -24, -72, -96]

    def test_support_violations(self) -> None:
        assert theta_definite(A1_NEG, 4).support_violations() == []
        assert theta_definite(A2_NEG, 3).support_violations() == []
        group = A1_NEG.discriminant
        bad = monomial(group, 0, (1,), bound=1)
        assert bad.support_violations() == [(Fraction(0), (1,))]

    def test_components(self) -> None:
        components = theta_definite(A1_NEG, 1).components()
        assert components[(0,)] == [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(2))]
        assert components[(1,)] == [(Fraction(1, 4), Fraction(2))]


class TestOrthogonalSumMaps:
    @pytest.fixture
    def maps(self):
        sub = pull_push_maps(A1_NEG, [(2,)])
        same = pull_push_maps(A1_NEG, [(1,)])
        direct = sub.big.direct_sum(same.big)
        joint = pull_push_maps(PLANE_NEG, [(2, 0), (0, 1)], sub_group=sub.small.direct_sum(same.small))
        joint = joint.relabel_big(direct, {delta: direct.reduce(joint.big.lift(delta)) for delta in joint.big.elements})
        return sub, same, joint

    def test_tensor_commutes_with_pull(self, maps) -> None:
        sub, same, joint = maps
        f = theta_definite(sublattice(A1_NEG, [(2,)]), 3)
        g = theta_definite(A1_NEG, 3)
        pulled = apply_map(tensor(f, g), joint, MapDirection.PULL)
        expected = tensor(apply_map(f, sub, MapDirection.PULL), apply_map(g, same, MapDirection.PULL))
        common = min(pulled.bound, expected.bound)
        assert not pulled.is_zero()
        assert truncate(pulled, common).terms == truncate(expected, common).terms

    def test_tensor_commutes_with_push(self, maps) -> None:
        sub, same, joint = maps
        g = theta_definite(A1_NEG, 3)
        pushed = apply_map(tensor(g, g), joint, MapDirection.PUSH)
        expected = tensor(apply_map(g, sub, MapDirection.PUSH), apply_map(g, same, MapDirection.PUSH))
        common = min(pushed.bound, expected.bound)
        assert not pushed.is_zero()
        assert truncate(pushed, common).terms == truncate(expected, common).terms


class TestEvaluate:
    def test_monomial_value(self) -> None:
        group = A1_NEG.discriminant
        values = evaluate(monomial(group, 1, group.zero, coeff=3, bound=1), 1j)
        with mpmath.workdps(50):
            assert abs(values[group.zero] - 3 * mpmath.exp(-2 * mpmath.pi)) < mpmath.mpf(10) ** -40
        assert values[(1,)] == 0

    def test_theta_value(self) -> None:
        # the group component sums of the theta series of [[-2]] at tau give theta_3(0, q^(1/4))
        values = evaluate(theta_definite(A1_NEG, 40), 1j, digits=30)
        with mpmath.workdps(30):
            total = values[(0,)] + values[(1,)]
            expected = mpmath.jtheta(3, 0, mpmath.exp(-mpmath.pi / 2))
            assert abs(total - expected) < mpmath.mpf(10) ** -25
