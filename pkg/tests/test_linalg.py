from contextlib import nullcontext as does_not_raise

import numpy as np
import pytest

from toric_theta_tools.utils import linalg


def _det(m) -> int:
    return int(round(np.linalg.det(np.array(m, dtype=float))))


class TestSmithForm:
    @pytest.mark.parametrize(
        ("rows", "invariants"),
        [
            ([[2]], [2]),
            ([[2, 1], [1, 2]], [1, 3]),
            ([[0, 1], [1, 0]], [1, 1]),
            ([[0, 2], [2, 0]], [2, 2]),
            ([[4, 6], [6, 4]], [2, 10]),
            ([[0, 1, 0], [1, 0, 0], [0, 0, -2]], [1, 1, 2]),
        ],
    )
    def test_smith_form(self, rows, invariants) -> None:
        a = linalg.as_int_matrix(rows)
        form = linalg.smith_form(a)
        assert form.invariants == invariants
        assert np.array_equal(form.S @ form.D @ form.T, a)
        assert np.array_equal(form.S @ form.S_inv, linalg.identity(len(rows)))
        assert np.array_equal(form.T @ form.T_inv, linalg.identity(len(rows)))

    @pytest.mark.parametrize(
        ("a", "b"),
        [
            (4, 6),
            (-3, 5),
            (0, 7),
            (6, 3),
        ],
    )
    def test_exgcd(self, a, b) -> None:
        m = linalg.exgcd(a, b)
        assert _det(m) == 1
        first, second = m @ np.array([a, b], dtype=object)
        assert abs(first) == np.gcd(a, b)
        assert second == 0


class TestIntegerSolutions:
    def test_kernel(self) -> None:
        matrix = linalg.as_int_matrix([[1, 1, 0]])
        kernel = linalg.kernel(matrix)
        assert kernel.shape == (3, 2)
        assert (matrix @ kernel == 0).all()
        assert linalg.index_in_saturation(kernel) == 1

    @pytest.mark.parametrize(
        ("rows", "rhs", "solvable"),
        [
            ([[2]], [4], True),
            ([[2]], [3], False),
            ([[2, 3]], [1], True),
            ([[2, 0], [0, 2]], [2, 1], False),
        ],
    )
    def test_solve_integer(self, rows, rhs, solvable) -> None:
        matrix = linalg.as_int_matrix(rows)
        solution = linalg.solve_integer(matrix, rhs)
        if not solvable:
            assert solution is None
        else:
            assert list(matrix @ solution) == rhs

    @pytest.mark.parametrize(
        ("columns", "expectation"),
        [
            ([[1], [1], [0]], does_not_raise()),
            ([[2], [3]], does_not_raise()),
            ([[2], [0]], pytest.raises(ValueError)),
        ],
    )
    def test_complete_basis(self, columns, expectation) -> None:
        with expectation:
            matrix = linalg.as_int_matrix(columns)
            completed = linalg.complete_basis(matrix)
            assert abs(_det(completed)) == 1
            assert np.array_equal(completed[:, :1], matrix)

    def test_column_basis_and_index(self) -> None:
        generators = linalg.as_int_matrix([[2, 0, 1], [0, 2, 1]])
        basis = linalg.column_basis(generators)
        assert basis.shape == (2, 2)
        assert abs(_det(basis)) == 2
        assert linalg.index_in_saturation(linalg.as_int_matrix([[2], [0]])) == 2
