# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Exact integer linear algebra on numpy object arrays.

All matrices carry Python integers (``dtype=object``) so that no entry ever overflows.
"""

from __future__ import annotations

import typing as t

import numpy as np

if t.TYPE_CHECKING:
    import collections.abc as cabc

    import numpy.typing as npt

    IntMatrix = npt.NDArray[np.object_]


class SmithForm(t.NamedTuple):
    """Factorization ``A == S @ D @ T`` with S, T unimodular and D diagonal.

    The diagonal of D is non-negative and every entry divides the next one.
    """

    S: IntMatrix
    D: IntMatrix
    T: IntMatrix
    S_inv: IntMatrix
    T_inv: IntMatrix

    @property
    def invariants(self) -> list[int]:
        return [int(self.D[k, k]) for k in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d != 0)


def as_int_matrix(rows: cabc.Sequence[cabc.Sequence[int]], /, *, columns: int | None = None) -> IntMatrix:
    if len(rows) == 0:
        return np.zeros((0, columns or 0), dtype=object)
    return np.array([[int(v) for v in row] for row in rows], dtype=object)


def identity(n: int) -> IntMatrix:
    matrix = np.zeros((n, n), dtype=object)
    for k in range(n):
        matrix[k, k] = 1
    return matrix


def exgcd(a: int, b: int) -> IntMatrix:
    """Return a determinant-1 matrix M with ``M @ [a, b] == [gcd(a, b), 0]``.

    If a divides b, ``M[0, 1]`` is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    # Euclid on the column [a, b], row operations tracked in the augmented identity
    m = np.array([[a, 1, 0], [b, 0, 1]], dtype=object)
    m = m[::-1]
    while m[1, 0] != 0:
        q = m[0, 0] // m[1, 0]
        m[0] -= q * m[1]
        m = m[::-1]

    g = m[0, 0]
    m = m[:, 1:]
    m *= [a_sign, b_sign]

    if g != 0:
        m[1] = [-b_sign * b // g, a_sign * a // g]

    return np.array(m, dtype=object)


def inv_2x2_det1(m: IntMatrix) -> IntMatrix:
    if m.shape != (2, 2) or m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] != 1:
        msg = f"Matrix {m.tolist()} is not a 2x2 matrix of determinant 1."
        raise ValueError(msg)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=object)


def smith_form(matrix: IntMatrix) -> SmithForm:
    """Smith normal form with transforms.

    Columns and rows are cleared alternately with 2x2 gcd steps, then the diagonal is repaired
    pairwise into a divisibility chain.
    """
    a = np.array(matrix, dtype=object)
    d = a.copy()
    rows, cols = d.shape
    s, tt = identity(rows), identity(cols)
    s_inv, t_inv = identity(rows), identity(cols)

    def clear_row(i: int) -> bool:
        if (d[i, i + 1 :] == 0).all():
            return False
        for j in range(i + 1, cols):
            m = exgcd(d[i, i], d[i, j]).T
            d[:, [i, j]] = d[:, [i, j]] @ m
            tt[[i, j]] = inv_2x2_det1(m) @ tt[[i, j]]
            t_inv[:, [i, j]] = t_inv[:, [i, j]] @ m
        return True

    def clear_col(i: int) -> bool:
        if (d[i + 1 :, i] == 0).all():
            return False
        for j in range(i + 1, rows):
            m = exgcd(d[i, i], d[j, i])
            d[[i, j]] = m @ d[[i, j]]
            s[:, [i, j]] = s[:, [i, j]] @ inv_2x2_det1(m)
            s_inv[[i, j]] = m @ s_inv[[i, j]]
        return True

    for i in range(min(rows, cols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    # diag(a, b) -> diag(gcd, lcm) via L @ diag(a, b) @ R
    n = min(rows, cols)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                x, y = d[i, i], d[j, j]
                if y == 0 or (x != 0 and y % x == 0):
                    continue
                left = exgcd(x, y)
                g = left[0, 0] * x + left[0, 1] * y
                right = np.array([[1, -left[0, 1] * y // g], [1, left[0, 0] * x // g]], dtype=object)
                d[np.ix_([i, j], [i, j])] = left @ d[np.ix_([i, j], [i, j])] @ right
                s[:, [i, j]] = s[:, [i, j]] @ inv_2x2_det1(left)
                s_inv[[i, j]] = left @ s_inv[[i, j]]
                tt[[i, j]] = inv_2x2_det1(right) @ tt[[i, j]]
                t_inv[:, [i, j]] = t_inv[:, [i, j]] @ right
                changed = True

    for i in range(n):
        if d[i, i] < 0:
            d[i] = -d[i]
            s[:, i] = -s[:, i]
            s_inv[i] = -s_inv[i]

    return SmithForm(S=s, D=d, T=tt, S_inv=s_inv, T_inv=t_inv)


def _zero_mask(form: SmithForm, length: int) -> np.ndarray:
    diag = form.invariants + [0] * max(0, length - len(form.invariants))
    return np.array([v == 0 for v in diag[:length]], dtype=bool)


def kernel(matrix: IntMatrix) -> IntMatrix:
    """Columns spanning the (saturated) integer null space of the matrix."""
    form = smith_form(matrix)
    return form.T_inv[:, _zero_mask(form, form.T.shape[0])]


def column_basis(matrix: IntMatrix) -> IntMatrix:
    """A basis of the lattice spanned by the columns of the matrix."""
    form = smith_form(matrix)
    rank = form.rank
    basis = form.S[:, :rank].copy()
    for k in range(rank):
        basis[:, k] = basis[:, k] * form.D[k, k]
    return basis


def index_in_saturation(matrix: IntMatrix) -> int:
    """Index of the column span in its saturation."""
    form = smith_form(matrix)
    index = 1
    for d in form.invariants:
        if d != 0:
            index *= d
    return abs(index)


def solve_integer(matrix: IntMatrix, rhs: cabc.Sequence[int]) -> IntMatrix | None:
    """An integer solution x of ``matrix @ x == rhs`` or None."""
    form = smith_form(matrix)
    rows, cols = form.D.shape
    target = form.S_inv @ np.array([int(v) for v in rhs], dtype=object)
    y = np.zeros(cols, dtype=object)
    for k in range(rows):
        d = form.D[k, k] if k < cols else 0
        if d == 0:
            if target[k] != 0:
                return None
            continue
        if target[k] % d != 0:
            return None
        y[k] = target[k] // d
    return form.T_inv @ y


def complete_basis(columns: IntMatrix) -> IntMatrix:
    """Extend primitive columns to a unimodular matrix whose leading columns are the input."""
    form = smith_form(columns)
    r = columns.shape[1]
    if form.invariants[:r] != [1] * r:
        msg = "Columns do not span a primitive sublattice."
        raise ValueError(msg)
    return np.hstack([columns, form.S[:, r:]]).astype(object)
