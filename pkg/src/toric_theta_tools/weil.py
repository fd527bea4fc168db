# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Weil representation on the group algebra of a discriminant group and the maps between such algebras."""

from __future__ import annotations

import dataclasses
import functools
import typing as t
from fractions import Fraction

import loguru
import mpmath
import numpy as np
import sympy

from toric_theta_tools.constants import Precision
from toric_theta_tools.error_codes import NotFiniteIndexError
from toric_theta_tools.error_codes import SingularSystemError
from toric_theta_tools.lattice import DiscriminantGroup
from toric_theta_tools.lattice import IntegerLattice
from toric_theta_tools.lattice import isotropic_overlattice
from toric_theta_tools.lattice import isotropic_quotient
from toric_theta_tools.lattice import mat_vec
from toric_theta_tools.lattice import sublattice
from toric_theta_tools.utils import linalg

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.lattice import Element
    from toric_theta_tools.lattice import IsotropicSublattice

    V = t.TypeVar("V")


def _group_of(source: IntegerLattice | DiscriminantGroup) -> DiscriminantGroup:
    if isinstance(source, IntegerLattice):
        return source.discriminant
    return source


def e(value: Fraction) -> mpmath.mpc:
    """``exp(2 pi i value)`` for an exact rational."""
    return mpmath.expjpi(2 * mpmath.mpf(value.numerator) / value.denominator)


@dataclasses.dataclass(frozen=True)
class WeilAction:
    group: DiscriminantGroup
    rho_T: mpmath.matrix
    rho_S: mpmath.matrix
    signature_phase: mpmath.mpc
    digits: int

    @property
    def size(self) -> int:
        return self.group.order


def weil_T(source: IntegerLattice | DiscriminantGroup, /, *, digits: int | None = None) -> mpmath.matrix:
    """Diagonal matrix with entry ``e(q(gamma))`` at gamma."""
    group = _group_of(source)
    with mpmath.workdps(digits or Precision.DIGITS):
        matrix = mpmath.zeros(group.order, group.order)
        for k, element in enumerate(group.elements):
            matrix[k, k] = e(group.q_form(element))
    return matrix


def signature_phase(group: DiscriminantGroup, /) -> mpmath.mpc:
    """Principal branch of ``i^((b_minus - b_plus) / 2)``."""
    return mpmath.expjpi(mpmath.mpf(group.signature_difference) / 4)


def weil_S(source: IntegerLattice | DiscriminantGroup, /, *, digits: int | None = None) -> mpmath.matrix:
    """Matrix with (delta, gamma) entry ``phase * e(-(gamma, delta)) / sqrt(|G|)``."""
    group = _group_of(source)
    with mpmath.workdps(digits or Precision.DIGITS):
        scale = signature_phase(group) / mpmath.sqrt(group.order)
        matrix = mpmath.zeros(group.order, group.order)
        for col, gamma in enumerate(group.elements):
            for row, delta in enumerate(group.elements):
                matrix[row, col] = scale * e(-group.bilinear(gamma, delta))
    return matrix


def weil_action(source: IntegerLattice | DiscriminantGroup, /, *, digits: int | None = None) -> WeilAction:
    group = _group_of(source)
    digits = digits or Precision.DIGITS
    loguru.logger.debug("Computing Weil action for group of order {order}...", order=group.order)
    with mpmath.workdps(digits):
        action = WeilAction(
            group=group,
            rho_T=weil_T(group, digits=digits),
            rho_S=weil_S(group, digits=digits),
            signature_phase=signature_phase(group),
            digits=digits,
        )
    loguru.logger.debug("Computing Weil action for group of order {order}... Done.", order=group.order)
    return action


def conjugate_action(action: WeilAction, /) -> WeilAction:
    """The conjugate representation, entrywise complex conjugation."""
    with mpmath.workdps(action.digits):
        return WeilAction(
            group=action.group,
            rho_T=_conjugate(action.rho_T),
            rho_S=_conjugate(action.rho_S),
            signature_phase=mpmath.conj(action.signature_phase),
            digits=action.digits,
        )


def _conjugate(matrix: mpmath.matrix) -> mpmath.matrix:
    result = mpmath.matrix(matrix.rows, matrix.cols)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            result[i, j] = mpmath.conj(matrix[i, j])
    return result


def max_entry(matrix: mpmath.matrix) -> mpmath.mpf:
    return max((abs(matrix[i, j]) for i in range(matrix.rows) for j in range(matrix.cols)), default=mpmath.mpf(0))


@dataclasses.dataclass(frozen=True)
class LatticeMapPair:
    """Maps between the group algebras of a sublattice L1 and a lattice L of finite index.

    ``small`` is the group of L1, ``big`` that of L. ``mapping`` is the projection p from
    H^perp = L^dual / L1 onto L^dual / L and is undefined outside H^perp.
    ``pull`` sends v_gamma to v_p(gamma); ``push`` sends v_delta to the sum over its fiber.
    """

    small: DiscriminantGroup
    big: DiscriminantGroup
    mapping: dict[Element, Element]
    h_order: int

    @functools.cached_property
    def fibers(self) -> dict[Element, tuple[Element, ...]]:
        fibers: dict[Element, list[Element]] = {delta: [] for delta in self.big.elements}
        for gamma, delta in self.mapping.items():
            fibers[delta].append(gamma)
        return {delta: tuple(sorted(gammas)) for delta, gammas in fibers.items()}

    def pull(self, coeffs: cabc.Mapping[Element, V], /) -> dict[Element, V]:
        result: dict[Element, t.Any] = dict.fromkeys(self.big.elements, 0)
        for gamma, value in coeffs.items():
            delta = self.mapping.get(gamma)
            if delta is not None:
                result[delta] = result[delta] + value
        return result

    def push(self, coeffs: cabc.Mapping[Element, V], /) -> dict[Element, V]:
        result: dict[Element, t.Any] = dict.fromkeys(self.small.elements, 0)
        for delta, value in coeffs.items():
            for gamma in self.fibers[delta]:
                result[gamma] = result[gamma] + value
        return result

    @functools.cached_property
    def pull_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.big.order, self.small.order), dtype=int)
        for gamma, delta in self.mapping.items():
            matrix[self.big.index[delta], self.small.index[gamma]] = 1
        return matrix

    @property
    def push_matrix(self) -> np.ndarray:
        return self.pull_matrix.T.copy()

    def relabel_big(self, group: DiscriminantGroup, element_map: cabc.Mapping[Element, Element], /) -> LatticeMapPair:
        """Compose the big side with an isomorphism onto ``group``."""
        return LatticeMapPair(
            small=self.small,
            big=group,
            mapping={gamma: element_map[delta] for gamma, delta in self.mapping.items()},
            h_order=self.h_order,
        )


def pull_push_maps(
    lattice: IntegerLattice,
    basis: cabc.Sequence[cabc.Sequence[int]],
    /,
    *,
    sub_group: DiscriminantGroup | None = None,
) -> LatticeMapPair:
    """Maps for the sublattice spanned by ``basis`` (vectors in L coordinates).

    ``sub_group`` replaces the group of the sublattice when a differently labelled group with the same
    Gram matrix is wanted, e.g. a direct sum.
    """
    columns = sympy.Matrix([list(b) for b in basis]).T if basis else sympy.zeros(lattice.rank, 0)
    if columns.shape != (lattice.rank, lattice.rank) or columns.det() == 0:
        msg = f"Sublattice spanned by {[list(b) for b in basis]} has infinite index."
        raise NotFiniteIndexError(msg)
    h_order = abs(int(columns.det())) if lattice.rank > 0 else 1

    small = sub_group or sublattice(lattice, basis).discriminant
    big = lattice.discriminant
    b = [[int(columns[i, j]) for j in range(columns.cols)] for i in range(columns.rows)]

    mapping = {}
    for gamma in small.elements:
        x = mat_vec(b, small.lift(gamma))
        if lattice.in_dual(x):
            mapping[gamma] = big.reduce(x)

    loguru.logger.debug(
        "Pull/push maps: |small|={small}, |big|={big}, |H|={h}, |H_perp|={perp}.",
        small=small.order,
        big=big.order,
        h=h_order,
        perp=len(mapping),
    )
    return LatticeMapPair(small=small, big=big, mapping=mapping, h_order=h_order)


def isotropic_pull_push(lattice: IntegerLattice, isotropic: IsotropicSublattice, /) -> LatticeMapPair:
    """Maps between the group of L and the group of K = I^perp / I.

    Built from L inside the overlattice L_I, whose discriminant group is identified with that of K.
    ``pull`` realizes p_L^K and ``push`` realizes p_K^L.
    """
    loguru.logger.debug("Computing isotropic pull/push for {name}...", name=lattice.name)
    over = isotropic_overlattice(lattice, isotropic)
    quotient = isotropic_quotient(lattice, isotropic)

    basis_matrix = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in over.basis])
    inverse = basis_matrix.inv()
    sub_basis = [[int(inverse[i, j]) for i in range(inverse.rows)] for j in range(inverse.cols)]
    inner = pull_push_maps(over.lattice, sub_basis, sub_group=lattice.discriminant)

    k_group = quotient.lattice.discriminant
    z = isotropic.columns
    gz = lattice.int_matrix @ z
    element_map = {}
    for delta in inner.big.elements:
        x = over.to_ambient(over.lattice.discriminant.lift(delta))
        rhs = [lattice.pair(b, x) for b in isotropic.basis]
        shift = _solve_transpose(gz, rhs)
        orthogonal = tuple(xi - si for xi, si in zip(x, shift, strict=True))
        element_map[delta] = k_group.reduce(quotient.project(orthogonal))

    loguru.logger.debug("Computing isotropic pull/push for {name}... Done.", name=lattice.name)
    return inner.relabel_big(k_group, element_map)


def _solve_transpose(gz: np.ndarray, rhs: cabc.Sequence[Fraction]) -> tuple[int, ...]:
    # integer y with (G Z).T y == rhs
    if any(v.denominator != 1 for v in rhs):
        msg = "Dual vector pairs non-integrally with the isotropic sublattice."
        raise SingularSystemError(msg)
    solution = linalg.solve_integer(gz.T.copy(), [int(v) for v in rhs])
    if solution is None:
        msg = "Dual vector of the overlattice cannot be moved into the orthogonal complement."
        raise SingularSystemError(msg)
    return tuple(int(v) for v in solution)
