# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Intersections of special divisors with the boundary curve of a two-cone fan fragment.

A fragment is a codimension-one cone ``sigma`` spanned by ``c_1 .. c_{n-1}`` together with the two adjacent
regular cones through ``c+`` and ``c-``. The curve ``C_sigma`` meets the boundary divisor of ``c+`` and ``c-``
once and the divisor of ``c_i`` with degree ``a_i``, where ``c+ + c- + sum a_i c_i = 0``.
"""

from __future__ import annotations

import dataclasses
import typing as t
from fractions import Fraction

import loguru
import sympy

from toric_theta_tools.error_codes import AmbientMismatchError
from toric_theta_tools.error_codes import FanIncompleteError
from toric_theta_tools.error_codes import RayNotInConeError
from toric_theta_tools.error_codes import SingularSystemError
from toric_theta_tools.hyperbolic import RaySystem
from toric_theta_tools.hyperbolic import anisotropic_term
from toric_theta_tools.hyperbolic import completion_report
from toric_theta_tools.hyperbolic import enumerate_support
from toric_theta_tools.hyperbolic import hyperbolic_setup
from toric_theta_tools.hyperbolic import isotropic_term
from toric_theta_tools.hyperbolic import ray_system
from toric_theta_tools.lattice import isotropic_quotient
from toric_theta_tools.lattice import isotropic_sublattice
from toric_theta_tools.lattice import mat_vec
from toric_theta_tools.lattice import primitive_vector
from toric_theta_tools.qseries import MapDirection
from toric_theta_tools.qseries import VectorValuedQSeries
from toric_theta_tools.qseries import add
from toric_theta_tools.qseries import apply_map
from toric_theta_tools.qseries import scale
from toric_theta_tools.qseries import subtract
from toric_theta_tools.weil import isotropic_pull_push

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.hyperbolic import HyperbolicSetup
    from toric_theta_tools.hyperbolic import Ray
    from toric_theta_tools.lattice import Element
    from toric_theta_tools.lattice import IntegerLattice
    from toric_theta_tools.lattice import IsotropicSublattice
    from toric_theta_tools.weil import LatticeMapPair


@dataclasses.dataclass(frozen=True)
class FanFragment:
    setup: HyperbolicSetup
    sigma_rays: tuple[Ray, ...]
    plus_ray: Ray
    minus_ray: Ray

    @property
    def K(self) -> IntegerLattice:  # noqa: N802
        return self.setup.K

    def swapped(self) -> FanFragment:
        return dataclasses.replace(self, plus_ray=self.minus_ray, minus_ray=self.plus_ray)


def _determinant(columns: cabc.Sequence[Ray]) -> int:
    return int(sympy.Matrix([list(c) for c in columns]).T.det())


def fan_fragment(
    lattice: IntegerLattice,
    sigma_rays: cabc.Sequence[cabc.Sequence[int]],
    plus_ray: cabc.Sequence[int],
    minus_ray: cabc.Sequence[int],
    /,
) -> FanFragment:
    """Validated fragment; the cone witness of the setup is the sum of the sigma rays."""
    sigma = tuple(primitive_vector(c) for c in sigma_rays)
    plus = primitive_vector(plus_ray)
    minus = primitive_vector(minus_ray)
    n = lattice.rank
    if len(sigma) != n - 1 or any(len(c) != n for c in (*sigma, plus, minus)):
        msg = f"A fragment of a rank {n} lattice needs {n - 1} sigma rays and two adjacent rays of length {n}."
        raise SingularSystemError(msg)

    witness = tuple(sum(c[k] for c in sigma) for k in range(n))
    setup = hyperbolic_setup(lattice, witness)
    for c in (*sigma, plus, minus):
        if lattice.q(c) < 0 or lattice.pair(c, witness) <= 0:
            msg = f"Ray {c} is not in the closure of the positive cone."
            raise RayNotInConeError(msg)

    det_plus = _determinant([*sigma, plus])
    det_minus = _determinant([*sigma, minus])
    if abs(det_plus) != 1 or det_minus != -det_plus:
        msg = f"Adjacent cones are not regular with opposite orientation: determinants {det_plus} and {det_minus}."
        raise SingularSystemError(msg)
    return FanFragment(setup=setup, sigma_rays=sigma, plus_ray=plus, minus_ray=minus)


def relation_coefficients(fragment: FanFragment, /) -> tuple[int, ...]:
    """Unique integers a_i with ``c+ + c- + sum a_i c_i = 0``, solved exactly from the normal equations."""
    a = sympy.Matrix([list(c) for c in fragment.sigma_rays]).T
    rhs = -sympy.Matrix([p + m for p, m in zip(fragment.plus_ray, fragment.minus_ray, strict=True)])
    normal = a.T * a
    if normal.det() == 0:
        msg = "Sigma rays are linearly dependent."
        raise SingularSystemError(msg)
    solution = normal.inv() * a.T * rhs
    if a * solution != rhs or any(not v.is_integer for v in solution):
        msg = f"No integer relation between the fragment rays, least squares gives {list(solution)}."
        raise SingularSystemError(msg)
    return tuple(int(v) for v in solution)


def curve_boundary_multiplicities(fragment: FanFragment, /) -> dict[Ray, int]:
    """Degree of each boundary divisor restricted to C_sigma."""
    multiplicities = dict(zip(fragment.sigma_rays, relation_coefficients(fragment), strict=True))
    multiplicities[fragment.plus_ray] = 1
    multiplicities[fragment.minus_ray] = 1
    return multiplicities


def fragment_ray_system(fragment: FanFragment, /) -> RaySystem:
    coeffs = relation_coefficients(fragment)
    return ray_system(
        fragment.setup,
        [*fragment.sigma_rays, fragment.plus_ray, fragment.minus_ray],
        [*coeffs, 1, 1],
        prefactor=Fraction(1, 2),
    )


def intersect_character_curve(vector: cabc.Sequence[int | Fraction], fragment: FanFragment, /) -> Fraction:
    """``Z(lambda) . C_sigma = (|lambda.c+| + |lambda.c-| + sum a_i |lambda.c_i|) / 2``."""
    total = Fraction(0)
    for ray, multiplicity in curve_boundary_multiplicities(fragment).items():
        total += multiplicity * abs(fragment.K.pair(vector, ray))
    return total / 2


def divisor_class_oracle(
    vector: cabc.Sequence[int | Fraction],
    fragment: FanFragment,
    finite_fan: cabc.Sequence[cabc.Sequence[int]],
    /,
) -> Fraction:
    """``sum_v max(0, lambda.v) (Delta_v . C_sigma)`` over the rays of a fan containing the fragment."""
    rays = {tuple(int(x) for x in v) for v in finite_fan}
    multiplicities = curve_boundary_multiplicities(fragment)
    missing = [c for c in multiplicities if c not in rays]
    if missing:
        msg = f"Fan does not contain the fragment rays {missing}."
        raise FanIncompleteError(msg)
    total = Fraction(0)
    for v in sorted(rays):
        pairing = fragment.K.pair(vector, v)
        if pairing > 0:
            total += pairing * multiplicities.get(v, 0)
    return total


@dataclasses.dataclass(frozen=True)
class AmbientData:
    """L of signature (2, n) with an isotropic line I and an isometry K -> I^perp / I.

    ``k_iso`` maps K coordinates to the coordinates of the computed quotient.
    """

    L: IntegerLattice
    I: IsotropicSublattice  # noqa: E741
    K: IntegerLattice
    k_iso: tuple[tuple[int, ...], ...]
    maps: LatticeMapPair


def ambient_data(
    lattice: IntegerLattice,
    isotropic: cabc.Sequence[int],
    k_lattice: IntegerLattice,
    k_iso: cabc.Sequence[cabc.Sequence[int]],
    /,
) -> AmbientData:
    """Check ``k_iso.T @ G_quot @ k_iso == G_K`` and compose the isotropic maps with the isometry."""
    if lattice.signature != (2, lattice.rank - 2) or k_lattice.rank != lattice.rank - 2:
        msg = f"Ambient lattice of signature {lattice.signature} does not fit K of rank {k_lattice.rank}."
        raise AmbientMismatchError(msg)
    line = isotropic_sublattice(lattice, [isotropic])
    quotient = isotropic_quotient(lattice, line)
    m = sympy.Matrix([list(row) for row in k_iso])
    if m.shape != (k_lattice.rank, k_lattice.rank) or abs(m.det()) != 1:
        msg = f"Isometry matrix {[list(row) for row in k_iso]} is not unimodular of size {k_lattice.rank}."
        raise AmbientMismatchError(msg)
    if m.T * quotient.lattice.matrix * m != k_lattice.matrix:
        msg = "Isometry matrix does not carry the Gram matrix of the quotient to that of K."
        raise AmbientMismatchError(msg)

    rows = [[int(v) for v in m.row(i)] for i in range(m.rows)]
    k_group = k_lattice.discriminant
    quotient_group = quotient.lattice.discriminant
    to_k: dict[Element, Element] = {}
    for delta in k_group.elements:
        to_k[quotient_group.reduce(mat_vec(rows, k_group.lift(delta)))] = delta
    maps = isotropic_pull_push(lattice, line).relabel_big(k_group, to_k)
    loguru.logger.debug(
        "Ambient data: |disc(L)|={small}, |disc(K)|={big}.",
        small=maps.small.order,
        big=maps.big.order,
    )
    return AmbientData(L=lattice, I=line, K=k_lattice, k_iso=tuple(tuple(r) for r in rows), maps=maps)


def _check_fragment(ad: AmbientData, fragment: FanFragment) -> None:
    if ad.K.gram != fragment.K.gram:
        msg = "Fragment lattice differs from the quotient lattice K of the ambient data."
        raise AmbientMismatchError(msg)


def intersection_series(ad: AmbientData, fragment: FanFragment, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``sum_{lambda in K^dual} (Z(lambda) . C_sigma) q^(-Q(lambda)) p_K^L(v_[lambda])`` over disc(L)."""
    _check_fragment(ad, fragment)
    loguru.logger.info("Computing intersection series up to {bound}...", bound=str(bound))
    rs = fragment_ray_system(fragment)
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for v in enumerate_support(rs, bound):
        # each vector is pushed on its own: p_K^L(v_[lambda]) is the sum over the fiber of [lambda]
        pushed = ad.maps.push({ad.maps.big.reduce(v): intersect_character_curve(v, fragment)})
        vector = terms.setdefault(-fragment.K.q(v), {})
        for gamma, c in pushed.items():
            vector[gamma] = vector.get(gamma, Fraction(0)) + c
    series = VectorValuedQSeries.build(ad.maps.small, terms, bound, weight=rs.weight)
    loguru.logger.info("Computing intersection series up to {bound}... Done.", bound=str(bound))
    return series


@dataclasses.dataclass(frozen=True)
class PairingReport:
    intersection: VectorValuedQSeries
    pairing: VectorValuedQSeries
    expected: VectorValuedQSeries
    mismatches: tuple[tuple[Fraction, Element], ...]

    @property
    def matches(self) -> bool:
        return not self.mismatches

    @property
    def constant_term(self) -> Fraction:
        return self.intersection.coefficient(0, self.intersection.group.zero)


def precise_main_pairing(ad: AmbientData, fragment: FanFragment, bound: Fraction | int, /) -> PairingReport:
    """Intersection series minus the pushed Zagier terms plus the pushed E_2 terms, against the pushed candidate."""
    bound = Fraction(bound)
    intersection = intersection_series(ad, fragment, bound)
    pairing = intersection
    rs = fragment_ray_system(fragment)
    for i in rs.active:
        ray, a = rs.rays[i], rs.coeffs[i]
        if rs.is_isotropic(i):
            term = apply_map(isotropic_term(rs.K, ray, bound), ad.maps, MapDirection.PUSH)
            pairing = add(pairing, scale(term, rs.prefactor * a / 6))
        else:
            term = apply_map(anisotropic_term(rs.K, ray, bound), ad.maps, MapDirection.PUSH)
            pairing = subtract(pairing, scale(term, rs.prefactor * a))

    expected = apply_map(completion_report(rs, bound).candidate, ad.maps, MapDirection.PUSH)
    common = min(pairing.bound, expected.bound)
    keys = {(exp, gamma) for series in (pairing, expected) for exp, vector in series.terms.items() for gamma in vector}
    mismatches = tuple(
        sorted(
            (exp, gamma)
            for exp, gamma in keys
            if exp <= common and pairing.coefficient(exp, gamma) != expected.coefficient(exp, gamma)
        ),
    )
    if mismatches:
        loguru.logger.warning("Main pairing differs from the pushed candidate at {count} coefficients.", count=len(mismatches))
    return PairingReport(intersection=intersection, pairing=pairing, expected=expected, mismatches=mismatches)
