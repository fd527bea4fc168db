# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Truncated vector-valued q-expansions with exact rational exponents and coefficients."""

from __future__ import annotations

import dataclasses
import enum
import math
import typing as t
from fractions import Fraction

import mpmath

from toric_theta_tools.constants import Precision
from toric_theta_tools.error_codes import GroupMismatchError
from toric_theta_tools.lattice import fractional_part

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.lattice import DiscriminantGroup
    from toric_theta_tools.lattice import Element
    from toric_theta_tools.weil import LatticeMapPair

Terms = dict[Fraction, dict["Element", Fraction]]


class MapDirection(enum.Enum):
    PULL = "PULL"
    PUSH = "PUSH"


def _clean(terms: cabc.Mapping[Fraction, cabc.Mapping[Element, Fraction]], bound: Fraction) -> Terms:
    cleaned: Terms = {}
    for exp in sorted(terms):
        if exp > bound:
            continue
        vector = {gamma: Fraction(c) for gamma, c in sorted(terms[exp].items()) if c != 0}
        if vector:
            cleaned[Fraction(exp)] = vector
    return cleaned


@dataclasses.dataclass(frozen=True)
class VectorValuedQSeries:
    """Sum of ``coeff * q^exp * v_gamma`` known completely for all exponents up to ``bound``.

    Only nonzero coefficients are stored.
    """

    group: DiscriminantGroup
    terms: Terms
    bound: Fraction
    weight: Fraction | None = None

    @classmethod
    def build(
        cls,
        group: DiscriminantGroup,
        terms: cabc.Mapping[Fraction, cabc.Mapping[Element, Fraction]],
        bound: Fraction | int,
        *,
        weight: Fraction | None = None,
    ) -> VectorValuedQSeries:
        bound = Fraction(bound)
        return cls(group=group, terms=_clean(terms, bound), bound=bound, weight=weight)

    @property
    def denom(self) -> int:
        return math.lcm(self.group.level, *(exp.denominator for exp in self.terms))

    def coefficient(self, exp: Fraction | int, gamma: Element) -> Fraction:
        return self.terms.get(Fraction(exp), {}).get(gamma, Fraction(0))

    def exponents(self) -> list[Fraction]:
        return sorted(self.terms)

    def min_exponent(self) -> Fraction | None:
        return min(self.terms, default=None)

    def is_zero(self) -> bool:
        return not self.terms

    def components(self) -> dict[Element, list[tuple[Fraction, Fraction]]]:
        result: dict[Element, list[tuple[Fraction, Fraction]]] = {gamma: [] for gamma in self.group.elements}
        for exp in self.exponents():
            for gamma, c in self.terms[exp].items():
                result[gamma].append((exp, c))
        return result

    def support_violations(self) -> list[tuple[Fraction, Element]]:
        """Exponents m at component gamma with m not congruent to -q(gamma) mod 1."""
        return [
            (exp, gamma)
            for exp, vector in self.terms.items()
            for gamma in vector
            if fractional_part(exp + self.group.q_form(gamma)) != 0
        ]

    def lower_exponent(self) -> Fraction:
        """A lower bound for every exponent, known or beyond the truncation."""
        known = self.min_exponent()
        return self.bound if known is None else min(known, self.bound)


@dataclasses.dataclass(frozen=True)
class ScalarQSeries:
    terms: dict[int, Fraction]
    bound: int

    def coefficient(self, exp: int) -> Fraction:
        return self.terms.get(exp, Fraction(0))

    def lower_exponent(self) -> Fraction:
        return Fraction(min(self.terms, default=self.bound))


def zero_series(group: DiscriminantGroup, bound: Fraction | int, /) -> VectorValuedQSeries:
    return VectorValuedQSeries.build(group, {}, bound)


def monomial(
    group: DiscriminantGroup,
    exp: Fraction | int,
    gamma: Element,
    /,
    *,
    coeff: Fraction | int = 1,
    bound: Fraction | int,
) -> VectorValuedQSeries:
    return VectorValuedQSeries.build(group, {Fraction(exp): {gamma: Fraction(coeff)}}, bound)


def _check_same_group(f: VectorValuedQSeries, g: VectorValuedQSeries) -> None:
    if f.group != g.group:
        msg = f"Series live on different groups {f.group.cyclic_orders} and {g.group.cyclic_orders}."
        raise GroupMismatchError(msg)


def add(f: VectorValuedQSeries, g: VectorValuedQSeries, /) -> VectorValuedQSeries:
    _check_same_group(f, g)
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for series in (f, g):
        for exp, vector in series.terms.items():
            target = terms.setdefault(exp, {})
            for gamma, c in vector.items():
                target[gamma] = target.get(gamma, Fraction(0)) + c
    weight = f.weight if f.weight == g.weight else None
    return VectorValuedQSeries.build(f.group, terms, min(f.bound, g.bound), weight=weight)


def scale(f: VectorValuedQSeries, factor: Fraction | int, /) -> VectorValuedQSeries:
    factor = Fraction(factor)
    terms = {exp: {gamma: factor * c for gamma, c in vector.items()} for exp, vector in f.terms.items()}
    return VectorValuedQSeries.build(f.group, terms, f.bound, weight=f.weight)


def subtract(f: VectorValuedQSeries, g: VectorValuedQSeries, /) -> VectorValuedQSeries:
    return add(f, scale(g, -1))


def truncate(f: VectorValuedQSeries, bound: Fraction | int, /) -> VectorValuedQSeries:
    return VectorValuedQSeries.build(f.group, f.terms, min(f.bound, Fraction(bound)), weight=f.weight)


def tensor(f: VectorValuedQSeries, g: VectorValuedQSeries, /) -> VectorValuedQSeries:
    """Product series over the direct sum of both groups; components are concatenated residue tuples."""
    group = f.group.direct_sum(g.group)
    bound = min(f.bound + g.lower_exponent(), g.bound + f.lower_exponent())
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for exp_f, vector_f in f.terms.items():
        for exp_g, vector_g in g.terms.items():
            exp = exp_f + exp_g
            if exp > bound:
                continue
            target = terms.setdefault(exp, {})
            for gamma_f, c_f in vector_f.items():
                for gamma_g, c_g in vector_g.items():
                    key = gamma_f + gamma_g
                    target[key] = target.get(key, Fraction(0)) + c_f * c_g
    weight = f.weight + g.weight if f.weight is not None and g.weight is not None else None
    return VectorValuedQSeries.build(group, terms, bound, weight=weight)


def scalar_multiply(f: VectorValuedQSeries, s: ScalarQSeries, /) -> VectorValuedQSeries:
    bound = min(f.bound + s.lower_exponent(), Fraction(s.bound) + f.lower_exponent())
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for exp_f, vector in f.terms.items():
        for exp_s, c_s in s.terms.items():
            exp = exp_f + exp_s
            if exp > bound:
                continue
            target = terms.setdefault(exp, {})
            for gamma, c in vector.items():
                target[gamma] = target.get(gamma, Fraction(0)) + c * c_s
    return VectorValuedQSeries.build(f.group, terms, bound)


def apply_map(f: VectorValuedQSeries, maps: LatticeMapPair, direction: MapDirection, /) -> VectorValuedQSeries:
    """Apply ``pull`` (small group to big group) or ``push`` (big to small) to every coefficient vector."""
    if direction is MapDirection.PULL:
        source, target, operator = maps.small, maps.big, maps.pull
    else:
        source, target, operator = maps.big, maps.small, maps.push
    if f.group != source:
        msg = f"Map of direction {direction.value} expects group {source.cyclic_orders}, got {f.group.cyclic_orders}."
        raise GroupMismatchError(msg)
    terms = {exp: operator(vector) for exp, vector in f.terms.items()}
    return VectorValuedQSeries.build(target, terms, f.bound, weight=f.weight)


def evaluate(
    f: VectorValuedQSeries,
    tau: mpmath.mpc | complex,
    /,
    *,
    digits: int | None = None,
) -> dict[Element, mpmath.mpc]:
    """Numeric value ``sum c q^m`` of the truncated series; no tail estimate."""
    with mpmath.workdps(digits or Precision.DIGITS):
        tau = mpmath.mpc(tau)
        values = dict.fromkeys(f.group.elements, mpmath.mpc(0))
        for exp, vector in f.terms.items():
            power = mpmath.exp(2j * mpmath.pi * tau * mpmath.mpf(exp.numerator) / exp.denominator)
            for gamma, c in vector.items():
                values[gamma] += power * mpmath.mpf(c.numerator) / c.denominator
    return values

