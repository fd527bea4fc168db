# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

import dataclasses
import enum
import math
import typing as t
from fractions import Fraction

import loguru
import mpmath

from toric_theta_tools.constants import Precision
from toric_theta_tools.constants import ZagierLevels
from toric_theta_tools.error_codes import InadmissibleError
from toric_theta_tools.hurwitz import admissible_residues
from toric_theta_tools.hurwitz import hurwitz_H
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import VectorValuedQSeries
from toric_theta_tools.qseries import evaluate
from toric_theta_tools.special import beta
from toric_theta_tools.special import sigma1

if t.TYPE_CHECKING:
    from toric_theta_tools.lattice import DiscriminantGroup
    from toric_theta_tools.lattice import Element


class ZagierNormalization(enum.Enum):
    VERBATIM = "VERBATIM"
    COMPLETION = "COMPLETION"


@dataclasses.dataclass(frozen=True)
class ZagierSeries:
    level: int
    holo: VectorValuedQSeries
    normalization: ZagierNormalization

    @property
    def group(self) -> DiscriminantGroup:
        return self.holo.group


def zagier_group(level: int, /) -> DiscriminantGroup:
    return validate_even_lattice([[2 * level]], name=f"A1({level})").discriminant


def residue_element(group: DiscriminantGroup, level: int, n: int, /) -> Element:
    """The class of n/2N in the group of [[2N]]."""
    return group.reduce((Fraction(n, 2 * level),))


def normalization_constants(level: int, normalization: ZagierNormalization, /) -> tuple[Fraction, Fraction]:
    """Constant term at v_0 and the factor in front of H(D, r)."""
    if normalization is ZagierNormalization.VERBATIM:
        return Fraction(-1, 6), Fraction(1)
    if level not in ZagierLevels.VERIFIED_COMPLETION:
        msg = f"Completion normalization is only available at levels {ZagierLevels.VERIFIED_COMPLETION}, got {level}."
        raise InadmissibleError(msg)
    factor = Fraction(4) if level == 1 else Fraction(2)
    # -kappa_N sigma_1(N) / 12
    return -factor * sigma1(level) / 12, factor


def zagier_F(
    level: int,
    bound: Fraction | int,
    /,
    *,
    normalization: ZagierNormalization = ZagierNormalization.VERBATIM,
) -> ZagierSeries:
    """Holomorphic part ``c v_0 + sum kappa H(D, r) q^(-D/4N) v_r`` up to ``q^bound``."""
    if level < 1:
        msg = f"Level must be positive, got {level}."
        raise InadmissibleError(msg)
    loguru.logger.debug("Computing Zagier series for N={level}...", level=level)
    bound = Fraction(bound)
    group = zagier_group(level)
    constant, factor = normalization_constants(level, normalization)
    terms: dict[Fraction, dict[Element, Fraction]] = {Fraction(0): {group.zero: constant}}
    d = 1
    while Fraction(d, 4 * level) <= bound:
        exp = Fraction(d, 4 * level)
        for r in admissible_residues(level, -d):
            gamma = residue_element(group, level, r)
            vector = terms.setdefault(exp, {})
            vector[gamma] = vector.get(gamma, Fraction(0)) + factor * hurwitz_H(level, -d, r)
        d += 1
    holo = VectorValuedQSeries.build(group, terms, bound, weight=Fraction(3, 2))
    loguru.logger.debug("Computing Zagier series for N={level}... Done.", level=level)
    return ZagierSeries(level=level, holo=holo, normalization=normalization)


def zagier_F_eval(
    level: int,
    tau: mpmath.mpc | complex,
    trunc: Fraction | int,
    /,
    *,
    digits: int | None = None,
) -> dict[Element, mpmath.mpc]:
    """Harmonic Maass form ``(F+ + F-) / 4`` in the completion normalization.

    ``F- = sqrt(N) y^(-1/2) sum_n beta(y n^2 / N) q^(-n^2/4N) v_[n]``.
    """
    series = zagier_F(level, trunc, normalization=ZagierNormalization.COMPLETION)
    with mpmath.workdps(digits or Precision.DIGITS):
        tau = mpmath.mpc(tau)
        y = tau.imag
        values = evaluate(series.holo, tau, digits=digits)
        limit = math.isqrt(math.floor(4 * level * Fraction(trunc)))
        prefactor = mpmath.sqrt(level) / mpmath.sqrt(y)
        for n in range(-limit, limit + 1):
            gamma = residue_element(series.group, level, n)
            weight = beta(y * n * n / level, digits=digits)
            values[gamma] += prefactor * weight * mpmath.exp(-2j * mpmath.pi * tau * n * n / (4 * level))
        return {gamma: value / 4 for gamma, value in values.items()}
