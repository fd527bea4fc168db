# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

from __future__ import annotations

import math
import typing as t
from fractions import Fraction

import loguru
import mpmath
import sympy

from toric_theta_tools.constants import Precision
from toric_theta_tools.error_codes import NegativeArgumentError
from toric_theta_tools.error_codes import NotDefiniteError
from toric_theta_tools.lattice import enumerate_short_vectors
from toric_theta_tools.lattice import validate_even_lattice
from toric_theta_tools.qseries import ScalarQSeries
from toric_theta_tools.qseries import VectorValuedQSeries

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.lattice import Element
    from toric_theta_tools.lattice import IntegerLattice

    Real = mpmath.mpf | float | int | Fraction


def _mpf(x: Real) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def gauss_E(x: Real, /, *, digits: int | None = None) -> mpmath.mpf:
    """``E(x) = 2 int_0^x exp(-pi t^2) dt``, i.e. ``erf(sqrt(pi) x)``, evaluated through erfc."""
    with mpmath.workdps(digits or Precision.DIGITS):
        x = _mpf(x)
        value = 1 - mpmath.erfc(mpmath.sqrt(mpmath.pi) * abs(x))
        return value if x >= 0 else -value


def beta(t_: Real, /, *, digits: int | None = None) -> mpmath.mpf:
    """``beta(t) = 1/(2 pi) int_1^oo u^(-3/2) exp(-pi t u) du`` in closed form.

    With ``x = pi t`` the integral equals ``2 exp(-x) - 2 sqrt(pi x) erfc(sqrt(x))``.
    """
    with mpmath.workdps(digits or Precision.DIGITS):
        t_ = _mpf(t_)
        if t_ < 0:
            msg = f"beta is defined for t >= 0 only, got {t_}."
            raise NegativeArgumentError(msg)
        x = mpmath.pi * t_
        integral = 2 * mpmath.exp(-x) - 2 * mpmath.sqrt(mpmath.pi * x) * mpmath.erfc(mpmath.sqrt(x))
        return integral / (2 * mpmath.pi)


def psi(x: Real, /, *, digits: int | None = None) -> mpmath.mpf:
    """``psi(x) = x E(x) + exp(-pi x^2) / pi``; equals ``|x| + beta(x^2)``."""
    with mpmath.workdps(digits or Precision.DIGITS):
        x = _mpf(x)
        return x * gauss_E(x, digits=digits) + mpmath.exp(-mpmath.pi * x**2) / mpmath.pi


def sigma1(n: int, /) -> int:
    return int(sympy.divisor_sigma(n, 1))


def e2_series(bound: int, /) -> ScalarQSeries:
    """``E_2 = 1 - 24 sum sigma_1(n) q^n`` up to ``q^bound``."""
    terms = {0: Fraction(1)}
    for n in range(1, bound + 1):
        terms[n] = Fraction(-24 * sigma1(n))
    return ScalarQSeries(terms=terms, bound=bound)


def _e2_tail(r: mpmath.mpf, bound: int) -> mpmath.mpf:
    # sigma_1(n) <= n (1 + ln n); the term ratio of the majorant decreases in n
    n = bound + 1
    first = 24 * n * (1 + mpmath.log(n)) * r**n
    ratio = r * (n + 1) * (1 + mpmath.log(n + 1)) / (n * (1 + mpmath.log(n)))
    if ratio >= 1:
        return mpmath.inf
    return first / (1 - ratio)


def e2_eval(tau: mpmath.mpc | complex, bound: int, /, *, digits: int | None = None) -> tuple[mpmath.mpc, mpmath.mpf]:
    """Truncated value of E_2 at tau and a bound for the omitted tail."""
    with mpmath.workdps(digits or Precision.DIGITS):
        tau = mpmath.mpc(tau)
        q = mpmath.exp(2j * mpmath.pi * tau)
        value = mpmath.mpc(1)
        for n in range(1, bound + 1):
            value -= 24 * sigma1(n) * q**n
        return value, _e2_tail(abs(q), bound)


def e2_star_eval(
    tau: mpmath.mpc | complex,
    bound: int,
    /,
    *,
    digits: int | None = None,
) -> tuple[mpmath.mpc, mpmath.mpf]:
    """``E_2^*(tau) = E_2(tau) - 3 / (pi y)`` with the tail bound of the truncated E_2 part."""
    with mpmath.workdps(digits or Precision.DIGITS):
        tau = mpmath.mpc(tau)
        value, tail = e2_eval(tau, bound, digits=digits)
        return value - 3 / (mpmath.pi * tau.imag), tail


def theta_half(level: int, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``sum_n q^(n^2/4N) v_[n]`` over the group of the lattice [[2N]]."""
    lattice = validate_even_lattice([[2 * level]], name=f"A1({level})")
    group = lattice.discriminant
    bound = Fraction(bound)
    limit = math.isqrt(math.floor(4 * level * bound))
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for n in range(-limit, limit + 1):
        exp = Fraction(n * n, 4 * level)
        if exp > bound:
            continue
        gamma = group.reduce((Fraction(n, 2 * level),))
        vector = terms.setdefault(exp, {})
        vector[gamma] = vector.get(gamma, Fraction(0)) + 1
    return VectorValuedQSeries.build(group, terms, bound, weight=Fraction(1, 2))


def theta_definite(lattice: IntegerLattice, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``sum_{delta in L^dual} q^(-Q(delta)) v_[delta]`` for a negative definite lattice."""
    if lattice.rank > 0 and not lattice.is_negative_definite:
        msg = f"Theta series needs a negative definite lattice, got signature {lattice.signature}."
        raise NotDefiniteError(msg)
    loguru.logger.debug("Computing theta series for {name}...", name=lattice.name)
    group = lattice.discriminant
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for delta in enumerate_short_vectors(lattice, dual=True, bound=bound):
        exp = -lattice.q(delta) if lattice.rank > 0 else Fraction(0)
        gamma = group.reduce(delta)
        vector = terms.setdefault(exp, {})
        vector[gamma] = vector.get(gamma, Fraction(0)) + 1
    series = VectorValuedQSeries.build(group, terms, bound, weight=Fraction(lattice.rank, 2))
    loguru.logger.debug("Computing theta series for {name}... Done.", name=lattice.name)
    return series


def xi_operator(
    f: cabc.Callable[[mpmath.mpc], cabc.Mapping[Element, mpmath.mpc]],
    tau: mpmath.mpc | complex,
    weight: Fraction | float,
    /,
    *,
    digits: int | None = None,
) -> dict[Element, mpmath.mpc]:
    """``xi_k f = 2 i y^k conj(d f / d tau_bar)`` by central differences in x and y."""
    with mpmath.workdps(digits or Precision.DIGITS):
        tau = mpmath.mpc(tau)
        h = mpmath.mpf(10) ** Precision.FINITE_DIFFERENCE_STEP_EXPONENT
        right, left = f(tau + h), f(tau - h)
        up, down = f(tau + 1j * h), f(tau - 1j * h)
        k = _mpf(weight) if isinstance(weight, Fraction) else mpmath.mpf(weight)
        result = {}
        for gamma in right:
            d_x = (right[gamma] - left[gamma]) / (2 * h)
            d_y = (up[gamma] - down[gamma]) / (2 * h)
            d_bar = (d_x + 1j * d_y) / 2
            result[gamma] = 2j * tau.imag**k * mpmath.conj(d_bar)
        return result
