# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Weighted class numbers H(D, r) at level N.

Forms are positive definite ``a x^2 + b x y + c y^2`` with ``b^2 - 4 a c = D``. SL2(Z) acts from the right
by ``(Q o g)(v) = Q(g v)``.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import typing as t
from fractions import Fraction

import loguru
import sympy

from toric_theta_tools.constants import Bounds
from toric_theta_tools.error_codes import InadmissibleError
from toric_theta_tools.error_codes import NegativeArgumentError

if t.TYPE_CHECKING:
    import collections.abc as cabc

Matrix2 = tuple[int, int, int, int]
Point = tuple[int, int]

IDENTITY: Matrix2 = (1, 0, 0, 1)
S_MATRIX: Matrix2 = (0, -1, 1, 0)
ORDER_SIX_MATRIX: Matrix2 = (0, -1, 1, 1)


def mat_mul(g: Matrix2, h: Matrix2) -> Matrix2:
    return (
        g[0] * h[0] + g[1] * h[2],
        g[0] * h[1] + g[1] * h[3],
        g[2] * h[0] + g[3] * h[2],
        g[2] * h[1] + g[3] * h[3],
    )


def mat_inv(g: Matrix2) -> Matrix2:
    # determinant 1
    return (g[3], -g[1], -g[2], g[0])


def t_power(k: int) -> Matrix2:
    return (1, k, 0, 1)


@dataclasses.dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    def __iter__(self) -> cabc.Iterator[int]:
        yield self.a
        yield self.b
        yield self.c

    @property
    def discriminant(self) -> int:
        return self.b**2 - 4 * self.a * self.c

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def act(self, g: Matrix2) -> BinaryQuadraticForm:
        p, q, r, s = g
        return BinaryQuadraticForm(
            a=self.value(p, r),
            b=2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c=self.value(q, s),
        )

    def is_reduced(self) -> bool:
        if not abs(self.b) <= self.a <= self.c:
            return False
        return self.b >= 0 if abs(self.b) == self.a or self.a == self.c else True

    @property
    def stabilizer(self) -> tuple[Matrix2, ...]:
        """Stabilizer in SL2(Z) of a reduced form."""
        if self.a == self.c and self.b == 0:
            return _cyclic(S_MATRIX, 4)
        if self.a == self.b == self.c:
            return _cyclic(ORDER_SIX_MATRIX, 6)
        return (IDENTITY, (-1, 0, 0, -1))


def _cyclic(generator: Matrix2, order: int) -> tuple[Matrix2, ...]:
    elements = [IDENTITY]
    for _ in range(order - 1):
        elements.append(mat_mul(elements[-1], generator))
    return tuple(elements)


def reduce_with_transform(form: BinaryQuadraticForm, /) -> tuple[BinaryQuadraticForm, Matrix2]:
    """Reduced form Q0 and g in SL2(Z) with ``form == Q0 o g``."""
    if form.discriminant >= 0 or form.a <= 0:
        msg = f"Form {tuple(form)} is not positive definite."
        raise NegativeArgumentError(msg)
    a, b, c = form
    shift = (a - b) // (2 * a)
    h = t_power(shift)
    current = form.act(h)
    while not (current.a < current.c or (current.a == current.c and current.b >= 0)):
        s = (current.c + current.b) // (2 * current.c)
        step = mat_mul(S_MATRIX, t_power(s))
        current = current.act(step)
        h = mat_mul(h, step)
    return current, mat_inv(h)


def reduced_forms(discriminant: int, /) -> list[BinaryQuadraticForm]:
    """All reduced positive definite forms of the discriminant, imprimitive ones included."""
    if discriminant >= 0 or discriminant % 4 not in (0, 1):
        return []
    forms = []
    a = 1
    while 3 * a * a <= -discriminant:
        for b in range(-a + 1, a + 1):
            if (b * b - discriminant) % (4 * a) != 0:
                continue
            form = BinaryQuadraticForm(a=a, b=b, c=(b * b - discriminant) // (4 * a))
            if form.is_reduced():
                forms.append(form)
        a += 1
    return forms


def normalize_point(x: int, y: int, level: int, /) -> Point:
    """Canonical representative of (x : y) in P^1(Z/N)."""
    if level == 1:
        return (0, 0)
    return min(((u * x) % level, (u * y) % level) for u in range(1, level) if math.gcd(u, level) == 1)


def projective_line(level: int, /) -> list[Point]:
    points = {
        normalize_point(x, y, level)
        for x, y in itertools.product(range(level), repeat=2)
        if math.gcd(math.gcd(x, y), level) == 1
    }
    return sorted(points)


def lift_point(point: Point, level: int, /) -> Matrix2:
    """A matrix of SL2(Z) whose first column reduces to the point."""
    x, y = point
    for j, k in itertools.product(range(2 * level + 2), repeat=2):
        p, r = x + j * level, y + k * level
        if math.gcd(p, r) == 1:
            s, minus_q, _ = sympy.gcdex(p, r)
            return (p, -int(minus_q), r, int(s))
    msg = f"Point {point} of P^1(Z/{level}) has no coprime lift."
    raise InadmissibleError(msg)


def _check_admissible(level: int, discriminant: int, residue: int) -> None:
    if level < 1 or discriminant >= 0:
        msg = f"Class numbers need level >= 1 and D < 0, got N={level}, D={discriminant}."
        raise InadmissibleError(msg)
    if (residue * residue - discriminant) % (4 * level) != 0:
        msg = f"r={residue} is inadmissible: r^2 is not congruent to D={discriminant} mod {4 * level}."
        raise InadmissibleError(msg)


def _satisfies(form: BinaryQuadraticForm, level: int, residue: int) -> bool:
    return form.a % level == 0 and (form.b - residue) % (2 * level) == 0


def hurwitz_H(level: int, discriminant: int, residue: int, /) -> Fraction:
    """``H_N(D, r) = sum_{Q0 reduced} 2/|Stab(Q0)| * #{P in P^1(Z/N) : Q0 o g_P has N | a, b = r mod 2N}``."""
    _check_admissible(level, discriminant, residue)
    points = [lift_point(p, level) for p in projective_line(level)]
    total = Fraction(0)
    for form in reduced_forms(discriminant):
        count = sum(1 for g in points if _satisfies(form.act(g), level, residue))
        total += Fraction(2 * count, len(form.stabilizer))
    return total


def _orbit_key(form: BinaryQuadraticForm, level: int) -> tuple[BinaryQuadraticForm, Point, int]:
    reduced, g = reduce_with_transform(form)
    point = (g[0], g[2])
    images = [normalize_point(s[0] * point[0] + s[1] * point[1], s[2] * point[0] + s[3] * point[1], level) for s in reduced.stabilizer]
    own = normalize_point(*point, level)
    fixing = sum(1 for image in images if image == own)
    return reduced, min(images), fixing


def orbit_merge_count(level: int, discriminant: int, residue: int, a_bound: int, /) -> Fraction:
    """Weighted count of the Gamma0(N)-orbits met by the window ``N | a <= a_bound``, ``-a < b <= a``.

    Each orbit is keyed by its reduced form and the minimal point of its stabilizer orbit in P^1(Z/N),
    and weighted by ``2 / |Stab_Gamma0(N)(Q)|``.
    """
    _check_admissible(level, discriminant, residue)
    orbits: dict[tuple[BinaryQuadraticForm, Point], int] = {}
    for a in range(level, a_bound + 1, level):
        for b in range(-a + 1, a + 1):
            if (b - residue) % (2 * level) != 0 or (b * b - discriminant) % (4 * a) != 0:
                continue
            form = BinaryQuadraticForm(a=a, b=b, c=(b * b - discriminant) // (4 * a))
            reduced, point, fixing = _orbit_key(form, level)
            orbits[(reduced, point)] = fixing
    return sum((Fraction(2, fixing) for fixing in orbits.values()), Fraction(0))


def _minimal_first_coefficient(form: BinaryQuadraticForm, point: Point, level: int) -> int:
    # min Q0(w) over primitive w with (w mod N) equal to the point in P^1(Z/N)
    radius = level
    while True:
        values = [
            form.value(x, y)
            for x, y in itertools.product(range(-radius, radius + 1), repeat=2)
            if math.gcd(x, y) == 1 and normalize_point(x, y, level) == point
        ]
        if values:
            return min(values)
        radius *= 2


def orbit_window(level: int, discriminant: int, residue: int, /) -> int:
    """Smallest a_bound whose window meets every Gamma0(N)-orbit."""
    _check_admissible(level, discriminant, residue)
    window = level
    for form in reduced_forms(discriminant):
        for point in projective_line(level):
            if _satisfies(form.act(lift_point(point, level)), level, residue):
                window = max(window, _minimal_first_coefficient(form, point, level))
    return window


def stabilized_orbit_count(level: int, discriminant: int, residue: int, /) -> tuple[Fraction, int]:
    """Orbit-merge count at a doubling window until it stops changing past the certified window.

    Returns the count and the final window.
    """
    certified = orbit_window(level, discriminant, residue)
    a_bound = Bounds.ORBIT_SEARCH_START * level
    previous = orbit_merge_count(level, discriminant, residue, a_bound)
    for _ in range(Bounds.ORBIT_SEARCH_MAX_DOUBLINGS):
        a_bound *= 2
        current = orbit_merge_count(level, discriminant, residue, a_bound)
        if current == previous and a_bound // 2 >= certified:
            loguru.logger.debug(
                "Orbit count for N={level}, D={D}, r={r} stabilized at {count} with window {window}.",
                level=level,
                D=discriminant,
                r=residue,
                count=str(current),
                window=a_bound,
            )
            return current, a_bound
        previous = current
    msg = f"Orbit count for N={level}, D={discriminant}, r={residue} did not stabilize."
    raise InadmissibleError(msg)


@dataclasses.dataclass(frozen=True)
class ClassNumberTable:
    level: int
    entries: dict[tuple[int, int], Fraction]
    include_negative_definite: bool = False

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries[key]

    def admissible(self, max_abs_discriminant: int | None = None) -> list[tuple[int, int]]:
        return sorted(k for k in self.entries if max_abs_discriminant is None or -k[0] <= max_abs_discriminant)


def admissible_residues(level: int, discriminant: int, /) -> list[int]:
    return [r for r in range(2 * level) if (r * r - discriminant) % (4 * level) == 0]


def class_number_table(level: int, d_max: int, /, *, include_negative_definite: bool = False) -> ClassNumberTable:
    """H(D, r) for all admissible ``0 < -D <= d_max``; the flag counts negative definite forms too."""
    loguru.logger.debug("Computing class number table for N={level} up to {d_max}...", level=level, d_max=d_max)
    factor = 2 if include_negative_definite else 1
    entries = {}
    for d in range(1, d_max + 1):
        for r in admissible_residues(level, -d):
            entries[(-d, r)] = factor * hurwitz_H(level, -d, r)
    loguru.logger.debug("Computing class number table for N={level} up to {d_max}... Done.", level=level, d_max=d_max)
    return ClassNumberTable(level=level, entries=entries, include_negative_definite=include_negative_definite)
