# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Exact arithmetic of even integral lattices.

Vectors are tuples of ``Fraction`` in the lattice basis. A vector lies in the dual lattice
exactly when ``gram @ v`` is integral.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
import typing as t
from fractions import Fraction

import loguru
import numpy as np
import sympy

from toric_theta_tools.error_codes import DegenerateError
from toric_theta_tools.error_codes import NotDefiniteError
from toric_theta_tools.error_codes import NotInDualError
from toric_theta_tools.error_codes import NotIsotropicError
from toric_theta_tools.error_codes import NotPrimitiveError
from toric_theta_tools.error_codes import NotSymmetricError
from toric_theta_tools.error_codes import OddDiagonalError
from toric_theta_tools.error_codes import SingularSystemError
from toric_theta_tools.error_codes import ZeroVectorError
from toric_theta_tools.utils import linalg

if t.TYPE_CHECKING:
    import collections.abc as cabc

LatticeVector = tuple[Fraction, ...]
Element = tuple[int, ...]
RationalMatrix = tuple[tuple[Fraction, ...], ...]


def as_vector(values: cabc.Iterable[int | Fraction | str]) -> LatticeVector:
    return tuple(Fraction(v) for v in values)


def to_fraction(value: sympy.Expr | int | Fraction) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _fraction_matrix(matrix: sympy.Matrix) -> RationalMatrix:
    return tuple(tuple(to_fraction(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows))


def mat_vec(matrix: cabc.Sequence[cabc.Sequence[int | Fraction]], vector: cabc.Sequence[int | Fraction]) -> LatticeVector:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, vector, strict=True)), Fraction(0)) for row in matrix)


def dot(x: cabc.Sequence[int | Fraction], y: cabc.Sequence[int | Fraction]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(x, y, strict=True)), Fraction(0))


def fractional_part(value: Fraction) -> Fraction:
    return value - math.floor(value)


def _is_integral(vector: cabc.Iterable[Fraction]) -> bool:
    return all(v.denominator == 1 for v in vector)


@dataclasses.dataclass(frozen=True)
class IntegerLattice:
    gram: tuple[tuple[int, ...], ...]
    name: str | None = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    @functools.cached_property
    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.rank, self.rank, [v for row in self.gram for v in row])

    @functools.cached_property
    def int_matrix(self) -> np.ndarray:
        return linalg.as_int_matrix(self.gram, columns=self.rank)

    @functools.cached_property
    def det(self) -> int:
        if self.rank == 0:
            return 1
        return int(self.matrix.det())

    @functools.cached_property
    def inverse(self) -> RationalMatrix:
        if self.rank == 0:
            return ()
        return _fraction_matrix(self.matrix.inv())

    @functools.cached_property
    def signature(self) -> tuple[int, int]:
        """Signature (b_plus, b_minus) from the sign changes of the characteristic polynomial.

        All eigenvalues of a symmetric matrix are real, so Descartes' rule counts the positive ones exactly.
        """
        if self.rank == 0:
            return (0, 0)
        coeffs = [int(c) for c in self.matrix.charpoly().all_coeffs() if c != 0]
        b_plus = sum(1 for a, b in itertools.pairwise(coeffs) if (a > 0) != (b > 0))
        return (b_plus, self.rank - b_plus)

    @property
    def is_positive_definite(self) -> bool:
        return self.signature[1] == 0

    @property
    def is_negative_definite(self) -> bool:
        return self.signature[0] == 0

    def pair(self, x: cabc.Sequence[int | Fraction], y: cabc.Sequence[int | Fraction]) -> Fraction:
        return dot(x, mat_vec(self.gram, y))

    def q(self, x: cabc.Sequence[int | Fraction]) -> Fraction:
        return self.pair(x, x) / 2

    def apply_gram(self, x: cabc.Sequence[int | Fraction]) -> LatticeVector:
        return mat_vec(self.gram, x)

    def from_dual_coordinates(self, y: cabc.Sequence[int | Fraction]) -> LatticeVector:
        return mat_vec(self.inverse, y)

    def in_lattice(self, x: cabc.Sequence[int | Fraction]) -> bool:
        return _is_integral(Fraction(v) for v in x)

    def in_dual(self, x: cabc.Sequence[int | Fraction]) -> bool:
        return _is_integral(self.apply_gram(x))

    @functools.cached_property
    def discriminant(self) -> DiscriminantGroup:
        return discriminant_group(self)


def validate_even_lattice(gram: cabc.Sequence[cabc.Sequence[int]], /, *, name: str | None = None) -> IntegerLattice:
    n = len(gram)
    if any(len(row) != n for row in gram):
        msg = f"Gram matrix of {name or 'lattice'} is not square."
        raise NotSymmetricError(msg)
    rows = tuple(tuple(int(v) for v in row) for row in gram)
    for i, j in itertools.combinations(range(n), 2):
        if rows[i][j] != rows[j][i]:
            msg = f"Gram matrix of {name or 'lattice'} is not symmetric at ({i}, {j})."
            raise NotSymmetricError(msg)
    for i in range(n):
        if rows[i][i] % 2 != 0:
            msg = f"Gram matrix of {name or 'lattice'} has odd diagonal entry {rows[i][i]} at {i}."
            raise OddDiagonalError(msg)

    lattice = IntegerLattice(gram=rows, name=name)
    if lattice.det == 0:
        msg = f"Gram matrix of {name or 'lattice'} is degenerate."
        raise DegenerateError(msg)

    loguru.logger.debug(
        "Lattice {name} validated: rank={rank}, signature={signature}, det={det}.",
        name=name,
        rank=lattice.rank,
        signature=lattice.signature,
        det=lattice.det,
    )
    return lattice


def orthogonal_sum(first: IntegerLattice, second: IntegerLattice, /) -> IntegerLattice:
    n, m = first.rank, second.rank
    rows = [list(row) + [0] * m for row in first.gram] + [[0] * n + list(row) for row in second.gram]
    name = f"{first.name}+{second.name}" if first.name and second.name else None
    return validate_even_lattice(rows, name=name)


def sublattice(lattice: IntegerLattice, basis: cabc.Sequence[cabc.Sequence[int]], /) -> IntegerLattice:
    """Lattice spanned by the basis columns, with Gram ``B.T @ G @ B``."""
    b = linalg.as_int_matrix(basis, columns=lattice.rank).T
    gram = b.T @ lattice.int_matrix @ b
    return validate_even_lattice([[int(v) for v in row] for row in gram])


@dataclasses.dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quadratic module L^dual / L.

    Elements are residue tuples against ``cyclic_orders``. A dual vector x is reduced by applying the
    ``reduction`` rows to ``gram @ x``; the k-th residue is taken mod ``cyclic_orders[k]``.
    """

    cyclic_orders: tuple[int, ...]
    generators: tuple[LatticeVector, ...]
    reduction: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    signature: tuple[int, int]

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def signature_difference(self) -> int:
        return self.signature[1] - self.signature[0]

    @functools.cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(d) for d in self.cyclic_orders)))

    @functools.cached_property
    def index(self) -> dict[Element, int]:
        return {e: k for k, e in enumerate(self.elements)}

    @property
    def zero(self) -> Element:
        return (0,) * len(self.cyclic_orders)

    def lift(self, element: Element) -> LatticeVector:
        lifted = [Fraction(0)] * self.rank
        for k, residue in enumerate(element):
            for j, v in enumerate(self.generators[k]):
                lifted[j] += residue * v
        return tuple(lifted)

    def reduce(self, x: cabc.Sequence[int | Fraction]) -> Element:
        y = mat_vec(self.gram, x)
        if not _is_integral(y):
            msg = f"Vector {tuple(str(v) for v in x)} is not in the dual lattice."
            raise NotInDualError(msg)
        return tuple(int(dot(row, y)) % d for row, d in zip(self.reduction, self.cyclic_orders, strict=True))

    def add(self, first: Element, second: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(first, second, self.cyclic_orders, strict=True))

    def negate(self, element: Element) -> Element:
        return tuple(-a % d for a, d in zip(element, self.cyclic_orders, strict=True))

    @functools.cached_property
    def q_table(self) -> dict[Element, Fraction]:
        table = {}
        for element in self.elements:
            lifted = self.lift(element)
            table[element] = fractional_part(dot(lifted, mat_vec(self.gram, lifted)) / 2)
        return table

    def q_form(self, element: Element) -> Fraction:
        return self.q_table[element]

    def bilinear(self, first: Element, second: Element) -> Fraction:
        return fractional_part(dot(self.lift(first), mat_vec(self.gram, self.lift(second))))

    @functools.cached_property
    def level(self) -> int:
        return math.lcm(1, *(q.denominator for q in self.q_table.values()))

    def direct_sum(self, other: DiscriminantGroup) -> DiscriminantGroup:
        """Group of the orthogonal sum; residue tuples concatenate in factor order."""
        n, m = self.rank, other.rank
        gram = tuple(tuple(row) + (0,) * m for row in self.gram) + tuple((0,) * n + tuple(row) for row in other.gram)
        generators = tuple(g + (Fraction(0),) * m for g in self.generators) + tuple(
            (Fraction(0),) * n + g for g in other.generators
        )
        reduction = tuple(tuple(r) + (0,) * m for r in self.reduction) + tuple((0,) * n + tuple(r) for r in other.reduction)
        return DiscriminantGroup(
            cyclic_orders=self.cyclic_orders + other.cyclic_orders,
            generators=generators,
            reduction=reduction,
            gram=gram,
            signature=(self.signature[0] + other.signature[0], self.signature[1] + other.signature[1]),
        )


def discriminant_group(lattice: IntegerLattice, /) -> DiscriminantGroup:
    """Discriminant group from the Smith form ``G = S D T``.

    ``y = G x`` identifies L^dual / L with Z^n / G Z^n, and ``S^-1`` splits the latter into cyclic factors.
    """
    if lattice.rank == 0:
        return DiscriminantGroup(cyclic_orders=(), generators=(), reduction=(), gram=(), signature=(0, 0))

    form = linalg.smith_form(lattice.int_matrix)
    orders = []
    generators = []
    reduction = []
    for k, d in enumerate(form.invariants):
        if d == 1:
            continue
        orders.append(d)
        generators.append(lattice.from_dual_coordinates([int(v) for v in form.S[:, k]]))
        reduction.append(tuple(int(v) for v in form.S_inv[k]))

    loguru.logger.debug("Discriminant group of {name}: orders {orders}.", name=lattice.name, orders=orders)
    return DiscriminantGroup(
        cyclic_orders=tuple(orders),
        generators=tuple(generators),
        reduction=tuple(reduction),
        gram=lattice.gram,
        signature=lattice.signature,
    )


def _fincke_pohst(form: sympy.Matrix, radius: Fraction) -> list[tuple[int, ...]]:
    """All integer z with ``z.T @ form @ z <= radius`` for a positive definite rational form.

    ``z.T M z = sum_i D_i (z_i + sum_{j>i} L_ji z_j)^2`` with ``M = L D L.T``; coordinates are fixed from
    the last one down. Candidate ranges come from an integer square root and every level is filtered exactly.
    """
    n = form.rows
    if n == 0:
        return [()]
    if not form.is_positive_definite:
        msg = "Quadratic form is not positive definite."
        raise NotDefiniteError(msg)
    lower, diagonal = form.LDLdecomposition()
    ldl = _fraction_matrix(lower)
    diag = [to_fraction(diagonal[i, i]) for i in range(n)]
    if any(d <= 0 for d in diag):
        msg = "Quadratic form is not positive definite."
        raise NotDefiniteError(msg)

    found: list[tuple[int, ...]] = []
    z = [0] * n

    def descend(i: int, budget: Fraction) -> None:
        center = -sum((ldl[j][i] * z[j] for j in range(i + 1, n)), Fraction(0))
        span = budget / diag[i]
        width = math.isqrt(span.numerator // span.denominator) + 1
        for value in range(math.floor(center) - width, math.ceil(center) + width + 1):
            used = diag[i] * (value - center) ** 2
            if used > budget:
                continue
            z[i] = value
            if i == 0:
                found.append(tuple(z))
            else:
                descend(i - 1, budget - used)
        z[i] = 0

    descend(n - 1, Fraction(radius))
    return found


def enumerate_region(
    lattice: IntegerLattice,
    form: cabc.Sequence[cabc.Sequence[int | Fraction]],
    radius: Fraction | int,
    /,
    *,
    dual: bool = False,
) -> list[LatticeVector]:
    """All v in L (or L^dual) with ``v.T @ form @ v <= radius`` for a positive definite form in lattice coordinates."""
    if radius < 0:
        return []
    matrix = sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in form])
    if lattice.rank == 0:
        return [()]
    if dual:
        inverse = lattice.matrix.inv()
        matrix = inverse * matrix * inverse

    points = _fincke_pohst(matrix, Fraction(radius))
    if dual:
        vectors = [lattice.from_dual_coordinates(p) for p in points]
    else:
        vectors = [as_vector(p) for p in points]
    vectors.sort()
    loguru.logger.debug("Enumerated {count} vectors of radius {radius}.", count=len(vectors), radius=str(radius))
    return vectors


def enumerate_short_vectors(
    lattice: IntegerLattice,
    /,
    *,
    dual: bool,
    bound: Fraction | int,
) -> list[LatticeVector]:
    """All v in L (or L^dual) with ``|Q(v)| <= bound`` for a definite lattice, sorted."""
    if lattice.rank == 0:
        return [()]
    if lattice.is_positive_definite:
        sign = Fraction(1, 2)
    elif lattice.is_negative_definite:
        sign = Fraction(-1, 2)
    else:
        msg = f"Lattice {lattice.name} of signature {lattice.signature} is not definite."
        raise NotDefiniteError(msg)
    form = [[sign * v for v in row] for row in lattice.gram]
    return enumerate_region(lattice, form, Fraction(bound), dual=dual)


def imprimitivity(vector: cabc.Sequence[int | Fraction], ambient: IntegerLattice, /, *, dual: bool) -> int:
    """Largest u with ``vector / u`` still in L (or in L^dual)."""
    coords = ambient.apply_gram(vector) if dual else as_vector(vector)
    if all(v == 0 for v in coords):
        msg = "Imprimitivity of the zero vector is undefined."
        raise ZeroVectorError(msg)
    if not _is_integral(coords):
        msg = f"Vector {tuple(str(v) for v in vector)} is not in the {'dual ' if dual else ''}lattice."
        raise NotInDualError(msg)
    return math.gcd(*(int(v) for v in coords))


def primitive_vector(vector: cabc.Sequence[int]) -> tuple[int, ...]:
    u = math.gcd(*(int(v) for v in vector))
    if u == 0:
        msg = "The zero vector has no primitive generator."
        raise ZeroVectorError(msg)
    return tuple(int(v) // u for v in vector)


@dataclasses.dataclass(frozen=True)
class IsotropicSublattice:
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def columns(self) -> np.ndarray:
        return np.array([list(v) for v in self.basis], dtype=object).T


def isotropic_sublattice(lattice: IntegerLattice, basis: cabc.Sequence[cabc.Sequence[int]], /) -> IsotropicSublattice:
    sub = IsotropicSublattice(basis=tuple(tuple(int(v) for v in b) for b in basis))
    if any(all(v == 0 for v in b) for b in sub.basis):
        msg = "Isotropic sublattice is spanned by zero vectors."
        raise ZeroVectorError(msg)
    if sub.rank not in (1, 2) or any(len(b) != lattice.rank for b in sub.basis):
        msg = f"Isotropic sublattice must have rank 1 or 2 in a rank {lattice.rank} lattice."
        raise NotIsotropicError(msg)
    for u, v in itertools.product(sub.basis, repeat=2):
        if lattice.pair(u, v) != 0:
            msg = f"Sublattice spanned by {sub.basis} is not isotropic."
            raise NotIsotropicError(msg)
    form = linalg.smith_form(sub.columns)
    if form.rank != sub.rank or linalg.index_in_saturation(sub.columns) != 1:
        msg = f"Sublattice spanned by {sub.basis} is not primitive."
        raise NotPrimitiveError(msg)
    return sub


@dataclasses.dataclass(frozen=True)
class IsotropicQuotient:
    """K = I^perp / I together with a section of K into I^perp."""

    lattice: IntegerLattice
    section: tuple[tuple[int, ...], ...]
    isotropic: IsotropicSublattice
    ambient: IntegerLattice

    @functools.cached_property
    def _projector(self) -> RationalMatrix:
        # left inverse of [section | I]
        columns = [list(s) for s in self.section] + [list(b) for b in self.isotropic.basis]
        if not columns:
            return ()
        m = sympy.Matrix(columns).T
        return _fraction_matrix((m.T * m).inv() * m.T)

    def lift(self, x: cabc.Sequence[int | Fraction]) -> LatticeVector:
        """Section image in L coordinates of a vector given in K coordinates."""
        lifted = [Fraction(0)] * self.ambient.rank
        for coeff, column in zip(x, self.section, strict=True):
            for j, v in enumerate(column):
                lifted[j] += Fraction(coeff) * v
        return tuple(lifted)

    def project(self, x: cabc.Sequence[int | Fraction]) -> LatticeVector:
        """K coordinates of a vector of the rational span of I^perp."""
        k = self.lattice.rank
        if not self._projector:
            return ()
        coords = mat_vec(self._projector, x)
        rebuilt = self.lift(coords[:k])
        for coeff, b in zip(coords[k:], self.isotropic.basis, strict=True):
            rebuilt = tuple(r + coeff * v for r, v in zip(rebuilt, b, strict=True))
        if rebuilt != as_vector(x):
            msg = f"Vector {tuple(str(v) for v in x)} is not orthogonal to the isotropic sublattice."
            raise SingularSystemError(msg)
        return coords[:k]


def isotropic_quotient(lattice: IntegerLattice, isotropic: IsotropicSublattice, /) -> IsotropicQuotient:
    """Induced lattice on I^perp / I with an integral section.

    I^perp is the kernel of ``(G Z).T``; the coordinates of I inside it are completed to a unimodular
    matrix and the completing columns span the section.
    """
    loguru.logger.debug("Computing isotropic quotient of {name}...", name=lattice.name)
    z = isotropic.columns
    orth = linalg.kernel((lattice.int_matrix @ z).T)
    r = isotropic.rank
    coords = np.zeros((orth.shape[1], r), dtype=object)
    for k in range(r):
        solution = linalg.solve_integer(orth, z[:, k])
        if solution is None:
            msg = "Isotropic sublattice is not contained in its orthogonal complement."
            raise NotIsotropicError(msg)
        coords[:, k] = solution
    unimodular = linalg.complete_basis(coords)
    section = orth @ unimodular[:, r:]
    gram = section.T @ lattice.int_matrix @ section
    quotient = validate_even_lattice([[int(v) for v in row] for row in gram], name=f"{lattice.name or 'L'}/I")
    loguru.logger.debug("Computing isotropic quotient of {name}... Done.", name=lattice.name)
    return IsotropicQuotient(
        lattice=quotient,
        section=tuple(tuple(int(v) for v in section[:, k]) for k in range(section.shape[1])),
        isotropic=isotropic,
        ambient=lattice,
    )


@dataclasses.dataclass(frozen=True)
class Overlattice:
    """L_I = L + (I_Q cap L^dual) with its basis in L coordinates."""

    lattice: IntegerLattice
    basis: RationalMatrix

    def to_ambient(self, x: cabc.Sequence[int | Fraction]) -> LatticeVector:
        return tuple(dot(row, x) for row in self.basis)


def isotropic_overlattice(lattice: IntegerLattice, isotropic: IsotropicSublattice, /) -> Overlattice:
    """Overlattice obtained by adjoining the dual vectors in the rational span of I.

    With ``G Z = S D T`` the dual vectors in the span of I are generated by the columns of
    ``Z T^-1 diag(1/d)``.
    """
    z = isotropic.columns
    form = linalg.smith_form(lattice.int_matrix @ z)
    invariants = form.invariants
    scale = math.lcm(*invariants)
    n = lattice.rank

    columns = [[scale if i == j else 0 for i in range(n)] for j in range(n)]
    spans = z @ form.T_inv
    for k, d in enumerate(invariants):
        columns.append([int(v) * (scale // d) for v in spans[:, k]])
    generators = np.array(columns, dtype=object).T
    basis = linalg.column_basis(generators)

    rational = tuple(tuple(Fraction(int(basis[i, j]), scale) for j in range(n)) for i in range(n))
    gram = [
        [dot([rational[a][i] for a in range(n)], mat_vec(lattice.gram, [rational[a][j] for a in range(n)])) for j in range(n)]
        for i in range(n)
    ]
    over = validate_even_lattice([[int(v) for v in row] for row in gram], name=f"{lattice.name or 'L'}_I")
    loguru.logger.debug(
        "Overlattice has index {index} over {name}.",
        index=math.isqrt(abs(lattice.det // over.det)),
        name=lattice.name,
    )
    return Overlattice(lattice=over, basis=rational)
