# :author: Sasan Jacob Rasti <sasan_jacob.rasti@tu-dresden.de>
# :author: Sebastian Krahmer <sebastian.krahmer@tu-dresden.de>
# :copyright: Copyright (c) Institute of Electrical Power Systems and High Voltage Engineering - TU Dresden, 2022-2024.
# :license: BSD 3-Clause

"""Theta series of hyperbolic lattices with piecewise-linear weights, their completion and its transformation laws.

``K`` has signature (1, n-1). Rays ``c_i`` lie in the closure of the positive cone and satisfy ``sum a_i c_i = 0``.
The weight is ``p+(lambda) = prefactor * sum a_i |lambda . c_i|``.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
import typing as t
from fractions import Fraction

import loguru
import mpmath
import sympy

from toric_theta_tools.constants import Bounds
from toric_theta_tools.constants import Precision
from toric_theta_tools.error_codes import IsotropicRayError
from toric_theta_tools.error_codes import NotHyperbolicError
from toric_theta_tools.error_codes import RayNotInConeError
from toric_theta_tools.error_codes import RelationViolatedError
from toric_theta_tools.error_codes import ZeroVectorError
from toric_theta_tools.lattice import IntegerLattice
from toric_theta_tools.lattice import enumerate_region
from toric_theta_tools.lattice import isotropic_quotient
from toric_theta_tools.lattice import isotropic_sublattice
from toric_theta_tools.lattice import primitive_vector
from toric_theta_tools.lattice import sublattice
from toric_theta_tools.lattice import to_fraction
from toric_theta_tools.qseries import MapDirection
from toric_theta_tools.qseries import VectorValuedQSeries
from toric_theta_tools.qseries import add
from toric_theta_tools.qseries import apply_map
from toric_theta_tools.qseries import scalar_multiply
from toric_theta_tools.qseries import scale
from toric_theta_tools.qseries import subtract
from toric_theta_tools.qseries import tensor
from toric_theta_tools.special import beta
from toric_theta_tools.special import e2_series
from toric_theta_tools.special import psi
from toric_theta_tools.special import theta_definite
from toric_theta_tools.utils import linalg
from toric_theta_tools.weil import conjugate_action
from toric_theta_tools.weil import isotropic_pull_push
from toric_theta_tools.weil import pull_push_maps
from toric_theta_tools.weil import weil_action
from toric_theta_tools.zagier import ZagierNormalization
from toric_theta_tools.zagier import zagier_F

if t.TYPE_CHECKING:
    import collections.abc as cabc

    from toric_theta_tools.lattice import Element
    from toric_theta_tools.lattice import LatticeVector

Ray = tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class HyperbolicSetup:
    K: IntegerLattice
    cone_witness: Ray

    @property
    def rank(self) -> int:
        return self.K.rank


def hyperbolic_setup(lattice: IntegerLattice, witness: cabc.Sequence[int], /) -> HyperbolicSetup:
    if lattice.signature != (1, lattice.rank - 1):
        msg = f"Lattice {lattice.name} of signature {lattice.signature} is not hyperbolic."
        raise NotHyperbolicError(msg)
    w = tuple(int(v) for v in witness)
    if len(w) != lattice.rank or lattice.q(w) <= 0:
        msg = f"Witness {w} does not have positive norm."
        raise RayNotInConeError(msg)
    return HyperbolicSetup(K=lattice, cone_witness=w)


@dataclasses.dataclass(frozen=True)
class RaySystem:
    setup: HyperbolicSetup
    rays: tuple[Ray, ...]
    coeffs: tuple[int, ...]
    prefactor: Fraction = Fraction(1)

    @property
    def K(self) -> IntegerLattice:  # noqa: N802
        return self.setup.K

    def norm(self, index: int) -> int:
        return int(self.K.q(self.rays[index]))

    def is_isotropic(self, index: int) -> bool:
        return self.norm(index) == 0

    @property
    def active(self) -> list[int]:
        """Indices of rays with nonzero coefficient."""
        return [i for i, a in enumerate(self.coeffs) if a != 0]

    @property
    def has_isotropic_rays(self) -> bool:
        return any(self.is_isotropic(i) for i in self.active)

    @property
    def weight(self) -> Fraction:
        return 1 + Fraction(self.K.rank, 2)

    def scaled(self, factor: int) -> RaySystem:
        return dataclasses.replace(self, coeffs=tuple(factor * a for a in self.coeffs))


def ray_system(
    setup: HyperbolicSetup,
    rays: cabc.Sequence[cabc.Sequence[int]],
    coeffs: cabc.Sequence[int],
    /,
    *,
    prefactor: Fraction | int = 1,
) -> RaySystem:
    """Validated ray system; imprimitive rays are replaced by their primitive generator with rescaled coefficient."""
    if len(rays) != len(coeffs):
        msg = f"Got {len(rays)} rays but {len(coeffs)} coefficients."
        raise RelationViolatedError(msg)
    lattice = setup.K
    normalized_rays = []
    normalized_coeffs = []
    for ray, a in zip(rays, coeffs, strict=True):
        c = tuple(int(v) for v in ray)
        if len(c) != lattice.rank:
            msg = f"Ray {c} does not have rank {lattice.rank}."
            raise RayNotInConeError(msg)
        if all(v == 0 for v in c):
            msg = "Rays must be nonzero."
            raise ZeroVectorError(msg)
        if lattice.q(c) < 0 or lattice.pair(c, setup.cone_witness) <= 0:
            msg = f"Ray {c} is not in the closure of the positive cone."
            raise RayNotInConeError(msg)
        primitive = primitive_vector(c)
        u = math.gcd(*c)
        if u != 1:
            loguru.logger.debug("Ray {ray} is imprimitive; using {primitive} with coefficient {a}.", ray=c, primitive=primitive, a=a * u)
        normalized_rays.append(primitive)
        normalized_coeffs.append(int(a) * u)

    relation = [sum(a * c[k] for a, c in zip(normalized_coeffs, normalized_rays, strict=True)) for k in range(lattice.rank)]
    if any(v != 0 for v in relation):
        msg = f"Relation sum a_i c_i = {relation} does not vanish."
        raise RelationViolatedError(msg)
    return RaySystem(
        setup=setup,
        rays=tuple(normalized_rays),
        coeffs=tuple(normalized_coeffs),
        prefactor=Fraction(prefactor),
    )


def p_plus(vector: cabc.Sequence[int | Fraction], rs: RaySystem, /) -> Fraction:
    return rs.prefactor * sum((a * abs(rs.K.pair(vector, c)) for a, c in zip(rs.coeffs, rs.rays, strict=True)), Fraction(0))


def phi_c(
    vector: cabc.Sequence[mpmath.mpf | Fraction | int],
    ray: Ray,
    lattice: IntegerLattice,
    /,
    *,
    digits: int | None = None,
) -> mpmath.mpf:
    """``sqrt(N) psi(lambda . c / sqrt(N))`` with ``N = Q(c) > 0``; takes real coordinates."""
    norm = lattice.q(ray)
    if norm <= 0:
        msg = f"phi_c needs a ray of positive norm, got {ray}."
        raise IsotropicRayError(msg)
    with mpmath.workdps(digits or Precision.DIGITS):
        root = mpmath.sqrt(mpmath.mpf(norm.numerator) / norm.denominator)
        gc = lattice.apply_gram(ray)
        pairing = mpmath.fsum(_real(g) * _real(x) for g, x in zip(gc, vector, strict=True))
        return root * psi(pairing / root, digits=digits)


def _real(x: mpmath.mpf | Fraction | int) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _sympy_matrix(rows: cabc.Sequence[cabc.Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows])


def completed_weight(vector: cabc.Sequence[mpmath.mpf | Fraction | int], rs: RaySystem, /, *, digits: int | None = None) -> mpmath.mpf:
    """``prefactor * sum a_i phi_{c_i}(lambda)``."""
    with mpmath.workdps(digits or Precision.DIGITS):
        total = mpmath.mpf(0)
        for a, c in zip(rs.coeffs, rs.rays, strict=True):
            if a != 0:
                total += a * phi_c(vector, c, rs.K, digits=digits)
        return _real(rs.prefactor) * total


def vigneras_residual(
    f: cabc.Callable[[list[mpmath.mpf]], mpmath.mpf],
    lattice: IntegerLattice,
    point: cabc.Sequence[mpmath.mpf | float],
    /,
    *,
    k: int = 1,
    digits: int | None = None,
) -> mpmath.mpf:
    """Residual of ``E f + (1/4 pi) sum (G^-1)_jl d_j d_l f - k f`` by central differences."""
    with mpmath.workdps(digits or Precision.DIGITS):
        n = lattice.rank
        x = [mpmath.mpf(v) for v in point]
        h = mpmath.mpf(10) ** Precision.FINITE_DIFFERENCE_STEP_EXPONENT
        inverse = [[_real(v) for v in row] for row in lattice.inverse]

        def shifted(*steps: tuple[int, int]) -> mpmath.mpf:
            y = list(x)
            for index, sign in steps:
                y[index] += sign * h
            return f(y)

        value = f(x)
        euler = mpmath.fsum(x[j] * (shifted((j, 1)) - shifted((j, -1))) / (2 * h) for j in range(n))
        laplace = mpmath.mpf(0)
        for j, l in itertools.product(range(n), repeat=2):
            if inverse[j][l] == 0:
                continue
            second = (
                shifted((j, 1), (l, 1)) - shifted((j, 1), (l, -1)) - shifted((j, -1), (l, 1)) + shifted((j, -1), (l, -1))
            ) / (4 * h * h)
            laplace += inverse[j][l] * second
        return euler + laplace / (4 * mpmath.pi) - k * value


def majorant_form(lattice: IntegerLattice, ray: Ray, /) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix P with ``lambda.T P lambda = -Q(lambda) + (lambda . c)^2 / (c . c)``; positive definite for Q(c) > 0."""
    u = lattice.apply_gram(ray)
    cc = lattice.pair(ray, ray)
    n = lattice.rank
    return tuple(tuple(-Fraction(lattice.gram[i][j], 2) + u[i] * u[j] / cc for j in range(n)) for i in range(n))


def pair_constant(first: Ray, second: Ray, lattice: IntegerLattice, /) -> Fraction:
    """``mu = (1 - r)/(1 + r)`` with ``r = 1 - (c_i.c_i)(c_j.c_j)/(c_i.c_j)^2``.

    ``-Q(lambda) >= mu * Q_{c_i}(lambda)`` whenever ``lambda . c_i`` and ``lambda . c_j`` have opposite signs.
    """
    cross = lattice.pair(first, second)
    r = 1 - lattice.pair(first, first) * lattice.pair(second, second) / cross**2
    return (1 - r) / (1 + r)


def isotropic_bounding_form(
    lattice: IntegerLattice,
    isotropic: Ray,
    anisotropic: cabc.Sequence[int],
    bound: Fraction,
    /,
) -> tuple[tuple[Fraction, ...], ...]:
    """Form R_B with ``R_B(lambda) <= 3`` on ``lambda . c > 0 >= lambda . d``, ``-Q(lambda) <= B``.

    With ``lambda = x1 c + x2 d + v``, ``v`` orthogonal to c and d: ``R_B = x1^2/(4B^2) + x2^2 f/(2B) - Q(v)/B``
    where ``e = c . d`` and ``f = d . d``.
    """
    c = sympy.Matrix(list(isotropic))
    d = sympy.Matrix(list(anisotropic))
    g = lattice.matrix
    e = (c.T * g * d)[0, 0]
    f = (d.T * g * d)[0, 0]
    b = sympy.Rational(bound.numerator, bound.denominator)
    ell2 = (g * c).T / e
    ell1 = ((g * d).T - f * ell2) / e
    projector = sympy.eye(lattice.rank) - c * ell1 - d * ell2
    form = ell1.T * ell1 / (4 * b**2) + ell2.T * ell2 * f / (2 * b) - projector.T * g * projector / (2 * b)
    return tuple(tuple(to_fraction(form[i, j]) for j in range(form.cols)) for i in range(form.rows))


def _support_candidates(rs: RaySystem, bound: Fraction) -> set[LatticeVector]:
    lattice = rs.K
    candidates: set[LatticeVector] = set()
    for i, j in itertools.combinations(rs.active, 2):
        ci, cj = rs.rays[i], rs.rays[j]
        if ci == cj:
            continue
        iso_i, iso_j = rs.is_isotropic(i), rs.is_isotropic(j)
        if not iso_i and not iso_j:
            mu = pair_constant(ci, cj, lattice)
            candidates.update(enumerate_region(lattice, majorant_form(lattice, ci), bound / mu, dual=True))
            continue
        if iso_i and iso_j:
            d = tuple(x + y for x, y in zip(ci, cj, strict=True))
            pairs = [(ci, d), (cj, d)]
        else:
            pairs = [(ci, cj)] if iso_i else [(cj, ci)]
        for c, d in pairs:
            form = isotropic_bounding_form(lattice, c, d, bound)
            candidates.update(enumerate_region(lattice, form, 3, dual=True))
    return candidates


def enumerate_support(rs: RaySystem, bound: Fraction | int, /) -> list[LatticeVector]:
    """All lambda in K^dual with ``p+(lambda) != 0`` and ``-Q(lambda) <= bound``, sorted.

    Off the support every active pairing has one sign. For each pair of active rays the region of opposite
    signs is covered by an explicit positive definite form.
    """
    bound = Fraction(bound)
    if bound <= 0:
        return []
    loguru.logger.debug("Computing support for bound {bound}...", bound=str(bound))
    candidates = _support_candidates(rs, bound)
    support = sorted(v for v in candidates if -rs.K.q(v) <= bound and p_plus(v, rs) != 0)
    loguru.logger.debug(
        "Computing support for bound {bound}... Done. {count} of {candidates} candidates kept.",
        bound=str(bound),
        count=len(support),
        candidates=len(candidates),
    )
    return support


def theta_plus(rs: RaySystem, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``sum p+(lambda) q^(-Q(lambda)) v_[lambda]`` over K^dual."""
    group = rs.K.discriminant
    terms: dict[Fraction, dict[Element, Fraction]] = {}
    for v in enumerate_support(rs, bound):
        exp = -rs.K.q(v)
        gamma = group.reduce(v)
        vector = terms.setdefault(exp, {})
        vector[gamma] = vector.get(gamma, Fraction(0)) + p_plus(v, rs)
    return VectorValuedQSeries.build(group, terms, bound, weight=rs.weight)


@dataclasses.dataclass(frozen=True)
class CompletionReport:
    theta_plus: VectorValuedQSeries
    aniso_terms: tuple[tuple[Ray, VectorValuedQSeries], ...]
    iso_terms: tuple[tuple[Ray, VectorValuedQSeries], ...]
    candidate: VectorValuedQSeries
    weight: Fraction


def anisotropic_term(lattice: IntegerLattice, ray: Ray, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``p^K_{c_perp + Z c}(Theta_{c_perp} (x) F+_N)`` with ``N = Q(c)`` in the completion normalization."""
    level = int(lattice.q(ray))
    kernel = linalg.kernel(linalg.as_int_matrix([lattice.apply_gram(ray)], columns=lattice.rank))
    perp_basis = [tuple(int(v) for v in kernel[:, k]) for k in range(kernel.shape[1])]
    perp = sublattice(lattice, perp_basis) if perp_basis else None
    theta = theta_definite(perp if perp is not None else IntegerLattice(gram=()), bound)
    zagier = zagier_F(level, bound, normalization=ZagierNormalization.COMPLETION)
    product = tensor(theta, zagier.holo)
    maps = pull_push_maps(lattice, [*perp_basis, ray], sub_group=product.group)
    return apply_map(product, maps, MapDirection.PULL)


def isotropic_term(lattice: IntegerLattice, ray: Ray, bound: Fraction | int, /) -> VectorValuedQSeries:
    """``E_2 * p^K_{c_perp/c}(Theta_{c_perp/c})``."""
    isotropic = isotropic_sublattice(lattice, [ray])
    quotient = isotropic_quotient(lattice, isotropic)
    maps = isotropic_pull_push(lattice, isotropic)
    pushed = apply_map(theta_definite(quotient.lattice, bound), maps, MapDirection.PUSH)
    return scalar_multiply(pushed, e2_series(math.floor(Fraction(bound))))


def completion_report(rs: RaySystem, bound: Fraction | int, /) -> CompletionReport:
    """``Theta+ - pf sum_{Q(c)>0} a p(Theta_{c_perp} (x) F+) + pf/6 sum_{Q(c)=0} a E_2 p(Theta_{c_perp/c})``."""
    bound = Fraction(bound)
    loguru.logger.info("Computing completion report for bound {bound}...", bound=str(bound))
    plus = theta_plus(rs, bound)
    aniso = []
    iso = []
    candidate = plus
    for i in rs.active:
        ray, a = rs.rays[i], rs.coeffs[i]
        if rs.is_isotropic(i):
            term = scale(isotropic_term(rs.K, ray, bound), rs.prefactor * a / 6)
            iso.append((ray, term))
            candidate = add(candidate, term)
        else:
            term = scale(anisotropic_term(rs.K, ray, bound), rs.prefactor * a)
            aniso.append((ray, term))
            candidate = subtract(candidate, term)
    candidate = dataclasses.replace(candidate, weight=rs.weight)
    loguru.logger.info("Computing completion report for bound {bound}... Done.", bound=str(bound))
    return CompletionReport(
        theta_plus=plus,
        aniso_terms=tuple(aniso),
        iso_terms=tuple(iso),
        candidate=candidate,
        weight=rs.weight,
    )


def tail_bound(
    lattice: IntegerLattice,
    form: cabc.Sequence[cabc.Sequence[Fraction]],
    radius: Fraction,
    /,
    *,
    constant: mpmath.mpf,
    linear: mpmath.mpf,
    decay: mpmath.mpf,
) -> mpmath.mpf:
    """Bound for ``sum_{lambda in K^dual, P(lambda) > R} (C0 + C1 sqrt(P(lambda))) exp(-alpha P(lambda))``.

    Shells of width w are counted with the box majorant ``prod_k (2 sqrt(T m_k) + 1)``,
    ``m_k = (G P^-1 G)_kk``. The shell ratio decreases, so the remainder is geometric.
    """
    box = lattice.matrix * _sympy_matrix(form).inv() * lattice.matrix
    widths = [_real(to_fraction(box[k, k])) for k in range(lattice.rank)]
    width = mpmath.mpf(Bounds.TAIL_SHELL_WIDTH)
    start = _real(Fraction(radius))
    cutoff = mpmath.mpf(10) ** Bounds.TAIL_CUTOFF_EXPONENT

    def shell(s: int) -> mpmath.mpf:
        lower = start + s * width
        upper = lower + width
        count = mpmath.fprod(2 * mpmath.sqrt(upper * m) + 1 for m in widths)
        return count * (constant + linear * mpmath.sqrt(upper)) * mpmath.exp(-decay * lower)

    if constant == 0 and linear == 0:
        return mpmath.mpf(0)
    total = mpmath.mpf(0)
    current = shell(0)
    for s in range(Bounds.TAIL_MAX_SHELLS):
        following = shell(s + 1)
        total += current
        ratio = following / current
        if current < cutoff and ratio < 1:
            return total + following / (1 - ratio)
        current = following
    return mpmath.inf


@dataclasses.dataclass(frozen=True)
class CompletedValue:
    values: dict[Element, mpmath.mpc]
    plus_tail: mpmath.mpf
    beta_tails: tuple[mpmath.mpf, ...]

    @property
    def tail(self) -> mpmath.mpf:
        return self.plus_tail + mpmath.fsum(self.beta_tails)


@dataclasses.dataclass(frozen=True)
class CompletedEvaluator:
    """Evaluator of the completed series with the enumerations fixed once for a radius B."""

    rs: RaySystem
    bound: Fraction
    digits: int

    @functools.cached_property
    def support(self) -> list[LatticeVector]:
        return enumerate_support(self.rs, self.bound)

    @functools.cached_property
    def ray_regions(self) -> dict[int, list[LatticeVector]]:
        return {
            i: enumerate_region(self.rs.K, majorant_form(self.rs.K, self.rs.rays[i]), self.bound, dual=True)
            for i in self.rs.active
        }

    @functools.cached_property
    def pair_constants(self) -> dict[int, Fraction]:
        constants = {}
        for i in self.rs.active:
            mus = [
                pair_constant(self.rs.rays[i], self.rs.rays[j], self.rs.K)
                for j in self.rs.active
                if j != i and self.rs.rays[j] != self.rs.rays[i]
            ]
            if mus:
                constants[i] = min(mus)
        return constants

    def _cauchy_schwarz_constant(self, index: int) -> mpmath.mpf:
        lattice = self.rs.K
        p_inv = _sympy_matrix(majorant_form(lattice, self.rs.rays[index])).inv()
        total = mpmath.mpf(0)
        for a, c in zip(self.rs.coeffs, self.rs.rays, strict=True):
            u = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in lattice.apply_gram(c)])
            total += abs(a) * mpmath.sqrt(_real(to_fraction((u.T * p_inv * u)[0, 0])))
        return abs(_real(self.rs.prefactor)) * total

    def evaluate(self, tau: mpmath.mpc | complex, /) -> CompletedValue:
        rs = self.rs
        lattice = rs.K
        group = lattice.discriminant
        with mpmath.workdps(self.digits):
            tau = mpmath.mpc(tau)
            y = tau.imag
            values = dict.fromkeys(group.elements, mpmath.mpc(0))
            for v in self.support:
                exp = -lattice.q(v)
                values[group.reduce(v)] += _real(p_plus(v, rs)) * mpmath.exp(2j * mpmath.pi * tau * _real(exp))

            pf = _real(rs.prefactor)
            beta_tails = []
            for i, region in self.ray_regions.items():
                c, a = rs.rays[i], rs.coeffs[i]
                norm = lattice.q(c)
                root = mpmath.sqrt(_real(norm))
                factor = pf * a * root / mpmath.sqrt(y)
                for v in region:
                    pairing = _real(lattice.pair(v, c))
                    weight = beta(y * pairing**2 / _real(norm), digits=self.digits)
                    values[group.reduce(v)] += factor * weight * mpmath.exp(2j * mpmath.pi * tau * _real(-lattice.q(v)))
                beta_tails.append(
                    tail_bound(
                        lattice,
                        majorant_form(lattice, c),
                        self.bound,
                        constant=abs(factor) / mpmath.pi,
                        linear=mpmath.mpf(0),
                        decay=2 * mpmath.pi * y,
                    ),
                )

            plus_tail = mpmath.mpf(0)
            for i, mu in self.pair_constants.items():
                plus_tail += tail_bound(
                    lattice,
                    majorant_form(lattice, rs.rays[i]),
                    self.bound,
                    constant=mpmath.mpf(0),
                    linear=self._cauchy_schwarz_constant(i),
                    decay=2 * mpmath.pi * y * _real(mu),
                )
        return CompletedValue(values=values, plus_tail=plus_tail, beta_tails=tuple(beta_tails))


def completed_evaluator(rs: RaySystem, bound: Fraction | int, /, *, digits: int | None = None) -> CompletedEvaluator:
    if rs.has_isotropic_rays:
        msg = "Numeric evaluation of the completion needs rays of positive norm only."
        raise IsotropicRayError(msg)
    return CompletedEvaluator(rs=rs, bound=Fraction(bound), digits=digits or Precision.DIGITS)


def eval_completed(
    rs: RaySystem,
    tau: mpmath.mpc | complex,
    bound: Fraction | int,
    /,
    *,
    digits: int | None = None,
) -> CompletedValue:
    """Value of ``sum [p+(lambda) + y^(-1/2) pf sum a_i sqrt(N_i) beta(y (lambda.c_i)^2/N_i)] q^(-Q(lambda)) v_[lambda]``."""
    return completed_evaluator(rs, bound, digits=digits).evaluate(tau)


@dataclasses.dataclass(frozen=True)
class TransformationReport:
    taus: tuple[str, ...]
    s_residuals: tuple[mpmath.mpf, ...]
    t_residuals: tuple[mpmath.mpf, ...]
    s_margins: tuple[mpmath.mpf, ...]
    t_margins: tuple[mpmath.mpf, ...]
    tolerance: float

    @property
    def max_residual(self) -> mpmath.mpf:
        return max((*self.s_residuals, *self.t_residuals), default=mpmath.mpf(0))

    @property
    def passed(self) -> bool:
        checks = zip((*self.s_residuals, *self.t_residuals), (*self.s_margins, *self.t_margins), strict=True)
        return all(residual + margin <= self.tolerance for residual, margin in checks)

    def to_dict(self) -> dict[str, t.Any]:
        return {
            "residuals": {
                tau: {"S": mpmath.nstr(s, 10), "T": mpmath.nstr(t_, 10)}
                for tau, s, t_ in zip(self.taus, self.s_residuals, self.t_residuals, strict=True)
            },
            "tail_bounds": {
                tau: {"S": mpmath.nstr(s, 10), "T": mpmath.nstr(t_, 10)}
                for tau, s, t_ in zip(self.taus, self.s_margins, self.t_margins, strict=True)
            },
            "pass": self.passed,
        }


def _max_difference(first: cabc.Mapping[Element, mpmath.mpc], second: cabc.Mapping[Element, mpmath.mpc]) -> mpmath.mpf:
    return max((abs(first[k] - second[k]) for k in first), default=mpmath.mpf(0))


def verify_transformations(
    rs: RaySystem,
    taus: cabc.Sequence[mpmath.mpc | complex],
    bound: Fraction | int,
    tolerance: float,
    /,
    *,
    digits: int | None = None,
) -> TransformationReport:
    """Check ``f(tau + 1) = rho_bar(T) f(tau)`` and ``f(-1/tau) = tau^k rho_bar(S) f(tau)`` with ``k = 1 + n/2``."""
    evaluator = completed_evaluator(rs, bound, digits=digits)
    group = rs.K.discriminant
    elements = group.elements
    action = conjugate_action(weil_action(group, digits=evaluator.digits))
    weight = rs.weight
    s_res, t_res, s_margin, t_margin, labels = [], [], [], [], []
    with mpmath.workdps(evaluator.digits):
        root = mpmath.sqrt(group.order)
        for tau in taus:
            tau = mpmath.mpc(tau)
            labels.append(mpmath.nstr(tau, 8))
            loguru.logger.info("Verifying transformation laws at tau={tau}...", tau=labels[-1])
            base = evaluator.evaluate(tau)
            shifted = evaluator.evaluate(tau + 1)
            inverted = evaluator.evaluate(-1 / tau)

            expected_t = {g: action.rho_T[k, k] * base.values[g] for k, g in enumerate(elements)}
            t_res.append(_max_difference(shifted.values, expected_t))
            t_margin.append(shifted.tail + base.tail)

            factor = mpmath.exp(_real(weight) * mpmath.log(tau))
            expected_s = {
                g: factor * mpmath.fsum(action.rho_S[row, col] * base.values[h] for col, h in enumerate(elements))
                for row, g in enumerate(elements)
            }
            s_res.append(_max_difference(inverted.values, expected_s))
            s_margin.append(inverted.tail + abs(factor) * root * base.tail)
            loguru.logger.info(
                "Verifying transformation laws at tau={tau}... Done. S residual {s}, T residual {t}.",
                tau=labels[-1],
                s=mpmath.nstr(s_res[-1], 5),
                t=mpmath.nstr(t_res[-1], 5),
            )
    return TransformationReport(
        taus=tuple(labels),
        s_residuals=tuple(s_res),
        t_residuals=tuple(t_res),
        s_margins=tuple(s_margin),
        t_margins=tuple(t_margin),
        tolerance=tolerance,
    )
