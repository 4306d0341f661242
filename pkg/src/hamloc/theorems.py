"""Executable form of the algebraic derivations behind the classification.

Each public function turns one identity, divisibility constraint or
nonexistence argument into an exact computation: bounded searches replace
proof-by-cases, parameter probes replace symbolic unknowns, and the
localization integral supplies the obstructions.  Everything is exact
rational arithmetic; a check either reproduces the target value or fails
structurally.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import Iterable, NamedTuple

from .localization import (
    EquivariantInput,
    FixedComponent,
    HamiltonianModel,
    ModelError,
    abbv_integrate,
    basis_beta_input,
    grassmannian_model,
)
from .ring import (
    TruncPoly,
    divide_exact,
    generators,
    poly_invert_unit,
    try_divide,
)


class PreconditionError(ValueError):
    """The requested configuration is excluded by hypothesis."""


# -- coefficient bookkeeping ---------------------------------------------


@dataclasses.dataclass(frozen=True)
class ABPair:
    """Coefficients A of w^(n-1) and B of w^n in (1 + w + ... + w^n)^(n+1)."""

    n: int
    a: int
    b: int


def coefficients_AB(n: int) -> ABPair:
    """Expand the truncated geometric power and read off the two coefficients.

    The expansion is the source of truth; the doubled relation b = 2a is
    asserted, and the displayed closed forms are cross-checked separately in
    :func:`ab_closed_forms`.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    # dense expansion of (1 + w + ... + w^n)^(n+1) mod w^(n+1)
    result = [1] + [0] * n
    for _ in range(n + 1):
        nxt = [0] * (n + 1)
        for i, x in enumerate(result):
            if x:
                for j in range(i, n + 1):
                    nxt[j] += x
        result = nxt
    pair = ABPair(n=n, a=result[n - 1], b=result[n])
    if pair.b != 2 * pair.a:
        raise AssertionError(f"doubling identity failed at n={n}: {pair}")
    return pair


def ab_closed_forms(n: int) -> dict[str, bool]:
    """Whether each displayed closed-form sum matches the expansion.

    The statement-level sums regroup terms and are only well formed for
    n >= 2; the direct sums coming from the binomial expansion are compared
    for every n where their index ranges make sense.
    """
    pair = coefficients_AB(n)
    comb = math.comb
    out: dict[str, bool] = {}
    if n >= 2:
        if n % 2 == 0:
            a_stmt = sum(comb(n + 1, j) * comb(n - 1, j - 1)
                         for j in range(1, n // 2 + 1))
            b_stmt = 2 * a_stmt
        else:
            a_stmt = (sum(comb(n + 1, j) * comb(n - 1, j - 1)
                          for j in range(1, (n - 1) // 2 + 1))
                      + comb(n + 1, (n + 1) // 2) * comb(n - 2, (n - 1) // 2))
            b_stmt = (2 * sum(comb(n + 1, j) * comb(n - 1, j - 1)
                              for j in range(1, (n - 1) // 2 + 1))
                      + comb(n + 1, (n + 1) // 2) * comb(n - 1, (n - 1) // 2))
        out["statement_a"] = a_stmt == pair.a
        out["statement_b"] = b_stmt == pair.b
        a_direct = sum(comb(n + 1, j) * comb(n - 2, j - 1) for j in range(1, n))
        b_direct = sum(comb(n + 1, j) * comb(n - 1, j - 1) for j in range(1, n + 1))
        out["expansion_a"] = a_direct == pair.a
        out["expansion_b"] = b_direct == pair.b
    out["doubling"] = pair.b == 2 * pair.a
    return out


# -- Chern-class conversions ----------------------------------------------


def chern_to_equivariant(coeffs: Iterable[int | Fraction], weight: int,
                         rank: int, trunc_order: int | None = None
                         ) -> tuple[TruncPoly, TruncPoly]:
    """Total equivariant Chern class and Euler class of a single-weight bundle.

    ``coeffs`` are the ordinary Chern coefficients c_1..c_k relative to the
    base generator (c_i = coeffs[i-1]·g^i, k <= rank).  Returns the exact
    pair (sum c_i (1 + weight·t)^(rank-i), sum c_i (weight·t)^(rank-i))
    including the i = 0 terms.
    """
    if weight == 0:
        raise PreconditionError("the rotation weight must be nonzero")
    coeff_list = [Fraction(c) for c in coeffs]
    if len(coeff_list) > rank:
        raise PreconditionError("more Chern coefficients than the rank allows")
    K = rank if trunc_order is None else trunc_order
    t, g = generators(K)
    one_plus = 1 + weight * t
    wt = weight * t
    total = one_plus ** rank
    euler = wt ** rank
    for i, c in enumerate(coeff_list, start=1):
        total = total + c * g ** i * one_plus ** (rank - i)
        euler = euler + c * g ** i * wt ** (rank - i)
    return total, euler


def chern_of_normal_bundle(n: int) -> TruncPoly:
    """(1+u)^(n+1) · (1+2u)^(-1) in u alone, truncated above u^n."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    _t, u = generators(n)
    return (1 + u) ** (n + 1) * poly_invert_unit(1 + 2 * u)


# -- divisibility searches -------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DivisibilitySolution:
    """An integral factorization witness for the moment-gap constraint.

    ``cofactor_coeffs`` lists a_1.. of the degree-lowering factor; the
    defining identity is re-verified by multiplication before a solution is
    accepted.
    """

    n: int
    m: int
    variant: str
    a0: int
    cofactor_coeffs: tuple[int, ...]


_VARIANTS = ("direct", "with-t-factor")


def euler_divisibility_solutions(n: int, m: int, variant: str,
                                 a0_bound: int) -> list[DivisibilitySolution]:
    """All integral solutions of the gap-m factorization identity, |a0| bounded.

    direct:        (t + (a0/m)u)(t^n + a_1 t^(n-1)u + ... + a_n u^n)
    with-t-factor: t(t + (a0/m)u)(t^(n-1) + ... + a_(n-1) u^(n-1))
    both equal to (t + u/m)^(n+1) mod u^(n+1).

    Comparing the t·u^n coefficients forces m^(n-1) | (n+1) for any integral
    solution, so gaps failing that divisibility are rejected without search;
    this makes the bounded scan over a0 a complete decision procedure for
    the surviving gaps.
    """
    if n < 2:
        raise PreconditionError("the factorization identity needs n >= 2")
    if m < 1 or a0_bound < 1:
        raise PreconditionError("m and a0_bound must be positive")
    if variant not in _VARIANTS:
        raise PreconditionError(f"variant must be one of {_VARIANTS}")
    if m >= 2 and (n + 1) % m ** (n - 1) != 0:
        return []
    t, u = generators(n)
    target = (t + Fraction(1, m) * u) ** (n + 1)
    solutions: list[DivisibilitySolution] = []
    for a0 in range(-a0_bound, a0_bound + 1):
        factor = t + Fraction(a0, m) * u
        if variant == "with-t-factor":
            factor = t * factor
        quotient = try_divide(target, factor)
        if quotient is None:
            continue
        degree = n if variant == "direct" else n - 1
        coeffs = [quotient.coefficient(degree - i, i) for i in range(degree + 1)]
        if coeffs[0] != 1 or any(c.denominator != 1 for c in coeffs):
            continue
        if factor * quotient != target:
            continue
        solutions.append(DivisibilitySolution(
            n=n, m=m, variant=variant, a0=a0,
            cofactor_coeffs=tuple(int(c) for c in coeffs[1:])))
    return solutions


@dataclasses.dataclass(frozen=True)
class NonSemifreeFactorSolution:
    """Integral cofactor for the doubled-weight factorization identity."""

    n: int
    a0: int
    cofactor_coeffs: tuple[int, ...]


def non_semifree_factor_search(n: int, a0_bound: int) -> list[NonSemifreeFactorSolution]:
    """Integral solutions of
    (2t + a0·u)(2t + 2u)((2t)^(n-1) + a_1(2t)^(n-2)u + ... + a_(n-1)u^(n-1))
    = (2t + u)^(n+1) mod u^(n+1), scanning |a0| <= a0_bound.

    Solutions exist only for odd n and then force a0 = 0.
    """
    if n < 2:
        raise PreconditionError("the search needs n >= 2")
    t, u = generators(n)
    target = (2 * t + u) ** (n + 1)
    solutions: list[NonSemifreeFactorSolution] = []
    for a0 in range(-a0_bound, a0_bound + 1):
        factor = (2 * t + a0 * u) * (2 * t + 2 * u)
        quotient = try_divide(target, factor)
        if quotient is None:
            continue
        coeffs = [quotient.coefficient(n - 1 - i, i) / 2 ** (n - 1 - i)
                  for i in range(n)]
        if coeffs[0] != 1 or any(c.denominator != 1 for c in coeffs):
            continue
        if factor * quotient != target:
            continue
        solutions.append(NonSemifreeFactorSolution(
            n=n, a0=a0, cofactor_coeffs=tuple(int(c) for c in coeffs[1:])))
    return solutions


# -- hypothetical doubled-weight configuration -----------------------------


def hypothetical_non_semifree_model(n: int) -> HamiltonianModel:
    """The excluded configuration: gap 2, one weight 2 beside n-1 weights 1.

    Its Euler classes are forced up to scale by the factorization identity;
    the leading coefficient is pinned to the weight product 2, giving
    (2t + u)^(n+1) / (2^n t) at the minimum and the mirrored class at the
    maximum.  The model is structurally valid; localization shows it cannot
    integrate 1 to zero, which is the nonexistence argument.
    """
    if n < 3 or n % 2 == 0:
        raise PreconditionError(
            "the doubled-weight configuration requires odd n >= 3")
    t, u = generators(n)
    euler_x = divide_exact((2 * t + u) ** (n + 1),
                           TruncPoly.monomial(n, 1, 0, 2 ** n))
    euler_y = divide_exact((-2 * t + u) ** (n + 1),
                           TruncPoly.monomial(n, 1, 0, -(2 ** n)))
    x = FixedComponent(name="X", half_dim=n, moment_value=Fraction(0),
                       weights=(2,) + (1,) * (n - 1), euler_class=euler_x)
    y = FixedComponent(name="Y", half_dim=n, moment_value=Fraction(2),
                       weights=(-2,) + (-1,) * (n - 1), euler_class=euler_y)
    return HamiltonianModel.of(x, y)


def non_semifree_obstruction(n: int) -> Fraction:
    """Integrate 1 over the doubled-weight model and return the obstruction.

    The result is supported on a single negative t power; the returned
    coefficient equals 2·(-1)^n·A/2^n with A from :func:`coefficients_AB`,
    nonzero precisely because A is.
    """
    model = hypothetical_non_semifree_model(n)
    one = EquivariantInput(
        restriction_to_x=TruncPoly.one(n),
        restriction_to_y=TruncPoly.one(n),
        degree=0)
    outcome = abbv_integrate(model, one)
    if not outcome.is_obstruction:
        raise AssertionError("expected a nonzero localization of 1")
    support = sorted(outcome.value.t_support())
    lead = support[0]
    value = outcome.value.coefficient(lead, 0)
    predicted = Fraction(2 * (-1) ** n * coefficients_AB(n).a, 2 ** n)
    if value != predicted:
        raise AssertionError(
            f"obstruction {value} differs from predicted {predicted}")
    return value


# -- Euler-class derivation -------------------------------------------------


class EulerDerivation(NamedTuple):
    a: int
    b: int
    euler_x: TruncPoly
    euler_y: TruncPoly


def _parametrized_model(n: int, a: int, b: int) -> HamiltonianModel:
    t, u = generators(n)
    euler_x = divide_exact((t + u) ** (n + 1), t + a * u)
    euler_y = divide_exact((-t + u) ** (n + 1), -t + b * u)
    x = FixedComponent(name="X", half_dim=n, moment_value=Fraction(0),
                       weights=(1,) * n, euler_class=euler_x)
    y = FixedComponent(name="Y", half_dim=n, moment_value=Fraction(1),
                       weights=(-1,) * n, euler_class=euler_y)
    return HamiltonianModel.of(x, y)


def _localization_probe(n: int, a: int, b: int, which: str) -> Fraction:
    model = _parametrized_model(n, a, b)
    t_x, u = generators(n)
    t_y, v = generators(n)
    if which == "one":
        alpha = EquivariantInput(TruncPoly.one(n), TruncPoly.one(n), 0)
        key = -2 * n
    else:  # first equivariant Chern class of the semifree model
        alpha = EquivariantInput(n * t_x + 2 * n * u, -n * t_y + 2 * n * v, 2)
        key = 1 - 2 * n
    outcome = abbv_integrate(model, alpha)
    stray = outcome.value.t_support() - {key}
    if stray:
        raise AssertionError(f"probe produced unexpected t powers {sorted(stray)}")
    return outcome.value.coefficient(key, 0)


def derive_euler_classes(n: int) -> EulerDerivation:
    """Solve for the two denominator coefficients by localization probes.

    Writing the Euler classes as (t+u)^(n+1)/(t+au) and
    (-t+v)^(n+1)/(-t+bv), the integrals of 1 and of the equivariant first
    Chern class are affine in (a, b); probing at three integer points and
    solving the 2x2 system yields (2, 2), and the divided classes are
    returned alongside.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    rows = []
    rhs = []
    for which in ("one", "c1"):
        s00 = _localization_probe(n, 0, 0, which)
        sa = _localization_probe(n, 1, 0, which) - s00
        sb = _localization_probe(n, 0, 1, which) - s00
        rows.append((sa, sb))
        rhs.append(-s00)
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if det == 0:
        raise AssertionError("probe system is singular; the doubled coefficient vanished")
    a_val = (rhs[0] * rows[1][1] - rows[0][1] * rhs[1]) / det
    b_val = (rows[0][0] * rhs[1] - rhs[0] * rows[1][0]) / det
    if a_val.denominator != 1 or b_val.denominator != 1:
        raise AssertionError(f"non-integral solution ({a_val}, {b_val})")
    a, b = int(a_val), int(b_val)
    model = _parametrized_model(n, a, b)
    return EulerDerivation(a=a, b=b, euler_x=model.x.euler_class,
                           euler_y=model.y.euler_class)


# -- first Chern class and the weight bound ---------------------------------


def c1_from_fixed_data(model: HamiltonianModel) -> Fraction:
    """Coefficient of the symplectic class in c_1, from weight sums and moments."""
    gap = model.y.moment_value - model.x.moment_value
    if gap == 0:
        raise ModelError("moment values coincide; the quotient is undefined")
    return Fraction(model.x.weight_sum - model.y.weight_sum) / gap


class C1Bound(NamedTuple):
    c1_coeff: Fraction
    bound_holds: bool


def semifree_c1_bound(n: int, weights: Iterable[int]) -> C1Bound:
    """The first-Chern coefficient 2·(weight sum)/(minimal gap), checked < 2n.

    The minimal admissible moment gap is the least common multiple of the
    distinct weights, since each finite stabilizer order divides the gap.
    The distinct weights of an effective action at the minimum form a full
    range {1, ..., N}; multisets violating that are rejected as inputs.
    """
    ws = sorted(int(w) for w in weights)
    if len(ws) != n:
        raise PreconditionError(f"expected {n} weights, got {len(ws)}")
    if any(w < 1 for w in ws):
        raise PreconditionError("weights at the minimum must be positive")
    top = max(ws)
    if top < 2:
        raise PreconditionError("all weights are 1: the action is semifree")
    if set(ws) != set(range(1, top + 1)):
        raise PreconditionError(
            f"distinct weights {sorted(set(ws))} do not form a full range 1..{top}")
    gap = math.lcm(*set(ws))
    coeff = Fraction(2 * sum(ws), gap)
    return C1Bound(c1_coeff=coeff, bound_holds=coeff < 2 * n)


# -- Betti bookkeeping -------------------------------------------------------


def betti_numbers(k_x: int, k_y: int) -> list[int]:
    """Betti vector assembled from two components with one-generator cohomology.

    The moment map is a perfect Morse-Bott function, so degree i of the
    total space receives degree i of the minimum plus degree i - codim of
    the maximum.
    """
    if k_x < 0 or k_y < 0:
        raise PreconditionError("half dimensions must be nonnegative")
    total = 2 * (k_x + k_y)
    betti = [0] * (total + 1)
    for j in range(k_x + 1):
        betti[2 * j] += 1
    codim_y = 2 * k_x
    for j in range(k_y + 1):
        betti[codim_y + 2 * j] += 1
    return betti


def is_palindromic(values: list[int]) -> bool:
    return values == values[::-1]


# -- total Chern class of a component ---------------------------------------


def derive_total_chern_X(n: int) -> TruncPoly:
    """Recover the component's total Chern class from the point restriction.

    The coefficients a_1..a_(n-1) solve
    1 + sum a_i (-t)^i = (1 - t)^(n+1) mod t^n, the top one is pinned by the
    Euler characteristic a_n = n + 1, and the result is checked against the
    binomial expansion (1+u)^(n+1) in the truncated ring.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    coeffs = [1] + [0] * n
    for i in range(1, n):
        # (-1)^i a_i = C(n+1, i) (-1)^i
        coeffs[i] = math.comb(n + 1, i)
    coeffs[n] = n + 1
    _t, u = generators(n)
    result = TruncPoly(n, {(0, i): c for i, c in enumerate(coeffs)})
    if result != (1 + u) ** (n + 1):
        raise AssertionError("reconstructed class differs from the binomial expansion")
    return result


# -- consistency of the global equivariant Chern class ----------------------


def chern_consistency(n: int, denominator_coeff: int = 2) -> bool:
    """Cross-multiplied check that both restrictions of
    (1 + L)^(n+1)·(1 + t + L)^(n+1)/(1 + t + 2L) agree with the product of
    component and normal-bundle classes, where L is the degree-two lift.

    ``denominator_coeff`` exists as a perturbation control; any value other
    than 2 must make the check fail.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    d = denominator_coeff
    t, u = generators(n)
    c_x = (1 + u) ** (n + 1)
    cn = chern_of_normal_bundle(n)
    # equivariant total Chern class of the normal bundle at the minimum
    cs1_x = chern_to_equivariant(
        [cn.coefficient(0, i) for i in range(1, n + 1)], 1, n)[0]
    lhs_x = c_x * cs1_x * (1 + t + d * u)
    rhs_x = (1 + u) ** (n + 1) * (1 + t + u) ** (n + 1)
    if lhs_x != rhs_x:
        return False
    # at the maximum the lift restricts to v - t
    t, v = generators(n)
    c_y = (1 + v) ** (n + 1)
    cs1_y = chern_to_equivariant(
        [cn.coefficient(0, i) for i in range(1, n + 1)], -1, n)[0]
    lift = v - t
    lhs_y = c_y * cs1_y * (1 + t + d * lift)
    rhs_y = (1 + lift) ** (n + 1) * (1 + t + lift) ** (n + 1)
    return lhs_y == rhs_y


def module_basis_check(n: int, beta0_shift: TruncPoly | None = None) -> bool:
    """Verify (2L + t)·beta_i = L^(n+1)·(L + t)^i on both restrictions.

    beta_i vanishes on the minimum and restricts to v^i·e(N_Y) on the
    maximum.  ``beta0_shift`` perturbs the i = 0 restriction at the maximum
    and must break the identity.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    model = grassmannian_model(n)
    t, v = generators(n)
    lift_y = v - t
    for i in range(n + 1):
        beta_y = v ** i * model.y.euler_class
        if i == 0 and beta0_shift is not None:
            beta_y = beta_y + beta0_shift
        lhs = (2 * lift_y + t) * beta_y
        rhs = lift_y ** (n + 1) * (lift_y + t) ** i
        if lhs != rhs:
            return False
        # the minimum side: both members vanish after truncation
        _tx, u = generators(n)
        if (u ** (n + 1) * (u + _tx) ** i) != TruncPoly.zero(n):
            return False
    return True


# -- ring presentation -------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RingPresentation:
    """Generators, relations and Betti vector of the total space's cohomology."""

    n: int
    generators: tuple[str, str]
    relations: tuple[str, ...]
    epsilon: int
    betti: tuple[int, ...]


def _x_power(exp: int) -> str:
    return "x" if exp == 1 else f"x^{exp}"


def ring_presentation(n: int) -> RingPresentation:
    """Present the cohomology ring, with the square of the extra generator
    decided by an exact localization integral."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    model = grassmannian_model(n)
    beta0 = basis_beta_input(model, 0)
    square = EquivariantInput(
        restriction_to_x=beta0.restriction_to_x * beta0.restriction_to_x,
        restriction_to_y=beta0.restriction_to_y * beta0.restriction_to_y,
        degree=2 * beta0.degree)
    value = abbv_integrate(model, square).rational()
    if value.denominator != 1:
        raise AssertionError(f"integral of the squared generator is not integral: {value}")
    epsilon = int(value)
    if epsilon != (1 + (-1) ** n) // 2:
        raise AssertionError(
            f"epsilon {epsilon} contradicts the parity formula at n={n}")
    second = "y^2 = 0" if epsilon == 0 else f"y^2 = {_x_power(n)}y"
    relations = (f"{_x_power(n + 1)} = 2xy", second)
    return RingPresentation(
        n=n,
        generators=("x", "y"),
        relations=relations,
        epsilon=epsilon,
        betti=tuple(betti_numbers(n, n)),
    )
