"""Two-fixed-component circle-action models and the localization integral.

A :class:`HamiltonianModel` packages the data a localization computation
needs about a compact Hamiltonian circle manifold whose fixed set is two
connected components X and Y with dim(X) + dim(Y) = dim(M): half
dimensions, moment values, rotation weights on the normal bundles and the
equivariant Euler classes, plus an orientation normalization per component.

The integral of an equivariant class over M is evaluated fixed component by
fixed component: restrict, multiply by the inverted Euler class, read off
the volume coefficient.  Degree counting says the total vanishes below the
dimension of M; a nonzero low-degree total is therefore returned flagged as
an obstruction rather than raised, since nonexistence arguments consume
exactly that value.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from .ring import (
    LaurentClass,
    TruncPoly,
    divide_exact,
    format_rational,
    generators,
    laurent_invert_euler,
    parse_rational,
)


class ModelError(ValueError):
    """A model or input violates a structural precondition."""


def _product(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


@dataclasses.dataclass(frozen=True)
class FixedComponent:
    """One fixed component: dimensions, moment value, weights, Euler class.

    ``euler_class`` lives in (t, g) at truncation order ``half_dim`` where g
    is this component's own degree-two generator.  ``orient_norm`` is the
    sign s with integral(g^half_dim) = s; it is data, not a derived
    convention, so either orientation bookkeeping can be set up explicitly.
    """

    name: str
    half_dim: int
    moment_value: Fraction
    weights: tuple[int, ...]
    euler_class: TruncPoly
    orient_norm: int = 1

    def __post_init__(self):
        if self.half_dim < 0:
            raise ModelError("half_dim must be nonnegative")
        object.__setattr__(self, "moment_value", Fraction(self.moment_value))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w == 0 for w in self.weights):
            raise ModelError("weights must be nonzero integers")
        if self.orient_norm not in (1, -1):
            raise ModelError("orient_norm must be +1 or -1")
        if not isinstance(self.euler_class, TruncPoly):
            raise ModelError("euler_class must be a TruncPoly")
        if self.euler_class.trunc_order != self.half_dim:
            raise ModelError("euler_class must be truncated at half_dim")

    @property
    def rank(self) -> int:
        """Complex rank of the normal bundle."""
        return len(self.weights)

    @property
    def weight_product(self) -> int:
        return _product(self.weights)

    @property
    def weight_sum(self) -> int:
        return sum(self.weights)

    def euler_shape_violations(self) -> list[str]:
        """Check leading term (product of weights)·t^rank and stray terms."""
        out = []
        lead = self.euler_class.coefficient(self.rank, 0)
        if lead != self.weight_product:
            out.append(
                f"component {self.name}: euler class leading coefficient "
                f"{format_rational(lead)} != weight product {self.weight_product}")
        for (a, b) in self.euler_class.support():
            if (a, b) == (self.rank, 0):
                continue
            if b == 0 or a >= self.rank:
                out.append(
                    f"component {self.name}: euler class term t^{a}·g^{b} "
                    "outside the allowed shape")
        return out

    def inverted_euler(self) -> LaurentClass:
        return laurent_invert_euler(self.euler_class, self.rank, self.weight_product)


@dataclasses.dataclass(frozen=True)
class HamiltonianModel:
    """Two fixed components plus the total dimension.

    The convention throughout is that ``x`` is the minimum of the moment map
    and ``y`` the maximum.  The degree-two equivariant lift restricts to the
    generator on x and picks up a t correction on y proportional to the
    moment gap; :meth:`restrict_u_tilde` reproduces both restrictions.
    """

    x: FixedComponent
    y: FixedComponent
    total_dim: int

    @classmethod
    def of(cls, x: FixedComponent, y: FixedComponent) -> "HamiltonianModel":
        return cls(x=x, y=y, total_dim=2 * (x.half_dim + y.half_dim))

    @property
    def moment_gap(self) -> Fraction:
        """moment(y) - moment(x)."""
        return self.y.moment_value - self.x.moment_value

    def component(self, name: str) -> FixedComponent:
        for comp in (self.x, self.y):
            if comp.name == name:
                return comp
        raise ModelError(f"no component named {name!r}")


def validate_model(model: HamiltonianModel) -> list[str]:
    """Every violated invariant, as data; an empty list means valid."""
    out: list[str] = []
    if 2 * (model.x.half_dim + model.y.half_dim) != model.total_dim:
        out.append("dimension mismatch: dim(X) + dim(Y) != total dimension")
    gap = model.moment_gap
    if gap == 0:
        out.append("moment values of the two components coincide")
    if gap.denominator != 1:
        out.append(f"non-integral moment gap {format_rational(gap)}")
    else:
        for comp in (model.x, model.y):
            for w in comp.weights:
                if gap % abs(w) != 0:
                    out.append(
                        f"weight {w} on component {comp.name} does not divide "
                        f"the moment gap {format_rational(gap)}")
    minimum = model.x if model.x.moment_value < model.y.moment_value else model.y
    maximum = model.y if minimum is model.x else model.x
    if any(w <= 0 for w in minimum.weights):
        out.append(f"component {minimum.name} is the minimum but has a nonpositive weight")
    if any(w >= 0 for w in maximum.weights):
        out.append(f"component {maximum.name} is the maximum but has a nonnegative weight")
    if minimum.rank != maximum.half_dim:
        out.append("normal rank of the minimum must equal the other half dimension")
    if maximum.rank != minimum.half_dim:
        out.append("normal rank of the maximum must equal the other half dimension")
    for comp in (model.x, model.y):
        out.extend(comp.euler_shape_violations())
    return out


def restrict_u_tilde(model: HamiltonianModel, name: str) -> TruncPoly:
    """Restriction of the equivariant degree-two lift to the named component."""
    comp = model.component(name)
    t, g = generators(comp.half_dim)
    if comp is model.x:
        return g
    return g + (model.x.moment_value - model.y.moment_value) * t


@dataclasses.dataclass(frozen=True)
class EquivariantInput:
    """An equivariant class presented through its two restrictions.

    Restrictions determine the class (restriction to the fixed set is
    injective here), so this is the ambient representation used everywhere.
    ``degree`` is the cohomological degree; both restrictions must be
    homogeneous of that degree under deg t = deg g = 2.
    """

    restriction_to_x: TruncPoly
    restriction_to_y: TruncPoly
    degree: int

    def __post_init__(self):
        for label, p in (("x", self.restriction_to_x), ("y", self.restriction_to_y)):
            if p.is_zero():
                continue
            if p.homogeneous_degree() != self.degree:
                raise ModelError(
                    f"restriction to {label} is not homogeneous of degree {self.degree}")


@dataclasses.dataclass(frozen=True)
class LocalizationValue:
    """Outcome of a localization integral, kept as an exact Laurent value.

    For inputs of degree below the manifold dimension the value must vanish;
    :attr:`is_obstruction` reports a violation instead of raising so that
    nonexistence arguments can consume the nonzero witness.
    """

    value: LaurentClass
    degree: int
    total_dim: int

    @property
    def is_obstruction(self) -> bool:
        return self.degree < self.total_dim and not self.value.is_zero()

    def rational(self) -> Fraction:
        """The value as a single rational; requires t-support within {0}."""
        support = self.value.t_support()
        if support - {0}:
            raise ModelError(f"value has t powers {sorted(support)}, not a scalar")
        return self.value.coefficient(0, 0)


def integrate_component(alpha: TruncPoly, comp: FixedComponent) -> LaurentClass:
    """integral over the component of (alpha / euler class), in Q(t).

    Multiplies by the inverted Euler class, extracts the g^half_dim
    coefficient and applies the orientation normalization.
    """
    if alpha.trunc_order != comp.half_dim:
        raise ModelError(
            f"restriction must be truncated at {comp.half_dim}, got {alpha.trunc_order}")
    product = LaurentClass.from_trunc(alpha) * comp.inverted_euler()
    k = comp.half_dim
    return LaurentClass(
        k, {(a, 0): comp.orient_norm * c
            for (a, b), c in product.items() if b == k})


def abbv_integrate(model: HamiltonianModel, alpha: EquivariantInput) -> LocalizationValue:
    """Localization: the integral over M as the sum of fixed-component terms."""
    violations = validate_model(model)
    if violations:
        raise ModelError("invalid model: " + "; ".join(violations))
    part_x = integrate_component(alpha.restriction_to_x, model.x)
    part_y = integrate_component(alpha.restriction_to_y, model.y)
    k_x, k_y = model.x.half_dim, model.y.half_dim
    common = max(k_x, k_y)
    value = (LaurentClass(common, dict(part_x.items()))
             + LaurentClass(common, dict(part_y.items())))
    result = LocalizationValue(value=value, degree=alpha.degree,
                               total_dim=model.total_dim)
    if alpha.degree == model.total_dim and value.t_support() - {0}:
        raise ModelError("top-degree integral produced nonzero t powers")
    return result


# -- the standard model -------------------------------------------------


def grassmannian_model(n: int) -> HamiltonianModel:
    """The semifree model with both components of dimension 2n and gap 1.

    Euler classes are (t+u)^(n+1)/(t+2u) at the minimum and its mirror
    (-t+v)^(n+1)/(-t+2v) at the maximum, both exact in the truncated ring.
    """
    if n < 1:
        raise ModelError("n must be at least 1")
    t, u = generators(n)
    euler_x = divide_exact((t + u) ** (n + 1), t + 2 * u)
    euler_y = divide_exact((-t + u) ** (n + 1), -t + 2 * u)
    x = FixedComponent(name="X", half_dim=n, moment_value=Fraction(0),
                       weights=(1,) * n, euler_class=euler_x)
    y = FixedComponent(name="Y", half_dim=n, moment_value=Fraction(1),
                       weights=(-1,) * n, euler_class=euler_y)
    return HamiltonianModel.of(x, y)


def monomial_input(model: HamiltonianModel, lift_power: int, shifted_power: int) -> EquivariantInput:
    """The class (lift)^a · (lift + t)^b given through its restrictions.

    With gap 1 the lift restricts to u on X and to v - t on Y, so the
    shifted factor restricts to u + t and to v respectively.
    """
    a, b = lift_power, shifted_power
    if a < 0 or b < 0:
        raise ModelError("powers must be nonnegative")
    t_x, u = generators(model.x.half_dim)
    t_y, v = generators(model.y.half_dim)
    lift_x = u
    lift_y = v + (model.x.moment_value - model.y.moment_value) * t_y
    rx = lift_x ** a * (lift_x + t_x) ** b
    ry = lift_y ** a * (lift_y + t_y) ** b
    return EquivariantInput(restriction_to_x=rx, restriction_to_y=ry,
                            degree=2 * (a + b))


def basis_beta_input(model: HamiltonianModel, index: int) -> EquivariantInput:
    """The module-basis class vanishing on X and restricting to v^i·e(N_Y) on Y."""
    n = model.y.half_dim
    if not 0 <= index <= n:
        raise ModelError("basis index out of range")
    _t, v = generators(n)
    ry = v ** index * model.y.euler_class
    return EquivariantInput(
        restriction_to_x=TruncPoly.zero(model.x.half_dim),
        restriction_to_y=ry,
        degree=2 * (model.y.rank + index))


# -- serialization -------------------------------------------------------


def component_to_dict(comp: FixedComponent) -> dict:
    """JSON-ready form with deterministic key and term order."""
    return {
        "name": comp.name,
        "half_dim": comp.half_dim,
        "moment_value": format_rational(comp.moment_value),
        "weights": list(comp.weights),
        "euler_class": [[a, b, format_rational(c)]
                        for (a, b), c in comp.euler_class.items()],
        "orient_norm": comp.orient_norm,
    }


def component_from_dict(data: dict) -> FixedComponent:
    half_dim = int(data["half_dim"])
    coeffs = {(int(a), int(b)): parse_rational(c)
              for a, b, c in data["euler_class"]}
    return FixedComponent(
        name=str(data["name"]),
        half_dim=half_dim,
        moment_value=parse_rational(data["moment_value"]),
        weights=tuple(int(w) for w in data["weights"]),
        euler_class=TruncPoly(half_dim, coeffs),
        orient_norm=int(data["orient_norm"]),
    )


def model_to_dict(model: HamiltonianModel) -> dict:
    return {
        "components": [component_to_dict(model.x), component_to_dict(model.y)],
        "total_dim": model.total_dim,
    }


def model_from_dict(data: dict) -> HamiltonianModel:
    x, y = (component_from_dict(c) for c in data["components"])
    return HamiltonianModel(x=x, y=y, total_dim=int(data["total_dim"]))
