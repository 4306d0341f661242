"""Exact arithmetic for truncated bivariate classes and their Laurent localizations.

Two immutable value types carry every computation in this package:

* ``TruncPoly`` -- an element of Q[t, g]/(g^(K+1)) for a fixed truncation
  order K, where g stands for the degree-two generator of whichever fixed
  component is in play (written u, v or w depending on context).
* ``LaurentClass`` -- a finite Laurent polynomial in t with coefficients in
  the same truncated ring.  Inverted Euler classes and localization
  integrands live here, with negative t powers computed exactly.

Coefficients are ``fractions.Fraction`` throughout; floats never enter.
Both types keep a canonical sparse form (no stored zero coefficient), so
equality is structural.  Division is deliberately not implemented in
general: only the unit and Euler-class inversion shapes below, plus exact
division by classes whose g-free part is a single t monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]

KeyT = "tuple[int, int]"  # (t_power, u_power)


class RingError(ValueError):
    """Base class for arithmetic contract violations."""


class OrderMismatchError(RingError):
    """Operands carry different truncation orders."""


class NotAUnitError(RingError):
    """Inversion requested for an element with zero constant term."""


class UnsupportedShapeError(RingError):
    """The element is outside the shape a restricted operation supports."""


class MalformedEulerClassError(RingError):
    """An Euler class misses its expected leading term or carries stray terms."""


class InexactDivisionError(RingError):
    """Exact division left a nonzero remainder."""


def _coerce(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {type(value).__name__}")


def format_rational(value: Scalar) -> str:
    """Render a rational canonically: ``p`` when integral, else ``p/q``."""
    value = _coerce(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`."""
    return Fraction(text)


def _format_terms(items, tvar: str, gvar: str) -> str:
    if not items:
        return "0"
    parts: list[str] = []
    for (a, b), c in items:
        factors = []
        if a == 1:
            factors.append(tvar)
        elif a != 0:
            factors.append(f"{tvar}^{a}")
        if b == 1:
            factors.append(gvar)
        elif b != 0:
            factors.append(f"{gvar}^{b}")
        mono = "·".join(factors)
        mag = format_rational(abs(c))
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}·{mono}"
        sign = " - " if c < 0 else " + "
        if not parts:
            sign = "-" if c < 0 else ""
        parts.append(sign + body)
    return "".join(parts)


class TruncPoly:
    """A polynomial in t and g with g-powers truncated above ``trunc_order``.

    The grading deg t = deg g = 2 is a convention of the callers; this class
    only enforces the truncation.  Instances are immutable; all operators
    return fresh values.
    """

    __slots__ = ("trunc_order", "_coeffs", "_hash")

    def __init__(self, trunc_order: int, coeffs: Mapping[tuple[int, int], Scalar] = ()):
        if trunc_order < 0:
            raise ValueError("truncation order must be nonnegative")
        clean: dict[tuple[int, int], Fraction] = {}
        source = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for (a, b), value in source:
            if a < 0:
                raise ValueError("t powers must be nonnegative in a TruncPoly")
            if b < 0:
                raise ValueError("g powers must be nonnegative")
            if b > trunc_order:
                continue
            c = _coerce(value)
            if c:
                prev = clean.get((a, b))
                total = c if prev is None else prev + c
                if total:
                    clean[(a, b)] = total
                else:
                    del clean[(a, b)]
        object.__setattr__(self, "trunc_order", trunc_order)
        object.__setattr__(self, "_coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("TruncPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, trunc_order: int) -> "TruncPoly":
        return cls(trunc_order)

    @classmethod
    def one(cls, trunc_order: int) -> "TruncPoly":
        return cls(trunc_order, {(0, 0): 1})

    @classmethod
    def monomial(cls, trunc_order: int, t_power: int, g_power: int,
                 coeff: Scalar = 1) -> "TruncPoly":
        return cls(trunc_order, {(t_power, g_power): coeff})

    @classmethod
    def constant(cls, trunc_order: int, value: Scalar) -> "TruncPoly":
        return cls(trunc_order, {(0, 0): value})

    # -- inspection ---------------------------------------------------

    def coefficient(self, t_power: int, g_power: int) -> Fraction:
        return self._coeffs.get((t_power, g_power), Fraction(0))

    def items(self) -> tuple[tuple[tuple[int, int], Fraction], ...]:
        """Terms sorted by descending t power, then ascending g power."""
        return tuple(sorted(self._coeffs.items(), key=lambda kv: (-kv[0][0], kv[0][1])))

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def homogeneous_degree(self) -> int | None:
        """Common value of 2(t_power + g_power), or None if mixed or zero."""
        degrees = {2 * (a + b) for (a, b) in self._coeffs}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def truncate(self, new_order: int) -> "TruncPoly":
        """Pass to the quotient with a lower truncation order."""
        if new_order > self.trunc_order:
            raise UnsupportedShapeError("cannot raise a truncation order")
        if new_order == self.trunc_order:
            return self
        return TruncPoly(new_order, self._coeffs)

    # -- arithmetic ---------------------------------------------------

    def _check_order(self, other: "TruncPoly") -> None:
        if self.trunc_order != other.trunc_order:
            raise OrderMismatchError(
                f"truncation orders differ: {self.trunc_order} vs {other.trunc_order}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncPoly.constant(self.trunc_order, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        self._check_order(other)
        total = dict(self._coeffs)
        for key, c in other._coeffs.items():
            v = total.get(key, Fraction(0)) + c
            if v:
                total[key] = v
            else:
                total.pop(key, None)
        return TruncPoly(self.trunc_order, total)

    __radd__ = __add__

    def __neg__(self):
        return TruncPoly(self.trunc_order, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncPoly.constant(self.trunc_order, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            return TruncPoly(self.trunc_order,
                             {k: c * v for k, v in self._coeffs.items()})
        if isinstance(other, TruncPoly):
            return poly_mul_trunc(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise UnsupportedShapeError("negative powers need an explicit inversion")
        result = TruncPoly.one(self.trunc_order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncPoly.constant(self.trunc_order, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.trunc_order == other.trunc_order and self._coeffs == other._coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.trunc_order, tuple(sorted(self._coeffs.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self._coeffs)

    def format(self, tvar: str = "t", gvar: str = "u") -> str:
        return _format_terms(self.items(), tvar, gvar)

    def __repr__(self):
        return f"TruncPoly[K={self.trunc_order}]({self.format()})"


class LaurentClass:
    """A finite Laurent polynomial in t with g-truncated coefficients.

    t powers range over the integers and are never truncated; g powers obey
    the same truncation as :class:`TruncPoly`.
    """

    __slots__ = ("trunc_order", "_coeffs", "_hash")

    def __init__(self, trunc_order: int, coeffs: Mapping[tuple[int, int], Scalar] = ()):
        if trunc_order < 0:
            raise ValueError("truncation order must be nonnegative")
        clean: dict[tuple[int, int], Fraction] = {}
        source = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for (a, b), value in source:
            if b < 0:
                raise ValueError("g powers must be nonnegative")
            if b > trunc_order:
                continue
            c = _coerce(value)
            if c:
                prev = clean.get((a, b))
                total = c if prev is None else prev + c
                if total:
                    clean[(a, b)] = total
                else:
                    del clean[(a, b)]
        object.__setattr__(self, "trunc_order", trunc_order)
        object.__setattr__(self, "_coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("LaurentClass is immutable")

    @classmethod
    def zero(cls, trunc_order: int) -> "LaurentClass":
        return cls(trunc_order)

    @classmethod
    def one(cls, trunc_order: int) -> "LaurentClass":
        return cls(trunc_order, {(0, 0): 1})

    @classmethod
    def from_trunc(cls, p: TruncPoly) -> "LaurentClass":
        return cls(p.trunc_order, dict(p.items()))

    @classmethod
    def monomial(cls, trunc_order: int, t_power: int, g_power: int,
                 coeff: Scalar = 1) -> "LaurentClass":
        return cls(trunc_order, {(t_power, g_power): coeff})

    def coefficient(self, t_power: int, g_power: int) -> Fraction:
        return self._coeffs.get((t_power, g_power), Fraction(0))

    def items(self) -> tuple[tuple[tuple[int, int], Fraction], ...]:
        return tuple(sorted(self._coeffs.items(), key=lambda kv: (-kv[0][0], kv[0][1])))

    def t_support(self) -> frozenset[int]:
        return frozenset(a for (a, _b) in self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check_order(self, other: "LaurentClass") -> None:
        if self.trunc_order != other.trunc_order:
            raise OrderMismatchError(
                f"truncation orders differ: {self.trunc_order} vs {other.trunc_order}")

    def _coerce_operand(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentClass(self.trunc_order, {(0, 0): other})
        if isinstance(other, TruncPoly):
            return LaurentClass.from_trunc(other)
        if isinstance(other, LaurentClass):
            return other
        return None

    def __add__(self, other):
        rhs = self._coerce_operand(other)
        if rhs is None:
            return NotImplemented
        self._check_order(rhs)
        total = dict(self._coeffs)
        for key, c in rhs._coeffs.items():
            v = total.get(key, Fraction(0)) + c
            if v:
                total[key] = v
            else:
                total.pop(key, None)
        return LaurentClass(self.trunc_order, total)

    __radd__ = __add__

    def __neg__(self):
        return LaurentClass(self.trunc_order, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        rhs = self._coerce_operand(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            return LaurentClass(self.trunc_order,
                                {k: c * v for k, v in self._coeffs.items()})
        rhs = self._coerce_operand(other)
        if rhs is None:
            return NotImplemented
        self._check_order(rhs)
        K = self.trunc_order
        out: dict[tuple[int, int], Fraction] = {}
        for (a, b), x in self._coeffs.items():
            for (c, d), y in rhs._coeffs.items():
                if b + d > K:
                    continue
                key = (a + c, b + d)
                v = out.get(key, Fraction(0)) + x * y
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return LaurentClass(K, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise UnsupportedShapeError("negative powers need an explicit inversion")
        result = LaurentClass.one(self.trunc_order)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        rhs = self._coerce_operand(other)
        if rhs is None:
            return NotImplemented
        return self.trunc_order == rhs.trunc_order and self._coeffs == rhs._coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.trunc_order, tuple(sorted(self._coeffs.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self._coeffs)

    def format(self, tvar: str = "t", gvar: str = "u") -> str:
        return _format_terms(self.items(), tvar, gvar)

    def __repr__(self):
        return f"LaurentClass[K={self.trunc_order}]({self.format()})"


# -- module operations ------------------------------------------------


def poly_mul_trunc(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    """Exact product with g-powers above the truncation order discarded."""
    if not isinstance(p, TruncPoly) or not isinstance(q, TruncPoly):
        raise TypeError("poly_mul_trunc expects two TruncPoly values")
    p._check_order(q)
    K = p.trunc_order
    out: dict[tuple[int, int], Fraction] = {}
    for (a, b), x in p._coeffs.items():
        for (c, d), y in q._coeffs.items():
            if b + d > K:
                continue
            key = (a + c, b + d)
            v = out.get(key, Fraction(0)) + x * y
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return TruncPoly(K, out)


def poly_invert_unit(p: TruncPoly) -> TruncPoly:
    """Invert c0 + (nilpotent): every non-constant term must carry g.

    The inverse is the finite geometric series
    sum_{j=0..K} (-eta)^j / c0^(j+1) with eta = p - c0.
    """
    c0 = p.coefficient(0, 0)
    if not c0:
        raise NotAUnitError("constant term is zero")
    for (a, b) in p.support():
        if b == 0 and a > 0:
            raise UnsupportedShapeError(
                "a t power with no g factor makes the remainder non-nilpotent")
    K = p.trunc_order
    eta = p - TruncPoly.constant(K, c0)
    result = TruncPoly.zero(K)
    term = TruncPoly.one(K)
    for j in range(K + 1):
        result = result + term * (Fraction(1) / c0 ** (j + 1))
        if j < K:
            term = term * (-eta)
    return result


def laurent_invert_euler(e: TruncPoly, rank: int, leading: Scalar) -> LaurentClass:
    """Invert an Euler class e = leading*t^rank + (terms with g powers).

    ``leading`` is the expected coefficient of t^rank; for a bundle with a
    single rotation weight w it equals w^rank, in general it is the product
    of the weights.  Every other term must carry a g power and a t power
    strictly below ``rank``; those terms are nilpotent after inversion, so
    the finite geometric series below is exact.
    """
    leading = _coerce(leading)
    if rank < 0:
        raise MalformedEulerClassError("rank must be nonnegative")
    if not leading:
        raise MalformedEulerClassError("leading coefficient must be nonzero")
    if e.coefficient(rank, 0) != leading:
        raise MalformedEulerClassError(
            f"expected leading term {format_rational(leading)}·t^{rank}, "
            f"got coefficient {format_rational(e.coefficient(rank, 0))}")
    for (a, b) in e.support():
        if (a, b) == (rank, 0):
            continue
        if b == 0 or a >= rank:
            raise MalformedEulerClassError(
                f"stray term t^{a}·g^{b} outside the Euler-class shape")
    K = e.trunc_order
    # eta = e / (leading t^rank) - 1, with all terms carrying g
    eta = LaurentClass(K, {(a - rank, b): c / leading
                           for (a, b), c in e.items() if (a, b) != (rank, 0)})
    series = LaurentClass.zero(K)
    term = LaurentClass.one(K)
    for j in range(K + 1):
        series = series + term
        if j < K:
            term = term * (-eta)
    return series * LaurentClass.monomial(K, -rank, 0, Fraction(1, 1) / leading)


def coefficient(p: Union[TruncPoly, LaurentClass], t_power: int, g_power: int) -> Fraction:
    """The stored coefficient, zero if absent."""
    return p.coefficient(t_power, g_power)


def divide_exact(numerator: TruncPoly, divisor: TruncPoly) -> TruncPoly:
    """Exact quotient when the divisor's g-free part is a single t monomial.

    Solves divisor * q = numerator layer by layer in the g grading; raises
    :class:`InexactDivisionError` when no exact quotient exists in the
    truncated ring.
    """
    numerator._check_order(divisor)
    lead_terms = [((a, b), c) for (a, b), c in divisor.items() if b == 0]
    if len(lead_terms) != 1:
        raise UnsupportedShapeError(
            "divisor must have exactly one g-free term to divide by")
    (lead_t, _), lead_c = lead_terms[0]
    K = numerator.trunc_order
    remainder = dict(numerator.items())
    quotient: dict[tuple[int, int], Fraction] = {}

    def _take_lowest():
        return min(remainder, key=lambda key: (key[1], -key[0]))

    while remainder:
        a, b = _take_lowest()
        c = remainder[(a, b)]
        if a < lead_t:
            raise InexactDivisionError(
                f"residual term {format_rational(c)}·t^{a}·g^{b} is not divisible")
        qkey = (a - lead_t, b)
        qc = c / lead_c
        quotient[qkey] = quotient.get(qkey, Fraction(0)) + qc
        for (x, y), d in divisor.items():
            if b + y > K:
                continue
            key = (qkey[0] + x, qkey[1] + y)
            v = remainder.get(key, Fraction(0)) - qc * d
            if v:
                remainder[key] = v
            else:
                remainder.pop(key, None)
    return TruncPoly(K, quotient)


def try_divide(numerator: TruncPoly, divisor: TruncPoly) -> TruncPoly | None:
    """Like :func:`divide_exact` but returns None when the division is inexact."""
    try:
        return divide_exact(numerator, divisor)
    except InexactDivisionError:
        return None


def generators(trunc_order: int) -> tuple[TruncPoly, TruncPoly]:
    """The pair (t, g) as ring elements at the given truncation order."""
    return (TruncPoly.monomial(trunc_order, 1, 0),
            TruncPoly.monomial(trunc_order, 0, 1))
