"""Exact arithmetic in truncated multivariate polynomial algebras.

The carrier is W(k) = Q[d_0, ..., d_{n-1}] / <d_i^(k_i + 1)>: rational
coefficients indexed by the box {alpha <= k}, with multiplication dropping
every product monomial whose exponent exceeds the truncation order k in any
coordinate. An element is a jet: a scalar value plus nilpotent corrections.
The generators d_i model first-class infinitesimals; d_i is an m-nilpotent
(d_i^(m+1) = 0) exactly when m >= k_i.

Coefficients are ``fractions.Fraction`` throughout, so every identity the
package checks is an exact equality, never an approximation. Coefficients
are stored densely in ``enumerate_box`` order (mixed-radix position
``sum_i alpha_i * prod_{j<i} (k_j + 1)``); shapes stay small in practice,
and density keeps indexing trivial and output reproducible.

Arithmetic between elements of different shapes is an error. Callers embed
scalars explicitly via ``constant``; the only implicit coercion is scalar
multiplication/division by ``int`` or ``Fraction``, which is module
structure rather than a change of carrier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import multiindex
from .errors import WeiljetError
from .multiindex import MultiIndex, as_multiindex, enumerate_box

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ShapeMismatchError(WeiljetError):
    """Arithmetic attempted between elements of different shapes."""


class DegenerateGeneratorError(WeiljetError):
    """Requested generator d_i in a shape with k_i = 0, where d_i = 0."""


class NonInvertibleError(WeiljetError):
    """Inversion of an element whose constant term is zero."""


class CoefficientIndexError(WeiljetError):
    """Coefficient requested at a multi-index outside the shape's box."""


@dataclass(frozen=True)
class Shape:
    """Truncation orders k, one per generator; k_i = 0 kills d_i entirely."""

    orders: MultiIndex

    def __post_init__(self):
        object.__setattr__(self, "orders", as_multiindex(self.orders))

    @property
    def arity(self) -> int:
        return len(self.orders)

    def box(self) -> tuple[MultiIndex, ...]:
        return enumerate_box(self.orders)

    def size(self) -> int:
        out = 1
        for ki in self.orders:
            out *= ki + 1
        return out

    def index(self, alpha: MultiIndex) -> int:
        return multiindex.box_index(self.orders, alpha)

    def nilpotency_bound(self) -> int:
        # Any element with zero constant term is killed by this power plus one.
        return sum(self.orders)

    def __str__(self) -> str:
        return "(" + ",".join(str(k) for k in self.orders) + ")"


@lru_cache(maxsize=None)
def _mul_plan(orders: MultiIndex):
    """For each box position p, the (q, r) pairs with box[p] + box[q] = box[r]."""
    box = enumerate_box(orders)
    pos = {alpha: i for i, alpha in enumerate(box)}
    plan = []
    for alpha in box:
        pairs = []
        for q, beta in enumerate(box):
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            r = pos.get(gamma)
            if r is not None:
                pairs.append((q, r))
        plan.append(tuple(pairs))
    return tuple(plan)


@dataclass(frozen=True)
class WeilElement:
    shape: Shape
    coeffs: tuple[Fraction, ...]

    def _require_same_shape(self, other: "WeilElement") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(
                f"shapes {self.shape} and {other.shape} do not match; "
                "embed explicitly before mixing carriers"
            )

    def __add__(self, other):
        if not isinstance(other, WeilElement):
            return NotImplemented
        self._require_same_shape(other)
        return WeilElement(self.shape, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, WeilElement):
            return NotImplemented
        self._require_same_shape(other)
        return WeilElement(self.shape, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return WeilElement(self.shape, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, WeilElement):
            self._require_same_shape(other)
            plan = _mul_plan(self.shape.orders)
            out = [_ZERO] * len(self.coeffs)
            b = other.coeffs
            for p, ca in enumerate(self.coeffs):
                if not ca:
                    continue
                for q, r in plan[p]:
                    cb = b[q]
                    if cb:
                        out[r] += ca * cb
            return WeilElement(self.shape, tuple(out))
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return WeilElement(self.shape, tuple(a * c for a in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                raise ZeroDivisionError("division of a jet by scalar zero")
            return self * (_ONE / c)
        if isinstance(other, WeilElement):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("use invert() for negative powers")
        # Repeated truncated multiplication; a**0 == 1 (the 0^0 = 1 convention).
        out = one(self.shape)
        for _ in range(exponent):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs[0]

    def coefficient(self, alpha) -> Fraction:
        """Coefficient at alpha; the unique polynomial decomposition weights."""
        alpha = as_multiindex(alpha)
        k = self.shape.orders
        if len(alpha) != len(k) or not multiindex.leq(alpha, k):
            raise CoefficientIndexError(f"index {alpha} outside box of shape {self.shape}")
        return self.coeffs[self.shape.index(alpha)]

    def is_in_Dm(self, m: int) -> bool:
        """Whether the element is m-nilpotent: its (m+1)-th power vanishes."""
        if m < 0:
            raise ValueError("nilpotency order must be a natural")
        return (self ** (m + 1)).is_zero()

    def invert(self) -> "WeilElement":
        """Exact multiplicative inverse; requires a nonzero constant term.

        Writes the element as c * (1 + eps) with eps nilpotent and sums the
        terminating geometric series sum_j (-eps)^j / c.
        """
        c = self.coeffs[0]
        if c == 0:
            raise NonInvertibleError("element with zero constant term has no inverse")
        neg_eps = one(self.shape) - self * (_ONE / c)
        acc = one(self.shape)
        term = one(self.shape)
        for _ in range(self.shape.nilpotency_bound()):
            term = term * neg_eps
            if term.is_zero():
                break
            acc = acc + term
        return acc * (_ONE / c)

    def __str__(self) -> str:
        parts = []
        for alpha, c in zip(self.shape.box(), self.coeffs):
            if not c:
                continue
            mono = "*".join(
                f"d{i}" if e == 1 else f"d{i}^{e}" for i, e in enumerate(alpha) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def zero(shape: Shape) -> WeilElement:
    return WeilElement(shape, (_ZERO,) * shape.size())


def one(shape: Shape) -> WeilElement:
    return constant(shape, _ONE)


def constant(shape: Shape, c) -> WeilElement:
    """Embed a scalar: coefficient c at alpha = 0, zero elsewhere."""
    coeffs = [_ZERO] * shape.size()
    coeffs[0] = Fraction(c)
    return WeilElement(shape, tuple(coeffs))


def generator(shape: Shape, i: int) -> WeilElement:
    """The i-th infinitesimal generator d_i (requires k_i >= 1)."""
    if not 0 <= i < shape.arity:
        raise multiindex.ArityMismatchError(
            f"generator index {i} out of range for shape {shape}"
        )
    if shape.orders[i] == 0:
        raise DegenerateGeneratorError(
            f"generator d{i} is identically zero in shape {shape}"
        )
    coeffs = [_ZERO] * shape.size()
    unit = tuple(1 if j == i else 0 for j in range(shape.arity))
    coeffs[shape.index(unit)] = _ONE
    return WeilElement(shape, tuple(coeffs))


def monomial(shape: Shape, alpha) -> WeilElement:
    """The basis element d^alpha, or zero when alpha exceeds the box."""
    alpha = as_multiindex(alpha)
    if len(alpha) != shape.arity:
        raise multiindex.ArityMismatchError(
            f"monomial exponent {alpha} has wrong length for shape {shape}"
        )
    if not multiindex.leq(alpha, shape.orders):
        return zero(shape)
    coeffs = [_ZERO] * shape.size()
    coeffs[shape.index(alpha)] = _ONE
    return WeilElement(shape, tuple(coeffs))


def from_coefficients(shape: Shape, entries) -> WeilElement:
    """Build an element from a {multi-index: rational} mapping."""
    coeffs = [_ZERO] * shape.size()
    for alpha, c in dict(entries).items():
        alpha = as_multiindex(alpha)
        if len(alpha) != shape.arity or not multiindex.leq(alpha, shape.orders):
            raise CoefficientIndexError(f"index {alpha} outside box of shape {shape}")
        coeffs[shape.index(alpha)] = Fraction(c)
    return WeilElement(shape, tuple(coeffs))


def slice_coefficient(a: WeilElement, i: int, power: int) -> WeilElement:
    """Collect the part of ``a`` with exactly d_i^power, as an element of the
    shape with generator i removed.

    For power = 1 this is first-order coefficient extraction with the
    remaining generators kept live, which is how iterated derivatives are
    peeled off one application at a time.
    """
    k = a.shape.orders
    if not 0 <= i < len(k):
        raise multiindex.ArityMismatchError(f"generator index {i} out of range for shape {a.shape}")
    if power > k[i]:
        raise CoefficientIndexError(f"power {power} exceeds order {k[i]} of generator {i}")
    reduced = Shape(k[:i] + k[i + 1 :])
    coeffs = [_ZERO] * reduced.size()
    for beta in reduced.box():
        full = beta[:i] + (power,) + beta[i:]
        coeffs[reduced.index(beta)] = a.coeffs[a.shape.index(full)]
    return WeilElement(reduced, tuple(coeffs))


def rational_to_json(c: Fraction) -> dict:
    return {"num": str(c.numerator), "den": str(c.denominator)}


def rational_from_json(obj) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def element_to_json(a: WeilElement) -> dict:
    """JSON form: orders plus nonzero coefficients in box order."""
    coeffs = []
    for alpha, c in zip(a.shape.box(), a.coeffs):
        if c:
            coeffs.append({"alpha": list(alpha), "num": str(c.numerator), "den": str(c.denominator)})
    return {"orders": list(a.shape.orders), "coeffs": coeffs}


def element_from_json(obj) -> WeilElement:
    shape = Shape(tuple(obj["orders"]))
    entries = {tuple(item["alpha"]): Fraction(int(item["num"]), int(item["den"])) for item in obj["coeffs"]}
    return from_coefficients(shape, entries)
