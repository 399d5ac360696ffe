"""
Coefficients Module - twisted_vw

Exact scalar arithmetic for every series in the package:

- Rat: arbitrary precision rationals (fractions.Fraction, always reduced)
- CycNum: elements of the cyclotomic field Q(zeta_N) for N = 1, 2 or an odd
  prime, stored in the power basis 1, zeta, ..., zeta^(phi(N)-1)

Reduction modulo the N-th cyclotomic polynomial uses the single relation
zeta^(N-1) = -(1 + zeta + ... + zeta^(N-2)), so the stored coordinates are
canonical and equality is coordinate-wise.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from .errors import UnsupportedOrderError
from .utils import parse_rat, rat_to_str
from .vw_base import LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)

Rat = Fraction
Scalar = Union[int, Fraction]


def euler_phi(order: int) -> int:
    """phi(N) for the supported orders; rejects everything else."""
    if not isinstance(order, int) or isinstance(order, bool):
        raise UnsupportedOrderError(f"cyclotomic order must be an integer, got {order!r}")
    if order in (1, 2):
        return 1
    if order > 2 and order % 2 == 1 and isprime(order):
        return order - 1
    raise UnsupportedOrderError(
        f"cyclotomic order {order} is not supported: only 1, 2 and odd primes are allowed"
    )


def _reduce_full(full: Sequence[Fraction], order: int) -> Tuple[Fraction, ...]:
    """Fold a vector indexed by exponents mod N back into the power basis."""
    if order == 1:
        return (sum(full, Fraction(0)),)
    if order == 2:
        return (full[0] - full[1],)
    top = full[order - 1]
    if top == 0:
        return tuple(full[: order - 1])
    return tuple(full[i] - top for i in range(order - 1))


@dataclass(frozen=True)
class CycNum:
    """An element of Q(zeta_order) in canonical power-basis coordinates."""

    order: int
    coords: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        phi = euler_phi(self.order)
        if len(self.coords) != phi:
            raise ValueError(
                f"CycNum of order {self.order} needs {phi} coordinates, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, order: int, value: Scalar) -> "CycNum":
        phi = euler_phi(order)
        return cls(order, (Fraction(value),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zero(cls, order: int) -> "CycNum":
        return cls.from_rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CycNum":
        return cls.from_rational(order, 1)

    # -- views --------------------------------------------------------------

    def _full(self) -> List[Fraction]:
        """Coordinates over exponents 0..N-1 (last entry zero)."""
        if self.order == 1:
            return [self.coords[0]]
        if self.order == 2:
            return [self.coords[0], Fraction(0)]
        return list(self.coords) + [Fraction(0)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def rational_value(self) -> Optional[Fraction]:
        if all(c == 0 for c in self.coords[1:]):
            return self.coords[0]
        return None

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.order != self.order:
                raise UnsupportedOrderError(
                    f"cannot combine cyclotomic orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNum(self.order, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum(self.order, tuple(-c for c in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNum(self.order, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            factor = Fraction(other)
            return CycNum(self.order, tuple(c * factor for c in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.order
        if n <= 2:
            return CycNum(n, (self.coords[0] * other.coords[0],))
        full = [Fraction(0)] * n
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b == 0:
                    continue
                full[(i + j) % n] += a * b
        return CycNum(n, _reduce_full(full, n))

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "CycNum":
        """Apply the Galois automorphism zeta -> zeta^k (k prime to N)."""
        n = self.order
        if n <= 2:
            return self
        if k % n == 0:
            raise ValueError(f"zeta -> zeta^{k} is not an automorphism of Q(zeta_{n})")
        full = [Fraction(0)] * n
        for i, a in enumerate(self.coords):
            if a:
                full[(i * k) % n] += a
        return CycNum(n, _reduce_full(full, n))

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        n = self.order
        if n <= 2:
            return self.coords[0]
        product = self
        for k in range(2, n):
            product = product * self.conjugate(k)
        value = product.rational_value()
        if value is None:
            raise ArithmeticError("norm did not land in Q; coordinates are not canonical")
        return value

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in a cyclotomic field")
        n = self.order
        if n <= 2:
            return CycNum(n, (1 / self.coords[0],))
        others = CycNum.one(n)
        for k in range(2, n):
            others = others * self.conjugate(k)
        norm = (self * others).rational_value()
        return others * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "CycNum":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycNum.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __repr__(self) -> str:
        if self.rational_value() is not None:
            return f"CycNum({self.order}, {rat_to_str(self.coords[0])})"
        parts = ", ".join(rat_to_str(c) for c in self.coords)
        return f"CycNum({self.order}, [{parts}])"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coords": [rat_to_str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNum":
        return cls(int(data["order"]), tuple(parse_rat(c) for c in data["coords"]))


def cyc_root_of_unity(order: int, power: int) -> CycNum:
    """Canonical representation of zeta_order ** power."""
    euler_phi(order)
    power %= order
    if order == 1:
        return CycNum.one(1)
    if order == 2:
        return CycNum.from_rational(2, -1 if power else 1)
    coords = [Fraction(0)] * (order - 1)
    if power == order - 1:
        coords = [Fraction(-1)] * (order - 1)
    else:
        coords[power] = Fraction(1)
    return CycNum(order, tuple(coords))


def cyc_is_rational(x: CycNum) -> Optional[Fraction]:
    """Return the rational value of x, or None when x is irrational."""
    return x.rational_value()


def cyc_sum(values: Iterable[CycNum], order: int) -> CycNum:
    total = CycNum.zero(order)
    for v in values:
        total = total + v
    return total


def embed(order: int, value: Union[Scalar, CycNum]) -> CycNum:
    """Embed a rational (or an element of a subfield) into Q(zeta_order)."""
    if isinstance(value, CycNum):
        if value.order == order:
            return value
        rational = value.rational_value()
        if rational is None:
            raise UnsupportedOrderError(
                f"cannot embed an irrational element of order {value.order} into order {order}"
            )
        return CycNum.from_rational(order, rational)
    return CycNum.from_rational(order, value)
