"""Exact arithmetic in imaginary quadratic orders and their fraction fields.

An order is determined by a negative discriminant d congruent to 0 or 1
mod 4.  Elements are written a + b*t where t = sqrt(d)/2 for even d and
t = (1 + sqrt(d))/2 for odd d.  All arithmetic is integer-exact; field
elements keep a positive rational-integer denominator so that equality
is structural and values hash.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import InvalidDiscriminant, OutOfScope


class Order:
    """An imaginary quadratic order of discriminant ``delta`` < 0."""

    __slots__ = ("delta", "abs_delta", "even", "_tau_norm")

    def __init__(self, delta: int) -> None:
        if delta >= 0 or delta % 4 not in (0, 1):
            raise InvalidDiscriminant(f"bad discriminant {delta}")
        self.delta = delta
        self.abs_delta = -delta
        self.even = delta % 2 == 0
        # norm of t: |d|/4 when d is even, (1+|d|)/4 when d is odd
        self._tau_norm = self.abs_delta // 4 if self.even else (1 + self.abs_delta) // 4

    def __repr__(self) -> str:
        return f"Order({self.delta})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Order) and other.delta == self.delta

    def __hash__(self) -> int:
        return hash(("Order", self.delta))

    def elt(self, a: int, b: int = 0) -> OInt:
        return OInt(self, a, b)

    @property
    def zero(self) -> OInt:
        return OInt(self, 0, 0)

    @property
    def one(self) -> OInt:
        return OInt(self, 1, 0)

    @property
    def tau(self) -> OInt:
        return OInt(self, 0, 1)

    @property
    def tau_norm(self) -> int:
        return self._tau_norm

    def units(self) -> list[OInt]:
        """Unit group; only +-1 once |delta| > 4."""
        if self.abs_delta <= 4:
            raise OutOfScope(f"|delta| = {self.abs_delta} has extra units")
        return [self.one, -self.one]

    def covering_radius_sq(self) -> Fraction:
        """Largest squared distance from any point of C to the lattice."""
        n = self.abs_delta
        if self.even:
            # deep hole at the cell corner (1/2, sqrt(n)/4)
            return Fraction(1, 4) + Fraction(n, 16)
        # hexagon circumradius, attained at (0, (n+1)/(4n)) in planar coords
        return Fraction((n + 1) ** 2, 16 * n)


def make_order(delta: int) -> Order:
    return Order(delta)


class OInt:
    """Lattice element a + b*t of a fixed order."""

    __slots__ = ("order", "a", "b")

    def __init__(self, order: Order, a: int, b: int) -> None:
        self.order = order
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"OInt({self.order.delta}, {self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}t"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}t"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if not isinstance(other, OInt):
            return NotImplemented
        return self.order.delta == other.order.delta and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.order.delta, self.a, self.b))

    def _coerce(self, other: OInt | int) -> OInt | None:
        if isinstance(other, int):
            return OInt(self.order, other, 0)
        if isinstance(other, OInt) and other.order.delta == self.order.delta:
            return other
        return None

    def __add__(self, other: OInt | int) -> OInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OInt(self.order, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: OInt | int) -> OInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OInt(self.order, self.a - o.a, self.b - o.b)

    def __rsub__(self, other: OInt | int) -> OInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> OInt:
        return OInt(self.order, -self.a, -self.b)

    def __mul__(self, other: OInt | int) -> OInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        m = self.order._tau_norm
        if self.order.even:
            return OInt(self.order, a * c - m * b * d, a * d + b * c)
        return OInt(self.order, a * c - m * b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conj(self) -> OInt:
        if self.order.even:
            return OInt(self.order, self.a, -self.b)
        return OInt(self.order, self.a + self.b, -self.b)

    def norm(self) -> int:
        a, b = self.a, self.b
        m = self.order._tau_norm
        if self.order.even:
            return a * a + m * b * b
        return a * a + a * b + m * b * b

    def trace(self) -> int:
        return 2 * self.a if self.order.even else 2 * self.a + self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_small(self) -> bool:
        """True exactly on 0 and the units +-1 (|delta| > 4)."""
        return self.b == 0 and self.a in (-1, 0, 1)

    def key(self) -> tuple[int, int]:
        """Canonical sort key: b first, then a."""
        return (self.b, self.a)

    def is_canonical_positive(self) -> bool:
        """First nonzero coordinate of (b, a) is positive."""
        if self.b != 0:
            return self.b > 0
        return self.a > 0

    def planar(self) -> tuple[Fraction, Fraction]:
        """Coordinates (u, v) with the element equal to u + v*sqrt(|delta|)*i."""
        if self.order.even:
            return (Fraction(self.a), Fraction(self.b, 2))
        return (Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2))

    def __complex__(self) -> complex:
        u, v = self.planar()
        return complex(float(u), float(v) * math.sqrt(self.order.abs_delta))


class KElem:
    """Fraction-field element, kept as (a + b*t) / q with q a positive integer.

    Construction divides out the content gcd and rationalizes the
    denominator, so equal values are structurally equal and hashable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: OInt, den: int) -> None:
        # assumes the pair is already reduced; use .of() for raw input
        self.num = num
        self.den = den

    @staticmethod
    def of(num: OInt, den: OInt | int) -> KElem:
        order = num.order
        if isinstance(den, int):
            den = OInt(order, den, 0)
        if den.is_zero():
            raise ZeroDivisionError("division by zero in K")
        if den.b != 0:
            num = num * den.conj()
            den = OInt(order, den.norm(), 0)
        q = den.a
        if q < 0:
            q = -q
            num = -num
        g = math.gcd(math.gcd(num.a, num.b), q)
        if g > 1:
            num = OInt(order, num.a // g, num.b // g)
            q //= g
        return KElem(num, q)

    @staticmethod
    def from_oint(x: OInt) -> KElem:
        return KElem(x, 1)

    @property
    def order(self) -> Order:
        return self.num.order

    def __repr__(self) -> str:
        return f"KElem({self.num!r}, {self.den})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/{self.den}"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (OInt, int)):
            o = _as_kelem(other, self.order)
            return o is not None and self.den == o.den and self.num == o.num
        if not isinstance(other, KElem):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        return KElem.of(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        return KElem.of(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> KElem:
        return KElem(-self.num, self.den)

    def __mul__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        return KElem.of(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return KElem.of(self.num * o.num.conj() * o.den, self.den * o.num.norm())

    def __rtruediv__(self, other: KElem | OInt | int) -> KElem:
        o = _as_kelem(other, self.order)
        if o is None:
            return NotImplemented
        return o / self

    def conj(self) -> KElem:
        return KElem(self.num.conj(), self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def abs_sq(self) -> Fraction:
        """Exact |z|^2."""
        return Fraction(self.num.norm(), self.den * self.den)

    def planar(self) -> tuple[Fraction, Fraction]:
        u, v = self.num.planar()
        return (u / self.den, v / self.den)

    def __complex__(self) -> complex:
        u, v = self.planar()
        return complex(float(u), float(v) * math.sqrt(self.order.abs_delta))


def _as_kelem(x: KElem | OInt | Fraction | int, order: Order) -> KElem | None:
    if isinstance(x, KElem):
        return x if x.order.delta == order.delta else None
    if isinstance(x, OInt):
        return KElem(x, 1) if x.order.delta == order.delta else None
    if isinstance(x, int):
        return KElem(OInt(order, x, 0), 1)
    if isinstance(x, Fraction):
        return KElem.of(OInt(order, x.numerator, 0), x.denominator)
    return None


def dist_sq(z: KElem, g: OInt | KElem) -> Fraction:
    """Exact squared euclidean distance |z - g|^2."""
    return (z - g).abs_sq()


def kelem_from_planar(order: Order, u: Fraction | int, v: Fraction | int) -> KElem:
    """The field element whose planar coordinates are (u, v); inverse of planar()."""
    u = Fraction(u)
    v = Fraction(v)
    b = 2 * v
    a = u if order.even else u - v
    den = math.lcm(a.denominator, b.denominator)
    return KElem.of(OInt(order, int(a * den), int(b * den)), den)


def lattice_points_within(z: KElem, rsq: Fraction | int, closed: bool) -> list[OInt]:
    """All lattice points g with |z - g|^2 < rsq (<= rsq when closed).

    The imaginary part pins down finitely many b-rows; each row then
    bounds a.  No floating point is involved at any stage.
    """
    order = z.order
    rsq = Fraction(rsq)
    if rsq < 0 or (rsq == 0 and not closed):
        return []
    u, v = z.planar()
    n = order.abs_delta
    out: list[OInt] = []

    def row_ok(b: int) -> bool:
        return n * (Fraction(b, 2) - v) ** 2 <= rsq

    def scan_row(b: int) -> None:
        rem = rsq - n * (Fraction(b, 2) - v) ** 2
        ua = u if order.even else u - Fraction(b, 2)
        a0 = math.floor(ua)
        a = a0
        while (a - ua) ** 2 <= rem:
            _keep(a, b)
            a -= 1
        a = a0 + 1
        while (a - ua) ** 2 <= rem:
            _keep(a, b)
            a += 1

    def _keep(a: int, b: int) -> None:
        g = OInt(order, a, b)
        d2 = dist_sq(z, g)
        if d2 < rsq or (closed and d2 == rsq):
            out.append(g)

    b0 = math.floor(2 * v)
    b = b0
    while row_ok(b):
        scan_row(b)
        b -= 1
    b = b0 + 1
    while row_ok(b):
        scan_row(b)
        b += 1
    out.sort(key=lambda g: g.key())
    return out


def lattice_points_norm_at_most(order: Order, bound: int, include_zero: bool = False) -> list[OInt]:
    """Lattice points with norm <= bound, canonically sorted."""
    pts = lattice_points_within(KElem(order.zero, 1), Fraction(bound), closed=True)
    if not include_zero:
        pts = [g for g in pts if not g.is_zero()]
    return pts


def oints_by_norm(order: Order) -> Iterator[list[OInt]]:
    """Yield nonzero lattice points grouped by strictly increasing norm."""
    done = 0
    bound = 4
    while True:
        groups: dict[int, list[OInt]] = {}
        for g in lattice_points_norm_at_most(order, bound):
            n = g.norm()
            if n > done:
                groups.setdefault(n, []).append(g)
        for nval in sorted(groups):
            yield sorted(groups[nval], key=lambda g: g.key())
        done = bound
        bound *= 4
