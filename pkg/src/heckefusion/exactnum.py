"""Exact scalars: rationals mod 1 and rational combinations of roots of unity.

Character exponents live in Q/Z (class QmodZ).  Character values and all
convolution arithmetic live in cyclotomic fields Q(zeta_n), represented on the
redundant basis {zeta_n^0, ..., zeta_n^(n-1)} with rational coefficients.
Products and sums stay on that basis (exponent arithmetic mod n, so monomial
times monomial is again a monomial); equality and zero tests reduce modulo the
n-th cyclotomic polynomial, where the representation becomes canonical.
Elements of different orders are compared after embedding into the lcm order.

There is no floating point here and none is needed downstream.

>>> z = root_of_unity(QmodZ("1/3"))
>>> (z * z * z).as_rational()
Fraction(1, 1)
>>> (z + z.conjugate() + 1).is_zero()
True
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

__all__ = [
    "QmodZ",
    "Cyclotomic",
    "root_of_unity",
    "cyclotomic_polynomial",
]


class QmodZ:
    """A rational number modulo 1, stored reduced in [0, 1)."""

    __slots__ = ("value",)

    def __init__(self, value: object = 0):
        if isinstance(value, QmodZ):
            frac = value.value
        else:
            frac = Fraction(value)  # type: ignore[arg-type]
        self.value = frac % 1

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def order(self) -> int:
        """Additive order of the class, i.e. the reduced denominator."""
        return self.value.denominator

    def __add__(self, other: "QmodZ") -> "QmodZ":
        if not isinstance(other, QmodZ):
            return NotImplemented
        return QmodZ(self.value + other.value)

    def __radd__(self, other: object) -> "QmodZ":
        # allows sum() over QmodZ with the int 0 start value
        if other == 0:
            return QmodZ(self.value)
        return NotImplemented

    def __neg__(self) -> "QmodZ":
        return QmodZ(-self.value)

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        if not isinstance(other, QmodZ):
            return NotImplemented
        return QmodZ(self.value - other.value)

    def __mul__(self, k: int) -> "QmodZ":
        if not isinstance(k, int):
            return NotImplemented
        return QmodZ(self.value * k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QmodZ):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == Fraction(other) % 1
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"QmodZ({str(self.value)!r})"


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; plain long division over Z
    num = list(num)
    dn = len(den) - 1
    if dn == 0:
        return list(num), []
    quot = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            quot, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            if rem:
                raise AssertionError("cyclotomic division must be exact")
            poly = quot
    return tuple(poly)


def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class Cyclotomic:
    """An element of Q(zeta_n) on the redundant power basis of zeta_n."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 1:
            raise ValueError("order must be positive")
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if len(cs) > order:
            raise ValueError("coefficient vector longer than order")
        cs.extend([Fraction(0)] * (order - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "Cyclotomic":
        return cls(1, [Fraction(value)])

    @classmethod
    def zero(cls) -> "Cyclotomic":
        return cls(1, [0])

    @classmethod
    def one(cls) -> "Cyclotomic":
        return cls(1, [1])

    @classmethod
    def from_json(cls, data: dict) -> "Cyclotomic":
        coeffs = [Fraction(0)] * data["order"]
        for i, c in data["terms"]:
            coeffs[i] = Fraction(c)
        return cls(data["order"], coeffs)

    # -- representation plumbing -----------------------------------------

    def _embedded(self, m: int) -> tuple[Fraction, ...]:
        """Coefficients of self inside Q(zeta_m); m must be a multiple of order."""
        if m == self.order:
            return self.coeffs
        if m % self.order:
            raise ValueError("can only embed into a multiple order")
        stride = m // self.order
        out = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * stride] = c
        return tuple(out)

    @staticmethod
    def _coerce(value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Fraction)):
            return Cyclotomic.from_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Cyclotomic")

    def reduced(self) -> tuple[Fraction, ...]:
        """Canonical coefficients: remainder mod the cyclotomic polynomial.

        The result has zeros from degree phi(order) up, and is a canonical
        representative for the fixed order.
        """
        phi = cyclotomic_polynomial(self.order)
        deg = len(phi) - 1
        work = list(self.coeffs)
        for i in range(len(work) - 1, deg - 1, -1):
            c = work[i]
            if c:
                work[i] = Fraction(0)
                for j in range(deg):
                    work[i - deg + j] -= c * phi[j]
        return tuple(work)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Cyclotomic":
        other = self._coerce(other)
        m = lcm(self.order, other.order)
        a, b = self._embedded(m), other._embedded(m)
        return Cyclotomic(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.order, [-c for c in self.coeffs])

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Cyclotomic":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic(self.order, [c * f for c in self.coeffs])
        other = self._coerce(other)
        m = lcm(self.order, other.order)
        a, b = self._embedded(m), other._embedded(m)
        out = [Fraction(0)] * m
        nz_b = [(j, cb) for j, cb in enumerate(b) if cb]
        for i, ca in enumerate(a):
            if ca:
                for j, cb in nz_b:
                    k = i + j
                    if k >= m:
                        k -= m
                    out[k] += ca * cb
        return Cyclotomic(m, out)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^(-1)."""
        n = self.order
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if c:
                out[(n - i) % n] += c
        return Cyclotomic(n, out)

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the extended Euclid algorithm mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        n = self.order
        phi = [Fraction(c) for c in cyclotomic_polynomial(n)]
        a = list(self.reduced())
        while a and a[-1] == 0:
            a.pop()
        # extended gcd of a and phi over Q[x]; phi is irreducible so gcd is 1
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1 or not r1:
                break
            q, r = _poly_divmod_frac(r0, r1)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, r
        if not r1:
            raise ZeroDivisionError("element is zero modulo the cyclotomic polynomial")
        unit = r1[0]
        inv = [c / unit for c in s1]
        _, inv = _poly_divmod_frac(inv, phi)
        return Cyclotomic(n, inv + [Fraction(0)] * (n - len(inv)))

    def __truediv__(self, other) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic(self.order, [c / f for c in self.coeffs])
        return self * self._coerce(other).inverse()

    # -- predicates --------------------------------------------------------

    def nonzero_terms(self) -> list[tuple[int, Fraction]]:
        """Unreduced (exponent, coefficient) pairs with nonzero coefficient."""
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def is_zero(self) -> bool:
        if not any(self.coeffs):
            return True
        return not any(self.reduced())

    def is_one(self) -> bool:
        return (self - 1).is_zero()

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction if it is rational, else None."""
        red = self.reduced()
        if any(red[1:]):
            return None
        return red[0]

    def abs_squared(self) -> "Cyclotomic":
        return self * self.conjugate()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self.order == other.order and self.coeffs == other.coeffs:
            return True
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]  # cross-order equality defeats hashing

    # -- rendering ---------------------------------------------------------

    def to_json(self) -> dict:
        """Canonical exact serialization: reduced terms sorted by exponent.

        Rational values always serialize at order 1, whatever arithmetic
        produced them.
        """
        q = self.as_rational()
        if q is not None:
            return {"order": 1, "terms": [] if q == 0 else [[0, str(q)]]}
        terms = [[i, str(c)] for i, c in enumerate(self.reduced()) if c]
        return {"order": self.order, "terms": terms}

    def __repr__(self) -> str:
        red = self.reduced()
        if not any(red):
            return "Cyclotomic(0)"
        parts = []
        for i, c in enumerate(red):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"z{self.order}^{i}")
            else:
                parts.append(f"{c}*z{self.order}^{i}")
        return "Cyclotomic(" + " + ".join(parts) + ")"


def _poly_divmod_frac(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    dn = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            q = c / lead
            quot[i - dn] = q
            for j in range(dn + 1):
                num[i - dn + j] -= q * den[j]
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def root_of_unity(exponent: QmodZ) -> Cyclotomic:
    """The root of unity e^(2*pi*i*exponent) as an exact cyclotomic."""
    q = QmodZ(exponent)
    n = q.denominator
    coeffs = [Fraction(0)] * n
    coeffs[q.numerator % n] = Fraction(1)
    return Cyclotomic(n, coeffs)
