"""Exact arithmetic in rings of cyclotomic integers (with rational scalars).

An element of level N is a polynomial in the primitive N-th root of unity,
stored reduced modulo the N-th cyclotomic polynomial, so equality with zero
is decidable exactly.  Mixed-level arithmetic lifts both operands to the
lcm level.  Beyond LEVEL_CAP the callers in this package fall back to a
complex-float backend and mark results inexact.
"""

from __future__ import annotations

import cmath
import threading
from fractions import Fraction
from math import gcd, lcm

from .arith import factorize, moebius

LEVEL_CAP = 4000

_cyclo_cache: dict[int, tuple[int, ...]] = {1: (-1, 1)}
_cyclo_lock = threading.Lock()


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> tuple[int, ...]:
    # exact division of integer polynomials, den monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            out[i - dn] = c
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return tuple(out)


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficient tuple (constant first) of the n-th cyclotomic polynomial."""
    with _cyclo_lock:
        cached = _cyclo_cache.get(n)
    if cached is not None:
        return cached
    # Phi_n(x) = prod_{d | n} (x^d - 1)^{mu(n/d)}
    num = [1]
    dens: list[tuple[int, ...]] = []
    for d in factorize(n).divisors():
        mu = moebius(n // d)
        if mu == 1:
            new = [0] * (len(num) + d)
            for i, c in enumerate(num):
                new[i] -= c
                new[i + d] += c
            num = new
        elif mu == -1:
            poly = [0] * (d + 1)
            poly[0], poly[d] = -1, 1
            dens.append(tuple(poly))
    out = tuple(num)
    for den in dens:
        out = _poly_div_exact(list(out), den)
    with _cyclo_lock:
        _cyclo_cache[n] = out
    return out


def _reduce(coeffs: list, n: int) -> tuple:
    phi_n = cyclotomic_polynomial(n)
    deg = len(phi_n) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            for j in range(deg):
                coeffs[i - deg + j] -= c * phi_n[j]
    while len(coeffs) > deg:
        coeffs.pop()
    while len(coeffs) < deg:
        coeffs.append(0)
    return tuple(coeffs)


class CyclotomicNumber:
    """Element of Q(zeta_N), reduced mod the N-th cyclotomic polynomial."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs, reduced: bool = False):
        if level < 1:
            raise ValueError("level must be positive")
        self.level = level
        self.coeffs = tuple(coeffs) if reduced else _reduce(list(coeffs), level)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, level: int = 1) -> "CyclotomicNumber":
        return cls(level, [0] * _degree(level), reduced=True)

    @classmethod
    def one(cls, level: int = 1) -> "CyclotomicNumber":
        c = [0] * _degree(level)
        c[0] = 1
        return cls(level, c, reduced=True)

    @classmethod
    def from_rational(cls, value) -> "CyclotomicNumber":
        return cls(1, [Fraction(value)] if value else [0])

    # -- structure ----------------------------------------------------

    def lift(self, new_level: int) -> "CyclotomicNumber":
        """Rewrite at a finer level (level | new_level), same complex value."""
        if new_level == self.level:
            return self
        if new_level % self.level:
            raise ValueError(f"cannot lift level {self.level} to {new_level}")
        step = new_level // self.level
        out = [0] * new_level
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * step] += c
        return CyclotomicNumber(new_level, out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value")
        return Fraction(self.coeffs[0]) if self.coeffs else Fraction(0)

    def conjugate(self) -> "CyclotomicNumber":
        n = self.level
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            if c:
                out[(n - i) % n] += c
        return CyclotomicNumber(n, out)

    def embed(self) -> complex:
        """Numerical value at zeta_N = exp(2*pi*i/N)."""
        z = cmath.exp(2j * cmath.pi / self.level)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + (c.numerator / c.denominator if isinstance(c, Fraction) else c)
        return acc

    # -- arithmetic ---------------------------------------------------

    def _pair(self, other: "CyclotomicNumber"):
        n = lcm(self.level, other.level)
        return self.lift(n), other.lift(n), n

    def __add__(self, other):
        other = _coerce(other)
        a, b, n = self._pair(other)
        return CyclotomicNumber(n, [x + y for x, y in zip(a.coeffs, b.coeffs)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.level, [-c for c in self.coeffs], reduced=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.level, [c * other for c in self.coeffs], reduced=True)
        other = _coerce(other)
        a, b, n = self._pair(other)
        out = [0] * (2 * len(a.coeffs) - 1 if a.coeffs else 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        out[i + j] += x * y
        return CyclotomicNumber(n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * Fraction(1, 1) * Fraction(1, other) if other != 0 else _raise_div()
        raise TypeError("division only by rational scalars")

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = CyclotomicNumber.one(self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.level, self.coeffs))

    def __repr__(self):
        return f"CyclotomicNumber(level={self.level}, coeffs={self.coeffs})"


def _degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _coerce(x) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CyclotomicNumber.from_rational(x)
    raise TypeError(f"cannot coerce {type(x)} to CyclotomicNumber")


def _raise_div():
    raise ZeroDivisionError("division by zero")


def root_of_unity(n: int, k: int = 1) -> CyclotomicNumber:
    """Exact e(k/n); root_of_unity(n, 0) is the multiplicative identity."""
    if n < 1:
        raise ValueError("n must be positive")
    k %= n
    g = gcd(k, n)
    n2, k2 = n // g, k // g  # reduce so the stored level is primitive
    out = [0] * (k2 + 1)
    out[k2] = 1
    return CyclotomicNumber(n2, out)


def rebase(x: CyclotomicNumber, new_level: int) -> CyclotomicNumber:
    """Same complex value expressed at a finer level; level(x) | new_level."""
    return x.lift(new_level)


def from_exponent_counts(n: int, counts) -> CyclotomicNumber:
    """Sum of counts[k] * e(k/n) over k, from a length-n coefficient array."""
    if len(counts) != n:
        raise ValueError("counts must have length n")
    return CyclotomicNumber(n, list(counts))
