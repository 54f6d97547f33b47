"""Gauss, Kloosterman, Ramanujan, and Heath-Brown sums.

Each sum has a definitional evaluator.  Exact values are carried two ways:
as reduced cyclotomic numbers (level <= cyclotomic.LEVEL_CAP) and as raw
integer count vectors over Z/M (a sum of roots of unity is stored as the
multiset of exponents it visits).  Count vectors make change-of-variable
identities testable as exact integer array equalities at any level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from . import cyclotomic
from .arith import euler_phi, factorize, inverse_mod, moebius
from .characters import DirichletCharacter, principal_character
from .cyclotomic import CyclotomicNumber, from_exponent_counts


def _unit_vector(level: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(level) / level)


@dataclass
class ExpSumValue:
    """Value of an exponential sum: numeric always, exact when available."""

    numeric: complex
    exact: CyclotomicNumber | None = None
    backend: str = "float"
    level: int | None = None
    counts: np.ndarray | None = None
    scale: Fraction = field(default_factory=lambda: Fraction(1))

    @classmethod
    def from_counts(cls, level: int, counts: np.ndarray, scale: Fraction = Fraction(1)) -> "ExpSumValue":
        numeric = complex(counts @ _unit_vector(level)) * (scale.numerator / scale.denominator)
        if level <= cyclotomic.LEVEL_CAP:
            exact = from_exponent_counts(level, [int(c) for c in counts])
            if scale != 1:
                exact = exact * scale
            return cls(numeric, exact, "exact", level, counts, scale)
        return cls(numeric, None, "float", level, counts, scale)

    def lifted_counts(self, level: int) -> np.ndarray:
        if self.counts is None or self.level is None or level % self.level:
            raise ValueError("counts not liftable to requested level")
        out = np.zeros(level, dtype=self.counts.dtype)
        out[:: level // self.level] = self.counts
        return out


def convolve_counts(a: np.ndarray, b: np.ndarray, level: int) -> np.ndarray:
    """Product of two root-of-unity multisets as exponent count vectors."""
    out = np.zeros(level, dtype=np.int64)
    ia = np.nonzero(a)[0]
    ib = np.nonzero(b)[0]
    for i in ia:
        np.add.at(out, (i + ib) % level, a[i] * b[ib])
    return out


# -- Ramanujan sums ------------------------------------------------------


def ramanujan(q: int, n: int) -> int:
    """R_q(n) by the Moebius-weighted divisor sum (exact integer)."""
    g = gcd(q, n % q if q > 1 else 0) if n % q != 0 or q == 1 else q
    if q == 1:
        return 1
    g = gcd(n % q, q)
    if g == 0:
        g = q
    total = 0
    for d in factorize(g).divisors():
        total += d * moebius(q // d)
    return total


def ramanujan_exponential(q: int, n: int) -> ExpSumValue:
    """R_q(n) from its definition as a sum over units of e(dn/q)."""
    counts = np.zeros(q, dtype=np.int64)
    for d in range(q):
        if gcd(d, q) == 1:
            counts[d * n % q] += 1
    if q == 1:
        counts = np.array([1], dtype=np.int64)
    return ExpSumValue.from_counts(q, counts)


def ramanujan_row(q: int) -> np.ndarray:
    """[R_q(n) for n in range(q)] from the exponential definition, via FFT."""
    units = np.zeros(q, dtype=float)
    for d in range(q):
        if gcd(d, q) == 1:
            units[d] = 1.0
    if q == 1:
        return np.array([1.0])
    return np.fft.fft(units).real


# -- generalised Gauss sums ----------------------------------------------


def gauss_level(chi: DirichletCharacter) -> int:
    return lcm(max(chi.q, 1), chi.order)


@lru_cache(maxsize=512)
def _gauss_counts_table(chi: DirichletCharacter) -> tuple[int, np.ndarray]:
    """Count vectors of tau(chi, a) for all a mod q, at level lcm(q, order)."""
    q = max(chi.q, 1)
    level = gauss_level(chi)
    step = level // q
    table = np.zeros((q, level), dtype=np.int64)
    a_grid = np.arange(q, dtype=np.int64)
    for b in range(q):
        k = chi.value_exponent(b, level)
        if k is None:
            continue
        np.add.at(table, (a_grid, (k + a_grid * b * step) % level), 1)
    return level, table


def gauss(chi: DirichletCharacter, a: int = 1) -> ExpSumValue:
    """tau(chi, a) = sum_b chi(b) e(ab/q), definitional with cached tables."""
    level, table = _gauss_counts_table(chi)
    return ExpSumValue.from_counts(level, table[a % max(chi.q, 1)])


def tau(chi: DirichletCharacter) -> ExpSumValue:
    return gauss(chi, 1)


def gauss_closed_induced(chi: DirichletCharacter, a: int) -> ExpSumValue:
    """tau(chi, a) by the closed formula through the inducing primitive
    character chi* of conductor d: nonzero only when d | q/(q, a), where it
    is  conj(chi*)(a/(q,a)) chi*(q/(d (q,a))) mu(q/(d (q,a)))
        * phi(q)/phi(q/(q,a)) * tau(chi*).
    """
    q = max(chi.q, 1)
    star, d = chi.primitive_part()
    g = gcd(a % q, q)
    if g == 0:
        g = q
    m = q // g
    level = gauss_level(chi)
    if m % d:
        return ExpSumValue.from_counts(level, np.zeros(level, dtype=np.int64))
    k1 = star.conj().value_exponent((a % q) // g, level)
    k2 = star.value_exponent(m // d, level)
    if k1 is None or k2 is None:
        return ExpSumValue.from_counts(level, np.zeros(level, dtype=np.int64))
    coeff = moebius(m // d) * (euler_phi(q) // euler_phi(m))
    tau_star = gauss(star, 1)
    counts = np.zeros(level, dtype=np.int64)
    shift = (k1 + k2) % level
    src = tau_star.lifted_counts(level)
    counts[(np.arange(level) + shift) % level] = coeff * src
    return ExpSumValue.from_counts(level, counts)


def factored_gauss_table(chi: DirichletCharacter, var_level: int):
    """Tables (coeff, expo) with tau(chi, a) = coeff[a] e(expo[a]/var_level) tau(chi*).

    Requires order(chi) | var_level.  Derived from the closed induced
    formula; the representation is validated against the definitional sums
    by the test suite.
    """
    q = max(chi.q, 1)
    star, d = chi.primitive_part()
    phi_q = euler_phi(q)
    coeff = np.zeros(q, dtype=np.int64)
    expo = np.zeros(q, dtype=np.int64)
    for a in range(q):
        g = gcd(a, q) if a else q
        m = q // g
        if m % d:
            continue
        k1 = star.conj().value_exponent(a // g, var_level)
        k2 = star.value_exponent(m // d, var_level)
        if k1 is None or k2 is None:
            continue
        coeff[a] = moebius(m // d) * (phi_q // euler_phi(m))
        expo[a] = (k1 + k2) % var_level
    return star, coeff, expo


# -- Kloosterman sums ----------------------------------------------------


def kloosterman(chi: DirichletCharacter | None, m: int, n: int, c: int) -> ExpSumValue:
    """S_chi(m, n; c) = sum over units d of chi(d) e((m d + n dbar)/c).

    chi may have any modulus dividing c (it is lifted); chi = None means
    the principal character, giving the classical S(m, n; c).
    """
    if chi is None:
        chi = principal_character(1)
    if c % max(chi.q, 1):
        raise ValueError(f"character modulus {chi.q} does not divide c = {c}")
    chi_c = chi.lift(c) if chi.q != c else chi
    level = lcm(c, chi_c.order)
    step = level // c
    counts = np.zeros(level, dtype=np.int64)
    if c == 1:
        counts[0] = 1
        return ExpSumValue.from_counts(level, counts)
    for d in range(1, c):
        if gcd(d, c) != 1:
            continue
        k = chi_c.value_exponent(d, level)
        dbar = inverse_mod(d, c)
        counts[(k + (m * d + n * dbar) % c * step) % level] += 1
    return ExpSumValue.from_counts(level, counts)


# -- Heath-Brown double character sums ------------------------------------


def heath_brown_S(q: int, psi: DirichletCharacter, h: int, n: int) -> ExpSumValue:
    """S(q; psi, h, n) = sum_u psi(u + h) conj(psi)(u) e(nu/q), psi primitive mod q."""
    if psi.q != q or not psi.is_primitive():
        raise ValueError("psi must be primitive modulo q")
    level = lcm(q, psi.order)
    step = level // q
    counts = np.zeros(level, dtype=np.int64)
    psi_bar = psi.conj()
    for u in range(q):
        k1 = psi.value_exponent(u + h, level)
        k2 = psi_bar.value_exponent(u, level)
        if k1 is None or k2 is None:
            continue
        counts[(k1 + k2 + n * u % q * step) % level] += 1
    return ExpSumValue.from_counts(level, counts)
