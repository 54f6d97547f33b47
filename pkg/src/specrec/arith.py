"""Factored-integer arithmetic and small multiplicative functions.

Everything here is exact: integers, Fractions, never floats.  Inputs in
this package stay well below 10**9, so factorization is deterministic
trial division with a 2-3-5 wheel.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)

_factor_cache: dict[int, tuple[tuple[int, int], ...]] = {}
_factor_lock = threading.Lock()


@dataclass(frozen=True)
class FactoredModulus:
    """A positive integer together with its canonical factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError(f"non-canonical factorization {self.factors}")
            prev = p
            prod *= p**e
        if prod != self.value or self.value < 1:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @classmethod
    def from_int(cls, n: int) -> "FactoredModulus":
        return factorize(n)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def radical(self) -> int:
        r = 1
        for p in self.primes:
            r *= p
        return r

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def is_squarefull(self) -> bool:
        return all(e >= 2 for _, e in self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __int__(self) -> int:
        return self.value


def _trial_division(n: int) -> tuple[tuple[int, int], ...]:
    factors = []
    for p in (2, 3, 5):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            factors.append((p, e))
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) % 8
    if n > 1:
        factors.append((n, 1))
    return tuple(factors)


def factorize(n: int) -> FactoredModulus:
    """Canonical factorization of n >= 1 (n = 1 gives an empty factor list)."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    with _factor_lock:
        cached = _factor_cache.get(n)
    if cached is None:
        cached = _trial_division(n)
        with _factor_lock:
            _factor_cache[n] = cached
    return FactoredModulus(n, cached)


def _as_factored(q) -> FactoredModulus:
    return q if isinstance(q, FactoredModulus) else factorize(int(q))


def euler_phi(n) -> int:
    fm = _as_factored(n)
    phi = 1
    for p, e in fm.factors:
        phi *= p ** (e - 1) * (p - 1)
    return phi


def moebius(n) -> int:
    fm = _as_factored(n)
    if not fm.is_squarefree():
        return 0
    return -1 if len(fm.factors) % 2 else 1


def split_q_infinity(c: int, q) -> tuple[int, int]:
    """Split c = c_coprime * c_qpart with c_qpart | q**inf and (c_coprime, q) = 1."""
    if c < 1:
        raise ValueError(f"c must be positive, got {c}")
    qv = _as_factored(q).value
    c_qpart = 1
    rest = c
    g = gcd(rest, qv)
    while g > 1:
        c_qpart *= g
        rest //= g
        g = gcd(rest, qv)
    return rest, c_qpart


def squarefree_squarefull_split(n: int) -> tuple[int, int]:
    """n = q3 * q4 with q3 squarefree, q4 squarefull, and (q3, q4) = 1."""
    fm = _as_factored(n)
    q3 = q4 = 1
    for p, e in fm.factors:
        if e == 1:
            q3 *= p
        else:
            q4 *= p**e
    return q3, q4


def alpha_factor(q, q_prime, q_chi) -> Fraction:
    """The two-product rational weight attached to a level q, sublevel q',
    and conductor q_chi with q_chi | q' | q.

    First product over p | q' with p not dividing q/q_chi of (1 - 1/p);
    second over p exactly dividing q with p not dividing q_chi of (1 - 1/p^2).
    """
    qf = _as_factored(q)
    qp = _as_factored(q_prime)
    qc = _as_factored(q_chi)
    if qp.value == 0 or qf.value % qp.value or qp.value % qc.value:
        raise ValueError(f"need q_chi | q_prime | q, got {qc.value} | {qp.value} | {qf.value}")
    q_over_chi = qf.value // qc.value
    out = Fraction(1)
    for p in qp.primes:
        if q_over_chi % p:
            out *= Fraction(p - 1, p)
    for p, e in qf.factors:
        if e == 1 and qc.value % p:
            out *= Fraction(p * p - 1, p * p)
    return out


def crt_lift(residues: dict[int, int], moduli_product: int) -> int:
    """Combine residues keyed by pairwise-coprime moduli into one residue."""
    x, m = 0, 1
    for mod, r in residues.items():
        g, inv = _egcd_inv(m, mod)
        if g != 1:
            raise ValueError("moduli not coprime")
        x = (x + m * ((r - x) * inv % mod)) % (m * mod)
        m *= mod
    if m != moduli_product:
        raise ValueError("moduli product mismatch")
    return x


def _egcd_inv(a: int, m: int) -> tuple[int, int]:
    # returns (gcd(a, m), a^{-1} mod m when the gcd is 1, else junk)
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
    return old_r, old_s % m


def inverse_mod(a: int, m: int) -> int:
    if m == 1:
        return 0
    g, inv = _egcd_inv(a, m)
    if g != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    return inv
