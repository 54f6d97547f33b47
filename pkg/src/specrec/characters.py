"""Dirichlet characters mod q as exponent data on canonical generators.

Conventions (stable across runs):
  * odd p**b: the least primitive root of p**b generates the cyclic unit
    group; a character is one exponent e with chi(g) = e(e / phi(p**b));
  * 2: trivial group, no exponents;
  * 4: generator -1 (res. 3), one exponent in {0, 1};
  * 2**b, b >= 3: generators (-1, 5), two exponents in {0,1} x [0, 2**(b-2)).

The CLI identifier is ``q:e1,e2,...`` listing the exponents in increasing
prime order, with 2**b (b >= 3) contributing its two exponents first.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import gcd, lcm

import numpy as np

from .arith import FactoredModulus, euler_phi, factorize
from .cyclotomic import CyclotomicNumber, root_of_unity

_dlog_lock = threading.Lock()
_dlog_cache: dict[int, dict[int, tuple[int, ...]]] = {}


@lru_cache(maxsize=None)
def primitive_root(pk: int) -> int:
    """Least primitive root of an odd prime power."""
    fm = factorize(pk)
    if len(fm.factors) != 1 or fm.factors[0][0] == 2:
        raise ValueError(f"{pk} is not an odd prime power")
    phi = euler_phi(pk)
    prime_divs = factorize(phi).primes
    g = 2
    while True:
        if gcd(g, pk) == 1 and all(pow(g, phi // ell, pk) != 1 for ell in prime_divs):
            return g
        g += 1


def _component_orders(p: int, beta: int) -> tuple[int, ...]:
    if p != 2:
        return (euler_phi(p**beta),)
    if beta == 1:
        return ()
    if beta == 2:
        return (2,)
    return (2, 2 ** (beta - 2))


def _generators(p: int, beta: int) -> tuple[int, ...]:
    if p != 2:
        return (primitive_root(p**beta),)
    if beta == 1:
        return ()
    if beta == 2:
        return (3,)
    return (2**beta - 1, 5)


def _dlog_table(pk: int) -> dict[int, tuple[int, ...]]:
    """residue -> exponent tuple on the canonical generators of (Z/pk)*."""
    with _dlog_lock:
        cached = _dlog_cache.get(pk)
    if cached is not None:
        return cached
    p, beta = factorize(pk).factors[0]
    table: dict[int, tuple[int, ...]] = {}
    if p != 2:
        g = primitive_root(pk)
        x = 1
        for k in range(euler_phi(pk)):
            table[x] = (k,)
            x = x * g % pk
    elif beta == 1:
        table[1] = ()
    elif beta == 2:
        table[1], table[3] = (0,), (1,)
    else:
        half = 2 ** (beta - 2)
        x = 1
        for t in range(half):
            table[x] = (0, t)
            table[pk - x] = (1, t)
            x = x * 5 % pk
    with _dlog_lock:
        _dlog_cache[pk] = table
    return table


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q, stored as per-prime-power exponent tuples."""

    modulus: FactoredModulus
    local_exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.local_exponents) != len(self.modulus.factors):
            raise ValueError("one exponent tuple per prime power required")
        for (p, b), exps in zip(self.modulus.factors, self.local_exponents):
            orders = _component_orders(p, b)
            if len(exps) != len(orders) or any(not 0 <= e < m for e, m in zip(exps, orders)):
                raise ValueError(f"bad exponents {exps} for {p}^{b}")

    # -- basic data ----------------------------------------------------

    @property
    def q(self) -> int:
        return self.modulus.value

    def is_principal(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.local_exponents)

    @property
    def order(self) -> int:
        n = 1
        for (p, b), exps in zip(self.modulus.factors, self.local_exponents):
            for e, m in zip(exps, _component_orders(p, b)):
                n = lcm(n, m // gcd(e, m))
        return n

    @property
    def conductor(self) -> int:
        cond = 1
        for (p, b), exps in zip(self.modulus.factors, self.local_exponents):
            cond *= _local_conductor(p, b, exps)
        return cond

    def is_primitive(self) -> bool:
        return self.conductor == self.q

    @property
    def parity(self) -> int:
        """chi(-1), always +1 or -1."""
        sign = 1
        for (p, b), exps in zip(self.modulus.factors, self.local_exponents):
            if p != 2:
                sign *= -1 if exps[0] % 2 else 1
            elif b >= 2:
                sign *= -1 if exps[0] % 2 else 1
        return sign

    # -- evaluation ----------------------------------------------------

    def phase(self, n: int) -> Fraction | None:
        """chi(n) = e(phase); None when gcd(n, q) > 1."""
        if self.q == 1:
            return Fraction(0)
        n %= self.q
        if gcd(n, self.q) != 1:
            return None
        total = Fraction(0)
        for (p, b), exps in zip(self.modulus.factors, self.local_exponents):
            pk = p**b
            dlog = _dlog_table(pk)[n % pk]
            for e, d, m in zip(exps, dlog, _component_orders(p, b)):
                total += Fraction(e * d, m)
        return total % 1

    def __call__(self, n: int) -> complex:
        ph = self.phase(n)
        if ph is None:
            return 0j
        return np.exp(2j * np.pi * float(ph))

    def evaluate(self, n: int) -> CyclotomicNumber:
        """Exact value as a root of unity of order dividing self.order."""
        ph = self.phase(n)
        if ph is None:
            return CyclotomicNumber.zero()
        return root_of_unity(ph.denominator, ph.numerator)

    def value_exponent(self, n: int, level: int) -> int | None:
        """k with chi(n) = e(k/level); requires order | level."""
        ph = self.phase(n)
        if ph is None:
            return None
        k = ph * level
        if k.denominator != 1:
            raise ValueError(f"order {self.order} does not divide level {level}")
        return int(k) % level

    def value_table(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """(mask, exps) arrays over n in [0, q): chi(n) = mask * e(exps/level)."""
        q = self.q
        mask = np.zeros(q if q > 1 else 1, dtype=np.int64)
        exps = np.zeros(q if q > 1 else 1, dtype=np.int64)
        for n in range(q if q > 1 else 1):
            k = self.value_exponent(n, level)
            if k is not None:
                mask[n] = 1
                exps[n] = k
        return mask, exps

    def complex_table(self) -> np.ndarray:
        q = max(self.q, 1)
        out = np.zeros(q, dtype=complex)
        for n in range(q):
            out[n] = self(n)
        return out

    # -- algebra ---------------------------------------------------------

    def conj(self) -> "DirichletCharacter":
        exps = []
        for (p, b), loc in zip(self.modulus.factors, self.local_exponents):
            orders = _component_orders(p, b)
            exps.append(tuple((-e) % m for e, m in zip(loc, orders)))
        return DirichletCharacter(self.modulus, tuple(exps))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        m = lcm(self.q, other.q)
        a, b = self.lift(m), other.lift(m)
        exps = []
        for (p, bb), la, lb in zip(a.modulus.factors, a.local_exponents, b.local_exponents):
            orders = _component_orders(p, bb)
            exps.append(tuple((x + y) % mm for x, y, mm in zip(la, lb, orders)))
        return DirichletCharacter(a.modulus, tuple(exps))

    def __pow__(self, k: int) -> "DirichletCharacter":
        exps = []
        for (p, b), loc in zip(self.modulus.factors, self.local_exponents):
            orders = _component_orders(p, b)
            exps.append(tuple((e * k) % m for e, m in zip(loc, orders)))
        return DirichletCharacter(self.modulus, tuple(exps))

    def lift(self, new_q: int) -> "DirichletCharacter":
        """The character mod new_q induced by this one (modulus | new_q)."""
        if new_q == self.q:
            return self
        if new_q % self.q:
            raise ValueError(f"{self.q} does not divide {new_q}")
        target = factorize(new_q)
        exps = []
        for p, b in target.factors:
            a = self.modulus.valuation(p)
            exps.append(_lift_local(self, p, a, b))
        return DirichletCharacter(target, tuple(exps))

    def local_components(self) -> list["DirichletCharacter"]:
        """Characters mod p**b whose product (lifted to q) is this one."""
        out = []
        for (p, b), loc in zip(self.modulus.factors, self.local_exponents):
            out.append(DirichletCharacter(factorize(p**b), (loc,)))
        return out

    def local_at(self, p: int) -> "DirichletCharacter":
        for (pp, b), loc in zip(self.modulus.factors, self.local_exponents):
            if pp == p:
                return DirichletCharacter(factorize(p**b), (loc,))
        return principal_character(1)

    def primitive_part(self) -> tuple["DirichletCharacter", int]:
        cond = self.conductor
        target = factorize(cond)
        exps = []
        for p, g in target.factors:
            exps.append(_restrict_local(self, p, self.modulus.valuation(p), g))
        return DirichletCharacter(target, tuple(exps)), cond

    # -- labels ----------------------------------------------------------

    def label(self) -> str:
        flat: list[str] = []
        for exps in self.local_exponents:
            flat.extend(str(e) for e in exps)
        return f"{self.q}:" + ",".join(flat)

    def __repr__(self):
        return f"DirichletCharacter({self.label()!r})"


def _local_conductor(p: int, b: int, exps: tuple[int, ...]) -> int:
    if p != 2:
        m = _component_orders(p, b)[0]
        order = m // gcd(exps[0], m)
        return 1 if order == 1 else p ** (1 + _valuation(order, p))
    if b == 1 or all(e == 0 for e in exps):
        return 1
    if b == 2:
        return 4
    e0, e1 = exps
    if e1 == 0:
        return 4 if e0 else 1
    five_order = 2 ** (b - 2) // gcd(e1, 2 ** (b - 2))
    return 4 * five_order


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _lift_local(chi: DirichletCharacter, p: int, a: int, b: int) -> tuple[int, ...]:
    """Exponents mod p**b of the local-at-p part of chi (known mod p**a)."""
    orders = _component_orders(p, b)
    if a == 0:
        return tuple(0 for _ in orders)
    src = chi.local_at(p)
    out = []
    for g, m in zip(_generators(p, b), orders):
        ph = src.phase(g)
        if ph is None:
            raise ValueError("generator not coprime to modulus")
        k = ph * m
        if k.denominator != 1:
            raise AssertionError("lift produced a non-integral exponent")
        out.append(int(k) % m)
    return tuple(out)


def _restrict_local(chi: DirichletCharacter, p: int, b: int, g: int) -> tuple[int, ...]:
    """Exponents mod p**g of the local factor of chi, g = local conductor exponent."""
    src = chi.local_at(p)
    pk_small = p**g
    out = []
    for gen, m in zip(_generators(p, g), _component_orders(p, g)):
        # any lift of gen coprime to p has a well-defined value
        lift = gen
        while gcd(lift, p) != 1 or lift % pk_small != gen % pk_small:
            lift += pk_small
        ph = src.phase(lift)
        k = ph * m
        if k.denominator != 1:
            raise AssertionError("restriction produced a non-integral exponent")
        out.append(int(k) % m)
    return tuple(out)


def principal_character(q: int) -> DirichletCharacter:
    fm = factorize(q)
    return DirichletCharacter(fm, tuple(tuple(0 for _ in _component_orders(p, b)) for p, b in fm.factors))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, deterministic lexicographic order."""
    fm = factorize(q)
    ranges = []
    for p, b in fm.factors:
        local_orders = _component_orders(p, b)
        ranges.append([tuple(t) for t in iproduct(*[range(m) for m in local_orders])])
    out = []
    for combo in iproduct(*ranges) if ranges else [()]:
        out.append(DirichletCharacter(fm, tuple(combo)))
    return out


def induce(chi_star: DirichletCharacter, q: int) -> DirichletCharacter:
    """Character mod q induced by a character of conductor dividing q."""
    if q % chi_star.conductor:
        raise ValueError(f"conductor {chi_star.conductor} does not divide {q}")
    return chi_star.lift(q)


def multiply(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    return chi * psi


def parse_label(label: str) -> DirichletCharacter:
    """Parse ``q:e1,e2,...`` (exponents in increasing prime order)."""
    head, _, tail = label.partition(":")
    q = int(head)
    exps = [int(t) for t in tail.split(",") if t.strip() != ""]
    fm = factorize(q)
    local = []
    idx = 0
    for p, b in fm.factors:
        k = len(_component_orders(p, b))
        local.append(tuple(exps[idx : idx + k]))
        idx += k
    if idx != len(exps):
        raise ValueError(f"label {label!r} has {len(exps)} exponents, expected {idx}")
    return DirichletCharacter(fm, tuple(local))
