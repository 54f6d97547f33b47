"""The central twisted character sum V_chi(psi; m1, m2, m3, r) and g(chi, psi).

V is defined mod q by

    (1/q) sum_{t,u mod q} tau(conj chi, t + m2 u) conj(chi)(r t + m1 m2)
                          tau(chi, u) chi(r u - m1) tau(conj psi, m3 t),

with tau the generalised Gauss sum.  The brute-force evaluator writes each
Gauss-sum factor as (integer) * (root of unity) * tau(primitive part), so a
q x q grid reduces to integer exponent counting; the result is exact.

The closed forms cover q = p**beta with chi principal or primitive under
the divisibility hypothesis m3 | m1, m1 | m2 and m1, m2, m3, r | p**inf;
two clauses (chi primitive, psi nonprincipal imprimitive) are only bounds
in which case the brute-force value is returned along with the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from . import cyclotomic
from .arith import factorize, split_q_infinity
from .characters import DirichletCharacter, principal_character
from .cyclotomic import CyclotomicNumber, from_exponent_counts
from .exp_sums import ExpSumValue, _unit_vector, factored_gauss_table, gauss


@dataclass(frozen=True)
class VArgs:
    m1: int
    m2: int
    m3: int
    r: int

    def __post_init__(self):
        if min(self.m1, self.m2, self.m3, self.r) < 1:
            raise ValueError("arguments must be positive")

    def in_cone(self, p: int) -> bool:
        """Divisibility hypothesis of the closed forms at the prime p."""
        vals = []
        for m in (self.m1, self.m2, self.m3, self.r):
            v, rest = 0, m
            while rest % p == 0:
                rest //= p
                v += 1
            if rest != 1:
                return False
            vals.append(v)
        a, b, c, _ = vals
        return c <= a <= b


@dataclass
class VCaseResult:
    value: ExpSumValue
    case_label: str
    exact_clause: bool
    bound: float | None = None


def _valuation_capped(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@lru_cache(maxsize=1024)
def _pair_tables(chi: DirichletCharacter, psi: DirichletCharacter):
    q = max(chi.q, 1)
    level = lcm(chi.order, psi.order, 1)
    chib = chi.conj()
    psib = psi.conj()
    starA, coeffA, expoA = factored_gauss_table(chib, level)
    starC, coeffC, expoC = factored_gauss_table(chi, level)
    starE, coeffE, expoE = factored_gauss_table(psib, level)
    maskB, expoB = chib.value_table(level)
    maskD, expoD = chi.value_table(level)
    consts = (gauss(starA, 1), gauss(starC, 1), gauss(starE, 1))
    return level, (coeffA, expoA), (maskB, expoB), (coeffC, expoC), (maskD, expoD), (coeffE, expoE), consts


def v_bruteforce(chi: DirichletCharacter, psi: DirichletCharacter, args: VArgs) -> ExpSumValue:
    """Definitional double sum over t, u mod q, evaluated exactly."""
    if chi.q != psi.q:
        raise ValueError("chi and psi must share a modulus")
    q = max(chi.q, 1)
    level, A, B, C, D, E, consts = _pair_tables(chi, psi)
    t = np.arange(q, dtype=np.int64)[:, None]
    u = np.arange(q, dtype=np.int64)[None, :]
    iA = (t + args.m2 * u) % q
    iB = (args.r * t + args.m1 * args.m2) % q
    iC = np.broadcast_to(u % q, iA.shape)
    iD = (args.r * u - args.m1) % q
    iE = (args.m3 * t) % q
    coeff = A[0][iA] * B[0][iB] * C[0][iC] * D[0][iD] * E[0][iE]
    expo = (A[1][iA] + B[1][iB] + C[1][iC] + D[1][iD] + E[1][iE]) % level
    counter = np.zeros(level, dtype=np.int64)
    nz = coeff != 0
    np.add.at(counter, expo[nz], coeff[nz])

    tauA, tauC, tauE = consts
    full_level = lcm(level, tauA.level or 1, tauC.level or 1, tauE.level or 1)
    scale = Fraction(1, q)
    if full_level <= cyclotomic.LEVEL_CAP and all(c.exact is not None for c in consts):
        exact = from_exponent_counts(level, [int(c) for c in counter])
        exact = exact * tauA.exact * tauC.exact * tauE.exact * scale
        return ExpSumValue(exact.embed(), exact, "exact", exact.level)
    numeric = complex(counter @ _unit_vector(level))
    numeric *= tauA.numeric * tauC.numeric * tauE.numeric / q
    return ExpSumValue(numeric, None, "float", level)


def v_bruteforce_literal(chi: DirichletCharacter, psi: DirichletCharacter, args: VArgs) -> ExpSumValue:
    """Same sum with no factored tables: cyclotomic products term by term.

    Independent of the factored-table representation; only usable for
    small q.
    """
    q = max(chi.q, 1)
    chib, psib = chi.conj(), psi.conj()
    total = CyclotomicNumber.zero()
    for t in range(q):
        e_fac = gauss(psib, args.m3 * t).exact
        if e_fac is None:
            raise ValueError("level cap exceeded for literal evaluation")
        if e_fac.is_zero():
            continue
        for u in range(q):
            b_fac = chib.evaluate(args.r * t + args.m1 * args.m2)
            d_fac = chi.evaluate(args.r * u - args.m1)
            if b_fac.is_zero() or d_fac.is_zero():
                continue
            a_fac = gauss(chib, t + args.m2 * u).exact
            c_fac = gauss(chi, u).exact
            total = total + a_fac * b_fac * c_fac * d_fac * e_fac
    total = total * Fraction(1, q)
    return ExpSumValue(total.embed(), total, "exact", total.level)


# -- closed forms at prime powers ------------------------------------------


def v_closed_primepower(chi: DirichletCharacter, psi: DirichletCharacter, args: VArgs) -> VCaseResult:
    """Case dispatch for q = p**beta, chi principal or primitive.

    Exact clauses return the printed closed value.  The two bound-only
    clauses (chi primitive, psi nonprincipal imprimitive) return the
    brute-force value together with the stated bound.
    """
    fm = chi.modulus
    if len(fm.factors) != 1:
        raise ValueError("modulus must be a prime power")
    p, beta = fm.factors[0]
    if psi.q != chi.q:
        raise ValueError("chi and psi must share a modulus")
    if not args.in_cone(p):
        raise ValueError("arguments outside the divisibility hypothesis")
    a = min(_valuation_capped(args.m1, p), beta + 1)
    b = min(_valuation_capped(args.m2, p), beta + 1)
    c = min(_valuation_capped(args.m3, p), beta + 1)
    rho = min(_valuation_capped(args.r, p), beta + 1)
    chi_principal = chi.is_principal()
    chi_primitive = chi.is_primitive() and not chi_principal and chi.q > 1
    if not (chi_principal or chi_primitive):
        raise ValueError("chi must be principal or primitive")
    psi_principal = psi.is_principal()

    if chi_principal and psi_principal:
        return _case_principal_principal(p, beta, a, b, c, rho)
    if chi_principal:
        return _case_principal_nonprincipal(p, beta, a, b, c, rho, psi)
    if psi_principal:
        return _case_primitive_principal(p, beta, a, b, c, rho, chi)
    return _case_primitive_nonprincipal(p, beta, a, b, c, rho, chi, psi, args)


def _rational_result(value: Fraction, label: str) -> VCaseResult:
    exact = CyclotomicNumber.from_rational(value)
    return VCaseResult(ExpSumValue(complex(value), exact, "exact", 1), label, True)


def _case_principal_principal(p, beta, a, b, c, rho) -> VCaseResult:
    if rho == 0 and min(a, b, c) >= 1 and beta == 1:
        return _rational_result(Fraction((p - 1) ** 3, p), "4.3:r=1,p|m123,beta=1")
    if rho == 0 and c == 0 and a >= 1 and b >= 1 and beta == 1:
        return _rational_result(Fraction(-((p - 1) ** 2), p), "4.3:m3=r=1,p|m12,beta=1")
    if rho == 0 and a == 0 and c == 0 and b >= 1 and beta == 1:
        return _rational_result(Fraction(p - 1, p), "4.3:m13=r=1,p|m2,beta=1")
    if a == b == c == 0 and rho >= 1:
        return _rational_result(Fraction(p ** (2 * beta - 1) * (p - 1)), "4.3:m=1,p|r")
    if a == b == c == rho == 0 and beta == 1:
        return _rational_result(Fraction(p**3 - p**2 - p - 1, p), "4.3:all1,beta=1")
    if a == b == c == rho == 0:
        return _rational_result(Fraction(p ** (2 * beta - 1) * (p - 1)), "4.3:all1,beta>=2")
    return _rational_result(Fraction(0), "4.3:vanish")


def _case_principal_nonprincipal(p, beta, a, b, c, rho, psi) -> VCaseResult:
    if a == b == c == rho == 0 and beta == 1:
        tau_psi = gauss(psi, 1)
        exact = tau_psi.exact.conjugate() * Fraction(p + 1, p)
        val = ExpSumValue(exact.embed(), exact, "exact", exact.level)
        return VCaseResult(val, "4.4:all1,beta=1", True)
    return _rational_result(Fraction(0), "4.4:vanish")


def _case_primitive_principal(p, beta, a, b, c, rho, chi) -> VCaseResult:
    eps = chi.parity
    scale = p ** (3 * beta - 3)
    if rho == 0 and min(a, b, c) >= beta:
        return _rational_result(Fraction(eps * scale * (p - 1) ** 3), "4.5:r=1,pb|m123")
    if rho == 0 and c == beta - 1 and a >= beta and b >= beta:
        return _rational_result(Fraction(-eps * scale * (p - 1) ** 2), "4.5:r=1,m3 exact")
    if rho == 0 and a == beta - 1 and c == beta - 1 and b >= beta:
        return _rational_result(Fraction(eps * scale * (p - 1)), "4.5:r=1,m13 exact")
    if rho == 0 and a == beta - 1 and b == beta - 1 and c == beta - 1 and beta >= 2:
        return _rational_result(Fraction(-eps * scale), "4.5:r=1,m123 exact,beta>=2")
    if a == b == c == 0 and rho >= beta:
        return _rational_result(Fraction(p ** (2 * beta - 1) * (p - 1)), "4.5:m=1,pb|r")
    if a == b == c == 0 and rho == beta - 1 and beta >= 2:
        return _rational_result(Fraction(-(p ** (2 * beta - 1))), "4.5:m=1,r exact,beta>=2")
    if a == b == c == rho == 0 and beta == 1:
        return _rational_result(Fraction(-p - eps), "4.5:all1,beta=1")
    return _rational_result(Fraction(0), "4.5:vanish")


def _case_primitive_nonprincipal(p, beta, a, b, c, rho, chi, psi, args) -> VCaseResult:
    alpha = _valuation_capped(psi.conductor, p)
    if a == b == c == rho == 0 and alpha == beta:
        tau_psibar = gauss(psi.conj(), 1)
        gval = g_sum(chi, psi)
        exact = tau_psibar.exact * gval.exact * chi.parity
        val = ExpSumValue(exact.embed(), exact, "exact", exact.level)
        return VCaseResult(val, "4.6:all1,psi primitive", True)
    if 1 <= alpha < beta and a == b == c == 0 and rho == beta - alpha:
        bound = float(p) ** (2 * beta - alpha / 2)
        return VCaseResult(v_bruteforce(chi, psi, args), "4.6:bound-r", False, bound)
    if 1 <= alpha < beta and rho == 0 and a == b == c == beta - alpha:
        bound = float(p) ** (3 * beta - 3 * alpha / 2)
        return VCaseResult(v_bruteforce(chi, psi, args), "4.6:bound-m", False, bound)
    return _rational_result(Fraction(0), "4.6:vanish")


# -- g(chi, psi) -----------------------------------------------------------


@lru_cache(maxsize=64)
def _ut_index(q: int) -> np.ndarray:
    t = np.arange(q, dtype=np.int64)[:, None]
    u = np.arange(q, dtype=np.int64)[None, :]
    return (u * t - 1) % q


def g_sum(chi: DirichletCharacter, psi: DirichletCharacter, backend: str = "auto") -> ExpSumValue:
    """g(chi, psi) = sum_{t,u} conj(chi)(t) chi(t+1) chi(u) conj(chi)(u+1) psi(ut-1)."""
    if chi.q != psi.q:
        raise ValueError("chi and psi must share a modulus")
    q = max(chi.q, 1)
    level = lcm(chi.order, psi.order)
    if backend == "auto":
        backend = "exact" if (q <= 256 and level <= cyclotomic.LEVEL_CAP) else "float"
    if backend == "exact":
        chib = chi.conj()
        counter = np.zeros(level, dtype=np.int64)
        for t in range(q):
            k1 = chib.value_exponent(t, level)
            k2 = chi.value_exponent(t + 1, level)
            if k1 is None or k2 is None:
                continue
            for u in range(q):
                k3 = chi.value_exponent(u, level)
                k4 = chib.value_exponent(u + 1, level)
                k5 = psi.value_exponent(u * t - 1, level)
                if k3 is None or k4 is None or k5 is None:
                    continue
                counter[(k1 + k2 + k3 + k4 + k5) % level] += 1
        return ExpSumValue.from_counts(level, counter)
    # float backend: two matrix-vector products on the (u t - 1) index grid
    chib = chi.conj()
    x1 = np.array([chib(t) * chi(t + 1) for t in range(q)])
    x2 = np.array([chi(u) * chib(u + 1) for u in range(q)])
    pv = psi.complex_table()
    m = pv[_ut_index(q)]
    return ExpSumValue(complex(x1 @ m @ x2), None, "float", level)


# -- reductions to prime powers --------------------------------------------


def v_general(
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    args: VArgs,
    use_closed: bool = True,
) -> ExpSumValue:
    """V at composite modulus via the coprime-twist and CRT reductions.

    Strips the part of (m1, m2, m3, r) coprime to q, factors the remainder
    over the prime powers of q, and multiplies local evaluations with the
    induced twist factors.  Local factors use the closed forms where an
    exact clause applies (unless use_closed is False).
    """
    if chi.q != psi.q:
        raise ValueError("chi and psi must share a modulus")
    q = max(chi.q, 1)
    m1q, m1c = _q_part(args.m1, q)
    m2q, m2c = _q_part(args.m2, q)
    m3q, m3c = _q_part(args.m3, q)
    rq, rc = _q_part(args.r, q)
    twist = psi.evaluate(m1c * m2c * m3c) * psi.conj().evaluate(rc)
    local = _v_split(chi, psi, m1q, m2q, m3q, rq, use_closed)
    exact = twist * local.exact if local.exact is not None else None
    numeric = local.numeric * twist.embed()
    backend = "exact" if exact is not None else "float"
    return ExpSumValue(numeric, exact, backend, exact.level if exact is not None else None)


def _q_part(m: int, q: int) -> tuple[int, int]:
    coprime, qpart = split_q_infinity(m, q)
    return qpart, coprime


def _v_split(chi, psi, m1, m2, m3, r, use_closed) -> ExpSumValue:
    q = max(chi.q, 1)
    factors = chi.modulus.factors
    if len(factors) <= 1:
        return _v_local(chi, psi, VArgs(m1, m2, m3, r), use_closed)
    p, beta = factors[0]
    q1 = p**beta
    q2 = q // q1
    chi1, psi1 = chi.local_at(p), psi.local_at(p)
    chi2 = _complement(chi, p)
    psi2 = _complement(psi, p)
    m11, m12 = _split_pk(m1, p)
    m21, m22 = _split_pk(m2, p)
    m31, m32 = _split_pk(m3, p)
    r1, r2 = _split_pk(r, p)
    twist = (
        psi1.evaluate(m12 * m22 * m32)
        * psi1.conj().evaluate(q2 * r2)
        * psi2.evaluate(m11 * m21 * m31)
        * psi2.conj().evaluate(q1 * r1)
    )
    v1 = _v_local(chi1, psi1, VArgs(m11, m21, m31, r1), use_closed)
    v2 = _v_split(chi2, psi2, m12, m22, m32, r2, use_closed)
    if v1.exact is not None and v2.exact is not None:
        exact = twist * v1.exact * v2.exact
        return ExpSumValue(exact.embed(), exact, "exact", exact.level)
    return ExpSumValue(twist.embed() * v1.numeric * v2.numeric, None, "float", None)


def _split_pk(m: int, p: int) -> tuple[int, int]:
    v = _valuation_capped(m, p)
    return p**v, m // p**v


def _complement(chi: DirichletCharacter, p: int) -> DirichletCharacter:
    q2 = chi.q // p ** chi.modulus.valuation(p)
    fm = factorize(q2)
    exps = tuple(loc for (pp, _), loc in zip(chi.modulus.factors, chi.local_exponents) if pp != p)
    return DirichletCharacter(fm, exps)


def _v_local(chi, psi, args: VArgs, use_closed: bool) -> ExpSumValue:
    if use_closed and chi.q > 1:
        p = chi.modulus.factors[0][0]
        if args.in_cone(p) and (chi.is_principal() or chi.is_primitive()):
            res = v_closed_primepower(chi, psi, args)
            if res.exact_clause:
                return res.value
    if chi.q == 1:
        return ExpSumValue(1.0 + 0j, CyclotomicNumber.one(), "exact", 1)
    return v_bruteforce(chi, psi, args)
