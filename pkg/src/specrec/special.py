"""Numeric kernels: complex log-Gamma, the G and script-G gamma factors,
Bessel J of complex order, Hurwitz zeta, Dirichlet and GL(3) L-values,
Gauss hypergeometric series, and the Voronoi-type Dirichlet series.

Everything targets ~1e-12 relative accuracy in the strips the experiments
use (heights up to a few hundred).  Gamma factors are assembled in log
space so that trigonometric and Gamma growth cancel before exponentiation.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, lcm, log, pi

import numpy as np

from .arith import factorize, inverse_mod, moebius
from .characters import DirichletCharacter
from .exp_sums import gauss

# Lanczos coefficients, g = 607/128, 15 terms (Godfrey's set)
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])

_LOG_2PI = log(2 * pi)


def loggamma(z: complex) -> complex:
    """log Gamma(z), correct modulo 2*pi*i (always exponentiated downstream)."""
    z = complex(z)
    if z.real < 0.5:
        return np.log(pi) - _log_sin_pi(z) - loggamma(1 - z)
    zz = z - 1
    series = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        series += _LANCZOS_C[k] / (zz + k)
    t = zz + _LANCZOS_G + 0.5
    return 0.5 * _LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(series)


def gamma(z: complex) -> complex:
    return np.exp(loggamma(z))


def loggamma_vec(z: np.ndarray) -> np.ndarray:
    """Vectorized log Gamma, correct mod 2*pi*i."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        zz = z[right] - 1
        series = np.full_like(zz, _LANCZOS_C[0])
        for k in range(1, len(_LANCZOS_C)):
            series += _LANCZOS_C[k] / (zz + k)
        t = zz + _LANCZOS_G + 0.5
        out[right] = 0.5 * _LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(series)
    if np.any(~right):
        w = z[~right]
        out[~right] = np.log(pi) - _log_sin_vec(pi * w) - loggamma_vec(1 - w)
    return out


def _log_sin_pi(z: complex) -> complex:
    # stable for large |Im z|; correct mod 2*pi*i
    iz = 1j * pi * z
    if z.imag >= 0:
        return -iz + np.log1p(-np.exp(2 * iz) + 0j) + np.log(0.5j)
    return iz + np.log1p(-np.exp(-2 * iz) + 0j) - np.log(2j)


def _log_cos(w: complex) -> complex:
    # log cos(w), stable for large |Im w|, mod 2*pi*i
    iw = 1j * w
    if w.imag >= 0:
        return -iw + np.log1p(np.exp(2 * iw) + 0j) - np.log(2)
    return iw + np.log1p(np.exp(-2 * iw) + 0j) - np.log(2)


def _log_sin(w: complex) -> complex:
    return _log_sin_pi(w / pi)


def _check_pole_distance(s: complex, poles_at, tol: float = 1e-6):
    d = poles_at(s)
    if d < tol:
        raise ValueError(f"argument within {d:.2e} of a pole")


def G_pm(s: complex, sign: int) -> complex:
    """(2 pi)^(-s) Gamma(s) exp(+-i pi s / 2); simple poles at s = 0, -1, ..."""
    s = complex(s)
    _check_pole_distance(s, lambda z: abs(z - round(z.real)) if z.real < 0.5 and abs(z.imag) < 0.5 else 1.0)
    return np.exp(-s * _LOG_2PI + loggamma(s) + sign * 1j * pi * s / 2)


def G_j(s: complex, j: int) -> complex:
    """2 (2 pi)^(-s) Gamma(s) cos(pi s/2) for j = 0, sin for j = 1."""
    s = complex(s)
    trig = _log_cos(pi * s / 2) if j == 0 else _log_sin(pi * s / 2)
    return np.exp(np.log(2) - s * _LOG_2PI + loggamma(s) + trig)


def _log_cos_vec(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    up = w.imag >= 0
    out[up] = -1j * w[up] + np.log1p(np.exp(2j * w[up])) - np.log(2)
    out[~up] = 1j * w[~up] + np.log1p(np.exp(-2j * w[~up])) - np.log(2)
    return out


def _log_sin_vec(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    up = w.imag >= 0
    out[up] = -1j * w[up] + np.log1p(-np.exp(2j * w[up])) + np.log(0.5j)
    out[~up] = 1j * w[~up] + np.log1p(-np.exp(-2j * w[~up])) - np.log(2j)
    return out


def G_pm_vec(s: np.ndarray, sign: int) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    return np.exp(-s * _LOG_2PI + loggamma_vec(s) + sign * 1j * pi * s / 2)


def script_G_vec(mu, s: np.ndarray, sign: int) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    l0 = np.zeros_like(s)
    l1 = np.zeros_like(s)
    for m in mu:
        z = s + complex(m)
        lg = loggamma_vec(z)
        l0 += np.log(2) - z * _LOG_2PI + lg + _log_cos_vec(pi * z / 2)
        l1 += np.log(2) - z * _LOG_2PI + lg + _log_sin_vec(pi * z / 2)
    shift = np.maximum(l0.real, l1.real)
    return np.exp(shift) * (0.5 * np.exp(l0 - shift) + sign * (0.5 / 1j) * np.exp(l1 - shift))


def omega_pm(tau: float, sign: int) -> float:
    """Exponential decay exponent of G^sign on the imaginary direction."""
    if tau == 0:
        return 0.0
    return abs(tau) if (tau > 0) == (sign > 0) else 0.0


def script_G(mu, s: complex, sign: int) -> complex:
    """(1/2) prod_j G_0(s + mu_j) +- (1/2i) prod_j G_1(s + mu_j)."""
    s = complex(s)
    l0 = 0j
    l1 = 0j
    for m in mu:
        z = s + complex(m)
        _check_pole_distance(z, lambda w: abs(w - round(w.real)) if w.real < 0.5 and abs(w.imag) < 0.5 else 1.0)
        l0 += np.log(2) - z * _LOG_2PI + loggamma(z) + _log_cos(pi * z / 2)
        l1 += np.log(2) - z * _LOG_2PI + loggamma(z) + _log_sin(pi * z / 2)
    shift = max(l0.real, l1.real)
    return np.exp(shift) * (0.5 * np.exp(l0 - shift) + sign * (0.5 / 1j) * np.exp(l1 - shift))


# -- Bessel J of complex order by power series ------------------------------


def bessel_J(order: complex, x: float, tol: float = 1e-14, max_terms: int = 400) -> complex:
    """J_order(x) for x > 0 by the ascending series; moderate x only.

    The series loses one digit roughly per unit of x past ~25; arguments
    beyond 64 are rejected (the transform kernels use integral
    representations in that regime).
    """
    if x <= 0:
        raise ValueError("x must be positive")
    if x > 64:
        raise ValueError(f"series evaluation unreliable at x = {x}")
    nu = complex(order)
    c = np.exp(nu * np.log(x / 2) - loggamma(nu + 1))
    acc = c
    biggest = abs(c)
    for k in range(1, max_terms):
        c *= -(x * x / 4) / (k * (nu + k))
        acc += c
        biggest = max(biggest, abs(c))
        if abs(c) < tol * max(abs(acc), biggest * 1e-3) and k > x / 2:
            return acc
    raise ValueError("Bessel series did not converge")


def kernel_J_plus(r: float, x: float) -> float:
    """pi*i/sinh(pi r) * (J_{2ir} - J_{-2ir})(4 pi x), real for real r, x."""
    y = 4 * pi * x
    j = bessel_J(2j * r, y)
    # J_{-2ir}(y) is the conjugate for real arguments
    val = pi * 1j * (j - np.conj(j)) / np.sinh(pi * r) if r != 0 else _kernel_J_plus_r0(y)
    return float(val.real) if r != 0 else float(val)


def _kernel_J_plus_r0(y: float) -> float:
    # limit r -> 0: 2 * d/dnu J_nu(y) at nu = 0 ... use a small finite difference
    h = 1e-4
    j = bessel_J(2j * h, y)
    return float((pi * 1j * (j - np.conj(j)) / np.sinh(pi * h)).real)


def kernel_J_hol(k: int, x: float) -> complex:
    """2 pi i^(-k) J_{k-1}(4 pi x)."""
    y = 4 * pi * x
    jv = bessel_J(k - 1.0, y) if y <= 64 else bessel_J_integer(k - 1, y)
    return 2 * pi * (1j ** (-k % 4)) * jv


def bessel_J_integer(n: int, y: float, pts_per_period: int = 12) -> float:
    """J_n(y) for integer n via the bounded integral representation.

    Stable at any argument size; cost grows linearly with n + y.
    """
    m = int((abs(y) + n + 30) / (2 * pi) * pts_per_period) * 2 + 64
    theta = (np.arange(m) + 0.5) * (pi / m)
    vals = np.cos(n * theta - y * np.sin(theta))
    return float(vals.mean())


# -- Hurwitz zeta by Euler-Maclaurin ----------------------------------------

_BERNOULLI = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330,
    854513.0 / 138, -236364091.0 / 2730,
]


def hurwitz_zeta(s: complex, a) -> complex:
    """zeta(s, a) for 0 < a <= 1 (scalars or arrays in a), s != 1."""
    out = hurwitz_zeta_vec(s, np.atleast_1d(np.asarray(a, dtype=float)))
    return complex(out[0]) if np.isscalar(a) or np.asarray(a).ndim == 0 else out


def hurwitz_zeta_vec(s: complex, a: np.ndarray) -> np.ndarray:
    s = complex(s)
    if abs(s - 1) < 1e-12:
        raise ValueError("pole at s = 1")
    if np.any(a <= 0) or np.any(a > 1):
        raise ValueError("a must lie in (0, 1]")
    n_head = max(14, int(1.3 * abs(s.imag)) + 12)
    n = np.arange(n_head)[:, None] + a[None, :]
    head = np.power(n, -s).sum(axis=0)
    na = n_head + a
    tail = np.power(na, 1 - s) / (s - 1) + 0.5 * np.power(na, -s)
    poch = 1.0 + 0j
    na_pow = np.power(na, -s - 1)
    for k, b in enumerate(_BERNOULLI, start=1):
        # Pochhammer (s)_(2k-1) accumulated two factors at a time
        poch *= (s + 2 * k - 3) * (s + 2 * k - 2) if k > 1 else s
        tail += b / _factorial(2 * k) * poch * na_pow
        na_pow = na_pow / (na * na)
    return head + tail


@lru_cache(maxsize=64)
def _factorial(n: int) -> float:
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def zeta(s: complex) -> complex:
    return complex(hurwitz_zeta_vec(s, np.array([1.0]))[0])


# -- Dirichlet L-functions ---------------------------------------------------


def dirichlet_L(s: complex, psi: DirichletCharacter) -> complex:
    """Analytic continuation of sum psi(n) n^(-s) (the series mod q, i.e.
    the primitive L times the Euler factors at p | q, p not dividing the
    conductor)."""
    q = max(psi.q, 1)
    if q == 1:
        return zeta(s)
    if psi.is_principal() and abs(s - 1) < 1e-12:
        raise ValueError("pole at s = 1 for principal characters")
    table = psi.complex_table()
    a = np.arange(1, q + 1, dtype=float) / q
    zs = hurwitz_zeta_vec(s, a)
    vals = np.concatenate([table[1:], table[:1]])  # a = q means residue 0
    return complex(np.power(complex(q), -s) * (vals * zs).sum())


def dirichlet_L_primitive(s: complex, psi: DirichletCharacter) -> complex:
    """L(s, psi*) for the primitive character inducing psi."""
    star, _ = psi.primitive_part()
    return dirichlet_L(s, star)


def completed_L(s: complex, psi: DirichletCharacter) -> complex:
    """Lambda(s, psi) = (q/pi)^((s+a)/2) Gamma((s+a)/2) L(s, psi), psi primitive."""
    if not psi.is_primitive() and psi.q > 1:
        raise ValueError("completed L requires a primitive character")
    a = 0 if psi.parity == 1 else 1
    q = max(psi.q, 1)
    return np.exp(((s + a) / 2) * np.log(q / pi) + loggamma((s + a) / 2)) * dirichlet_L(s, psi)


def root_number(psi: DirichletCharacter) -> complex:
    """epsilon(psi) = tau(psi) / (i^a sqrt(q)) for primitive psi."""
    a = 0 if psi.parity == 1 else 1
    q = max(psi.q, 1)
    return gauss(psi, 1).numeric / (1j**a * np.sqrt(q))


def functional_equation_residual(psi: DirichletCharacter, s: complex) -> float:
    """|Lambda(s, psi) - eps(psi) Lambda(1-s, conj psi)| for primitive psi."""
    lhs = completed_L(s, psi)
    rhs = root_number(psi) * completed_L(1 - s, psi.conj())
    return abs(lhs - rhs)


# -- GL(3) L-series ----------------------------------------------------------


def gl3_L(s: complex, source, psi: DirichletCharacter, dual: bool = True) -> complex:
    """L-value of the twisted GL(3) series.

    dual=True gives the continuation of sum_n A(n,1) psi(n) n^(-s); for an
    Eisenstein source this is the product of shifted Dirichlet L-values.
    Table sources use the raw series and require absolute convergence.
    """
    if getattr(source, "kind", "") == "eisenstein":
        out = 1 + 0j
        for m in source.mu:
            shift = -m if dual else m
            out *= dirichlet_L(s + shift, psi)
        return out
    if s.real <= 1.5:
        raise ValueError("table sources only support Re(s) > 1.5 (raw series)")
    total = 0j
    n = 1
    while True:
        try:
            a = source.coefficient(n, 1) if dual else source.coefficient(1, n)
        except KeyError:
            break
        total += a * psi(n) * np.power(float(n), -s)
        n += 1
    return total


def gl3_L_series(s: complex, source, psi: DirichletCharacter, n_max: int = 100_000, dual: bool = True) -> complex:
    """Raw truncated series sum A(n,1) psi(n) n^(-s) (character cancellation
    makes this converge well past the absolute-convergence bound)."""
    coeffs = edge_sequence(source, n_max, dual=dual)
    q = max(psi.q, 1)
    table = psi.complex_table()
    n = np.arange(1, n_max + 1)
    return complex((coeffs[1:] * table[n % q] * np.power(n.astype(float), -complex(s))).sum())


# -- Gauss hypergeometric series ---------------------------------------------


def hyp2f1(a: complex, b: complex, c: complex, x: complex, tol: float = 1e-15, max_terms: int = 10000) -> complex:
    """2F1(a, b; c; x) by the defining series, |x| < 1."""
    if abs(x) >= 1:
        raise ValueError("series requires |x| < 1")
    term = 1 + 0j
    acc = 1 + 0j
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        acc += term
        if abs(term) < tol * max(1.0, abs(acc)) and k > 4:
            return acc
    raise ValueError("2F1 series did not converge")


# -- Voronoi-type series ------------------------------------------------------


@lru_cache(maxsize=32)
def _edge_sequence_cached(mu_key, n_max: int, dual: bool) -> np.ndarray:
    """A(n, 1) (dual) or A(1, n) for n <= n_max, by two divisor sieves."""
    mu = [complex(*pair) for pair in mu_key]
    if not dual:
        mu = [-m for m in mu]
    n = np.arange(n_max + 1, dtype=float)
    n[0] = 1.0
    base = [np.power(n, m) for m in mu]  # n^(mu_j)
    conv = _dirichlet_convolve(base[0], base[1])
    return _dirichlet_convolve(conv, base[2])


def _dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n_max = len(a) - 1
    out = np.zeros(n_max + 1, dtype=complex)
    for d in range(1, n_max + 1):
        out[d::d] += a[d] * b[1 : n_max // d + 1]
    return out


def edge_sequence(source, n_max: int, dual: bool = True) -> np.ndarray:
    """[A(n,1) for n <= n_max] (or A(1,n)); vectorized for Eisenstein."""
    if getattr(source, "kind", "") == "eisenstein":
        key = tuple((m.real, m.imag) for m in source.mu)
        return _edge_sequence_cached(key, n_max, dual)
    out = np.zeros(n_max + 1, dtype=complex)
    for n in range(1, n_max + 1):
        out[n] = source.coefficient(n, 1) if dual else source.coefficient(1, n)
    return out


def voronoi_phi(c: int, d: int, ell: int, w: complex, source, n_max: int = 200_000):
    """Phi(c, d, ell; w) = sum_n A(ell, n) e(n dbar / c) n^(-w), Re w > 1.

    Returns (value, tail_estimate).  dbar is the inverse of d mod c
    (c = 1 allows d = 0).
    """
    w = complex(w)
    if w.real <= 1:
        raise ValueError("series converges only for Re(w) > 1")
    if c < 1 or gcd(d, c) != 1 and c > 1:
        raise ValueError("need gcd(d, c) = 1")
    dbar = inverse_mod(d % c, c) if c > 1 else 0
    a_1n = edge_sequence(source, n_max, dual=False)
    n = np.arange(1, n_max + 1, dtype=float)
    tw = np.exp(2j * pi * (dbar * np.arange(1, n_max + 1) % c) / c)
    # A(ell, n) = sum_{e | (ell, n)} mu(e) A(ell/e, 1) A(1, n/e)
    total = 0j
    for e in factorize(ell).divisors():
        if moebius(e) == 0:
            continue
        a_edge = source.coefficient(ell // e, 1)
        m = np.arange(1, n_max // e + 1)
        total += (
            moebius(e)
            * a_edge
            * np.power(float(e), -w)
            * (a_1n[1 : n_max // e + 1] * tw[e * m - 1] * np.power(m.astype(float), -w)).sum()
        )
    tail = _d3_tail(n_max, w.real - 0.0) * _max_edge(source, ell)
    return complex(total), float(tail)


def _max_edge(source, ell: int) -> float:
    return max(abs(source.coefficient(a, 1)) for a in factorize(ell).divisors())


def _d3_tail(n_max: int, sigma: float) -> float:
    # sum_{n > N} d3(n) n^(-sigma) <= N^(1-sigma) (log N + 3)^2 / (sigma - 1)
    if sigma <= 1:
        return float("inf")
    return n_max ** (1 - sigma) * (log(n_max) + 3) ** 2 / (sigma - 1)


def kloosterman_row(m: int, modulus: int) -> np.ndarray:
    """[S(m, k; modulus) for k mod modulus] by one pass over the units."""
    out = np.zeros(modulus, dtype=complex)
    if modulus == 1:
        return np.ones(1, dtype=complex)
    k = np.arange(modulus)
    for x in range(1, modulus):
        if gcd(x, modulus) != 1:
            continue
        xbar = inverse_mod(x, modulus)
        out += np.exp(2j * pi * ((m * x + k * xbar) % modulus) / modulus)
    return out


def voronoi_xi(c: int, d: int, ell: int, w: complex, source, n_max: int = 100_000):
    """Xi(c, d, ell; w): the Kloosterman-twisted double series, Re w > 0.

    Returns (value, tail_estimate).
    """
    w = complex(w)
    if w.real <= 0:
        raise ValueError("series converges only for Re(w) > 0")
    a_n1 = edge_sequence(source, n_max, dual=True)
    total = 0j
    theta = _source_theta_for_tail(source)
    tail = 0.0
    for n1 in factorize(c * ell).divisors():
        mod1 = c * ell // n1
        a1n_val = {e: source.coefficient(1, n1 // e) for e in factorize(n1).divisors()}
        srow = kloosterman_row(d * ell % mod1, mod1)
        for e in factorize(n1).divisors():
            if moebius(e) == 0:
                continue
            m = np.arange(1, n_max // e + 1)
            tw = srow[(e * m) % mod1]
            coef = moebius(e) * a1n_val[e] / (e * n1) * np.power(float(e * 1), 0)
            x = np.power((e * m * n1**2) / float(c**3 * ell), -w) * np.power(m.astype(float), -1.0) / e
            inner = (a_n1[1 : n_max // e + 1] * tw * x).sum()
            total += coef * e * inner  # the /(n2) with n2 = e m absorbed as /e /m
            tail += abs(coef) * mod1 * _d3_tail(max(2, n_max // e), 1 + w.real - theta)
    return complex(c * total), float(c * tail)


def _source_theta_for_tail(source) -> float:
    if getattr(source, "kind", "") == "eisenstein":
        return max(abs(m.real) for m in source.mu)
    return 5.0 / 14.0


def twisted_edge_table(source, s: complex, modulus: int) -> np.ndarray:
    """[sum_n A(n,1) e(k n / M) n^(-s)]_{k mod M} by Hurwitz continuation.

    Exact analytic continuation of the additively twisted edge series: the
    class sums are Hurwitz zetas, combined by two multiplicative
    convolutions mod M and a final DFT.  Requires s away from 1 + mu_j.
    """
    if getattr(source, "kind", "") != "eisenstein":
        raise ValueError("closed twisted series requires an Eisenstein source")
    m_grid = np.arange(modulus)
    u = []
    for m in source.mu:
        a = (np.where(m_grid == 0, modulus, m_grid)) / modulus
        u.append(np.power(complex(modulus), m - s) * hurwitz_zeta_vec(s - m, a))
    h2 = np.zeros(modulus, dtype=complex)
    idx = np.outer(m_grid, m_grid) % modulus
    np.add.at(h2, idx, np.outer(u[0], u[1]))
    h3 = np.zeros(modulus, dtype=complex)
    np.add.at(h3, idx, np.outer(h2, u[2]))
    # T[k] = sum_j h3[j] e(k j / M), an inverse DFT at any length
    return np.fft.ifft(h3) * modulus
