"""The localized test-function pair and its transform chain.

The pair is

    h(t)      = prod_{n=1..C} ((t^2 + (n-1/2)^2)/T^2)
                * (sum_{+-} exp(-((t +- T)/U)^2))^2,
    h_hol(k)  = plateau((k - 1 - T)/U),

with 1 <= U <= T and C < T - 2U.  The plateau is the standard mollifier
ratio built from exp(-1/x): equal to 1 on [-1, 1], supported on [-2, 2].

Transforms implemented here:
  * F h (Fourier-type), F^hol h_hol,
  * the Bessel kernel transforms K h, K^hol h_hol and H = their sum,
    where K h is evaluated through the cosine-transform representation
    (K h)(x) = (2/pi^2) int_0^inf cos(4 pi x cosh t) (F h)(t/pi) dt,
  * D h, D^hol h_hol and the Mellin identity for H-hat,
  * the spectral-weight transform curly-H via either the contour integral
    against H-hat or the hypergeometric kernel representation,
  * the contour <-> 2F1 identity residual check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import pi

import numpy as np

from .quadrature import de_nodes, gl_nodes, oscillatory_tail, panel_nodes, quad_de, wynn_epsilon
from .special import (
    G_pm,
    G_pm_vec,
    bessel_J_integer,
    gamma,
    hyp2f1,
    kernel_J_plus,
    loggamma,
    loggamma_vec,
    script_G,
    script_G_vec,
)

_LOG_2PI = np.log(2 * pi)


def plateau(x) -> np.ndarray:
    """Smooth cutoff: 1 on [-1,1], 0 outside [-2,2], exp(-1/x) mollifier ratio."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    out[x <= 1] = 1.0
    mid = (x > 1) & (x < 2)
    if np.any(mid):
        a = np.exp(-1.0 / (2 - x[mid]))
        b = np.exp(-1.0 / (x[mid] - 1))
        out[mid] = a / (a + b)
    return out


@dataclass(frozen=True)
class TestFunctionPair:
    T: float
    U: float
    C: int

    def __post_init__(self):
        if not (1 <= self.U <= self.T):
            raise ValueError("need 1 <= U <= T")
        if not (0 < self.C < self.T - 2 * self.U):
            raise ValueError("need 0 < C < T - 2U")

    # -- the pair itself ---------------------------------------------------

    def h(self, t):
        """h(t) for real or complex t (vectorized)."""
        t = np.asarray(t, dtype=complex)
        prod = np.ones_like(t)
        for n in range(1, self.C + 1):
            prod = prod * (t * t + (n - 0.5) ** 2) / self.T**2
        bump = np.exp(-(((t + self.T) / self.U) ** 2)) + np.exp(-(((t - self.T) / self.U) ** 2))
        out = prod * bump * bump
        return out if out.shape else complex(out)

    def h_hol(self, k):
        return plateau((np.asarray(k, dtype=float) - 1 - self.T) / self.U)

    def hol_k_range(self) -> np.ndarray:
        lo = int(np.floor(self.T + 1 - 2 * self.U)) - 2
        hi = int(np.ceil(self.T + 1 + 2 * self.U)) + 2
        ks = np.arange(max(2, lo - lo % 2), hi + 1, 2)
        return ks[self.h_hol(ks) > 0]

    # -- Fourier-type transforms --------------------------------------------

    @property
    def _r_grid(self):
        return _r_grid_cached(self.T, self.U, self.C)

    def F(self, u):
        """(F h)(u) = int h(r) r tanh(pi r) e(-ru) dr, real-valued; u array ok."""
        r, w, hr = self._r_grid
        u = np.atleast_1d(np.asarray(u, dtype=float))
        whr = w * hr
        out = np.empty(len(u))
        for i in range(0, len(u), 4096):
            out[i : i + 4096] = np.cos(2 * pi * np.outer(u[i : i + 4096], r)) @ whr
        return out if out.size > 1 else float(out[0])

    def F_hol(self, u):
        """(F^hol h_hol)(u) = -2 int h_hol(2r+1) r e(-ru) dr (complex)."""
        lo, hi = (self.T - 2 * self.U) / 2 - 1, (self.T + 2 * self.U) / 2 + 1
        nodes, w = panel_nodes(lo, hi, max(24, int(8 * self.U)), 12)
        vals = self.h_hol(2 * nodes + 1) * nodes
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = -2 * (np.exp(-2j * pi * np.outer(u, nodes)) @ (w * vals))
        return out if out.size > 1 else complex(out[0])

    def fh_table(self, u_max: float = 0.55, spacing: float = 2.5e-4):
        return _fh_table_cached(self.T, self.U, self.C, u_max, spacing)

    def F_shifted(self, u):
        """(F h)(u) for u >= 0 as e^(-2 pi A u) * G(u), A = C + 1/4.

        The r-contour shifts down by iA (h's zeros cancel the tanh poles),
        making the exponential envelope explicit; G is O(TU)-sized, so the
        product is accurate even where (F h)(u) underflows the direct
        quadrature.  Returns (G(u), A).
        """
        a_shift = self.C + 0.25
        r, w, _ = self._r_grid
        v = r - 1j * a_shift
        hv = self.h(v) * v * np.tanh(pi * v)
        whv = w * hv
        u = np.atleast_1d(np.asarray(u, dtype=float))
        g = np.empty(len(u), dtype=complex)
        for i in range(0, len(u), 4096):
            g[i : i + 4096] = np.exp(-2j * pi * np.outer(u[i : i + 4096], r)) @ whv
        return (g if g.size > 1 else complex(g[0])), a_shift

    def vanishing_moment(self, ell: int, u_cut: float = 14.0) -> complex:
        """int (F h)(u) e(i ell u) du over |u| <= u_cut, |ell| <= C.

        Uses the shifted representation on the exponentially growing side;
        the true tail beyond u_cut is O(TU e^(-(2C+1/2-2|ell|) pi u_cut)).
        """
        ell = abs(int(ell))
        if ell > self.C:
            raise ValueError("moment vanishing only holds for |ell| <= C")
        n = max(360, int(20 * u_cut))
        nodes, w = panel_nodes(0.0, u_cut, n, 12)
        g, a_shift = self.F_shifted(nodes)
        # u > 0 side: Fh(u) e^(-2 pi ell u); u < 0 side: Fh(|u|) e^(+2 pi ell |u|)
        decay = np.exp(-2 * pi * (a_shift + ell) * nodes)
        grow = np.exp(-2 * pi * (a_shift - ell) * nodes)
        return complex(np.sum(w * g * (decay + grow)))

    def vanishing_moment_hol(self, ell: int, u_cut: float = 60.0) -> complex:
        """int (F^hol h_hol)(u) e(ell u) du over |u| <= u_cut via the closed
        window kernel: -2 int h_hol(2r+1) r sin(2 pi (ell - r) u_cut)/(pi (ell - r)) dr."""
        lo, hi = (self.T - 2 * self.U) / 2 - 1, (self.T + 2 * self.U) / 2 + 1
        n = max(200, int((hi - lo) * u_cut * 2.5))
        nodes, w = panel_nodes(lo, hi, n, 12)
        vals = self.h_hol(2 * nodes + 1) * nodes
        kern = np.sin(2 * pi * (ell - nodes) * u_cut) / (pi * (ell - nodes))
        return complex(-2 * np.sum(w * vals * kern))

    # -- Bessel kernel transforms ---------------------------------------------

    def K(self, x, x_max_hint: float = 60.0):
        """(K h)(x) through the cosine-transform representation, on exact
        (F h) values at a cached node set resolving x up to the hint."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t, w, fh = _kt_grid(self, max(x_max_hint, float(np.max(x))))
        out = np.empty(len(x))
        cosh_t = np.cosh(t)
        wf = w * fh
        for i in range(0, len(x), 64):
            blk = x[i : i + 64]
            out[i : i + 64] = (2 / pi**2) * (np.cos(4 * pi * np.outer(blk, cosh_t)) @ wf)
        return out if out.size > 1 else float(out[0])

    def K_spectral(self, x: float):
        """(K h)(x) directly from the Bessel-kernel spectral integral
        (series-based kernel; small x only).  Used as a cross-route oracle.
        The kernel oscillates in r roughly like cos(2 r log r), so the grid
        is much denser than the one h itself needs."""
        r_max = self.T + 7.5 * self.U
        nodes, w = panel_nodes(0.05, r_max, int(r_max * 14), 10)
        hr = np.real(self.h(nodes)) * nodes * np.tanh(pi * nodes)
        vals = np.array([kernel_J_plus(rr, x) for rr in nodes])
        return float(2 * np.sum(w * hr * vals) / (2 * pi**2))

    def K_hol(self, x):
        """(K^hol h_hol)(x): finite sum over even weights in the window."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        ks = self.hol_k_range()
        out = np.zeros(len(x), dtype=complex)
        ymax = float(4 * pi * np.max(x))
        theta_m = max(600, int((ymax + np.max(ks) + 40) * 3))
        theta = (np.arange(theta_m) + 0.5) * (pi / theta_m)
        sin_t = np.sin(theta)
        for k in ks:
            jk = np.cos((k - 1) * theta[None, :] - 4 * pi * x[:, None] * sin_t[None, :]).mean(axis=1)
            out += (k - 1) / (2 * pi**2) * self.h_hol(k) * 2 * pi * (1j ** (-k % 4)) * jk
        return out if out.size > 1 else complex(out[0])

    def H(self, x):
        return self.K(x) + self.K_hol(x)

    # -- Mellin-side transforms -----------------------------------------------

    def D(self, s: complex, tau_resolution: float = 80.0) -> complex:
        """(D h)(s) = int (F h)(u) (cosh^2 pi u)^(-s) du, -C - 1/4 < Re s < C + 1/4.

        Evaluated through the shifted representation
        (F h)(u) = e^(-2 pi (C+1/4) u) G(u) on u >= 0 (even integrand), so
        the (cosh)^(-2 Re s) growth multiplies explicit exponentials
        instead of amplifying quadrature noise.
        """
        s = complex(s)
        if not -self.C - 0.25 < s.real < self.C + 0.25:
            raise ValueError("s outside the convergence strip")
        u, w, g, a_shift = _du_grid(self, max(tau_resolution, abs(s.imag) + 10))
        vals = np.exp(-2 * pi * a_shift * u - 2 * s * np.log(np.cosh(pi * u)))
        return complex(2 * np.sum(w * g * vals))

    def D_direct(self, s: complex, u_max: float = 10.0) -> complex:
        """(D h)(s) by plain real-line quadrature (cross-route; Re s >= 0 only)."""
        s = complex(s)
        nodes, w = panel_nodes(-u_max, u_max, max(300, int(20 * (abs(s.imag) + 10))), 12)
        fh = self.F(nodes)
        return complex(np.sum(w * fh * np.exp(-2 * s * np.log(np.cosh(pi * nodes)))))

    def D_hol(self, s: complex, k_max: int = 40) -> complex:
        """(D^hol h_hol)(s) = sum_k (-1)^k int_{k-1/2}^{k+1/2} (F^hol)(u) (cos^2 pi u)^(-s) du.

        Double-exponential nodes absorb the endpoint singularities
        (cos^2 pi u)^(-s) for Re(s) < 1/2; grids and F^hol values are cached.
        """
        s = complex(s)
        if s.real >= 0.5:
            raise ValueError("requires Re(s) < 1/2")
        u, w, fhol, signs = _dhol_grid(self, k_max)
        logc = np.log(np.abs(np.cos(pi * u)) + 1e-300)
        return complex(np.sum(signs * w * fhol * np.exp(-2 * s * logc)))

    def hatH(self, s: complex, tau_resolution: float = 80.0) -> complex:
        """H-hat(s) through the Mellin-Fourier identity (the workhorse route):

        H-hat(2s') = (2 pi)^(-2s')/(2 sqrt(pi)) [ Gamma(s')/Gamma(1/2-s') D h(s')
                     + Gamma(s'+1/2)/Gamma(1-s') D^hol(s') ]  at s' = s/2.
        """
        sp = complex(s) / 2
        pref = np.exp(-2 * sp * _LOG_2PI) / (2 * np.sqrt(pi))
        t1 = np.exp(loggamma(sp) - loggamma(0.5 - sp)) * self.D(sp, tau_resolution)
        t2 = np.exp(loggamma(sp + 0.5) - loggamma(1 - sp)) * self.D_hol(sp)
        return complex(pref * (t1 + t2))

    def mellin_H_direct(self, s: complex, x_break: float = 18.0, x_eps: float = 0.03) -> complex:
        """H-hat(2s) = int_0^inf H(x) x^(2s-1) dx by direct quadrature.

        Panels on [x_eps, x_break] resolve the oscillation; the tail is
        summed in half-periods of the 4 pi x phase and Wynn-accelerated.
        H(x) << x^(2C+2) near 0 makes the cutoff x_eps harmless.
        """
        s = complex(s)
        n_panels = max(240, int(x_break * 30))
        nodes, w = panel_nodes(x_eps, x_break, n_panels, 12)
        hx = self.H(nodes)
        head = complex(np.sum(w * hx * np.power(nodes, 2 * s - 1)))

        def chunk(a, b):
            xs, ws = panel_nodes(a, b, 3, 12)
            return complex(np.sum(ws * self.H(xs) * np.power(xs, 2 * s - 1)))

        tail, err = oscillatory_tail(chunk, x_break, 0.25, n_terms=64)
        return head + tail

    # -- the spectral weight transform ---------------------------------------

    def main_term(self) -> tuple[float, float]:
        """(Maass mass, holomorphic mass) of the diagonal main term."""
        r, w, hr = self._r_grid
        maass = float(np.sum(w * hr) / (2 * pi**2))
        ks = self.hol_k_range()
        hol = float(np.sum((ks - 1) / (2 * pi**2) * self.h_hol(ks)))
        return maass, hol

    def hatH1_holsum(self) -> complex:
        """Closed finite-sum value of H-hat(1) = sum_k (k-1)/(4 pi^2) i^(-k) h_hol(k)."""
        ks = self.hol_k_range()
        return complex(np.sum((ks - 1) / (4 * pi**2) * (1j ** (-ks % 4)) * self.h_hol(ks)))


@lru_cache(maxsize=8)
def _r_grid_cached(T: float, U: float, C: int):
    pair = TestFunctionPair(T, U, C)
    r_max = T + 7.5 * U
    nodes, w = panel_nodes(-r_max, r_max, max(160, int(2 * r_max * 3)), 12)
    hr = np.real(pair.h(nodes)) * nodes * np.tanh(pi * nodes)
    return nodes, w, hr


@lru_cache(maxsize=8)
def _fh_table_cached(T: float, U: float, C: int, u_max: float, spacing: float):
    pair = TestFunctionPair(T, U, C)
    us = np.arange(0.0, u_max, spacing)
    vals = pair.F(us)
    return us, np.asarray(vals)


def _fh_support(pair: TestFunctionPair) -> float:
    us, vals = pair.fh_table(spacing=2e-3)
    scale = np.max(np.abs(vals))
    nz = np.nonzero(np.abs(vals) > 1e-17 * scale)[0]
    return float(us[nz[-1]] + 0.01) if len(nz) else 0.05


@lru_cache(maxsize=16)
def _kt_grid_cached(T: float, U: float, C: int, x_bucket: float):
    pair = TestFunctionPair(T, U, C)
    t_max = _fh_support(pair) * pi
    freq = 4 * x_bucket * np.sinh(t_max) + 20  # cycles per unit t (over 2 pi)
    n_panels = max(60, int(t_max * freq / 2.5))
    t, w = panel_nodes(0.0, t_max, n_panels, 12)
    fh = pair.F(t / pi)
    return t, w, np.asarray(fh)


def _kt_grid(pair: TestFunctionPair, x_max: float):
    bucket = float(2 ** np.ceil(np.log2(max(4.0, x_max))))
    return _kt_grid_cached(pair.T, pair.U, pair.C, bucket)


@lru_cache(maxsize=32)
def _du_grid_cached(T: float, U: float, C: int, tau_bucket: int):
    pair = TestFunctionPair(T, U, C)
    # G(u) = e^(2 pi A u) Fh(u) decays on the scale of Fh's support (~1);
    # the panel width must keep (cosh^2 pi u)^(-i tau) under ~1.2 cycles
    # per panel for |tau| up to the bucket
    u_max = 4.0
    n_panels = int(u_max * tau_bucket / 1.2) + 60
    nodes, w = panel_nodes(0.0, u_max, n_panels, 12)
    g, a_shift = pair.F_shifted(nodes)
    return nodes, w, np.asarray(g), a_shift


def _du_grid(pair: TestFunctionPair, tau_resolution: float):
    bucket = int(2 ** np.ceil(np.log2(max(16.0, tau_resolution))))
    return _du_grid_cached(pair.T, pair.U, pair.C, bucket)


@lru_cache(maxsize=16)
def _dhol_grid_cached(T: float, U: float, C: int, k_max: int):
    pair = TestFunctionPair(T, U, C)
    x_de, w_de = de_nodes(7)
    us, ws, signs = [], [], []
    for k in range(-k_max, k_max + 1):
        us.append(k + 0.5 * x_de)
        ws.append(0.5 * w_de)
        signs.append(np.full(len(x_de), (-1.0) ** (k % 2)))
    u = np.concatenate(us)
    w = np.concatenate(ws)
    sg = np.concatenate(signs)
    fhol = np.asarray(pair.F_hol(u))
    return u, w, fhol, sg


def _dhol_grid(pair: TestFunctionPair, k_max: int):
    return _dhol_grid_cached(pair.T, pair.U, pair.C, k_max)


# -- curly-H -------------------------------------------------------------------


def H_script_contour(
    pair: TestFunctionPair,
    mu,
    t: float,
    sign: int,
    sigma2: float = 0.5,
    s_max: float = 400.0,
) -> tuple[complex, float]:
    """curly-H^sign(t) = (1/2 pi i) int H-hat(s) script-G^sign((1-s)/2)
    G^(-sign)(s/2 + it) ds on Re(s) = sigma2 in (0, 1).

    Returns (value, tail estimate).  The non-exponential side of the
    contour is summed in panels and Wynn-accelerated.
    """
    if not 0 < sigma2 < 1:
        raise ValueError("sigma2 must lie in (0, 1)")

    def integrand(svals):
        out = np.empty(len(svals), dtype=complex)
        for i, s in enumerate(svals):
            out[i] = (
                pair.hatH(s, tau_resolution=min(s_max, 600.0))
                * script_G(mu, (1 - s) / 2, sign)
                * G_pm(s / 2 + 1j * t, -sign)
            )
        return out

    x, w = gl_nodes(10)

    def chunk(a, b):
        mid, half = (a + b) / 2, (b - a) / 2
        svals = sigma2 + 1j * (mid + half * x)
        return complex(np.sum(integrand(svals) * w) * half * 1j / (2j * pi))

    core = 0j
    core_height = min(40.0, s_max)
    n_core = max(30, int(core_height * 1.5))
    for a, b in zip(np.linspace(-core_height, core_height, n_core + 1)[:-1],
                    np.linspace(-core_height, core_height, n_core + 1)[1:]):
        core += chunk(a, b)
    up, err_up = oscillatory_tail(chunk, core_height, 2.0, n_terms=min(56, int((s_max - core_height) / 2)))
    dn, err_dn = oscillatory_tail(lambda a, b: chunk(-b, -a), core_height, 2.0,
                                  n_terms=min(56, int((s_max - core_height) / 2)))
    return core + up + dn, err_up + err_dn


def H_script_kernel(pair: TestFunctionPair, t_g: float, t: float, sign: int,
                    hol: bool = True) -> complex:
    """curly-H^sign(t) for the adjoint-square shape mu = (2i t_g, 0, -2i t_g).

    The Maass contribution is the integral of (F h)(u) against the closed
    hypergeometric kernel (valid while sinh^2(pi u) < 1 covers the support
    of F h, i.e. U not too small, and |t| up to ~TU).  The holomorphic
    contribution is a finite sum of Gamma-kernel contour integrals.
    """
    u_cap = min(0.272, _fh_support(pair))
    nodes, w = panel_nodes(0.0, u_cap, max(40, int(10 * pair.U)), 12)
    fh = np.asarray(pair.F(nodes))
    kern = np.array([_ci1_kernel(t, u, t_g, sign) for u in nodes])
    maass = complex(np.sum(w * fh * kern) * 2)  # even integrand, u >= 0 doubled
    if not hol:
        return maass
    return maass + H_script_hol(pair, (2j * t_g, 0.0, -2j * t_g), t, sign)


def H_script_hol(pair: TestFunctionPair, mu, t: float, sign: int,
                 sigma2: float = 0.5, s_max: float = 3000.0) -> complex:
    """Holomorphic part of curly-H^sign(t): sum over the even weights k of
    (k-1)/(2 pi^2) h_hol(k) times the Mellin-kernel contour integral

        (1/2 pi i) int jhat^hol_k(s) scriptG^sign((1-s)/2)
                        G^(-sign)(s/2 + it) ds,

    with jhat^hol_k(s) = pi i^(-k) (2 pi)^(-s)
                         Gamma((s+k-1)/2)/Gamma((1-s+k)/2).
    """
    ks = pair.hol_k_range()
    x10, w10 = gl_nodes(10)

    def w_k(k: int) -> complex:
        pref = pi * (1j ** (-int(k) % 4))

        def chunk(a, b):
            mid, half = (a + b) / 2, (b - a) / 2
            s = sigma2 + 1j * (mid + half * x10)
            vals = (
                pref
                * np.exp(-s * _LOG_2PI + loggamma_vec((s + k - 1) / 2) - loggamma_vec((1 - s + k) / 2))
                * script_G_vec(mu, (1 - s) / 2, sign)
                * G_pm_vec(s / 2 + 1j * t, -sign)
            )
            return complex(np.sum(vals * w10) * half * 1j / (2j * pi))

        core_h = max(60.0, 4 * abs(t))
        core = sum(chunk(a, a + 2.0) for a in np.arange(-core_h, core_h, 2.0))
        n_tail = max(16, min(72, int((s_max - core_h) / 4)))
        up, _ = oscillatory_tail(chunk, core_h, 4.0, n_terms=n_tail)
        dn, _ = oscillatory_tail(lambda a, b: chunk(-b, -a), core_h, 4.0, n_terms=n_tail)
        return core + up + dn

    total = 0j
    for k in ks:
        total += (k - 1) / (2 * pi**2) * pair.h_hol(k) * w_k(int(k))
    return complex(total)


def _ci1_kernel(t: float, u: float, t_g: float, sign: int) -> complex:
    """Closed value of the contour integral against (cosh^2 pi u)^(-s):

    (1 +- i)(2 pi)^(-1-it) e^(+-pi t/2) Gamma(it) (tanh^2 pi u)^(-it)
        2F1(1/2+2i t_g, 1/2-2i t_g; 1-it; -sinh^2 pi u)
    + 2(1 +- i)(2 pi)^(-2-it) e^(+-pi t/2) Gamma(-it)
        Gamma(1/2+it+2i t_g) Gamma(1/2+it-2i t_g)
        (e^(-+pi t) cosh 2 pi t_g -+ sinh pi t)
        2F1(1/2+2i t_g, 1/2-2i t_g; 1+it; -sinh^2 pi u).
    """
    if abs(t) < 1e-3:
        raise ValueError("kernel is singular at t = 0 (use |t| >= 1e-3)")
    a, b = 0.5 + 2j * t_g, 0.5 - 2j * t_g
    sh2 = np.sinh(pi * u) ** 2
    one_pm = 1 + sign * 1j
    piece1 = (
        one_pm
        * np.exp(-(1 + 1j * t) * _LOG_2PI + sign * pi * t / 2 + loggamma(1j * t))
        * np.exp(-1j * t * np.log(np.tanh(pi * u) ** 2 + 1e-300))
        * hyp2f1(a, b, 1 - 1j * t, -sh2)
    )
    trig = np.exp(-sign * pi * t) * np.cosh(2 * pi * t_g) - sign * np.sinh(pi * t)
    piece2 = (
        2
        * one_pm
        * np.exp(
            -(2 + 1j * t) * _LOG_2PI
            + sign * pi * t / 2
            + loggamma(-1j * t)
            + loggamma(0.5 + 1j * t + 2j * t_g)
            + loggamma(0.5 + 1j * t - 2j * t_g)
        )
        * trig
        * hyp2f1(a, b, 1 + 1j * t, -sh2)
    )
    return complex(piece1 + piece2)


def hyper_identity_residual(t: float, u: float, t_g: float, sign: int = 1,
                            sigma: float = 0.3, s_max: float = 600.0) -> float:
    """Relative residual of the contour <-> hypergeometric identity."""
    if not 0 < sigma < 0.5:
        raise ValueError("contour abscissa must lie in (0, 1/2)")
    if abs(u) >= np.log(1 + np.sqrt(2)) / pi:
        raise ValueError("need sinh^2(pi u) < 1")
    mu = (2j * t_g, 0.0, -2j * t_g)
    c2 = np.cosh(pi * u) ** 2

    def integrand(svals):
        out = np.empty(len(svals), dtype=complex)
        for i, s in enumerate(svals):
            out[i] = (
                (1 / np.sqrt(pi))
                * np.exp(-2 * s * _LOG_2PI + loggamma(s) - loggamma(0.5 - s))
                * script_G(mu, 0.5 - s, sign)
                * G_pm(s + 1j * t, -sign)
                * np.exp(-s * np.log(c2))
            )
        return out

    x, w = gl_nodes(10)

    def chunk(a, b):
        mid, half = (a + b) / 2, (b - a) / 2
        svals = sigma + 1j * (mid + half * x)
        return complex(np.sum(integrand(svals) * w) * half * 1j / (2j * pi))

    core = sum(chunk(a, a + 1.0) for a in np.arange(-30.0, 30.0, 1.0))
    up, _ = oscillatory_tail(chunk, 30.0, 2.0, n_terms=int((s_max - 30) / 2))
    dn, _ = oscillatory_tail(lambda a, b: chunk(-b, -a), 30.0, 2.0, n_terms=int((s_max - 30) / 2))
    lhs = core + up + dn
    rhs = _ci1_kernel(t, u, t_g, sign)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)
