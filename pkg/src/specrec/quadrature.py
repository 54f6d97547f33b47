"""Quadrature helpers: composite Gauss-Legendre panels on real intervals
and complex segments, double-exponential rules for endpoint singularities,
and Wynn extrapolation for oscillatory tails."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(a: float, b: float, n_panels: int, order: int = 12):
    """Composite GL nodes/weights on [a, b] with uniform panels."""
    x, w = gl_nodes(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def quad_panels(f, a: float, b: float, n_panels: int, order: int = 12) -> complex:
    nodes, weights = panel_nodes(a, b, n_panels, order)
    return complex(np.sum(f(nodes) * weights))


def segment_quad(f, z0: complex, z1: complex, n_panels: int, order: int = 12) -> complex:
    """Integral of f along the straight segment z0 -> z1."""
    nodes, weights = panel_nodes(0.0, 1.0, n_panels, order)
    zs = z0 + (z1 - z0) * nodes
    return complex(np.sum(f(zs) * weights) * (z1 - z0))


def de_nodes(level: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """tanh-sinh nodes/weights on (-1, 1); handles endpoint singularities."""
    h = 2.0 ** (1 - level)
    k = np.arange(-int(6.0 / h), int(6.0 / h) + 1)
    t = k * h
    x = np.tanh(0.5 * np.pi * np.sinh(t))
    w = h * 0.5 * np.pi * np.cosh(t) / np.cosh(0.5 * np.pi * np.sinh(t)) ** 2
    keep = np.abs(x) < 1 - 1e-17
    return x[keep], w[keep]


def quad_de(f, a: float, b: float, level: int = 7) -> complex:
    """Double-exponential quadrature on (a, b), endpoint singularities allowed."""
    x, w = de_nodes(level)
    mid, half = (a + b) / 2, (b - a) / 2
    return complex(np.sum(f(mid + half * x) * w) * half)


def wynn_epsilon(seq) -> complex:
    """Wynn's epsilon acceleration of a sequence of partial sums."""
    s = [complex(v) for v in seq]
    n = len(s)
    if n == 1:
        return s[0]
    eps = [s, []]
    prev_prev = [0j] * (n + 1)
    prev = s
    best = s[-1]
    for k in range(1, n):
        cur = []
        for j in range(len(prev) - 1):
            d = prev[j + 1] - prev[j]
            if d == 0:
                cur.append(prev_prev[j + 1])
                continue
            cur.append(prev_prev[j + 1] + 1.0 / d)
        if not cur:
            break
        if k % 2 == 0 and cur:
            best = cur[-1]
        prev_prev, prev = prev, cur
    return best


def oscillatory_tail(partial_fn, start: float, step: float, n_terms: int = 48) -> tuple[complex, float]:
    """Sum of integrals over [start + k step, start + (k+1) step), accelerated.

    partial_fn(a, b) integrates one chunk.  Returns (accelerated sum,
    error estimate from the last stable differences).
    """
    sums = []
    acc = 0j
    for k in range(n_terms):
        acc += partial_fn(start + k * step, start + (k + 1) * step)
        sums.append(acc)
    best = wynn_epsilon(sums[-min(len(sums), 24):])
    alt = wynn_epsilon(sums[-min(len(sums), 22):])
    return best, abs(best - alt)
