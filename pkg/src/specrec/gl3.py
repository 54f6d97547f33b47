"""GL(3) Hecke coefficients A(m, n): Eisenstein (shifted triple divisor)
realization and validated user-supplied tables.

Both sources are multiplicative and satisfy A(1,1) = 1 and the relation

    A(n2, n1) = sum_{d | (n2, n1)} mu(d) A(n2/d, 1) A(1, n1/d),

which for the Eisenstein source *defines* the two-variable coefficients
from the edge sequences A(m, 1) and A(1, n).
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np

from .arith import factorize, moebius


def _h_sum(p: int, k: int, mu: tuple[complex, complex, complex]) -> complex:
    """sum over k1+k2+k3=k of p**(k1 mu1 + k2 mu2 + k3 mu3)."""
    lp = np.log(p)
    total = 0j
    for k1 in range(k + 1):
        for k2 in range(k - k1 + 1):
            k3 = k - k1 - k2
            total += np.exp(lp * (k1 * mu[0] + k2 * mu[1] + k3 * mu[2]))
    return complex(total)


class EisensteinSource:
    """Minimal-parabolic Eisenstein coefficients with parameters mu.

    A(1, n) = sum_{n1 n2 n3 = n} n1**(-mu1) n2**(-mu2) n3**(-mu3);
    A(m, 1) is the same with mu negated; mixed coefficients come from the
    Moebius-weighted Hecke relation, extended multiplicatively.
    """

    kind = "eisenstein"

    def __init__(self, mu=(0.0, 0.0, 0.0)):
        if len(mu) != 3:
            raise ValueError("mu must have three components")
        self.mu = tuple(complex(m) for m in mu)

    @property
    def selfdual(self) -> bool:
        neg = sorted((round((-m).real, 12), round((-m).imag, 12)) for m in self.mu)
        pos = sorted((round(m.real, 12), round(m.imag, 12)) for m in self.mu)
        return neg == pos

    def _local(self, p: int, a: int, b: int) -> complex:
        up = _h_sum(p, a, self.mu)  # A(p^a, 1)
        dn = _h_sum(p, b, tuple(-m for m in self.mu))  # A(1, p^b)
        val = up * dn
        if a >= 1 and b >= 1:
            val -= _h_sum(p, a - 1, self.mu) * _h_sum(p, b - 1, tuple(-m for m in self.mu))
        return val

    def coefficient(self, m: int, n: int) -> complex:
        if m < 1 or n < 1:
            raise ValueError("indices must be positive")
        out = 1 + 0j
        support = {p for p, _ in factorize(m).factors} | {p for p, _ in factorize(n).factors}
        for p in sorted(support):
            out *= self._local(p, factorize(m).valuation(p), factorize(n).valuation(p))
        return out

    def euler_factor_dual(self, p: int, s: complex) -> complex:
        """L_p(s, dual) = 1 / prod_j (1 - p^(mu_j - s))."""
        out = 1 + 0j
        for m in self.mu:
            out *= 1 - np.exp(np.log(p) * (m - s))
        return 1 / out

    def euler_factor(self, p: int, s: complex) -> complex:
        """L_p(s) = 1 / prod_j (1 - p^(-mu_j - s))."""
        out = 1 + 0j
        for m in self.mu:
            out *= 1 - np.exp(np.log(p) * (-m - s))
        return 1 / out

    def __repr__(self):
        return f"EisensteinSource(mu={self.mu})"


class TableSource:
    """Coefficients from a finite validated grid; off-grid lookups fail."""

    kind = "table"

    def __init__(self, values: dict[tuple[int, int], complex], warnings: list[str] | None = None):
        if values.get((1, 1), 1) != 1:
            raise ValueError("A(1,1) must be 1")
        self.values = dict(values)
        self.values.setdefault((1, 1), 1 + 0j)
        self.warnings = list(warnings or [])

    @property
    def selfdual(self) -> bool:
        for (m, n), v in self.values.items():
            w = self.values.get((n, m))
            if w is None or abs(v - w) > 1e-9:
                return False
        return True

    def coefficient(self, m: int, n: int) -> complex:
        try:
            return self.values[(m, n)]
        except KeyError:
            raise KeyError(f"A({m},{n}) outside the table grid") from None

    def euler_factor_dual(self, p: int, s: complex) -> complex:
        a_p1 = self.coefficient(p, 1)
        a_1p = self.coefficient(1, p)
        x = np.exp(-np.log(p) * s)
        return 1 / (1 - a_p1 * x + a_1p * x**2 - x**3)

    def euler_factor(self, p: int, s: complex) -> complex:
        a_p1 = self.coefficient(p, 1)
        a_1p = self.coefficient(1, p)
        x = np.exp(-np.log(p) * s)
        return 1 / (1 - a_1p * x + a_p1 * x**2 - x**3)


def eisenstein_A(mu, m: int, n: int) -> complex:
    return EisensteinSource(mu).coefficient(m, n)


def load_table(path, strict: bool = False, tol: float = 1e-8) -> TableSource:
    """Parse ``m n re im`` lines into a table source.

    Validates the Hecke relation over the covered grid; violations are
    collected as warnings, or raised when strict=True.  Parse errors
    always raise, with line numbers.
    """
    values: dict[tuple[int, int], complex] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 'm n re im', got {raw!r}")
            try:
                m, n = int(parts[0]), int(parts[1])
                re, im = float(parts[2]), float(parts[3])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if m < 1 or n < 1:
                raise ValueError(f"{path}:{lineno}: indices must be positive")
            if (m, n) in values:
                raise ValueError(f"{path}:{lineno}: duplicate entry A({m},{n})")
            values[(m, n)] = complex(re, im)
    warnings = _validate_relations(values, tol)
    if strict and warnings:
        raise ValueError("table fails Hecke validation: " + "; ".join(warnings))
    return TableSource(values, warnings)


def _validate_relations(values: dict[tuple[int, int], complex], tol: float) -> list[str]:
    warnings = []
    keys = sorted(values)
    for m, n in keys:
        for m2, n2 in keys:
            # multiplicativity applies across coprime supports only
            if (m2, n2) <= (m, n) or gcd(m * n, m2 * n2) != 1:
                continue
            if (m * m2, n * n2) not in values:
                continue
            lhs = values[(m * m2, n * n2)]
            rhs = values[(m, n)] * values[(m2, n2)]
            if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                warnings.append(f"A({m*m2},{n*n2}) != A({m},{n})A({m2},{n2})")
    for m, n in keys:
        divs = factorize(gcd(m, n)).divisors()
        if all((m // d, 1) in values and (1, n // d) in values for d in divs):
            rhs = sum(moebius(d) * values[(m // d, 1)] * values[(1, n // d)] for d in divs)
            if abs(values[(m, n)] - rhs) > tol * max(1.0, abs(rhs)):
                warnings.append(f"A({m},{n}) violates the Moebius-Hecke relation")
    return warnings


@lru_cache(maxsize=None)
def d3(n: int) -> int:
    """Number of ordered triples with product n."""
    out = 1
    for _, e in factorize(n).factors:
        out *= (e + 1) * (e + 2) // 2
    return out
