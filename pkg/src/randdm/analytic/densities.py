"""Asymptotic spectral densities in the rescaled variable ``x = N lambda``.

All density functions accept scalars or arrays.  They return 0 outside the
support and ``inf`` at an endpoint where the density diverges.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .special import gamma_product, generalized_hypergeometric

BURES_EDGE = 3.0 * math.sqrt(3.0)
BURES_CONSTANT = 1.0 / (4.0 * math.pi * math.sqrt(3.0))

# fraction of the Fuss-Catalan support next to b(s) handled by a local
# square-root expansion instead of the (slowly converging) series
FC_EDGE_FRACTION = 1e-4


def _finish(x, out):
    return float(out) if np.ndim(x) == 0 else out


def _interior(x, lo, hi):
    x = np.asarray(x, dtype=float)
    return x, (x > lo) & (x < hi)


def _apply(x, lo, hi, formula, diverge_lo=False, diverge_hi=False):
    x, inside = _interior(x, lo, hi)
    out = np.zeros(x.shape)
    if np.any(inside):
        out[inside] = formula(x[inside])
    if diverge_lo:
        out[x == lo] = np.inf
    if diverge_hi:
        out[x == hi] = np.inf
    return _finish(x, out)


def arcsine_density(x):
    return _apply(x, 0.0, 2.0, lambda t: 1.0 / (np.pi * np.sqrt(t * (2.0 - t))), True, True)


def nu_k_density(x, k: int):
    """Density of the normalised sum of ``k`` free Haar unitaries, on ``[0, 4(k-1)/k]``."""
    if k < 2:
        raise ValueError("nu_k needs k >= 2")
    hi = 4.0 * (k - 1) / k

    def formula(t):
        return np.sqrt(np.maximum(4.0 * k * (k - 1) * t - k * k * t * t, 0.0)) / (2 * np.pi * (k * t - t * t))

    return _apply(x, 0.0, hi, formula, True, k == 2)


def mu_k_density(x, k: int):
    """Density of ``w = (u_1 + ... + u_k)(u_1 + ... + u_k)^*``, supported on ``[0, 4(k-1)]``."""
    if k < 2:
        raise ValueError("mu_k needs k >= 2")

    def formula(t):
        return k * np.sqrt(np.maximum(4.0 * (k - 1) * t - t * t, 0.0)) / (2 * np.pi * (k * k * t - t * t))

    return _apply(x, 0.0, 4.0 * (k - 1), formula, True, k == 2)


def brown_radial_density(r, k: int):
    """Radial density of the Brown measure of ``u_1 + ... + u_k`` on the disk of radius ``sqrt(k)``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return _apply(r, 0.0, math.sqrt(k), lambda t: k * k * (k - 1) / (np.pi * (k * k - t * t) ** 2))


def mp_support(c: float) -> tuple[float, float]:
    return (1.0 + c - 2.0 * math.sqrt(c), 1.0 + c + 2.0 * math.sqrt(c))


def mp_density(x, c: float):
    """Marchenko-Pastur law of ratio ``c``: ``(continuous density, atom mass at 0)``.

    This is the law of the eigenvalues of ``X X^dagger / N`` for an ``N x cN``
    Ginibre matrix; its mean is ``c``.  See :func:`~randdm.analytic.laws.SpectralLaw.mp`
    for the trace-normalised version with mean 1.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    lo, hi = mp_support(c)

    def formula(t):
        return np.sqrt(np.maximum(4.0 * c - (t - c - 1.0) ** 2, 0.0)) / (2 * np.pi * t)

    return _apply(x, lo, hi, formula, diverge_lo=(c == 1.0)), max(1.0 - c, 0.0)


def bures_density(x):
    a = BURES_EDGE

    def formula(t):
        r = a / t
        q = np.sqrt(np.maximum(r * r - 1.0, 0.0))
        return BURES_CONSTANT * ((r + q) ** (2.0 / 3.0) - (r - q) ** (2.0 / 3.0))

    return _apply(x, 0.0, a, formula, diverge_lo=True)


def fc_edge(s: int) -> float:
    """Upper edge ``b(s) = (s+1)^(s+1) / s^s`` of the Fuss-Catalan law."""
    if s == 0:
        return 1.0
    return (s + 1) ** (s + 1) / s**s


def fc_moment(s: int, m: int) -> int:
    """Fuss-Catalan number ``binom(sm + m, m) / (sm + 1)``."""
    if s < 0 or m < 0:
        raise ValueError("s and m must be nonnegative")
    num = math.comb(s * m + m, m)
    q, r = divmod(num, s * m + 1)
    assert r == 0
    return q


@lru_cache(maxsize=None)
def fc_coefficients(s: int) -> tuple:
    """``(Lambda_n, upper params, lower params)`` for ``n = 1..s``."""
    out = []
    for n in range(1, s + 1):
        others = [j for j in range(1, s + 1) if j != n]
        prefactor = s**-1.5 * math.sqrt((s + 1) / (2 * math.pi)) * (s ** (s / (s + 1)) / (s + 1)) ** n
        lam = prefactor * gamma_product([(j - n) / (s + 1) for j in others],
                                        [(j + 1) / s - n / (s + 1) for j in range(1, s + 1)])
        upper = tuple(1.0 - (1.0 + j) / s + n / (s + 1) for j in range(1, s + 1))
        lower = tuple(1.0 + (n - j) / (s + 1) for j in others)
        out.append((lam, upper, lower))
    return tuple(out)


def _fc_series(x: np.ndarray, s: int) -> np.ndarray:
    z = x / fc_edge(s)
    total = np.zeros_like(x)
    for n, (lam, upper, lower) in enumerate(fc_coefficients(s), start=1):
        total += lam * x ** (n / (s + 1) - 1.0) * generalized_hypergeometric(upper, lower, z)
    return total


@lru_cache(maxsize=None)
def _fc_edge_fit(s: int) -> tuple[float, float, float]:
    """Coefficients of ``alpha w^(1/2) + beta w^(3/2)``, ``w = b - x``, near the edge."""
    b = fc_edge(s)
    w1, w2 = FC_EDGE_FRACTION * b, 2.0 * FC_EDGE_FRACTION * b
    f1, f2 = _fc_series(np.array([b - w1, b - w2]), s)
    # f_i = sqrt(w_i) (alpha + beta w_i)
    g1, g2 = f1 / math.sqrt(w1), f2 / math.sqrt(w2)
    beta = (g2 - g1) / (w2 - w1)
    alpha = g1 - beta * w1
    return b - w1, alpha, beta


def fc_density(x, s: int):
    """Fuss-Catalan density of order ``s`` as a sum of ``s`` hypergeometric terms.

    Within ``FC_EDGE_FRACTION`` of the upper edge the density is taken from a
    two-term square-root expansion matched to the series, since the series
    argument approaches 1 there.
    """
    if s < 1:
        raise ValueError("fc_density needs s >= 1")
    b = fc_edge(s)
    x, inside = _interior(x, 0.0, b)
    out = np.zeros(x.shape)
    if np.any(inside):
        xi = x[inside]
        cut, alpha, beta = _fc_edge_fit(s)
        near = xi > cut
        vals = np.empty_like(xi)
        if np.any(~near):
            vals[~near] = _fc_series(xi[~near], s)
        if np.any(near):
            w = b - xi[near]
            vals[near] = np.sqrt(w) * (alpha + beta * w)
        out[inside] = vals
    out[x == 0.0] = np.inf
    return _finish(x, out)


def fc2_closed_form(x):
    """Closed algebraic form of the order-2 Fuss-Catalan density on ``[0, 27/4]``."""

    def formula(t):
        r = 27.0 + 3.0 * np.sqrt(81.0 - 12.0 * t)
        c2 = 2.0 ** (1.0 / 3.0)
        return c2 * math.sqrt(3.0) / (12 * np.pi) * (c2 * r ** (2.0 / 3.0) - 6.0 * np.cbrt(t)) / (
            t ** (2.0 / 3.0) * r ** (1.0 / 3.0))

    return _apply(x, 0.0, 6.75, formula, diverge_lo=True)


@lru_cache(maxsize=None)
def _fk_series(k: int, order: int) -> tuple[Fraction, ...]:
    """Exact coefficients of ``F_k(z) = 2(k-1) / (k - 2 + k sqrt(1 - 4(k-1) z))``."""
    # sqrt(1 - y) = sum binom(1/2, n) (-y)^n with y = 4(k-1) z
    sq = [Fraction(1)]
    for n in range(1, order + 1):
        sq.append(sq[-1] * Fraction(2 * n - 3, 2 * n) * 4 * (k - 1))
    denom = [Fraction(k - 2) + k * sq[0]] + [k * c for c in sq[1:]]
    f = [Fraction(2 * (k - 1)) / denom[0]]
    for n in range(1, order + 1):
        acc = sum(denom[j] * f[n - j] for j in range(1, n + 1))
        f.append(-acc / denom[0])
    return tuple(f)


def nu_k_moment(p: int, k: int, exact: bool = False):
    """``p``-th moment of ``nu_k``: the ``z^p`` coefficient of ``F_k`` over ``k^p``."""
    if p < 0 or k < 2:
        raise ValueError("need p >= 0 and k >= 2")
    value = _fk_series(k, p)[p] / Fraction(k) ** p
    return value if exact else float(value)
