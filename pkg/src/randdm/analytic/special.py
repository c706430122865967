"""Gamma function with a sign channel and the generalized hypergeometric series."""

from __future__ import annotations

import math

import numpy as np


class ConvergenceError(ArithmeticError):
    """The hypergeometric series did not reach its tail bound."""


def log_gamma(x: float) -> tuple[float, float]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Negative non-integer arguments go through the reflection formula
    ``Gamma(x) Gamma(1 - x) = pi / sin(pi x)``.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"Gamma has a pole at {x}")
    if x > 0:
        return math.lgamma(x), 1.0
    sin_pix = math.sin(math.pi * x)
    lg = math.log(math.pi) - math.log(abs(sin_pix)) - math.lgamma(1.0 - x)
    return lg, math.copysign(1.0, sin_pix)


def gamma_product(numer, denom) -> float:
    """``prod Gamma(numer) / prod Gamma(denom)`` accumulated in log space."""
    log_mag, sign = 0.0, 1.0
    for x in numer:
        lg, sg = log_gamma(x)
        log_mag += lg
        sign *= sg
    for x in denom:
        lg, sg = log_gamma(x)
        log_mag -= lg
        sign *= sg
    return sign * math.exp(log_mag)


def generalized_hypergeometric(a, b, z, tol: float = 1e-14, max_terms: int = 10**7,
                               chunk: int = 512):
    """Power series of ``pFq(a; b; z)`` for real ``z``, scalar or array.

    Terms come from the ratio recurrence and are summed in chunks; a point
    stops once ``|t_n| / (1 - r)`` (``t_n`` the next term, ``r`` the current
    term ratio) is below ``tol`` times the running sum.  Series that reach ``max_terms`` raise
    :class:`ConvergenceError`.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if np.any((b <= 0) & (b == np.floor(b))):
        raise ValueError("lower parameters must not be non-positive integers")
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    zf = z_arr.reshape(-1)
    terminating = bool(np.any((a <= 0) & (a == np.floor(a))))
    if not terminating:
        if len(a) > len(b) + 1 and np.any(zf != 0):
            raise ConvergenceError("pFq with p > q + 1 diverges for z != 0")
        if len(a) == len(b) + 1 and np.any(np.abs(zf) > 1):
            raise ConvergenceError("series diverges for |z| > 1")
        if len(a) == len(b) + 1 and np.any(np.abs(zf) == 1) and b.sum() - a.sum() <= 0:
            raise ConvergenceError("series diverges at |z| = 1")

    total = np.zeros_like(zf)
    comp = np.zeros_like(zf)
    term = np.ones_like(zf)
    active = np.arange(zf.size)
    n0 = 0
    while active.size:
        n = n0 + np.arange(chunk, dtype=float)
        # ratios[j] = t_{n+1} / (t_n z)
        ratios = np.prod(a[:, None] + n, axis=0) / (np.prod(b[:, None] + n, axis=0) * (n + 1.0))
        za = zf[active]
        factors = ratios[None, :] * za[:, None]
        terms = term[active, None] * np.concatenate(
            (np.ones((za.size, 1)), np.cumprod(factors[:, :-1], axis=1)), axis=1)
        # Kahan-style compensated accumulation of the chunk sum
        chunk_sum = terms.sum(axis=1)
        y = chunk_sum - comp[active]
        t = total[active] + y
        comp[active] = (t - total[active]) - y
        total[active] = t
        term[active] = terms[:, -1] * factors[:, -1]
        n0 += chunk
        nxt = np.abs(term[active])
        r = np.abs(za) * abs(ratios[-1])
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = np.where(r < 1, nxt / (1.0 - r), np.inf)
        shrinking = abs(ratios[-1]) <= abs(ratios[-2]) or abs(ratios[-1]) <= 1.0
        done = (shrinking & (bound <= tol * np.abs(total[active]))) | (nxt == 0.0)
        active = active[~done]
        if active.size and n0 >= max_terms:
            raise ConvergenceError(f"no convergence after {n0} terms (z = {zf[active].max()})")
    out = total.reshape(z_arr.shape)
    return float(out) if scalar else out
