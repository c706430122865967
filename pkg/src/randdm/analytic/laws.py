"""Asymptotic spectral laws: density, CDF, moments, entropy and support.

A :class:`SpectralLaw` is always expressed in the trace-normalised rescaled
variable ``x = N lambda``, so every law has mean 1.  Integrals over a law are
split at the midpoint of the support and computed in substituted variables
that remove the endpoint singularities: ``x = lo + (mid - lo) t^p`` on the
left (``p = 1 / (1 - alpha)`` for a ``x^-alpha`` divergence) and
``x = hi - (hi - mid) t^2`` on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import densities as d
from .quadrature import gauss_legendre_panels, integrate

LAW_KINDS = ("dirac_one", "arcsine", "nu_k", "mp", "bures", "fuss_catalan")

# tolerance for matching rescaled eigenvalues to the atom of dirac_one
DIRAC_TOL = 1e-9
CDF_PANELS = 512


@dataclass(frozen=True)
class SpectralLaw:
    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ValueError(f"unknown law {self.kind!r}")
        if self.kind == "nu_k" and (self.param is None or int(self.param) != self.param or self.param < 2):
            raise ValueError("nu_k needs an integer k >= 2")
        if self.kind == "fuss_catalan" and (self.param is None or int(self.param) != self.param or self.param < 1):
            raise ValueError("fuss_catalan needs an integer s >= 1")
        if self.kind == "mp" and (self.param is None or self.param <= 0):
            raise ValueError("mp needs c > 0")

    @classmethod
    def dirac_one(cls):
        return cls("dirac_one")

    @classmethod
    def arcsine(cls):
        return cls("arcsine")

    @classmethod
    def nu_k(cls, k: int):
        return cls("nu_k", int(k))

    @classmethod
    def mp(cls, c: float = 1.0):
        return cls("mp", float(c))

    @classmethod
    def bures(cls):
        return cls("bures")

    @classmethod
    def fuss_catalan(cls, s: int):
        return cls("fuss_catalan", int(s))

    @property
    def name(self) -> str:
        if self.param is None:
            return self.kind
        p = int(self.param) if float(self.param).is_integer() else self.param
        return f"{self.kind}({p})"

    @property
    def support(self) -> tuple[float, float]:
        return law_support(self)

    @property
    def atom_mass(self) -> float:
        """Mass of the atom at ``x = 0`` (the ``dirac_one`` atom at 1 is not counted)."""
        if self.kind == "mp":
            return max(1.0 - self.param, 0.0)
        return 0.0

    @property
    def singularity_exponent(self) -> float | None:
        """``alpha`` in ``density ~ x^-alpha`` as ``x -> 0``; ``None`` when bounded."""
        if self.kind in ("arcsine", "nu_k"):
            return 0.5
        if self.kind == "mp":
            return 0.5 if self.param == 1.0 else None
        if self.kind == "bures":
            return 2.0 / 3.0
        if self.kind == "fuss_catalan":
            s = int(self.param)
            return s / (s + 1)
        return None

    @property
    def lower_power(self) -> int:
        alpha = self.singularity_exponent
        if alpha is None:
            return 2
        return int(round(1.0 / (1.0 - alpha)))

    def density(self, x):
        k = self.kind
        if k == "arcsine":
            return d.arcsine_density(x)
        if k == "nu_k":
            return d.nu_k_density(x, int(self.param))
        if k == "mp":
            c = self.param
            return c * np.asarray(d.mp_density(c * np.asarray(x, dtype=float), c)[0])
        if k == "bures":
            return d.bures_density(x)
        if k == "fuss_catalan":
            return d.fc_density(x, int(self.param))
        raise ValueError("dirac_one has no density")

    def cdf(self, x):
        return law_cdf(self, x)

    def moment(self, p: int) -> float:
        return law_moment(self, p)


def law_support(law: SpectralLaw) -> tuple[float, float]:
    k = law.kind
    if k == "dirac_one":
        return (1.0, 1.0)
    if k == "arcsine":
        return (0.0, 2.0)
    if k == "nu_k":
        kk = int(law.param)
        return (0.0, 4.0 * (kk - 1) / kk)
    if k == "mp":
        c = law.param
        lo, hi = d.mp_support(c)
        return (lo / c, hi / c)
    if k == "bures":
        return (0.0, d.BURES_EDGE)
    return (0.0, d.fc_edge(int(law.param)))


def _halves(law: SpectralLaw):
    """The two substituted integrands' maps ``t -> (x, dx/dt)`` on ``[0, 1]``."""
    lo, hi = law_support(law)
    mid = 0.5 * (lo + hi)
    p = law.lower_power

    def left(t):
        return lo + (mid - lo) * t**p, (mid - lo) * p * t ** (p - 1)

    def right(t):
        return hi - (hi - mid) * t * t, 2.0 * (hi - mid) * t

    return left, right


def integrate_law(law: SpectralLaw, g=None, tol: float = 1e-12) -> float:
    """``int g(x) dP(x)`` over the law including its atom; ``g = 1`` by default."""
    if g is None:
        g = np.ones_like
    if law.kind == "dirac_one":
        return float(np.asarray(g(np.array([1.0])))[0])
    total = 0.0
    for half in _halves(law):
        def integrand(t, half=half):
            x, jac = half(t)
            return g(x) * law.density(x) * jac
        total += integrate(integrand, 0.0, 1.0, tol=tol)[0]
    if law.atom_mass:
        total += law.atom_mass * float(np.asarray(g(np.array([0.0])))[0])
    return total


def law_moment(law: SpectralLaw, p: int) -> float:
    if p == 0:
        return 1.0
    return integrate_law(law, lambda x: x**p)


def _neg_x_log_x(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = -x[pos] * np.log(x[pos])
    return out


def law_mean_entropy(law: SpectralLaw) -> float:
    """``int -x ln x P(x) dx``, the offset of the mean entropy from ``ln N``."""
    return integrate_law(law, _neg_x_log_x)


@lru_cache(maxsize=None)
def _cdf_table(law: SpectralLaw):
    """Cumulative integrals on a uniform ``t``-grid for both halves of the support."""
    edges = np.linspace(0.0, 1.0, CDF_PANELS + 1)
    tables = []
    for half in _halves(law):
        def integrand(t, half=half):
            x, jac = half(t)
            return law.density(x) * jac
        cum = np.concatenate(([0.0], np.cumsum(gauss_legendre_panels(integrand, edges))))
        # at t = 0 the mapped x would round onto a divergent endpoint
        slope = integrand(np.clip(edges, 1e-6, 1.0))
        tables.append((cum, slope))
    return edges, tables


def _hermite(edges, cum, slope, t):
    h = edges[1] - edges[0]
    j = np.clip((t / h).astype(int), 0, len(edges) - 2)
    u = (t - edges[j]) / h
    h00 = 2 * u**3 - 3 * u**2 + 1
    h10 = u**3 - 2 * u**2 + u
    h01 = -2 * u**3 + 3 * u**2
    h11 = u**3 - u**2
    return h00 * cum[j] + h10 * h * slope[j] + h01 * cum[j + 1] + h11 * h * slope[j + 1]


def law_cdf(law: SpectralLaw, x):
    """Cumulative distribution ``P(X <= x)`` (atoms included), scalar or array."""
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    if law.kind == "dirac_one":
        out = (flat >= 1.0 - DIRAC_TOL).astype(float)
        return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)
    lo, hi = law_support(law)
    mid = 0.5 * (lo + hi)
    p = law.lower_power
    edges, ((cum_l, sl_l), (cum_r, sl_r)) = _cdf_table(law)
    out = np.empty_like(flat)
    below = flat <= lo
    above = flat >= hi
    left = ~below & ~above & (flat <= mid)
    right = ~below & ~above & (flat > mid)
    out[below] = 0.0
    out[above] = 1.0 - law.atom_mass
    if np.any(left):
        t = ((flat[left] - lo) / (mid - lo)) ** (1.0 / p)
        out[left] = _hermite(edges, cum_l, sl_l, t)
    if np.any(right):
        t = np.sqrt((hi - flat[right]) / (hi - mid))
        out[right] = cum_l[-1] + cum_r[-1] - _hermite(edges, cum_r, sl_r, t)
    out = np.clip(out, 0.0, 1.0 - law.atom_mass)
    if law.atom_mass:
        out[flat >= 0.0] += law.atom_mass
    return float(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)


def law_second_moment_exact(law: SpectralLaw) -> float:
    """Closed-form ``M_2`` (the table's purity column) where one is known."""
    k = law.kind
    if k == "dirac_one":
        return 1.0
    if k == "arcsine":
        return 1.5
    if k == "nu_k":
        return 2.0 - 1.0 / law.param
    if k == "mp":
        return 1.0 + 1.0 / law.param
    if k == "bures":
        return 2.5
    return float(int(law.param) + 1)


def law_mean_entropy_exact(law: SpectralLaw) -> float | None:
    """Closed-form mean entropy where one is known, else ``None``."""
    k = law.kind
    if k == "dirac_one":
        return 0.0
    if k == "arcsine" or (k == "nu_k" and law.param == 2):
        return math.log(2.0) - 1.0
    if k == "mp" and law.param == 1.0:
        return -0.5
    if k == "bures":
        return -math.log(2.0)
    if k == "fuss_catalan":
        return -sum(1.0 / j for j in range(2, int(law.param) + 2))
    return None
