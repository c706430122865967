"""Map ensembles to their limiting spectral laws and predicted entropies."""

from __future__ import annotations

import math

import numpy as np

from .laws import SpectralLaw, law_mean_entropy, law_mean_entropy_exact


def _uniform(spec) -> bool:
    return spec.weights is None or np.allclose(spec.weights, 1.0 / spec.k, rtol=0, atol=1e-12)


def _square(spec) -> bool:
    return spec.dims is None or all(c == 1.0 for c in spec.dims)


def _sum_law(k: int) -> SpectralLaw:
    if k == 1:
        return SpectralLaw.dirac_one()
    if k == 2:
        return SpectralLaw.arcsine()
    return SpectralLaw.nu_k(k)


def law_for(spec) -> SpectralLaw | None:
    """Asymptotic law of ``x = N lambda`` for an ensemble, or ``None`` if none is known."""
    kind = spec.kind
    if kind == "induced":
        return SpectralLaw.mp((spec.K if spec.K is not None else spec.n) / spec.n)
    if kind == "hilbert_schmidt":
        return SpectralLaw.mp(1.0)
    if kind == "bures":
        return SpectralLaw.bures()
    if kind == "arcsine":
        return SpectralLaw.arcsine()
    if kind in ("k_entangled", "real_orthogonal_sum"):
        return _sum_law(spec.k) if _uniform(spec) else None
    if kind in ("ginibre_product", "real_ginibre_product"):
        if _square(spec):
            return SpectralLaw.fuss_catalan(spec.s)
        if spec.s == 1:
            return SpectralLaw.mp(spec.factor_shapes[0][1] / spec.n)
        return None
    if kind == "generalized":
        if not (_uniform(spec) and _square(spec)):
            return None
        if spec.s == 0:
            return _sum_law(spec.k)
        if spec.k == 1:
            return SpectralLaw.fuss_catalan(spec.s)
        if spec.k == 2 and spec.s == 1:
            return SpectralLaw.bures()
        return None
    if kind == "unit_interpolation":
        if spec.a in (0.0, 1.0):
            return SpectralLaw.dirac_one()
        return SpectralLaw.arcsine() if spec.a == 0.5 else None
    if kind == "bures_hs_interpolation":
        if spec.a == 0.5:
            return SpectralLaw.bures()
        return SpectralLaw.mp(1.0) if spec.a == 0.0 else None
    return None


def predicted_entropy(spec, n: int | None = None) -> float:
    """Asymptotic mean von Neumann entropy ``ln N + int -x ln x P(x) dx``."""
    law = spec if isinstance(spec, SpectralLaw) else law_for(spec)
    if law is None:
        raise ValueError(f"no asymptotic law is known for {spec}")
    if n is None:
        n = spec.n
    offset = law_mean_entropy_exact(law)
    if offset is None:
        offset = law_mean_entropy(law)
    return math.log(n) + offset


def predicted_chebyshev_entropy(s: int, n: int) -> float:
    """``ln N + s ln s - (s+1) ln(s+1)``: minus the log of the Fuss-Catalan edge over N."""
    if s < 0:
        raise ValueError("s must be >= 0")
    s_log_s = s * math.log(s) if s > 0 else 0.0
    return math.log(n) + s_log_s - (s + 1) * math.log(s + 1)
