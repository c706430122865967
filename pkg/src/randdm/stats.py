"""Entropy functionals, spectrum batches and empirical-vs-analytic comparison.

Pooled KS distances treat all rescaled eigenvalues of a batch as draws from
the limiting law.  Eigenvalues within one sample are correlated, so the
classical KS p-value does not apply; the distance is compared against fixed
thresholds instead.

All batch accumulators use :func:`math.fsum`, whose result does not depend
on summation order, so reports are identical however a batch was split
across workers and merged.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .analytic.densities import fc_moment, nu_k_moment
from .analytic.laws import SpectralLaw, law_mean_entropy, law_mean_entropy_exact, law_moment
from .ensembles import EnsembleSpec, sample, spectrum_of
from .linalg import Spectrum
from .sampling import SeededStream

# rescaled eigenvalues below this count as exact zeros (rank deficiency)
ZERO_X = 1e-8
MOMENT_ORDERS = (1, 2, 3, 4)


def _lambdas(spec) -> np.ndarray:
    lam = spec.lambdas if isinstance(spec, Spectrum) else np.asarray(spec, dtype=float)
    return np.clip(lam, 0.0, None)


def von_neumann_entropy(spec) -> float:
    lam = _lambdas(spec)
    lam = lam[lam > 0]
    return math.fsum(-lam * np.log(lam))


def purity(spec) -> float:
    lam = _lambdas(spec)
    return math.fsum(lam * lam)


def chebyshev_entropy(spec) -> float:
    return -math.log(float(np.max(_lambdas(spec))))


geometric_measure = chebyshev_entropy


def renyi_entropy(spec, q: float) -> float:
    """``ln(Tr rho^q) / (1 - q)``; ``q = 1`` gives von Neumann, ``q = inf`` Chebyshev."""
    if q <= 0:
        raise ValueError("q must be positive")
    if q == 1:
        return von_neumann_entropy(spec)
    if math.isinf(q):
        return chebyshev_entropy(spec)
    lam = _lambdas(spec)
    lmax = float(lam.max())
    log_tr = q * math.log(lmax) + math.log(math.fsum((lam / lmax) ** q))
    return log_tr / (1.0 - q)


@dataclass
class SpectrumBatch:
    """Spectra of a batch of samples, rows ordered by ``sample_ids``."""

    n: int
    lambdas: np.ndarray
    sample_ids: np.ndarray
    spec: EnsembleSpec | None = None
    seed: int | None = None

    def __post_init__(self):
        self.lambdas = np.atleast_2d(np.asarray(self.lambdas, dtype=float))
        self.sample_ids = np.asarray(self.sample_ids, dtype=np.int64)
        if self.lambdas.shape[1] != self.n:
            raise ValueError("all spectra must have length n")
        if self.sample_ids.shape[0] != self.lambdas.shape[0]:
            raise ValueError("one sample id per spectrum")
        order = np.argsort(self.sample_ids, kind="stable")
        self.sample_ids = self.sample_ids[order]
        self.lambdas = self.lambdas[order]
        if np.any(np.diff(self.sample_ids) == 0):
            raise ValueError("duplicate sample ids")

    @classmethod
    def from_spectra(cls, spectra, spec=None, seed=None, sample_ids=None):
        spectra = list(spectra)
        lam = np.array([s.lambdas if isinstance(s, Spectrum) else s for s in spectra], dtype=float)
        ids = np.arange(len(spectra)) if sample_ids is None else sample_ids
        return cls(lam.shape[1], lam, ids, spec, seed)

    @classmethod
    def generate(cls, spec: EnsembleSpec, n_samples: int, seed: int, workers: int = 1,
                 first_id: int = 0) -> "SpectrumBatch":
        """Sample ``n_samples`` spectra; sample ``i`` always uses stream ``(seed, i)``."""
        if n_samples < 1 or workers < 1:
            raise ValueError("n_samples and workers must be >= 1")
        ids = list(range(first_id, first_id + n_samples))
        if workers == 1:
            return _sample_range(spec, seed, ids)
        chunks = [c.tolist() for c in np.array_split(ids, workers) if len(c)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sample_range, [spec] * len(chunks), [seed] * len(chunks), chunks))
        return cls.merge(parts)

    @classmethod
    def merge(cls, batches) -> "SpectrumBatch":
        batches = list(batches)
        first = batches[0]
        if any(b.n != first.n for b in batches):
            raise ValueError("cannot merge batches of different n")
        return cls(first.n, np.concatenate([b.lambdas for b in batches]),
                   np.concatenate([b.sample_ids for b in batches]), first.spec, first.seed)

    def __len__(self):
        return self.lambdas.shape[0]

    def spectra(self) -> list[Spectrum]:
        return [Spectrum(row, True) for row in self.lambdas]

    def pooled_x(self) -> np.ndarray:
        """All rescaled eigenvalues ``x = N lambda``, sorted ascending."""
        return np.sort((self.n * self.lambdas).reshape(-1))

    def per_sample(self, fn) -> np.ndarray:
        return np.array([fn(row) for row in self.lambdas])


def _sample_range(spec, seed, ids) -> SpectrumBatch:
    rows = [spectrum_of(sample(spec, SeededStream(seed, i))).lambdas for i in ids]
    return SpectrumBatch(spec.n, np.array(rows), np.array(ids), spec, seed)


def empirical_moment(batch: SpectrumBatch, p: int) -> float:
    x = batch.pooled_x()
    return math.fsum(x**p) / x.size


def histogram(batch: SpectrumBatch, bins: int, range=None) -> tuple[np.ndarray, np.ndarray]:
    """Normalised histogram of pooled ``x``; masses sum to 1."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    x = batch.pooled_x()
    lo, hi = (float(x.min()), float(x.max())) if range is None else range
    if not hi > lo:
        raise ValueError("histogram range is empty")
    counts, edges = np.histogram(np.clip(x, lo, hi), bins=bins, range=(lo, hi))
    return edges, counts / counts.sum()


def histogram_csv(edges: np.ndarray, masses: np.ndarray) -> str:
    lines = ["bin_lo,bin_hi,mass"]
    lines += [f"{lo!r},{hi!r},{m!r}" for lo, hi, m in zip(edges[:-1].tolist(), edges[1:].tolist(), masses.tolist())]
    return "\n".join(lines) + "\n"


def ks_distance(x_sorted: np.ndarray, law: SpectralLaw) -> float:
    """``sup |F_n - F|`` for sorted samples against a continuous law."""
    n = x_sorted.size
    if n == 0:
        return 0.0
    if law.kind == "dirac_one":
        below = np.count_nonzero(x_sorted < 1.0 - 1e-9)
        above = np.count_nonzero(x_sorted > 1.0 + 1e-9)
        return max(below, above) / n
    f = law.cdf(x_sorted)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))


def predicted_moment(law: SpectralLaw, p: int) -> float:
    if law.kind == "dirac_one":
        return 1.0
    if law.kind == "arcsine":
        return nu_k_moment(p, 2)
    if law.kind == "nu_k":
        return nu_k_moment(p, int(law.param))
    if law.kind == "fuss_catalan":
        return float(fc_moment(int(law.param), p))
    if law.kind == "mp" and law.param == 1.0:
        return float(fc_moment(1, p))
    return law_moment(law, p)


def predicted_mean_entropy(law: SpectralLaw) -> float:
    exact = law_mean_entropy_exact(law)
    return law_mean_entropy(law) if exact is None else exact


@dataclass
class ComparisonReport:
    law: str
    n: int
    sample_count: int
    ks_distance: float
    moment_diffs: list
    entropy_offset_empirical: float
    entropy_offset_predicted: float
    support_edge_empirical: float
    support_edge_predicted: float
    chebyshev_offset_empirical: float
    chebyshev_offset_predicted: float
    atom_mass_empirical: float
    atom_mass_predicted: float

    def moment(self, order: int) -> tuple[float, float, float]:
        for o, emp, pred, diff in self.moment_diffs:
            if o == order:
                return emp, pred, diff
        raise KeyError(order)

    def to_flat(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            if key == "moment_diffs":
                for o, emp, pred, diff in val:
                    out[f"m{o}_empirical"] = emp
                    out[f"m{o}_predicted"] = pred
                    out[f"m{o}_absdiff"] = diff
            else:
                out[key] = val
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_flat(), indent=2)


def compare(batch: SpectrumBatch, law: SpectralLaw) -> ComparisonReport:
    """Pool the batch's rescaled eigenvalues and summarise them against ``law``.

    For laws with an atom at 0 the zero eigenvalues are split off: their
    fraction is reported as ``atom_mass_empirical`` and the KS distance is
    taken on the remaining eigenvalues against the continuous part.
    """
    if len(batch) == 0:
        raise ValueError("empty batch")
    n = batch.n
    x = batch.pooled_x()
    atom = law.atom_mass
    if atom > 0:
        zeros = x < ZERO_X
        atom_emp = np.count_nonzero(zeros) / x.size
        cont = x[~zeros]
        cond = _ConditionalLaw(law)
        ks = ks_distance(cont, cond)
    else:
        atom_emp = np.count_nonzero(x < ZERO_X) / x.size
        ks = ks_distance(x, law)

    moments = []
    for p in MOMENT_ORDERS:
        emp = math.fsum(x**p) / x.size
        pred = predicted_moment(law, p)
        moments.append((p, emp, pred, abs(emp - pred)))

    log_n = math.log(n)
    ent = batch.per_sample(von_neumann_entropy) - log_n
    lmax = batch.lambdas.max(axis=1)
    hi = law.support[1]
    return ComparisonReport(
        law=law.name,
        n=n,
        sample_count=len(batch),
        ks_distance=ks,
        moment_diffs=moments,
        entropy_offset_empirical=math.fsum(ent) / len(batch),
        entropy_offset_predicted=predicted_mean_entropy(law),
        support_edge_empirical=math.fsum(n * lmax) / len(batch),
        support_edge_predicted=hi,
        chebyshev_offset_empirical=math.fsum(-np.log(lmax) - log_n) / len(batch),
        chebyshev_offset_predicted=-math.log(hi),
        atom_mass_empirical=atom_emp,
        atom_mass_predicted=atom,
    )


class _ConditionalLaw:
    """Continuous part of a law with an atom at 0, renormalised to mass 1."""

    kind = "conditional"

    def __init__(self, law: SpectralLaw):
        self.law = law

    def cdf(self, x):
        atom = self.law.atom_mass
        return (np.asarray(self.law.cdf(x)) - atom) / (1.0 - atom)
