"""Random density matrices from structured ensembles.

Every ensemble produces ``rho = W W^dagger / Tr(W W^dagger)`` for a random
matrix ``W`` built from Haar unitaries (or orthogonals) and Ginibre factors.
:func:`sample` dispatches on :class:`EnsembleSpec.kind`; the individual
constructors can also be called directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

from .linalg import Spectrum, hermitian_eigenvalues
from .sampling import GinibreSpec, SeededStream, ginibre, haar_orthogonal, haar_unitary

KINDS = (
    "induced",
    "hilbert_schmidt",
    "bures",
    "arcsine",
    "k_entangled",
    "ginibre_product",
    "generalized",
    "real_orthogonal_sum",
    "real_ginibre_product",
    "unit_interpolation",
    "bures_hs_interpolation",
)

# amplitude budget for the explicit 2s-partite construction
MULTIPARTITE_MAX_AMPLITUDES = 2**20


class EnsembleError(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleSpec:
    """Declarative description of an ensemble.

    ``K`` is the environment dimension of the induced ensemble; ``weights``
    and ``dims`` default to uniform weights and square factors.
    """

    kind: str
    n: int
    K: int | None = None
    k: int = 1
    s: int = 0
    weights: tuple[float, ...] | None = None
    dims: tuple[float, ...] | None = None
    a: float = 0.0
    field: str = "complex"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise EnsembleError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 1:
            raise EnsembleError("n must be >= 1")
        if self.k < 1:
            raise EnsembleError("k must be >= 1")
        if self.s < 0:
            raise EnsembleError("s must be >= 0")
        if self.field not in ("complex", "real"):
            raise EnsembleError(f"field must be 'complex' or 'real', not {self.field!r}")
        if self.K is not None and self.K < 1:
            raise EnsembleError("K must be >= 1")
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            object.__setattr__(self, "weights", w)
            if len(w) != self.k:
                raise EnsembleError(f"expected {self.k} weights, got {len(w)}")
            if min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
                raise EnsembleError("weights must be nonnegative and sum to 1")
        if self.dims is not None:
            d = tuple(float(x) for x in self.dims)
            object.__setattr__(self, "dims", d)
            if len(d) != self.s:
                raise EnsembleError(f"expected {self.s} dimension ratios, got {len(d)}")
            if min(d, default=1.0) <= 0:
                raise EnsembleError("dimension ratios must be positive")
        if not np.isfinite(self.a) or self.a < 0:
            raise EnsembleError("a must be a nonnegative real")
        if self.kind == "unit_interpolation" and self.a > 1:
            raise EnsembleError("unit_interpolation needs a in [0, 1]")
        if self.kind == "bures_hs_interpolation" and self.a > 0.5:
            raise EnsembleError("bures_hs_interpolation needs a in [0, 1/2]")
        if self.kind in ("ginibre_product", "real_ginibre_product") and self.s < 1:
            raise EnsembleError(f"{self.kind} needs s >= 1")

    @property
    def probabilities(self) -> np.ndarray:
        if self.weights is None:
            return np.full(self.k, 1.0 / self.k)
        return np.asarray(self.weights)

    @property
    def factor_shapes(self) -> list[tuple[int, int]]:
        """Shapes ``N_i x M_i`` of the Ginibre chain, with ``M_i = N_{i+1}``."""
        ratios = self.dims if self.dims is not None else (1.0,) * self.s
        shapes = []
        rows = self.n
        for c in ratios:
            cols = max(1, int(round(self.n * c)))
            shapes.append((rows, cols))
            rows = cols
        return shapes

    def to_text(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, tuple):
                v = ",".join(repr(x) for x in v)
            out.append(f"{f.name}={v}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EnsembleSpec":
        kw = {}
        for raw in text.replace(";", "\n").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            kw[key.strip()] = val.strip()
        return cls.from_mapping(kw)

    @classmethod
    def from_mapping(cls, kw: dict) -> "EnsembleSpec":
        conv = {}
        for key, val in kw.items():
            if val is None:
                continue
            if key in ("n", "K", "k", "s"):
                conv[key] = int(val)
            elif key == "a":
                conv[key] = float(val)
            elif key in ("weights", "dims"):
                if isinstance(val, str):
                    val = [x for x in val.split(",") if x.strip()]
                conv[key] = tuple(float(x) for x in val)
            elif key in ("kind", "field"):
                conv[key] = str(val)
            else:
                raise EnsembleError(f"unknown ensemble key {key!r}")
        if "kind" not in conv or "n" not in conv:
            raise EnsembleError("ensemble needs at least kind and n")
        return cls(**conv)

    def with_n(self, n: int) -> "EnsembleSpec":
        return replace(self, n=n)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    spec: EnsembleSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise EnsembleError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) >= 1e-10:
            raise EnsembleError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise EnsembleError("density matrix does not have unit trace")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def is_valid(self, tol: float = 1e-12) -> bool:
        return bool(spectrum_of(self).lambdas.min() >= -tol)


def normalized_gram(w: np.ndarray) -> np.ndarray:
    """``W W^dagger / Tr(W W^dagger)``, symmetrised to be exactly Hermitian."""
    g = w @ w.conj().T
    g = 0.5 * (g + g.conj().T)
    return g / np.trace(g).real


def _haar(n, rng, fld):
    return haar_orthogonal(n, rng) if fld == "real" else haar_unitary(n, rng)


def _ginibre_chain(shapes, rng, fld) -> np.ndarray:
    out = None
    for rows, cols in shapes:
        g = ginibre(GinibreSpec(rows, cols, fld), rng)
        out = g if out is None else out @ g
    return out


def weighted_unitary_sum(n: int, p, rng: SeededStream, fld: str = "complex") -> np.ndarray:
    """``sum_i p_i U_i`` for independent Haar unitaries (or orthogonals)."""
    p = np.asarray(p, dtype=float)
    dtype = float if fld == "real" else complex
    total = np.zeros((n, n), dtype=dtype)
    for pi in p:
        total = total + pi * _haar(n, rng, fld)
    return total


def generalized_w(spec: EnsembleSpec, rng: SeededStream) -> np.ndarray:
    """The matrix ``(sum_i p_i U_i) G_1 ... G_s`` of the two-parameter family."""
    w = weighted_unitary_sum(spec.n, spec.probabilities, rng, spec.field)
    if spec.s:
        w = w @ _ginibre_chain(spec.factor_shapes, rng, spec.field)
    return w


def sample_generalized(spec: EnsembleSpec, rng: SeededStream) -> DensityMatrix:
    return DensityMatrix(normalized_gram(generalized_w(spec, rng)), spec)


def sample_induced(n: int, K: int, rng: SeededStream) -> DensityMatrix:
    x = ginibre(GinibreSpec(n, K), rng)
    return DensityMatrix(normalized_gram(x), EnsembleSpec("induced", n, K=K))


def sample_hilbert_schmidt(n: int, rng: SeededStream) -> DensityMatrix:
    x = ginibre(GinibreSpec(n, n), rng)
    return DensityMatrix(normalized_gram(x), EnsembleSpec("hilbert_schmidt", n))


def sample_arcsine(n: int, rng: SeededStream) -> DensityMatrix:
    """``(2 + U + U^dagger) / (2N + Tr(U + U^dagger))`` with the exact finite-N denominator."""
    if n < 2:
        raise EnsembleError("arcsine ensemble needs n >= 2")
    u = haar_unitary(n, rng)
    num = 2.0 * np.eye(n) + u + u.conj().T
    num = 0.5 * (num + num.conj().T)
    den = 2.0 * n + np.trace(u + u.conj().T).real
    return DensityMatrix(num / den, EnsembleSpec("arcsine", n))


def sample_k_entangled(n: int, k: int, p, rng: SeededStream) -> DensityMatrix:
    spec = EnsembleSpec("k_entangled", n, k=k, weights=None if p is None else tuple(p))
    w = weighted_unitary_sum(n, spec.probabilities, rng)
    return DensityMatrix(normalized_gram(w), spec)


def sample_bures(n: int, rng: SeededStream) -> DensityMatrix:
    u = haar_unitary(n, rng)
    g = ginibre(GinibreSpec(n, n), rng)
    w = (np.eye(n) + u) @ g
    return DensityMatrix(normalized_gram(w), EnsembleSpec("bures", n))


def sample_ginibre_product(n: int, s: int, dims, rng: SeededStream) -> DensityMatrix:
    spec = EnsembleSpec("ginibre_product", n, s=s, dims=None if dims is None else tuple(dims))
    w = _ginibre_chain(spec.factor_shapes, rng, "complex")
    return DensityMatrix(normalized_gram(w), spec)


def sample_real_orthogonal_sum(n: int, k: int, rng: SeededStream) -> DensityMatrix:
    spec = EnsembleSpec("real_orthogonal_sum", n, k=k, field="real")
    w = weighted_unitary_sum(n, spec.probabilities, rng, "real")
    return DensityMatrix(normalized_gram(w), spec)


def sample_real_ginibre_product(n: int, s: int, rng: SeededStream) -> DensityMatrix:
    spec = EnsembleSpec("real_ginibre_product", n, s=s, field="real")
    w = _ginibre_chain(spec.factor_shapes, rng, "real")
    return DensityMatrix(normalized_gram(w), spec)


def sample_unit_interpolation(n: int, a: float, rng: SeededStream) -> DensityMatrix:
    spec = EnsembleSpec("unit_interpolation", n, a=a)
    w = a * np.eye(n) + (1.0 - a) * haar_unitary(n, rng)
    return DensityMatrix(normalized_gram(w), spec)


def sample_bures_hs_interpolation(n: int, a: float, rng: SeededStream) -> DensityMatrix:
    """``W = (a + (1 - a) U) G``; ``a = 1/2`` is Bures, ``a = 0`` is Hilbert-Schmidt."""
    spec = EnsembleSpec("bures_hs_interpolation", n, a=a)
    u = haar_unitary(n, rng)
    g = ginibre(GinibreSpec(n, n), rng)
    w = (a * np.eye(n) + (1.0 - a) * u) @ g
    return DensityMatrix(normalized_gram(w), spec)


def projected_multipartite_state(blocks) -> np.ndarray:
    """Reduced state of subsystem 1 after projecting a 2s-partite product state.

    ``blocks[i]`` is the ``N x N`` coefficient matrix of the pure state on the
    pair ``(2i+1, 2i+2)``.  The full state vector is assembled explicitly,
    each inner pair ``(2i, 2i+1)`` is projected onto the maximally entangled
    state, and everything except subsystem 1 is traced out.
    """
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    s = len(blocks)
    n = blocks[0].shape[0]
    if any(b.shape != (n, n) for b in blocks):
        raise EnsembleError("all blocks must be N x N")
    if n ** (2 * s) > MULTIPARTITE_MAX_AMPLITUDES:
        raise EnsembleError(f"N^(2s) = {n ** (2 * s)} exceeds the amplitude budget")
    psi = blocks[0]
    for b in blocks[1:]:
        psi = np.multiply.outer(psi, b)
    # psi has one axis per subsystem 1..2s
    bell = np.eye(n) / np.sqrt(n)
    for pair in range(1, s):
        left, right = 2 * pair - 1, 2 * pair
        amp = np.einsum(psi, list(range(2 * s)), bell.conj(), [left, right],
                        [ax for ax in range(2 * s) if ax not in (left, right)])
        psi = np.moveaxis(np.multiply.outer(amp, bell), (-2, -1), (left, right))
    phi = psi.reshape(n, -1)
    return normalized_gram(phi)


def sample_projected_multipartite(n: int, s: int, rng: SeededStream) -> DensityMatrix:
    """Explicit 2s-partite construction, kept as an oracle for the product form."""
    if s < 1:
        raise EnsembleError("s must be >= 1")
    if n ** (2 * s) > MULTIPARTITE_MAX_AMPLITUDES:
        raise EnsembleError(f"N^(2s) = {n ** (2 * s)} exceeds the amplitude budget")
    blocks = [haar_unitary(n * n, rng)[:, 0].reshape(n, n) for _ in range(s)]
    return DensityMatrix(projected_multipartite_state(blocks), EnsembleSpec("ginibre_product", n, s=s))


def sample(spec: EnsembleSpec, rng: SeededStream) -> DensityMatrix:
    kind, n = spec.kind, spec.n
    if kind == "induced":
        rho = sample_induced(n, spec.K if spec.K is not None else n, rng)
    elif kind == "hilbert_schmidt":
        rho = sample_hilbert_schmidt(n, rng)
    elif kind == "bures":
        rho = sample_bures(n, rng)
    elif kind == "arcsine":
        rho = sample_arcsine(n, rng)
    elif kind == "k_entangled":
        rho = sample_k_entangled(n, spec.k, spec.weights, rng)
    elif kind == "ginibre_product":
        rho = sample_ginibre_product(n, spec.s, spec.dims, rng)
    elif kind == "generalized":
        rho = sample_generalized(spec, rng)
    elif kind == "real_orthogonal_sum":
        rho = sample_real_orthogonal_sum(n, spec.k, rng)
    elif kind == "real_ginibre_product":
        rho = sample_real_ginibre_product(n, spec.s, rng)
    elif kind == "unit_interpolation":
        rho = sample_unit_interpolation(n, spec.a, rng)
    else:
        rho = sample_bures_hs_interpolation(n, spec.a, rng)
    return DensityMatrix(rho.matrix, spec)


def spectrum_of(rho: DensityMatrix) -> Spectrum:
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return hermitian_eigenvalues(m)


def rescaled(spectrum: Spectrum, n: int | None = None) -> np.ndarray:
    n = spectrum.n if n is None else n
    return n * spectrum.lambdas
