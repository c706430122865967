"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects (complex128 unless a routine
says otherwise).  The helpers here add the dimension checks and the
conventions the rest of the package relies on: R-diagonal phase fixing in
QR, descending Hermitian spectra, bipartite partial traces and the
reshuffle (realignment) permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_EIG = 1e-12
TOL_HERMITIAN = 1e-10
TOL_PIVOT = 1e-14


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit the requested operation."""


class RankDeficientError(np.linalg.LinAlgError):
    """Raised by :func:`qr_unitary` when a pivot collapses."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a Hermitian matrix sorted in descending order."""

    lambdas: np.ndarray
    trace_normalized: bool = False

    @property
    def n(self) -> int:
        return int(self.lambdas.shape[0])

    def rescaled(self) -> np.ndarray:
        """Return ``x = n * lambda``."""
        return self.n * self.lambdas


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {m.shape}")
    return m


def adjoint(a: np.ndarray) -> np.ndarray:
    return as_matrix(a).conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def qr_unitary(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR decomposition with a positive real diagonal in ``R``.

    Fixing the phases of ``diag(R)`` makes the factorisation unique, which is
    what turns QR of a Ginibre matrix into an exactly Haar-distributed ``Q``.

    Raises
    ------
    RankDeficientError
        If some ``|R_jj|`` falls below ``1e-14 * ||A||``.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"qr_unitary needs a square matrix, got {a.shape}")
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    scale = np.linalg.norm(a, 2) if a.size else 0.0
    if np.any(np.abs(d) <= TOL_PIVOT * scale) or scale == 0.0:
        raise RankDeficientError("matrix is numerically rank deficient")
    phases = d / np.abs(d)
    q = q * phases[np.newaxis, :]
    r = r * phases.conj()[:, np.newaxis]
    return q, r


def check_hermitian(h: np.ndarray, tol: float = TOL_HERMITIAN) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    if h.size and np.max(np.abs(h - h.conj().T)) >= tol:
        raise ValueError("matrix is not Hermitian")
    return h


def hermitian_eigenvalues(h: np.ndarray, tol: float = TOL_HERMITIAN) -> Spectrum:
    """Real spectrum of a Hermitian matrix, largest eigenvalue first.

    Values in ``[-TOL_EIG, 0)`` are roundoff and are clamped to zero; more
    negative values are left alone so that indefinite input stays visible.
    """
    h = check_hermitian(h, tol)
    herm = 0.5 * (h + h.conj().T)
    lam = np.linalg.eigvalsh(herm)[::-1].copy()
    lam[(lam < 0) & (lam >= -TOL_EIG)] = 0.0
    tr = float(np.real(np.trace(h)))
    return Spectrum(lam, trace_normalized=abs(tr - 1.0) < 1e-10)


def _split_dims(n: int, dim_a: int, dim_b: int) -> None:
    if dim_a < 1 or dim_b < 1 or dim_a * dim_b != n:
        raise DimensionError(f"size {n} is not {dim_a} x {dim_b}")


def partial_trace(rho: np.ndarray, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Trace out one factor of an operator on ``H_A (x) H_B``.

    ``keep`` names the factor that survives (``"A"`` or ``"B"``).
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got {rho.shape}")
    _split_dims(rho.shape[0], dim_a, dim_b)
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    keep = keep.upper()
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def reshuffle(sigma: np.ndarray, n: int) -> np.ndarray:
    """Realignment of an ``n^2 x n^2`` matrix.

    The entry at row ``(i, j)``, column ``(k, l)`` moves to row ``(i, k)``,
    column ``(j, l)``.  Applying it twice gives the input back.
    """
    sigma = as_matrix(sigma)
    if sigma.shape != (n * n, n * n):
        raise DimensionError(f"expected a {n * n} x {n * n} matrix, got {sigma.shape}")
    t = sigma.reshape(n, n, n, n)
    return t.transpose(0, 2, 1, 3).reshape(n * n, n * n)


def inverse_sqrt_psd(y: np.ndarray, floor: float = TOL_EIG) -> np.ndarray:
    """``Y^{-1/2}`` of a positive definite Hermitian matrix by eigendecomposition."""
    y = check_hermitian(y)
    w, v = np.linalg.eigh(0.5 * (y + y.conj().T))
    if w.min() <= floor:
        raise np.linalg.LinAlgError(f"smallest eigenvalue {w.min():.3e} is not above {floor:g}")
    return (v / np.sqrt(w)) @ v.conj().T
