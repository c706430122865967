"""Random quantum operations through the Choi correspondence.

Convention: the first tensor factor (A) is the channel output and the second
(B) its input, with

    sigma[(i, k), (j, l)] = Phi(|k><l|)[i, j] / N,

so trace preservation reads ``Tr_A sigma = 1/N``.  Density matrices are
vectorised row-major, ``vec(rho)[(k, l)] = rho[k, l]``, and the superoperator
is ``S = N * reshuffle(sigma)``.

Worked 2-qubit example: the identity channel has sigma = |Psi+><Psi+| with
|Psi+> = (|00> + |11>)/sqrt(2), so sigma has the value 1/2 at the four
entries with row, column in {(0,0), (1,1)} (flattened 0 and 3).  Reshuffling
moves them to the diagonal entries (0,0), (1,1), (2,2), (3,3) of a 4x4
matrix: reshuffle(sigma) = 1/2 * identity and S = identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import DensityMatrix, EnsembleSpec, sample, spectrum_of
from .linalg import inverse_sqrt_psd, partial_trace, reshuffle
from .sampling import SeededStream

TP_TOL = 1e-10
PSD_TOL = 1e-10


class ChannelError(ValueError):
    pass


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


@dataclass(frozen=True)
class ChoiState:
    sigma: np.ndarray
    n: int

    def __post_init__(self):
        n = self.n
        if self.sigma.shape != (n * n, n * n):
            raise ChannelError(f"Choi matrix must be {n * n} x {n * n}")
        DensityMatrix(self.sigma)
        err = tp_error(self.sigma, n)
        if err >= TP_TOL:
            raise ChannelError(f"trace condition violated by {err:.3e}")

    def cptp_report(self) -> dict:
        return cptp_report(self.sigma, self.n)


def tp_error(sigma: np.ndarray, n: int) -> float:
    """``max |Tr_A sigma - 1/N|``."""
    y = partial_trace(sigma, n, n, keep="B")
    return float(np.max(np.abs(y - np.eye(n) / n)))


def cptp_report(sigma: np.ndarray, n: int) -> dict:
    lam_min = float(np.linalg.eigvalsh(0.5 * (sigma + sigma.conj().T)).min())
    tp = tp_error(sigma, n)
    return {
        "n": n,
        "min_eigenvalue": lam_min,
        "tp_error": tp,
        "hermitian_error": float(np.max(np.abs(sigma - sigma.conj().T))),
        "trace": float(np.trace(sigma).real),
        "completely_positive": lam_min >= -PSD_TOL,
        "trace_preserving": tp < TP_TOL,
    }


def to_channel_state(omega) -> ChoiState:
    """Project a state on ``N^2`` onto the trace condition.

    ``sigma = (1 (x) Y^-1/2) omega (1 (x) Y^-1/2) / N`` with ``Y = Tr_A omega``.
    A singular ``Y`` is rejected rather than regularised.
    """
    w = _matrix(omega)
    dim = w.shape[0]
    n = int(round(dim**0.5))
    if n * n != dim:
        raise ChannelError(f"state dimension {dim} is not a square")
    y = partial_trace(w, n, n, keep="B")
    try:
        y_inv = inverse_sqrt_psd(y)
    except np.linalg.LinAlgError as exc:
        raise ChannelError(f"environment-deficient state: {exc}") from None
    op = np.kron(np.eye(n), y_inv)
    sigma = op @ w @ op / n
    sigma = 0.5 * (sigma + sigma.conj().T)
    return ChoiState(sigma, n)


def superoperator(choi: ChoiState) -> np.ndarray:
    """Matrix acting on row-major ``vec(rho)``."""
    return choi.n * reshuffle(choi.sigma, choi.n)


def apply_channel(choi: ChoiState, rho) -> np.ndarray:
    r = _matrix(rho)
    n = choi.n
    return (superoperator(choi) @ r.reshape(-1)).reshape(n, n)


def identity_choi(n: int) -> ChoiState:
    psi = np.eye(n, dtype=complex).reshape(-1) / np.sqrt(n)
    return ChoiState(np.outer(psi, psi.conj()), n)


def random_operation(n: int, rng: SeededStream, ensemble: EnsembleSpec | None = None) -> ChoiState:
    """Sample ``omega`` on ``N^2`` (induced with ``K = N^2`` by default) and project it."""
    if ensemble is None:
        ensemble = EnsembleSpec("induced", n * n, K=n * n)
    if ensemble.n != n * n:
        raise ChannelError(f"ensemble dimension must be {n * n}, got {ensemble.n}")
    if n == 1:
        return ChoiState(np.ones((1, 1), dtype=complex), 1)
    return to_channel_state(sample(ensemble, rng))


def choi_spectrum(choi: ChoiState):
    return spectrum_of(choi.sigma)
