"""Random density matrices from structured ensembles and their asymptotic spectra."""

from .channels import ChoiState, apply_channel, random_operation, superoperator, to_channel_state
from .ensembles import DensityMatrix, EnsembleError, EnsembleSpec, sample, spectrum_of
from .linalg import Spectrum, partial_trace, reshuffle
from .sampling import SeededStream, haar_unitary
from .stats import ComparisonReport, SpectrumBatch, compare

__version__ = "0.1.0"

__all__ = [
    "ChoiState", "ComparisonReport", "DensityMatrix", "EnsembleError", "EnsembleSpec",
    "SeededStream", "Spectrum", "SpectrumBatch", "apply_channel", "compare", "haar_unitary",
    "partial_trace", "random_operation", "reshuffle", "sample", "spectrum_of", "superoperator",
    "to_channel_state",
]
