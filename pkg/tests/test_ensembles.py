import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from randdm.ensembles import (
    KINDS,
    DensityMatrix,
    EnsembleError,
    EnsembleSpec,
    normalized_gram,
    projected_multipartite_state,
    sample,
    sample_arcsine,
    sample_bures,
    sample_bures_hs_interpolation,
    sample_projected_multipartite,
    spectrum_of,
)
from randdm.sampling import GinibreSpec, SeededStream, ginibre, haar_unitary


def spec_for(kind, n):
    extra = {
        "k_entangled": dict(k=3),
        "ginibre_product": dict(s=2),
        "generalized": dict(k=2, s=1),
        "real_orthogonal_sum": dict(k=2, field="real"),
        "real_ginibre_product": dict(s=2, field="real"),
        "unit_interpolation": dict(a=0.3),
        "bures_hs_interpolation": dict(a=0.2),
        "induced": dict(K=n + 2),
    }.get(kind, {})
    return EnsembleSpec(kind, n, **extra)


@pytest.mark.parametrize("kind", KINDS)
@given(n=st.integers(2, 7), seed=st.integers(0, 2**32 - 1))
def test_every_kind_gives_a_density_matrix(kind, n, seed):
    rho = sample(spec_for(kind, n), SeededStream(seed))
    assert rho.n == n
    assert abs(np.trace(rho.matrix) - 1) < 1e-12
    assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-10
    lam = spectrum_of(rho).lambdas
    assert lam.min() >= -1e-12


@pytest.mark.parametrize("kind", ["real_orthogonal_sum", "real_ginibre_product"])
def test_real_variants_are_real(kind):
    rho = sample(spec_for(kind, 5), SeededStream(3))
    assert np.allclose(rho.matrix.imag, 0)


def test_single_unitary_gives_maximally_mixed():
    rho = sample(EnsembleSpec("generalized", 4, k=1, s=0), SeededStream(0))
    assert np.allclose(rho.matrix, np.eye(4) / 4, atol=1e-14)


@pytest.mark.parametrize("a", [0.0, 1.0])
def test_unit_interpolation_endpoints(a):
    rho = sample(EnsembleSpec("unit_interpolation", 5, a=a), SeededStream(1))
    assert np.allclose(rho.matrix, np.eye(5) / 5, atol=1e-14)


def test_arcsine_formula_is_gram_of_one_plus_u():
    rho = sample_arcsine(6, SeededStream(4))
    u = haar_unitary(6, SeededStream(4))
    w = np.eye(6) + u
    assert np.allclose(rho.matrix, normalized_gram(w), atol=1e-14)


def test_arcsine_needs_two():
    with pytest.raises(EnsembleError):
        sample_arcsine(1, SeededStream(0))


def test_half_interpolation_is_bures():
    a = sample_bures(5, SeededStream(8)).matrix
    b = sample_bures_hs_interpolation(5, 0.5, SeededStream(8)).matrix
    assert np.allclose(a, b, atol=1e-14)


@pytest.mark.parametrize("n,K", [(5, 2), (3, 3), (2, 6)])
def test_induced_rank(n, K):
    lam = spectrum_of(sample(EnsembleSpec("induced", n, K=K), SeededStream(2))).lambdas
    assert np.count_nonzero(lam > 1e-12) == min(n, K)


def test_rectangular_product_shapes():
    spec = EnsembleSpec("ginibre_product", 4, s=2, dims=(1.5, 0.5))
    assert spec.factor_shapes == [(4, 6), (6, 2)]
    lam = spectrum_of(sample(spec, SeededStream(0))).lambdas
    assert np.count_nonzero(lam > 1e-12) == 2


@pytest.mark.parametrize("bad", [
    dict(kind="nope", n=3),
    dict(kind="hilbert_schmidt", n=0),
    dict(kind="k_entangled", n=3, k=2, weights=(0.7, 0.7)),
    dict(kind="k_entangled", n=3, k=2, weights=(1.0,)),
    dict(kind="ginibre_product", n=3, s=0),
    dict(kind="ginibre_product", n=3, s=2, dims=(1.0,)),
    dict(kind="unit_interpolation", n=3, a=1.5),
    dict(kind="bures_hs_interpolation", n=3, a=0.7),
    dict(kind="hilbert_schmidt", n=3, field="quaternion"),
])
def test_spec_validation(bad):
    with pytest.raises(EnsembleError):
        EnsembleSpec(**bad)


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(EnsembleError):
        DensityMatrix(np.eye(2))
    with pytest.raises(EnsembleError):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]))


@given(
    kind=st.sampled_from(["k_entangled", "generalized"]),
    n=st.integers(1, 500),
    k=st.integers(1, 4),
    s=st.integers(0, 3),
    field=st.sampled_from(["complex", "real"]),
)
def test_spec_text_round_trip(kind, n, k, s, field):
    w = tuple(np.full(k, 1.0 / k).tolist())
    spec = EnsembleSpec(kind, n, k=k, s=s, weights=w, field=field)
    assert EnsembleSpec.from_text(spec.to_text()) == spec


def test_spec_from_semicolon_text():
    spec = EnsembleSpec.from_text("kind=induced; n=4; K=7")
    assert spec == EnsembleSpec("induced", 4, K=7)
    with pytest.raises(EnsembleError):
        EnsembleSpec.from_text("kind=induced; n=4; colour=blue")


def test_projected_state_equals_product_on_shared_inputs():
    rng = SeededStream(21)
    g1 = ginibre(GinibreSpec(2, 2), rng)
    g2 = ginibre(GinibreSpec(2, 2), rng)
    assert np.allclose(projected_multipartite_state([g1, g2]), normalized_gram(g1 @ g2), atol=1e-12)


def test_projected_state_three_blocks():
    rng = SeededStream(22)
    gs = [ginibre(GinibreSpec(2, 2), rng) for _ in range(3)]
    assert np.allclose(projected_multipartite_state(gs), normalized_gram(gs[0] @ gs[1] @ gs[2]), atol=1e-12)


def test_projected_budget():
    with pytest.raises(EnsembleError):
        sample_projected_multipartite(64, 4, SeededStream(0))


# N = 2 eigenvalue laws: larger eigenvalue t on (1/2, 1), density 2 P(t, 1 - t)
def hs2_density(t):
    return 2 * 3 * (2 * t - 1) ** 2


def bures2_density(t):
    return 2 * (2 / math.pi) * (2 * t - 1) ** 2 / math.sqrt(t * (1 - t))


@pytest.mark.parametrize("kind,density", [("hilbert_schmidt", hs2_density), ("bures", bures2_density)])
def test_two_level_spectrum_chi_square(kind, density):
    tops = np.array([spectrum_of(sample(EnsembleSpec(kind, 2), SeededStream(31, i))).lambdas[0]
                     for i in range(4000)])
    edges = np.linspace(0.5, 1.0, 11)
    probs = np.array([integrate.quad(density, lo, hi)[0] for lo, hi in zip(edges[:-1], edges[1:])])
    assert abs(probs.sum() - 1) < 1e-8
    counts, _ = np.histogram(tops, bins=edges)
    assert stats.chisquare(counts, probs * len(tops)).pvalue > 0.001
