import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sp_stats

from randdm.analytic import SpectralLaw
from randdm.ensembles import EnsembleSpec
from randdm.linalg import Spectrum
from randdm.sampling import SeededStream
from randdm.stats import (
    SpectrumBatch,
    chebyshev_entropy,
    compare,
    empirical_moment,
    geometric_measure,
    histogram,
    histogram_csv,
    ks_distance,
    purity,
    renyi_entropy,
    von_neumann_entropy,
)

simplex = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8).filter(lambda v: sum(v) > 1e-3).map(
    lambda v: np.array(v) / sum(v))


def test_entropy_extremes():
    assert von_neumann_entropy(Spectrum(np.array([1.0, 0.0, 0.0]))) == 0.0
    assert von_neumann_entropy(np.full(8, 1 / 8)) == pytest.approx(math.log(8))
    assert purity(np.full(4, 0.25)) == pytest.approx(0.25)
    assert chebyshev_entropy(np.array([0.5, 0.3, 0.2])) == pytest.approx(math.log(2))
    assert geometric_measure is chebyshev_entropy


def test_renyi_special_orders():
    lam = np.array([0.5, 0.3, 0.2])
    assert renyi_entropy(lam, 1) == von_neumann_entropy(lam)
    assert renyi_entropy(lam, 2) == pytest.approx(-math.log(purity(lam)))
    assert renyi_entropy(lam, math.inf) == chebyshev_entropy(lam)
    assert renyi_entropy(lam, 1 + 1e-7) == pytest.approx(von_neumann_entropy(lam), abs=1e-6)
    assert renyi_entropy(lam, 1e6) == pytest.approx(chebyshev_entropy(lam), abs=1e-5)
    with pytest.raises(ValueError):
        renyi_entropy(lam, 0)


@given(simplex, st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_renyi_non_increasing(lam, q1, q2):
    lo, hi = sorted((q1, q2))
    assert renyi_entropy(lam, hi) <= renyi_entropy(lam, lo) + 1e-10


@given(simplex)
def test_entropy_bounds(lam):
    n = lam.size
    s = von_neumann_entropy(lam)
    assert -1e-12 <= s <= math.log(n) + 1e-12
    assert chebyshev_entropy(lam) <= s + 1e-12


def small_batch(n_samples=12, seed=3, kind="hilbert_schmidt", n=6, **kw):
    return SpectrumBatch.generate(EnsembleSpec(kind, n, **kw), n_samples, seed)


def test_batch_ordering_and_ids():
    b = small_batch()
    assert len(b) == 12 and list(b.sample_ids) == list(range(12))
    assert np.allclose(b.lambdas.sum(axis=1), 1)


def test_batch_subrange_replays():
    full = small_batch(12)
    part = SpectrumBatch.generate(EnsembleSpec("hilbert_schmidt", 6), 4, 3, first_id=5)
    assert np.array_equal(part.lambdas, full.lambdas[5:9])


def test_two_workers_identical():
    spec = EnsembleSpec("bures", 8)
    one = SpectrumBatch.generate(spec, 9, 4, workers=1)
    two = SpectrumBatch.generate(spec, 9, 4, workers=2)
    assert np.array_equal(one.lambdas, two.lambdas)
    assert compare(one, SpectralLaw.bures()).to_json() == compare(two, SpectralLaw.bures()).to_json()


@given(st.permutations(range(6)), st.integers(1, 5))
def test_merge_order_independent(perm, cut):
    full = small_batch(6)
    parts = [SpectrumBatch(6, full.lambdas[[i]], [i]) for i in perm]
    merged = SpectrumBatch.merge([SpectrumBatch.merge(parts[:cut]), SpectrumBatch.merge(parts[cut:])])
    assert np.array_equal(merged.lambdas, full.lambdas)
    assert compare(merged, SpectralLaw.mp(1.0)).to_json() == compare(full, SpectralLaw.mp(1.0)).to_json()


def test_merge_rejects_duplicates():
    b = small_batch(3)
    with pytest.raises(ValueError):
        SpectrumBatch.merge([b, b])


def test_empirical_moments():
    b = small_batch()
    assert empirical_moment(b, 1) == pytest.approx(1.0, abs=1e-13)
    x = 6 * b.lambdas.reshape(-1)
    assert empirical_moment(b, 2) == pytest.approx(np.mean(x**2), rel=1e-13)


def test_ks_distance_matches_scipy():
    # iid arcsine draws: x = 2 sin^2(pi u / 2)
    u = SeededStream(1).uniform(3000)
    x = np.sort(2 * np.sin(np.pi * u / 2) ** 2)
    ref = sp_stats.kstest(x, lambda t: (2 / np.pi) * np.arcsin(np.sqrt(np.clip(t, 0, 2) / 2))).statistic
    assert ks_distance(x, SpectralLaw.arcsine()) == pytest.approx(ref, abs=1e-9)


def test_compare_dirac():
    b = small_batch(4, kind="generalized", k=1)
    r = compare(b, SpectralLaw.dirac_one())
    assert r.ks_distance == 0.0
    assert r.entropy_offset_empirical == pytest.approx(0.0, abs=1e-12)
    assert r.moment(2)[2] < 1e-12


def test_compare_atom_split():
    n, K = 64, 32
    b = small_batch(5, kind="induced", n=n, K=K)
    law = SpectralLaw.mp(K / n)
    r = compare(b, law)
    assert abs(r.atom_mass_empirical - r.atom_mass_predicted) <= 1 / n
    assert r.ks_distance < 0.1


def test_report_json_is_flat():
    r = compare(small_batch(), SpectralLaw.mp(1.0))
    flat = json.loads(r.to_json())
    assert all(not isinstance(v, (list, dict)) for v in flat.values())
    assert flat["sample_count"] == 12 and flat["n"] == 6
    assert {"m1_empirical", "m4_predicted", "ks_distance"} <= flat.keys()


def test_histogram():
    b = small_batch()
    edges, masses = histogram(b, 10, (0.0, 4.0))
    assert len(edges) == 11 and masses.sum() == pytest.approx(1.0)
    text = histogram_csv(edges, masses)
    assert text.splitlines()[0] == "bin_lo,bin_hi,mass"
    assert len(text.splitlines()) == 11
    with pytest.raises(ValueError):
        histogram(b, 0)
