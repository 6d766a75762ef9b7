import io

import numpy as np
import pytest

from lvalley.config import load_config
from lvalley.lattice import standard_path
from lvalley.tightbinding import (
    MATRIX_DIM,
    N_VALENCE,
    TBParams,
    bands_to_csv,
    basis_labels,
    build_hamiltonian,
    connection_overlaps,
    fractions_to_csv,
    orbital_fractions,
    orbital_fractions_at,
    solve_bands,
)


@pytest.fixture(scope="module")
def params():
    return TBParams.from_config(load_config())


@pytest.fixture(scope="module")
def params_nosoc(params):
    return TBParams(es=params.es, ep=params.ep, esstar=params.esstar,
                    vss=params.vss, vsp=params.vsp, vxx=params.vxx,
                    vxy=params.vxy, vsstarp=params.vsstarp, soc_lambda=0.0)


@pytest.fixture(scope="module")
def delta_bands(params):
    return solve_bands(params, standard_path("delta", 101))


def test_dimension_and_labels(params):
    h = build_hamiltonian(params, (0.1, 0.2, 0.3))
    assert h.shape == (MATRIX_DIM, MATRIX_DIM) == (20, 20)
    labels = basis_labels()
    assert len(labels) == 20
    assert "|s↑⟩_a" in labels and "|pz↓⟩_b" in labels


def test_hermiticity_random_k(params):
    rng = np.random.default_rng(23)
    for _ in range(1000):
        h = build_hamiltonian(params, rng.uniform(-2, 2, 3))
        assert np.max(np.abs(h - h.conj().T)) < 1e-14


def test_gamma_point_block_oracle(params_nosoc):
    # at k = 0 the model decouples: s levels at es +/- vss, p levels at
    # ep -/+ vxx (threefold each), s* levels at esstar (twice)
    p = params_nosoc
    w = np.linalg.eigvalsh(build_hamiltonian(p, (0, 0, 0)))
    want = sorted([p.es + p.vss, p.es - p.vss] + 3 * [p.ep - p.vxx]
                  + 3 * [p.ep + p.vxx] + 2 * [p.esstar])
    np.testing.assert_allclose(w[::2], want, atol=1e-12)  # spin-doubled


def test_gamma_valence_top_threefold(params_nosoc):
    w = np.linalg.eigvalsh(build_hamiltonian(params_nosoc, (0, 0, 0)))
    top = w[N_VALENCE - 1]
    cluster = np.abs(w - top) < 1e-8
    assert cluster.sum() == 6  # threefold orbital level, spin doubled


def test_gamma_soc_splits_conduction_p_level(params, params_nosoc):
    # the p-derived conduction level splits into a fourfold and a twofold
    # multiplet separated by 1.5 * soc_lambda
    w0 = np.linalg.eigvalsh(build_hamiltonian(params_nosoc, (0, 0, 0)))
    e15 = w0[N_VALENCE]  # six degenerate states without soc
    w = np.linalg.eigvalsh(build_hamiltonian(params, (0, 0, 0)))
    sel = w[np.abs(w - e15) < 1.0]
    assert len(sel) == 6
    levels, counts = np.unique(np.round(sel, 9), return_counts=True)
    assert sorted(counts) == [2, 4]
    split = levels.max() - levels.min()
    np.testing.assert_allclose(split, 1.5 * params.soc_lambda, atol=1e-10)
    assert counts[np.argmax(levels)] == 4  # quartet above the doublet here


def test_time_reversal_k_to_minus_k(params):
    rng = np.random.default_rng(29)
    for _ in range(50):
        k = rng.uniform(-1, 1, 3)
        w1 = np.linalg.eigvalsh(build_hamiltonian(params, k))
        w2 = np.linalg.eigvalsh(build_hamiltonian(params, -k))
        np.testing.assert_allclose(w1, w2, atol=1e-10)


def test_no_soc_even_multiplicity(params_nosoc):
    rng = np.random.default_rng(31)
    for _ in range(20):
        w = np.linalg.eigvalsh(build_hamiltonian(params_nosoc, rng.uniform(-1, 1, 3)))
        assert np.all(np.abs(w[0::2] - w[1::2]) < 1e-10)


def test_band_markers(params, delta_bands):
    kmin, e_min = delta_bands.conduction_minimum()
    assert abs(kmin[2] - 0.85) <= 0.05
    gap = e_min - delta_bands.valence_maximum()
    assert abs(gap - 1.1) <= 0.2
    e_l = np.linalg.eigvalsh(build_hamiltonian(params, (0.5, 0.5, 0.5)))[N_VALENCE]
    assert abs((e_l - delta_bands.valence_maximum()) - 2.1) <= 0.3
    assert abs((e_l - e_min) - 1.0) <= 0.3


def test_lowest_lambda_band_composition(params):
    fr = orbital_fractions_at(params, (0.25, 0.25, 0.25), N_VALENCE)
    assert abs(fr.s_frac - 0.55) <= 0.15  # s-like state


def test_delta_band_composition_near_minimum(params):
    fr = orbital_fractions_at(params, (0.0, 0.0, 0.85), N_VALENCE)
    assert fr.pz_frac > fr.s_frac
    assert fr.pz_frac >= 0.8 - 0.15


def test_comparative_s_character(params):
    s_lambda = orbital_fractions_at(params, (0.25, 0.25, 0.25), N_VALENCE).s_frac
    s_delta = orbital_fractions_at(params, (0.0, 0.0, 0.85), N_VALENCE).s_frac
    assert s_lambda > s_delta


def test_fraction_completeness(params):
    rng = np.random.default_rng(37)
    for _ in range(20):
        fr = orbital_fractions_at(params, rng.uniform(-1, 1, 3),
                                  int(rng.integers(0, MATRIX_DIM)))
        assert abs(fr.s_frac + fr.p_frac + fr.sstar_frac - 1.0) < 1e-10
        assert 0.0 <= fr.pz_frac <= fr.p_frac + 1e-12


def test_fractions_degenerate_partners_agree(params, delta_bands):
    # Kramers partners share the cluster-averaged composition
    f1 = orbital_fractions(delta_bands, N_VALENCE, 30)
    f2 = orbital_fractions(delta_bands, N_VALENCE + 1, 30)
    assert f1 == f2


def test_fraction_index_errors(delta_bands):
    with pytest.raises(IndexError):
        orbital_fractions(delta_bands, 0, 10_000)
    with pytest.raises(IndexError):
        orbital_fractions(delta_bands, 99, 0)


def test_eigenvalues_sorted_and_states_orthonormal(delta_bands):
    assert np.all(np.diff(delta_bands.energies, axis=1) >= -1e-12)
    v = delta_bands.states[17]
    np.testing.assert_allclose(v.conj().T @ v, np.eye(MATRIX_DIM), atol=1e-10)


def test_connectivity_overlaps(params):
    bands = solve_bands(params, standard_path("delta", 101))
    ov = connection_overlaps(bands)
    assert float(ov.min()) > 0.5


def test_csv_outputs(delta_bands):
    buf = io.StringIO()
    bands_to_csv(delta_bands, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "s,k_label,band_index,energy_ev"
    assert len(lines) == 1 + delta_bands.n_k * delta_bands.n_bands
    buf = io.StringIO()
    fractions_to_csv(delta_bands, buf, bands=[N_VALENCE])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "band_index,k_index,s,p,pz,sstar"
    assert len(lines) == 1 + delta_bands.n_k


def test_params_validation():
    with pytest.raises(ValueError):
        TBParams(es=float("nan"), ep=0, esstar=0, vss=0, vsp=0, vxx=0,
                 vxy=0, vsstarp=0)
    with pytest.raises(ValueError):
        TBParams(es=0, ep=0, esstar=0, vss=0, vsp=0, vxx=0, vxy=0,
                 vsstarp=0, soc_lambda=-0.1)
