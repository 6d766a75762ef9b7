import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvalley.spinorbit import (
    BODY_DIAGONAL,
    LambdaAxisError,
    MultipoleField,
    P_ORBITALS,
    PAULI,
    PolarizedBand,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    bsvsp_check,
    eight_spinor_hamiltonian,
    eight_spinor_jn,
    group_spin_sums,
    h_dresselhaus,
    h_lambda,
    h_rashba,
    h_total,
    orbital_soc_expectation,
    spinor_along,
    time_reversal,
)
from lvalley.tightbinding import TBParams

finite = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)

PARAMS = TBParams(es=-4.0432, ep=1.2683, esstar=11.3217, vss=-8.8578,
                  vsp=3.4757, vxx=1.6582, vxy=5.3438, vsstarp=5.3417,
                  soc_lambda=0.0293)


# ---------------------------------------------------------------- Rashba

@settings(max_examples=50, deadline=None)
@given(finite, finite)
def test_rashba_planar_form(kx, ky):
    # field along z with in-plane k: the standard kx*sy - ky*sx form
    field = MultipoleField(q_dip=(0.0, 0.0, 1.0))
    got = h_rashba(field, (kx, ky, 0.0)).matrix
    np.testing.assert_array_equal(got, kx * SIGMA_Y - ky * SIGMA_X)


def test_rashba_unit_case():
    field = MultipoleField(q_dip=(1.0, 0.0, 0.0))
    np.testing.assert_array_equal(h_rashba(field, (0.0, 1.0, 0.0)).matrix, SIGMA_Z)


def test_rashba_zero_field():
    field = MultipoleField()
    assert np.all(h_rashba(field, (0.3, -0.7, 1.1)).matrix == 0.0)


@settings(max_examples=50, deadline=None)
@given(finite, finite, finite, finite, finite, finite)
def test_rashba_is_traceless_exactly(qx, qy, qz, kx, ky, kz):
    field = MultipoleField(q_dip=(qx, qy, qz))
    assert complex(np.trace(h_rashba(field, (kx, ky, kz)).matrix)) == 0.0


# ----------------------------------------------------------- Dresselhaus

def test_dresselhaus_body_diagonal_cancels_exactly():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        t = rng.uniform(-2, 2)
        field = MultipoleField(q_xyz=rng.uniform(-2, 2))
        assert np.all(h_dresselhaus(field, (t, t, t)).matrix == 0.0)


def test_dresselhaus_explicit_value():
    field = MultipoleField(q_xyz=1.0)
    got = h_dresselhaus(field, (1.0, 2.0, 0.0)).matrix
    want = np.sqrt(15.0) * (4.0 * SIGMA_X - 2.0 * SIGMA_Y)
    np.testing.assert_allclose(got, want, atol=1e-15)


def test_dresselhaus_zero_coupling():
    field = MultipoleField(q_xyz=0.0)
    assert np.all(h_dresselhaus(field, (0.4, -1.0, 0.2)).matrix == 0.0)


# ---------------------------------------------------------------- totals

def test_free_term_is_scalar():
    field = MultipoleField(q0=0.7)
    k = np.array([0.2, -0.4, 0.9])
    h = h_total(field, k)
    np.testing.assert_allclose(h.matrix, 0.7 * (k @ k) * np.eye(2), atol=1e-15)
    w = h.eigenvalues()
    assert abs(w[0] - w[1]) < 1e-15


def test_zeeman_closed_form():
    # only a magnetic dipole: eigenvalues +/- |B| regardless of k
    field = MultipoleField(m_dip=(0.0, 0.0, 0.31))
    for k in ((0, 0, 0), (0.5, 0.1, -0.7)):
        w = h_total(field, k).eigenvalues()
        np.testing.assert_allclose(w, [-0.31, 0.31], atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(finite, finite, finite, finite, finite, finite)
def test_t_term_shifts_never_splits(tx, ty, tz, kx, ky, kz):
    field = MultipoleField(t_dip=(tx, ty, tz))
    m = h_total(field, (kx, ky, kz)).matrix
    assert m[0, 1] == 0.0 and m[1, 0] == 0.0
    assert m[0, 0] == m[1, 1]


def test_axis_hamiltonian_excludes_external_channels():
    # Zeeman and k.sigma channels are perturbations on top of the axis
    # Hamiltonian, not part of it
    k = (0.4, 0.4, 0.4)
    base = MultipoleField(q0=0.3, q_dip=(0.1, 0.2, 0.3), t_dip=(0.5, 0, 0),
                          q_xyz=0.8)
    loaded = MultipoleField(q0=0.3, q_dip=(0.1, 0.2, 0.3), t_dip=(0.5, 0, 0),
                            q_xyz=0.8, m_dip=(1, 2, 3), g0=4.0)
    np.testing.assert_array_equal(h_lambda(base, k).matrix,
                                  h_lambda(loaded, k).matrix)
    assert np.max(np.abs(h_total(loaded, k).matrix
                         - h_total(base, k).matrix)) > 0.1


def test_time_reversal_spectra():
    rng = np.random.default_rng(11)
    for _ in range(200):
        field = MultipoleField(q0=rng.uniform(-2, 2),
                               q_dip=tuple(rng.uniform(-2, 2, 3)),
                               g0=rng.uniform(-2, 2),
                               q_xyz=rng.uniform(-2, 2))
        k = rng.uniform(-2, 2, 3)
        w1 = h_total(field, k).eigenvalues()
        w2 = h_total(field, -k).eigenvalues()
        np.testing.assert_allclose(w1, w2, atol=1e-12)


def test_hermiticity_random():
    rng = np.random.default_rng(13)
    for _ in range(1000):
        field = MultipoleField(q0=rng.uniform(-2, 2),
                               q_dip=tuple(rng.uniform(-2, 2, 3)),
                               m_dip=tuple(rng.uniform(-2, 2, 3)),
                               t_dip=tuple(rng.uniform(-2, 2, 3)),
                               g0=rng.uniform(-2, 2),
                               q_xyz=rng.uniform(-2, 2))
        m = h_total(field, rng.uniform(-2, 2, 3)).matrix
        assert np.max(np.abs(m - m.conj().T)) == 0.0


# ------------------------------------------------ Λ-axis spin expectation

def test_overlap_equality_random_fields():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        field = MultipoleField(q0=rng.uniform(-2, 2),
                               q_dip=tuple(rng.uniform(-2, 2, 3)),
                               t_dip=tuple(rng.uniform(-2, 2, 3)),
                               q_xyz=rng.uniform(-2, 2))
        t = rng.uniform(-2, 2)
        up = sum(orbital_soc_expectation(p, +1, field, (t, t, t))
                 for p in P_ORBITALS)
        dn = sum(orbital_soc_expectation(p, -1, field, (t, t, t))
                 for p in P_ORBITALS)
        assert abs(up - dn) <= 1e-12


def test_expectation_zero_field():
    field = MultipoleField()
    for p in P_ORBITALS:
        for sign in (+1, -1):
            assert orbital_soc_expectation(p, sign, field, (0.3, 0.3, 0.3)) == 0.0


def test_expectation_free_term_only():
    field = MultipoleField(q0=1.3)
    k = (0.25, 0.25, 0.25)
    want = 1.3 * 3 * 0.25 ** 2
    for sign in (+1, -1):
        got = orbital_soc_expectation("pz", sign, field, k)
        assert abs(got - want) < 1e-14


def test_off_axis_rejected():
    with pytest.raises(LambdaAxisError):
        orbital_soc_expectation("px", +1, MultipoleField(), (0.3, 0.3, 0.2))


def test_bad_orbital_rejected():
    with pytest.raises(ValueError, match="p_orbital"):
        orbital_soc_expectation("dxy", +1, MultipoleField(), (0.1, 0.1, 0.1))


def test_spinor_along_eigenvectors():
    n = BODY_DIAGONAL
    sigma_n = sum(c * s for c, s in zip(n, PAULI))
    for sign in (+1, -1):
        chi = spinor_along(n, sign)
        np.testing.assert_allclose(sigma_n @ chi, sign * chi, atol=1e-15)


# ------------------------------------------------------------ eight-spinor

def test_eight_spinor_hermitian():
    field = MultipoleField(q_dip=(0.1, -0.2, 0.3), m_dip=(0.0, 0.1, 0.0))
    h = eight_spinor_hamiltonian(PARAMS, field, (0.2, 0.2, 0.2))
    assert np.max(np.abs(h - h.conj().T)) == 0.0


def test_bsvsp_zero_field_kramers():
    bands = bsvsp_check(PARAMS, MultipoleField(), (0.3, 0.3, 0.3))
    sums = group_spin_sums(bands)
    for group, total in sums:
        assert len(group) % 2 == 0
        assert np.linalg.norm(total) < 1e-10


def test_bsvsp_partner_pair():
    field = MultipoleField(q_dip=tuple(0.15 * BODY_DIAGONAL))
    bands = bsvsp_check(PARAMS, field, (0.3, 0.3, 0.3))
    for group, total in group_spin_sums(bands):
        assert np.linalg.norm(total) < 1e-10

    # the one-dimensional partner pair sits at ep + soc_lambda/2 exactly
    e_pair = PARAMS.ep + PARAMS.soc_lambda / 2.0
    pair = [b for b in bands if abs(b.energy - e_pair) < 1e-9]
    assert len(pair) == 2
    p1, p2 = (np.array(b.spin_expectation) for b in pair)
    assert abs(np.linalg.norm(p1) - np.linalg.norm(p2)) < 1e-10
    assert np.linalg.norm(p1 + p2) < 1e-10
    assert np.linalg.norm(p1) > 0.999  # fully polarized along the axis

    # oracle: time-reversal conjugation maps one partner onto the other
    overlap = abs(np.vdot(pair[1].state, time_reversal(pair[0].state)))
    assert abs(overlap - 1.0) < 1e-10

    # and they carry J.n = +/- 3/2
    jn = eight_spinor_jn()
    vals = sorted(float(np.real(b.state.conj() @ jn @ b.state)) for b in pair)
    np.testing.assert_allclose(vals, [-1.5, 1.5], atol=1e-9)


def test_bsvsp_requires_lambda_axis():
    with pytest.raises(LambdaAxisError):
        bsvsp_check(PARAMS, MultipoleField(), (0.1, 0.2, 0.3))


def test_polarization_norm_guard():
    with pytest.raises(ValueError):
        PolarizedBand(0.0, (1.0, 1.0, 1.0), ())


# ------------------------------------------------------------- multipoles

def test_from_multipoles_accepted_channels():
    f = MultipoleField.from_multipoles(
        {"Q0": 1.0, "Q1": (0.1, 0.2, 0.3), "M1": (0, 0, 0.5),
         "T1": (0, 0, 0), "G0": 0.2, "Qxyz": 0.7})
    assert f.q0 == 1.0 and f.q_xyz == 0.7 and f.m_dip == (0.0, 0.0, 0.5)


@pytest.mark.parametrize("key", ["Q2", "G1", "M3", "T2", "Q4"])
def test_higher_multipoles_not_implemented(key):
    with pytest.raises(NotImplementedError, match="not implemented"):
        MultipoleField.from_multipoles({key: 1.0})


def test_field_validation():
    with pytest.raises(ValueError):
        MultipoleField(q0=float("inf"))
    with pytest.raises(ValueError):
        MultipoleField(q_dip=(1.0, 2.0))
