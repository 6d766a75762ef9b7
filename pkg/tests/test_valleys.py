import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvalley.config import load_config
from lvalley.valleys import (
    SplittingReport,
    Valley,
    ValleySet,
    box_level_ev,
    confinement_mass,
    split_valleys,
)

mass = st.floats(min_value=0.03, max_value=3.0, allow_nan=False)
unit3 = st.tuples(*[st.floats(min_value=-1.0, max_value=1.0)] * 3).filter(
    lambda v: np.linalg.norm(v) > 1e-3)


def mass_tensor_oracle(axis, ml, mt, growth):
    """Project the inverse mass tensor instead of using the angle formula."""
    v = np.asarray(axis, float)
    v = v / np.linalg.norm(v)
    n = np.asarray(growth, float)
    n = n / np.linalg.norm(n)
    inv = np.outer(v, v) / ml + (np.eye(3) - np.outer(v, v)) / mt
    return 1.0 / float(n @ inv @ n)


def test_aligned_and_perpendicular():
    v = Valley((0, 0, 1), ml=0.916, mt=0.19, family="X0")
    assert confinement_mass(v, (0, 0, 1)) == pytest.approx(0.916)
    assert confinement_mass(v, (1, 0, 0)) == pytest.approx(0.19)


def test_tilted_l_valley_closed_form():
    # (-1,1,1)/sqrt(3) axis against (1,1,1)/sqrt(3) growth: cos^2 = 1/9
    ml, mt = 1.59, 0.082
    v = Valley((-1, 1, 1), ml=ml, mt=mt, family="L")
    got = confinement_mass(v, (1, 1, 1))
    want = 1.0 / ((1.0 / 9.0) / ml + (8.0 / 9.0) / mt)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(mass_tensor_oracle((-1, 1, 1), ml, mt, (1, 1, 1)))


@settings(max_examples=100, deadline=None)
@given(unit3, unit3, mass, mass)
def test_confinement_mass_tensor_oracle(axis, growth, ml, mt):
    v = Valley(axis, ml=ml, mt=mt, family="L")
    got = confinement_mass(v, growth)
    assert got == pytest.approx(mass_tensor_oracle(axis, ml, mt, growth), rel=1e-10)
    assert min(ml, mt) - 1e-12 <= got <= max(ml, mt) + 1e-12


def test_x0_split_pattern():
    vset = ValleySet.x0_family(0.916, 0.19, growth_axis=(0, 0, 1))
    rep = split_valleys(vset, 8.0)
    assert rep.degeneracy_pattern() == (2, 4)
    assert rep.ground_degeneracy == 2
    assert rep.groups[0].m_z == pytest.approx(0.916)
    assert rep.groups[1].m_z == pytest.approx(0.19)


def test_l_split_pattern():
    vset = ValleySet.l_family(1.59, 0.082, growth_axis=(1, 1, 1))
    rep = split_valleys(vset, 8.0)
    assert rep.degeneracy_pattern() == (1, 3)
    assert rep.ground_degeneracy == 1


def test_isotropic_masses_no_split():
    vset = ValleySet.l_family(0.3, 0.3, growth_axis=(1, 1, 1))
    rep = split_valleys(vset, 5.0)
    assert rep.degeneracy_pattern() == (4,)
    assert rep.splitting_ev() == 0.0


@settings(max_examples=60, deadline=None)
@given(mass, st.floats(min_value=1.2, max_value=12.0),
       st.floats(min_value=0.5, max_value=50.0))
def test_patterns_for_any_anisotropy_and_width(mt, ratio, width):
    ml = mt * ratio
    assert split_valleys(ValleySet.x0_family(ml, mt, (0, 0, 1)),
                         width).degeneracy_pattern() == (2, 4)
    assert split_valleys(ValleySet.l_family(ml, mt, (1, 1, 1)),
                         width).degeneracy_pattern() == (1, 3)


def test_inverse_square_width_scaling():
    vset = ValleySet.l_family(1.59, 0.082, growth_axis=(1, 1, 1))
    full = split_valleys(vset, 12.0).splitting_ev()
    half = split_valleys(vset, 6.0).splitting_ev()
    assert abs(half / full - 4.0) <= 4.0 * 1e-9


def test_rotation_invariance():
    rng = np.random.default_rng(3)
    # random rotation via QR of a random matrix
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    base = ValleySet.l_family(1.59, 0.082, growth_axis=(1, 1, 1))
    rotated = ValleySet(
        valleys=tuple(Valley(tuple(q @ v.axis), v.ml, v.mt, v.family)
                      for v in base.valleys),
        growth_axis=tuple(q @ np.array(base.growth_axis)))
    r1 = split_valleys(base, 7.0)
    r2 = split_valleys(rotated, 7.0)
    assert r1.degeneracy_pattern() == r2.degeneracy_pattern()
    for g1, g2 in zip(r1.groups, r2.groups):
        assert g1.m_z == pytest.approx(g2.m_z, abs=1e-10)
        assert g1.energy_ev == pytest.approx(g2.energy_ev, abs=1e-10)


def test_default_masses_satisfy_anisotropy_claim():
    cfg = load_config()["valleys"]
    assert cfg["x0_ml"] / cfg["x0_mt"] > 4.0


def test_box_level_value():
    # h^2/(8 m0 W^2) at W = 1 nm is 0.376 eV
    assert box_level_ev(1.0, 1.0) == pytest.approx(0.376, abs=2e-3)


def test_validation_errors():
    with pytest.raises(ValueError):
        Valley((0, 0, 0), 1.0, 1.0, "L")
    with pytest.raises(ValueError):
        Valley((0, 0, 1), -1.0, 1.0, "L")
    with pytest.raises(ValueError):
        Valley((0, 0, 1), 1.0, 1.0, "Y")
    with pytest.raises(ValueError):
        split_valleys(ValleySet.l_family(1.0, 0.5), 0.0)


def test_report_fields():
    rep = split_valleys(ValleySet.x0_family(0.916, 0.19), 5.0)
    assert isinstance(rep, SplittingReport)
    assert sum(g.degeneracy for g in rep.groups) == 6
    assert rep.groups[0].energy_ev == 0.0
    assert rep.groups[1].energy_ev > 0.0
