import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvalley.lattice import (
    DotGeometry,
    HIGH_SYMMETRY_POINTS,
    KVector,
    LatticeSpec,
    PathSegment,
    count_dot_levels,
    reciprocal_basis,
    standard_path,
)

TWO_PI = 2.0 * np.pi


def reciprocal_oracle(avec: np.ndarray) -> np.ndarray:
    """Textbook cross-product construction, independent of the module."""
    vol = avec[0] @ np.cross(avec[1], avec[2])
    return np.array([TWO_PI * np.cross(avec[(i + 1) % 3], avec[(i + 2) % 3]) / vol
                     for i in range(3)])


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0, allow_nan=False))
def test_reciprocal_defining_relation(a):
    spec = LatticeSpec(a=a)
    bs = reciprocal_basis(spec)
    for i, avec in enumerate(spec.primitive_vectors):
        for j, b in enumerate(bs):
            want = TWO_PI if i == j else 0.0
            assert abs(avec @ b.to_inverse_nm(spec) - want) < 1e-12


def test_reciprocal_inverse_scaling():
    s1, s2 = LatticeSpec(a=0.543), LatticeSpec(a=1.086)
    for b1, b2 in zip(reciprocal_basis(s1), reciprocal_basis(s2)):
        np.testing.assert_allclose(b2.to_inverse_nm(s2),
                                   0.5 * b1.to_inverse_nm(s1), atol=1e-13)
        # components in 2*pi/a units do not depend on a at all
        np.testing.assert_array_equal(b1.as_array(), b2.as_array())


def test_reciprocal_matches_cross_product_oracle():
    spec = LatticeSpec()
    oracle = reciprocal_oracle(spec.primitive_vectors)
    got = np.array([b.to_inverse_nm(spec) for b in reciprocal_basis(spec)])
    np.testing.assert_allclose(got, oracle, atol=1e-12)
    # FCC reciprocal is BCC: the three vectors sum along the body diagonal
    total = got.sum(axis=0)
    np.testing.assert_allclose(total, TWO_PI / spec.a * np.ones(3), atol=1e-12)


def test_standard_path_lambda_midpoint():
    pts = standard_path("Γ-Λ-L", 3).points()
    np.testing.assert_array_equal(
        pts, [[0, 0, 0], [0.25, 0.25, 0.25], [0.5, 0.5, 0.5]])


def test_standard_path_delta_endpoints_only():
    pts = standard_path("delta", 2).points()
    np.testing.assert_array_equal(pts, [[0, 0, 0], [0, 0, 1]])


def test_standard_path_endpoints_exact():
    for name, (a, b) in {"delta": ("Γ", "X"), "lambda": ("Γ", "L"),
                         "kl": ("K", "L")}.items():
        pts = standard_path(name, 17).points()
        np.testing.assert_array_equal(pts[0], HIGH_SYMMETRY_POINTS[a].as_array())
        np.testing.assert_array_equal(pts[-1], HIGH_SYMMETRY_POINTS[b].as_array())


def test_l_point_is_zone_edge():
    # twice the L point must be an integer combination of reciprocal vectors
    spec = LatticeSpec()
    bmat = np.array([b.as_array() for b in reciprocal_basis(spec)]).T
    coeffs = np.linalg.solve(bmat, 2.0 * HIGH_SYMMETRY_POINTS["L"].as_array())
    np.testing.assert_allclose(coeffs, np.round(coeffs), atol=1e-12)


def test_unknown_path_name():
    with pytest.raises(ValueError, match="unknown path"):
        standard_path("Γ-Σ-K", 5)


def test_segment_needs_two_samples():
    g, x = HIGH_SYMMETRY_POINTS["Γ"], HIGH_SYMMETRY_POINTS["X"]
    with pytest.raises(ValueError):
        PathSegment("Δ", g, x, 1)


def test_kvector_finite():
    with pytest.raises(ValueError):
        KVector(np.nan, 0.0, 0.0)


def test_kvector_isclose_tolerance():
    assert KVector(0.0, 0.0, 0.0).isclose(KVector(1e-13, 0.0, 0.0))
    assert not KVector(0.0, 0.0, 0.0).isclose(KVector(1e-11, 0.0, 0.0))


def test_dot_level_published_rows():
    spec = LatticeSpec()
    for side, cells in ((5.0, 781), (2.0, 50), (1.0, 6)):
        res = count_dot_levels(DotGeometry(side), spec)
        assert (res.unit_cells, res.levels, res.electrons) == (cells, cells, 2 * cells)


def test_dot_level_ten_nm_row():
    # (10/0.543)^3 = 6245.98: nearest rounding gives 6246.  The published
    # table's 6250 corresponds to truncating a^3 to 0.16 nm^3 and is not
    # reproduced here.
    res = count_dot_levels(DotGeometry(10.0), LatticeSpec())
    assert res.unit_cells == 6246
    assert res.unit_cells != 6250


def test_dot_level_floor_mode():
    res = count_dot_levels(DotGeometry(5.0), LatticeSpec(), rounding="floor")
    assert res.unit_cells == 780
    with pytest.raises(ValueError, match="rounding"):
        count_dot_levels(DotGeometry(5.0), LatticeSpec(), rounding="ceil")


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.2, max_value=30.0), st.floats(min_value=0.0, max_value=5.0))
def test_dot_levels_monotone_in_side(side, extra):
    spec = LatticeSpec()
    small = count_dot_levels(DotGeometry(side), spec)
    large = count_dot_levels(DotGeometry(side + extra), spec)
    assert large.unit_cells >= small.unit_cells
    assert small.electrons == 2 * small.levels
    assert large.electrons == 2 * large.levels


def test_path_csv_format():
    path = standard_path("delta", 5)
    buf = io.StringIO()
    path.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "s,kx,ky,kz"
    assert len(lines) == 6
    assert lines[1].startswith("0,")


def test_bad_lattice_constant():
    with pytest.raises(ValueError):
        LatticeSpec(a=-1.0)
    with pytest.raises(ValueError):
        DotGeometry(0.0)
