import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import coords
from qmixpar import geometry as geo
from qmixpar.entangle import negativity_oracle
from qmixpar.errors import CoordinateError
from qmixpar.parametrize import TwoQubitCoords, density, ek_basis, pure_projector


def test_werner_golden_numbers():
    assert geo.werner_threshold(Fraction(1)) == (Fraction(1, 6), Fraction(1, 3))
    assert geo.werner_threshold(Fraction(1, 2)) == (Fraction(1, 8), Fraction(1, 2))
    assert geo.werner_threshold(1.0) == (1 / 6, 1 / 3)
    with pytest.raises(CoordinateError):
        geo.werner_threshold(1.5)


@pytest.mark.parametrize("chi,mu_star", [(math.pi / 4, 1 / 6), (math.pi / 12, 1 / 8)])
def test_bisection_brackets_threshold(chi, mu_star):
    anchor = TwoQubitCoords.from_flat({"chi": chi, "theta": 1.0, "psi_p": 2.0})
    assert abs(geo.bisect_threshold(anchor) - mu_star) < 1e-6


@given(coords(nu2=0.0, nu3=0.0), st.floats(0, 1))
def test_werner_negativity_line(anchor, nu1):
    spec = geo.WernerSpec(anchor, nu1)
    cp = spec.c_p
    assert abs(negativity_oracle(geo.werner_state(spec)) - geo.werner_negativity_line(cp, nu1)) < 1e-10


def test_werner_spec_validation_and_weights():
    with pytest.raises(CoordinateError):
        geo.WernerSpec(TwoQubitCoords(), -0.5)
    spec = geo.WernerSpec(TwoQubitCoords.from_flat({"nu1": 0.2}), 0.4)
    assert spec.anchor.nu == (1.0, 0.0, 0.0)
    assert spec.mu == pytest.approx(0.15)
    inverted = geo.WernerSpec(TwoQubitCoords(), -0.2)
    assert inverted.weights.relaxed and inverted.weights.mu[0] < inverted.weights.mu[1]


@given(coords(nu2=0.0, nu3=0.0), st.floats(-1 / 3, 0, exclude_max=True))
def test_inverted_range_separable(anchor, x):
    assert negativity_oracle(geo.werner_state(geo.WernerSpec(anchor, x))) < 1e-10


@given(coords(), st.floats(0.25, 1 / 3))
def test_inverted_segment(c, mp):
    assert geo.inverted_werner_separable(mp, c)


@given(coords())
def test_distance_to_top_closed_form(c):
    e0 = pure_projector(ek_basis(c)[:, 0])
    assert abs(geo.hs_distance(density(c), e0) - geo.hs_distance_to_top(c.mu)) < 1e-12


@given(coords(nu2=0.0, nu3=0.0), st.floats(0, 0.25))
def test_werner_distances(anchor, mu):
    d_anchor, d_centre = geo.werner_distances(mu, anchor)
    assert d_anchor == pytest.approx(math.sqrt(6) * mu, abs=1e-12)
    assert d_centre == pytest.approx(math.sqrt(6) / 4 * (1 - 4 * mu), abs=1e-12)


@given(coords())
def test_product_state_distance(c):
    assert abs(geo.hs_distance(geo.product_projector(c), geo.anchor_projector(c)) - c.q_minus) < 1e-12
    assert abs(geo.hs_distance(np.eye(4) / 4, geo.anchor_projector(c)) - geo.R_OUT) < 1e-12


@pytest.mark.parametrize("r", [0.0, 0.1, 0.5, 0.9, 1.0])
def test_perpendicular_foot_on_werner_line(r):
    mu, entangled = geo.footnote_projection_check(r, TwoQubitCoords.from_flat({"theta": 0.4, "zeta": 1.1}))
    assert mu == pytest.approx((1 - r) / 6, abs=1e-15)
    assert entangled == (0 < r < 1)


def test_closest_pure(rng):
    c = TwoQubitCoords.from_flat({"chi": 0.3, "theta21": 1.0, "nu1": 0.3, "nu2": 0.2, "nu3": 0.1})
    assert geo.closest_pure_check(c, 500, rng)


def test_werner_report_matches_threshold():
    anchor = TwoQubitCoords()
    for nu1 in (0.2, 1 / 3, 0.5, 1.0):
        spec = geo.WernerSpec(anchor, nu1)
        rep = geo.werner_mu_report(spec.weights, 1.0)
        assert rep.negativity == pytest.approx(geo.werner_negativity_line(1.0, nu1), abs=1e-12)
        assert rep.ppt_satisfied == (nu1 <= 1 / 3 + 1e-15)


def test_shape_mismatch():
    with pytest.raises(Exception):
        geo.hs_distance(np.eye(2), np.eye(4))
