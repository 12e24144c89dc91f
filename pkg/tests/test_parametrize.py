import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from conftest import GENERIC, angle_psi, angle_theta, coords, nu_triples
from qmixpar.errors import CoordinateError, DimensionError
from qmixpar.linalg import herm_eigen, is_unitary, partial_trace
from qmixpar.parametrize import (
    COORD_KEYS,
    AnglePair,
    EigenEnsemble,
    MixingWeights,
    TwoQubitCoords,
    appendix_density,
    assemble_density,
    bold_basis,
    cascade_unitary,
    change_basis,
    density,
    ek_basis,
    ek_coefficients,
    ek_coefficients_cascade,
    embed,
    ensemble,
    from_bold,
    mu_to_nu,
    nu_to_mu,
    pure_projector,
    qubit,
    qubit_perp,
    qutetrait_mixed,
    qutrit_mixed,
    random_coords,
    single_qubit_mixed,
    su2,
    tilde_operator,
    two_qubit_pure,
)

pairs = st.builds(AnglePair, angle_theta, angle_psi)


@given(pairs)
def test_su2_is_special_unitary(p):
    u = su2(p)
    assert is_unitary(u)
    assert abs(np.linalg.det(u) - 1) < 1e-12
    assert np.allclose(u[:, 0], qubit(p))
    assert np.allclose(u[:, 1], qubit_perp(p))


@given(pairs)
def test_half_angle_amplitudes(p):
    assert np.allclose(qubit(p), oracle.half_angle_qubit(p.theta, p.psi))
    assert abs(np.vdot(qubit(p), qubit_perp(p))) < 1e-15


def test_angle_ranges():
    AnglePair(math.pi, 2 * math.pi)  # closed ends admitted
    with pytest.raises(CoordinateError):
        AnglePair(-0.1, 0.0)
    with pytest.raises(CoordinateError):
        AnglePair(0.0, 7.0)
    with pytest.raises(CoordinateError):
        AnglePair(float("nan"), 0.0)


@given(st.floats(0, 1), pairs)
def test_single_qubit_mixed_spectrum(r, p):
    rho = single_qubit_mixed(r, p)
    e = herm_eigen(rho)
    assert np.allclose(e.values, [(1 + r) / 2, (1 - r) / 2], atol=1e-12)
    phi = qubit(p)
    assert abs(np.vdot(phi, rho @ phi).real - (1 + r) / 2) < 1e-12


@given(st.lists(pairs, min_size=3, max_size=3))
def test_cascade_unitary(angles):
    u = cascade_unitary(angles, 4)
    assert is_unitary(u, tol=1e-12)
    manual = embed(su2(angles[2]), (2, 3), 4) @ embed(su2(angles[1]), (1, 2), 4) @ embed(su2(angles[0]), (0, 1), 4)
    assert np.allclose(u, manual)


def test_cascade_dimension_errors():
    with pytest.raises(DimensionError):
        cascade_unitary([AnglePair()] * 4, 5)
    with pytest.raises(DimensionError):
        cascade_unitary([AnglePair()], 3)


@given(st.lists(pairs, min_size=3, max_size=3), pairs)
def test_tilde_operator_fixes_first_column(angles, block):
    frame = cascade_unitary(angles, 4)
    t = tilde_operator(frame, (2, 3), su2(block))
    assert is_unitary(t, tol=1e-12)
    assert np.allclose(t @ frame[:, 0], frame[:, 0])
    assert np.allclose(t @ frame[:, 1], frame[:, 1])


@given(nu_triples())
def test_nu_mu_roundtrip(nu):
    mu = nu_to_mu(nu)
    assert abs(sum(mu) - 1) < 1e-14
    assert all(a >= b for a, b in zip(mu.mu, mu.mu[1:]))
    assert np.allclose(mu_to_nu(mu), nu, atol=1e-14)


def test_weight_validation():
    with pytest.raises(CoordinateError):
        MixingWeights((0.1, 0.2, 0.3, 0.4))
    with pytest.raises(CoordinateError):
        MixingWeights((0.5, 0.5, 0.1, -0.1))
    MixingWeights((0.1, 0.3, 0.3, 0.3), relaxed=True)
    assert nu_to_mu((0, 0, 0)).mu == (0.25, 0.25, 0.25, 0.25)
    assert nu_to_mu((1, 0, 0)).mu == (1.0, 0.0, 0.0, 0.0)


def test_ensemble_rejects_nonorthonormal():
    with pytest.raises(CoordinateError):
        EigenEnsemble(nu_to_mu((1, 0, 0)), np.ones((4, 4)))


def test_coordinate_schema():
    c = TwoQubitCoords.from_flat({})
    assert c.chi == pytest.approx(math.pi / 4) and c.nu == (1.0, 0.0, 0.0)
    assert set(c.flat()) == set(COORD_KEYS)
    with pytest.raises(CoordinateError):
        TwoQubitCoords.from_flat({"phi": 1.0})
    with pytest.raises(CoordinateError):
        TwoQubitCoords.from_flat({"theta": "1"})
    with pytest.raises(CoordinateError):
        TwoQubitCoords.from_flat({"chi": 1.0})
    d = TwoQubitCoords.from_flat({"theta": 90, "chi": 45, "nu1": 0.5}, degrees=True)
    assert d.local_a.theta == pytest.approx(math.pi / 2) and d.nu[0] == 0.5


@given(coords())
def test_flat_roundtrip(c):
    assert TwoQubitCoords.from_flat(c.flat()) == c


def test_bell_default():
    assert np.allclose(density(TwoQubitCoords()), oracle.bell_phi_plus(), atol=1e-15)


@given(coords())
def test_maximally_mixed(c):
    c = c.with_(nu1=0.0, nu2=0.0, nu3=0.0)
    assert np.allclose(density(c), np.eye(4) / 4, atol=1e-15)


@given(pairs, pairs, angle_psi, st.floats(0, math.pi / 4))
def test_two_qubit_pure_schmidt(a, b, zeta, chi):
    v = two_qubit_pure(a, b, zeta, chi)
    expected = math.cos(chi) * np.kron(oracle.half_angle_qubit(a.theta, a.psi), oracle.half_angle_qubit(b.theta, b.psi))
    expected = expected + np.exp(1j * zeta) * math.sin(chi) * np.kron(
        oracle.half_angle_perp(a.theta, a.psi), oracle.half_angle_perp(b.theta, b.psi)
    )
    assert np.allclose(v, expected)
    rho_a = partial_trace(pure_projector(v), "A")
    assert np.allclose(rho_a, single_qubit_mixed(math.cos(2 * chi), a), atol=1e-12)


@given(coords())
def test_bold_basis_orthonormal(c):
    b = bold_basis(c.local_a, c.local_b).vectors
    assert is_unitary(b, tol=1e-12)
    assert np.allclose(from_bold(change_basis(np.diag([1, 2, 3, 4]), bold_basis(c.local_a, c.local_b)), bold_basis(c.local_a, c.local_b)), np.diag([1, 2, 3, 4]))


@given(coords())
def test_ek_two_routes(c):
    assert np.allclose(ek_coefficients(c), ek_coefficients_cascade(c), atol=1e-13)
    assert is_unitary(ek_basis(c), tol=1e-12)


@given(coords())
def test_closed_form_matches_ensemble(c):
    via = change_basis(assemble_density(ensemble(c)), bold_basis(c.local_a, c.local_b))
    assert np.max(np.abs(appendix_density(c) - via)) < 1e-12


@given(coords())
def test_density_is_a_state(c):
    rho = density(c)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.allclose(rho, rho.conj().T)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


@given(coords())
def test_eigen_recovery(c):
    assert np.allclose(herm_eigen(density(c)).values, c.mu, atol=1e-11)


@given(coords(theta21=0.0, theta32=0.0, theta0=0.0))
def test_all_mixing_angles_zero_is_diagonal_in_bold(c):
    bold = appendix_density(c)
    # only the |phi phi'>, |phi_perp phi_perp'> block mixes
    assert np.allclose(bold[2:, :2], 0) and np.allclose(bold[2:, 2:], np.diag([c.mu[2], c.mu[3]]))


def test_frozen_generic_entries():
    # LAPACK eigenvalues of the generic fixed point
    rho = density(TwoQubitCoords.from_flat(GENERIC))
    mu = nu_to_mu((0.55, 0.1, 0.05)).mu
    assert np.allclose(np.linalg.eigvalsh(rho)[::-1], mu, atol=1e-14)
    assert mu == pytest.approx((83 / 120, 17 / 120, 11 / 120, 0.075), abs=1e-15)


@given(st.lists(pairs, min_size=2, max_size=2), pairs, st.floats(0.01, 1))
def test_qutrit(u20, t21, x):
    mu = (x + (1 - x) / 3, (1 - x) / 3, (1 - x) / 3)
    rho = qutrit_mixed(mu, u20, t21)
    assert np.allclose(herm_eigen(rho).values, mu, atol=1e-11)
    top = cascade_unitary(u20, 3)[:, 0]
    assert np.allclose(rho @ top, mu[0] * top, atol=1e-12)


@given(coords())
def test_qutetrait_matches_two_qubit_coefficients(c):
    rho = qutetrait_mixed(c.weights, [c.a0, c.a0, c.a0], [c.a21, c.a32], c.a0)
    assert np.allclose(herm_eigen(rho).values, c.mu, atol=1e-11)


def test_random_coords_respects_fixed(rng):
    for _ in range(20):
        c = random_coords(rng, theta21=0.0)
        assert c.a21.theta == 0.0
        assert sum(c.nu) <= 1 + 1e-12
