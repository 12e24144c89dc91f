"""Independent reference implementations backed by LAPACK.

These never call into the package's eigensolver, so agreement with them is
a genuine cross-check.
"""

import math

import numpy as np

SY = np.array([[0, -1j], [1j, 0]])


def half_angle_qubit(theta, psi):
    return np.array([math.cos(theta / 2) * np.exp(-0.5j * psi), math.sin(theta / 2) * np.exp(0.5j * psi)])


def half_angle_perp(theta, psi):
    c, s = half_angle_qubit(theta, psi)
    return np.array([-np.conj(s), np.conj(c)])


def partial_transpose_loop(rho):
    out = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    out[2 * a + b2, 2 * a2 + b] = rho[2 * a + b, 2 * a2 + b2]
    return out


def negativity(rho):
    vals = np.linalg.eigvalsh(partial_transpose_loop(rho))
    return 2 * max(0.0, -vals[0])


def concurrence(rho):
    """Textbook route: square roots of the eigenvalues of rho (sy sy) rho* (sy sy)."""
    yy = np.kron(SY, SY)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def concurrence_vector(v):
    v = np.asarray(v) / np.linalg.norm(v)
    return 2 * abs(v[0] * v[3] - v[1] * v[2])


def bell_phi_plus():
    v = np.array([1, 0, 0, 1]) / math.sqrt(2)
    return np.outer(v, v.conj())
