"""Small dense complex linear algebra for two-qubit work.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic complex Jacobi iteration, kept independent of LAPACK so that it can
serve as an oracle against the closed-form expressions elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError

# tolerance table
EPS_ORTHO = 1e-12
EPS_EIG = 1e-11
EPS_MATCH = 1e-10
EPS_HERM = 1e-10
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
_PIVOT_FLOOR = 1e-150  # smaller pivots are dropped; the phase division underflows

SUBSYSTEMS = ("A", "B")


def cmat(data) -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex array."""
    m = np.array(data, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError(f"expected a non-empty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def trace(a: np.ndarray) -> complex:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"trace needs a square matrix, got {a.shape}")
    return complex(np.trace(a))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; row ``i*b.rows + k`` holds ``a[i] * b[k]``.

    With this ordering ``kron(|x>, |y>)`` lands on the computational basis
    ``|00>, |01>, |10>, |11>``.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def is_hermitian(a: np.ndarray, tol: float = EPS_HERM) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.linalg.norm(a - dagger(a)) <= tol


def is_unitary(u: np.ndarray, tol: float = EPS_ORTHO) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def _check_two_qubit(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 two-qubit matrix, got {rho.shape}")
    return rho


def _check_subsystem(name: str) -> None:
    if name not in SUBSYSTEMS:
        raise ValueError(f"subsystem must be one of {SUBSYSTEMS}, got {name!r}")


def partial_transpose(rho: np.ndarray, subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of a 4x4 matrix."""
    rho = _check_two_qubit(rho)
    _check_subsystem(subsystem)
    # axes: (row_a, row_b, col_a, col_b)
    t = rho.reshape(2, 2, 2, 2)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4).copy()


def partial_trace(rho: np.ndarray, keep: str = "A") -> np.ndarray:
    """Reduce a 4x4 matrix to the 2x2 matrix of the kept factor."""
    rho = _check_two_qubit(rho)
    _check_subsystem(keep)
    t = rho.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    return np.einsum("kikj->ij", t)


@dataclass(frozen=True)
class HermEigen:
    """Eigendecomposition ``A = V diag(values) V^dagger``, values descending."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ dagger(self.vectors)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    mag = abs(apq)
    if mag < _PIVOT_FLOOR:
        a[p, q] = a[q, p] = 0.0
        return
    # phase-strip the pivot, then apply the real symmetric Jacobi rotation
    cph = np.conj(apq) / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    if tau == 0.0:
        t = 1.0
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    colp, colq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * colp - s * cph * colq
    a[:, q] = s * colp + c * cph * colq
    rowp, rowq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * rowp - s * np.conj(cph) * rowq
    a[q, :] = s * rowp + c * np.conj(cph) * rowq
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp - s * cph * vq
    v[:, q] = s * vp + c * cph * vq


def _normalize_phase(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > EPS_ORTHO)
        if idx.size:
            lead = col[idx[0]]
            out[:, k] = col * (abs(lead) / lead)
    return out


def herm_eigen(a: np.ndarray) -> HermEigen:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Raises NotHermitianError when ``||a - a^dagger||_F`` exceeds 1e-10.
    Eigenvalues are returned in descending order; each eigenvector is
    phase-fixed so its first non-negligible component is real positive.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"herm_eigen needs a square matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if np.linalg.norm(a - dagger(a)) > EPS_HERM:
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    tol = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
    else:
        if _off_norm(a) >= tol:
            raise ConvergenceError("Jacobi sweeps did not converge")

    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return HermEigen(values=values[order], vectors=_normalize_phase(v[:, order]))


def eigvalsh(a: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix (Jacobi route)."""
    return herm_eigen(a).values
