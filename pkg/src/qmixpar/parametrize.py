"""Coordinates, unitary cascades and density matrices.

Every pure or mixed state here is built from angle pairs ``(theta, psi)``
with the half-angle amplitudes

    c = cos(theta/2) exp(-i psi/2),    s = sin(theta/2) exp(+i psi/2).

A single-system mixed state is assembled from its eigenensemble: ordered
weights ``mu_k`` and an orthonormal frame produced by a cascade of 2x2
rotations. Later rotations in the cascade act on the subspace spanned by
the already-rotated frame vectors, never on fixed basis vectors.

For two qubits the frame is expressed in the product ("bold") basis

    |0> = |phi phi'>,  |1> = |phi_perp phi'_perp>,
    |2> = |phi phi'_perp>,  |3> = |phi_perp phi'>,

which hides the four local angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CoordinateError, DimensionError
from .linalg import EPS_ORTHO, dagger, kron

TWO_PI = 2.0 * math.pi
_RANGE_SLACK = 1e-12
WEIGHT_TOL = 1e-12


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise CoordinateError(f"{name} must be finite, got {value}")
    return value


def _in_range(name: str, value: float, lo: float, hi: float) -> float:
    value = _finite(name, value)
    if value < lo - _RANGE_SLACK or value > hi + _RANGE_SLACK:
        raise CoordinateError(f"{name}={value} outside [{lo}, {hi}]")
    return value


@dataclass(frozen=True)
class AnglePair:
    """Polar angle ``theta`` in [0, pi] and phase ``psi`` in [0, 2 pi]."""

    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _in_range("theta", self.theta, 0.0, math.pi))
        object.__setattr__(self, "psi", _in_range("psi", self.psi, 0.0, TWO_PI))

    @property
    def c(self) -> complex:
        return math.cos(self.theta / 2) * complex(math.cos(self.psi / 2), -math.sin(self.psi / 2))

    @property
    def s(self) -> complex:
        return math.sin(self.theta / 2) * complex(math.cos(self.psi / 2), math.sin(self.psi / 2))


def su2(p: AnglePair) -> np.ndarray:
    """The 2x2 unitary with columns ``(c, s)`` and ``(-conj(s), conj(c))``."""
    c, s = p.c, p.s
    return np.array([[c, -s.conjugate()], [s, c.conjugate()]], dtype=complex)


def qubit(p: AnglePair) -> np.ndarray:
    """``|phi> = c|0> + s|1>``."""
    return np.array([p.c, p.s], dtype=complex)


def qubit_perp(p: AnglePair) -> np.ndarray:
    """``|phi_perp> = -conj(s)|0> + conj(c)|1>``."""
    return np.array([-p.s.conjugate(), p.c.conjugate()], dtype=complex)


def single_qubit_mixed(r: float, p: AnglePair) -> np.ndarray:
    """Qubit state with purity parameter ``r`` and eigenvector ``|phi>``.

    Written out entrywise; the eigenvalues are ``(1 +- r)/2``.
    """
    r = _in_range("r", r, 0.0, 1.0)
    c, s = p.c, p.s
    hi, lo = (1 + r) / 2, (1 - r) / 2
    cc, ss = abs(c) ** 2, abs(s) ** 2
    off = r * s.conjugate() * c
    return np.array(
        [[hi * cc + lo * ss, off], [off.conjugate(), hi * ss + lo * cc]],
        dtype=complex,
    )


def embed(block: np.ndarray, indices: Sequence[int], n: int) -> np.ndarray:
    """Identity of size ``n`` with ``block`` placed on the given indices."""
    out = np.eye(n, dtype=complex)
    idx = np.asarray(indices)
    out[np.ix_(idx, idx)] = block
    return out


def cascade_unitary(angles: Sequence[AnglePair], n: int) -> np.ndarray:
    """``U_(n-1)0 = U_(n-1)(n-2) ... U_21 U_10``.

    ``angles[k]`` parametrizes ``U_(k+1)k``, the rotation mixing basis
    vectors ``k`` and ``k+1``. Column 0 is the generic normalized vector
    reached from ``|0>``.
    """
    if not 2 <= n <= 4:
        raise DimensionError(f"cascade dimension must be 2..4, got {n}")
    if len(angles) != n - 1:
        raise DimensionError(f"need {n - 1} angle pairs for n={n}, got {len(angles)}")
    u = np.eye(n, dtype=complex)
    for k, p in enumerate(angles):
        u = embed(su2(p), (k, k + 1), n) @ u
    return u


def tilde_operator(frame: np.ndarray, columns: Sequence[int], block: np.ndarray) -> np.ndarray:
    """Unitary acting as ``block`` on the span of ``frame[:, columns]``.

    The operator is ``V block V^dagger`` on that subspace and the identity
    on its orthogonal complement, i.e. ``F blockdiag(1, block) F^dagger``
    with ``F`` the full frame.
    """
    n = frame.shape[0]
    sub = frame[:, list(columns)]
    proj = sub @ dagger(sub)
    return sub @ block @ dagger(sub) + (np.eye(n) - proj)


def _check_weights(mu: Sequence[float], relaxed: bool = False) -> tuple[float, ...]:
    mu = tuple(_finite("mu", m) for m in mu)
    if any(m < -WEIGHT_TOL for m in mu):
        raise CoordinateError(f"weights must be non-negative: {mu}")
    if abs(sum(mu) - 1.0) > WEIGHT_TOL:
        raise CoordinateError(f"weights must sum to 1, got {sum(mu)!r}")
    if not relaxed and any(a < b - WEIGHT_TOL for a, b in zip(mu, mu[1:])):
        raise CoordinateError(f"weights must be non-increasing: {mu}")
    return mu


@dataclass(frozen=True)
class MixingWeights:
    """Eigenvalues ``mu_0 >= mu_1 >= mu_2 >= mu_3 >= 0`` summing to one.

    ``relaxed=True`` drops the ordering requirement (used for the inverted
    Werner segment); positivity and normalization are always enforced.
    """

    mu: tuple[float, float, float, float]
    relaxed: bool = False

    def __post_init__(self):
        if len(self.mu) != 4:
            raise CoordinateError("two-qubit mixing needs four weights")
        object.__setattr__(self, "mu", _check_weights(self.mu, self.relaxed))

    def __iter__(self):
        return iter(self.mu)

    def __getitem__(self, k: int) -> float:
        return self.mu[k]

    @property
    def nu(self) -> tuple[float, float, float]:
        return mu_to_nu(self)


def nu_to_mu(nu: Sequence[float]) -> MixingWeights:
    """Invert ``nu_i = i (mu_{i-1} - mu_i)`` under ``sum(mu) = 1``."""
    if len(nu) != 3:
        raise CoordinateError("expected three nu values")
    n1, n2, n3 = (_in_range(f"nu{i + 1}", v, 0.0, 1.0) for i, v in enumerate(nu))
    if n1 + n2 + n3 > 1.0 + WEIGHT_TOL:
        raise CoordinateError(f"nu1+nu2+nu3 must not exceed 1, got {n1 + n2 + n3}")
    rest = 1.0 - n1 - n2 - n3
    # a sum within tolerance of one is a full simplex edge: mu3 is exactly 0
    mu3 = rest / 4.0 if rest > WEIGHT_TOL else 0.0
    mu2 = mu3 + n3 / 3.0
    mu1 = mu2 + n2 / 2.0
    mu0 = mu1 + n1
    return MixingWeights((mu0, mu1, mu2, mu3))


def mu_to_nu(mu: MixingWeights | Sequence[float]) -> tuple[float, float, float]:
    m = tuple(mu)
    return tuple(float(i * (m[i - 1] - m[i])) for i in (1, 2, 3))


@dataclass(frozen=True)
class EigenEnsemble:
    """Weights plus the matching orthonormal eigenvectors (as columns)."""

    weights: MixingWeights
    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.shape != (4, 4):
            raise DimensionError(f"expected four C^4 vectors, got shape {v.shape}")
        gram = dagger(v) @ v
        if np.max(np.abs(gram - np.eye(4))) > EPS_ORTHO:
            raise CoordinateError("ensemble vectors are not orthonormal")
        object.__setattr__(self, "vectors", v)


def assemble_density(ens: EigenEnsemble) -> np.ndarray:
    """``rho = sum_k mu_k |e_k><e_k|``."""
    v = ens.vectors
    return (v * np.asarray(ens.weights.mu)) @ dagger(v)


def qutrit_mixed(mu: Sequence[float], u20_angles: Sequence[AnglePair], tilde_u21: AnglePair) -> np.ndarray:
    """Generic qutrit state from three ordered weights and four angle pairs' worth of rotations."""
    mu = _check_weights(mu)
    if len(mu) != 3:
        raise CoordinateError("qutrit mixing needs three weights")
    frame = cascade_unitary(u20_angles, 3)
    frame = tilde_operator(frame, (1, 2), su2(tilde_u21)) @ frame
    return (frame * np.asarray(mu)) @ dagger(frame)


def qutetrait_frame(
    u30_angles: Sequence[AnglePair],
    tilde_u31_angles: Sequence[AnglePair],
    tilde_tilde_u32: AnglePair,
) -> np.ndarray:
    """Eigenvector frame of the generic four-level state (columns ``e_0..e_3``)."""
    frame = cascade_unitary(u30_angles, 4)
    # tilde-U31 = tilde-U32 tilde-U21, a 3-level cascade on frame vectors 1..3
    inner = cascade_unitary(tilde_u31_angles, 3)
    frame = tilde_operator(frame, (1, 2, 3), inner) @ frame
    frame = tilde_operator(frame, (2, 3), su2(tilde_tilde_u32)) @ frame
    return frame


def qutetrait_mixed(
    mu: MixingWeights | Sequence[float],
    u30_angles: Sequence[AnglePair],
    tilde_u31_angles: Sequence[AnglePair],
    tilde_tilde_u32: AnglePair,
) -> np.ndarray:
    weights = mu if isinstance(mu, MixingWeights) else MixingWeights(tuple(mu))
    frame = qutetrait_frame(u30_angles, tilde_u31_angles, tilde_tilde_u32)
    return (frame * np.asarray(weights.mu)) @ dagger(frame)


# --- two qubits -------------------------------------------------------------

COORD_KEYS = (
    "theta", "psi", "theta_p", "psi_p", "zeta", "chi",
    "theta21", "psi21", "theta32", "psi32", "theta0", "psi0",
    "nu1", "nu2", "nu3",
)
ANGLE_KEYS = tuple(k for k in COORD_KEYS if not k.startswith("nu"))

# defaults: Bell projector
_DEFAULT_FLAT = {k: 0.0 for k in COORD_KEYS} | {"chi": math.pi / 4, "nu1": 1.0}


@dataclass(frozen=True)
class TwoQubitCoords:
    """The fifteen real coordinates of a two-qubit state.

    ``chi`` is the Schmidt angle (``q+ = cos chi``, ``q- = sin chi``,
    ``r = cos 2 chi``); ``a21``, ``a32`` and ``a0`` are the mixing angle
    pairs of the eigenvectors ``e_1..e_3``; ``nu`` fixes the weights.
    """

    local_a: AnglePair = field(default_factory=AnglePair)
    local_b: AnglePair = field(default_factory=AnglePair)
    zeta: float = 0.0
    chi: float = math.pi / 4
    a21: AnglePair = field(default_factory=AnglePair)
    a32: AnglePair = field(default_factory=AnglePair)
    a0: AnglePair = field(default_factory=AnglePair)
    nu: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "zeta", _in_range("zeta", self.zeta, 0.0, TWO_PI))
        object.__setattr__(self, "chi", _in_range("chi", self.chi, 0.0, math.pi / 4))
        nu = tuple(float(v) for v in self.nu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "_weights", nu_to_mu(nu))

    @property
    def q_plus(self) -> float:
        return math.cos(self.chi)

    @property
    def q_minus(self) -> float:
        return math.sin(self.chi)

    @property
    def r(self) -> float:
        return math.cos(2 * self.chi)

    @property
    def weights(self) -> MixingWeights:
        return self._weights  # type: ignore[attr-defined]

    @property
    def mu(self) -> tuple[float, float, float, float]:
        return self.weights.mu

    def flat(self) -> dict[str, float]:
        return {
            "theta": self.local_a.theta, "psi": self.local_a.psi,
            "theta_p": self.local_b.theta, "psi_p": self.local_b.psi,
            "zeta": self.zeta, "chi": self.chi,
            "theta21": self.a21.theta, "psi21": self.a21.psi,
            "theta32": self.a32.theta, "psi32": self.a32.psi,
            "theta0": self.a0.theta, "psi0": self.a0.psi,
            "nu1": self.nu[0], "nu2": self.nu[1], "nu3": self.nu[2],
        }

    @classmethod
    def from_flat(cls, data: Mapping[str, float], degrees: bool = False) -> "TwoQubitCoords":
        """Build from the flat JSON schema; omitted keys take the defaults."""
        unknown = set(data) - set(COORD_KEYS)
        if unknown:
            raise CoordinateError(f"unknown coordinate keys: {sorted(unknown)}")
        d = dict(_DEFAULT_FLAT)
        for k, v in data.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise CoordinateError(f"{k} must be a number, got {v!r}")
            v = _finite(k, v)
            d[k] = math.radians(v) if degrees and k in ANGLE_KEYS else v
        return cls(
            local_a=AnglePair(d["theta"], d["psi"]),
            local_b=AnglePair(d["theta_p"], d["psi_p"]),
            zeta=d["zeta"],
            chi=d["chi"],
            a21=AnglePair(d["theta21"], d["psi21"]),
            a32=AnglePair(d["theta32"], d["psi32"]),
            a0=AnglePair(d["theta0"], d["psi0"]),
            nu=(d["nu1"], d["nu2"], d["nu3"]),
        )

    def with_(self, **flat: float) -> "TwoQubitCoords":
        """Copy with some flat-schema coordinates replaced."""
        return TwoQubitCoords.from_flat(self.flat() | flat)

    def with_weights(self, mu: MixingWeights | Sequence[float]) -> "TwoQubitCoords":
        nu = mu_to_nu(mu if isinstance(mu, MixingWeights) else MixingWeights(tuple(mu)))
        return replace(self, nu=tuple(min(max(v, 0.0), 1.0) for v in nu))


def coords_field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(TwoQubitCoords))


def two_qubit_pure(local_a: AnglePair, local_b: AnglePair, zeta: float, chi: float) -> np.ndarray:
    """``q+ |phi phi'> + e^{i zeta} q- |phi_perp phi'_perp>`` written out in ``|00>..|11>``."""
    c, s, cp, sp = local_a.c, local_a.s, local_b.c, local_b.s
    qp, qm = math.cos(chi), math.sin(chi)
    ph = complex(math.cos(zeta), math.sin(zeta)) * qm
    cb, sb, cpb, spb = c.conjugate(), s.conjugate(), cp.conjugate(), sp.conjugate()
    return np.array(
        [
            qp * c * cp + ph * sb * spb,
            qp * c * sp - ph * sb * cpb,
            qp * s * cp - ph * cb * spb,
            qp * s * sp + ph * cb * cpb,
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class BoldBasis:
    """Product basis built from the two local qubit states (columns 0..3)."""

    vectors: np.ndarray

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


def bold_basis(local_a: AnglePair, local_b: AnglePair) -> BoldBasis:
    phi, phi_p = qubit(local_a), qubit(local_b)
    perp, perp_p = qubit_perp(local_a), qubit_perp(local_b)
    cols = [kron(phi, phi_p), kron(perp, perp_p), kron(phi, perp_p), kron(perp, phi_p)]
    return BoldBasis(np.column_stack(cols))


def change_basis(rho: np.ndarray, basis: BoldBasis) -> np.ndarray:
    """Matrix elements ``<i|rho|j>`` in the bold basis."""
    b = basis.vectors
    return dagger(b) @ rho @ b


def from_bold(rho_bold: np.ndarray, basis: BoldBasis) -> np.ndarray:
    """Back to the computational basis."""
    b = basis.vectors
    return b @ rho_bold @ dagger(b)


def ek_coefficients(coords: TwoQubitCoords) -> np.ndarray:
    """Bold-basis components of ``e_0..e_3`` (one column per vector)."""
    qp, qm = coords.q_plus, coords.q_minus
    zb = complex(math.cos(coords.zeta), -math.sin(coords.zeta))
    z = zb.conjugate()
    c21, s21 = coords.a21.c, coords.a21.s
    c32, s32 = coords.a32.c, coords.a32.s
    c0, s0 = coords.a0.c, coords.a0.s
    conj = complex.conjugate

    psi = np.array([qp, z * qm, 0, 0], dtype=complex)
    psi_perp = np.array([-zb * qm, qp, 0, 0], dtype=complex)
    b2 = np.array([0, 0, 1, 0], dtype=complex)
    b3 = np.array([0, 0, 0, 1], dtype=complex)

    e0 = psi
    e1 = c21 * psi_perp + s21 * (c32 * b2 + s32 * b3)
    e2 = (
        -c0 * conj(s21) * psi_perp
        + (c0 * conj(c21) * c32 - s0 * conj(s32)) * b2
        + (c0 * conj(c21) * s32 + s0 * conj(c32)) * b3
    )
    e3 = (
        conj(s0) * conj(s21) * psi_perp
        - (conj(s0) * conj(c21) * c32 + conj(c0) * conj(s32)) * b2
        - (conj(s0) * conj(c21) * s32 - conj(c0) * conj(c32)) * b3
    )
    return np.column_stack([e0, e1, e2, e3])


def ek_coefficients_cascade(coords: TwoQubitCoords) -> np.ndarray:
    """Same frame as :func:`ek_coefficients`, built from the rotation cascade."""
    qp, qm = coords.q_plus, coords.q_minus
    z = complex(math.cos(coords.zeta), math.sin(coords.zeta))
    u_q = np.array([[qp, -z.conjugate() * qm], [z * qm, qp]], dtype=complex)
    frame = embed(u_q, (0, 1), 4)
    u31 = cascade_unitary([coords.a21, coords.a32], 3)
    frame = tilde_operator(frame, (1, 2, 3), u31) @ frame
    frame = tilde_operator(frame, (2, 3), su2(coords.a0)) @ frame
    return frame


def ek_basis(coords: TwoQubitCoords) -> np.ndarray:
    """Eigenvectors ``e_0..e_3`` in the computational basis (columns)."""
    basis = bold_basis(coords.local_a, coords.local_b)
    return basis.vectors @ ek_coefficients(coords)


def ensemble(coords: TwoQubitCoords) -> EigenEnsemble:
    return EigenEnsemble(coords.weights, ek_basis(coords))


def density(coords: TwoQubitCoords) -> np.ndarray:
    """Two-qubit density matrix in the computational basis."""
    return assemble_density(ensemble(coords))


def appendix_density(coords: TwoQubitCoords) -> np.ndarray:
    """Closed-form density matrix in the bold basis, entry by entry."""
    m0, m1, m2, m3 = coords.mu
    d0, d1, d2 = m0 - m3, m1 - m3, m2 - m3
    qp, qm = coords.q_plus, coords.q_minus
    zb = complex(math.cos(coords.zeta), -math.sin(coords.zeta))
    z = zb.conjugate()
    c21, s21 = coords.a21.c, coords.a21.s
    c32, s32 = coords.a32.c, coords.a32.s
    c0, s0 = coords.a0.c, coords.a0.s
    cj = complex.conjugate

    ac21, as21 = abs(c21) ** 2, abs(s21) ** 2
    ac0 = abs(c0) ** 2
    # recurring factors
    a = cj(c0) * c21 * cj(c32) - cj(s0) * s32
    b = cj(c0) * c21 * cj(s32) + cj(s0) * c32

    r = np.empty((4, 4), dtype=complex)
    r[0, 0] = d0 * qp**2 + d1 * qm**2 * ac21 + d2 * qm**2 * ac0 * as21 + m3
    r[0, 1] = d0 * zb * qm * qp - d1 * zb * qm * qp * ac21 - d2 * zb * qm * qp * ac0 * as21
    r[0, 2] = -d1 * zb * qm * c21 * cj(c32) * cj(s21) + d2 * zb * qm * c0 * cj(s21) * a
    r[0, 3] = -d1 * zb * qm * c21 * cj(s32) * cj(s21) + d2 * zb * qm * c0 * cj(s21) * b
    r[1, 0] = d0 * z * qm * qp - d1 * z * qm * qp * ac21 - d2 * z * qm * qp * ac0 * as21
    r[1, 1] = d0 * qm**2 + d1 * qp**2 * ac21 + d2 * qp**2 * ac0 * as21 + m3
    r[1, 2] = d1 * qp * c21 * cj(c32) * cj(s21) - d2 * qp * c0 * cj(s21) * a
    r[1, 3] = d1 * qp * c21 * cj(s32) * cj(s21) - d2 * qp * c0 * cj(s21) * b
    r[2, 0] = -d1 * z * qm * cj(c21) * c32 * s21 + d2 * z * qm * cj(c0) * s21 * (c0 * cj(c21) * c32 - s0 * cj(s32))
    r[2, 1] = d1 * qp * cj(c21) * c32 * s21 - d2 * qp * cj(c0) * s21 * (c0 * cj(c21) * c32 - s0 * cj(s32))
    r[2, 2] = d1 * abs(c32) ** 2 * as21 + d2 * abs(c0 * cj(c21) * c32 - s0 * cj(s32)) ** 2 + m3
    r[2, 3] = d1 * as21 * c32 * cj(s32) + d2 * b * (c0 * cj(c21) * c32 - s0 * cj(s32))
    r[3, 0] = -d1 * z * qm * cj(c21) * s32 * s21 + d2 * z * qm * cj(c0) * s21 * (c0 * cj(c21) * s32 + s0 * cj(c32))
    r[3, 1] = d1 * qp * cj(c21) * s32 * s21 - d2 * qp * cj(c0) * s21 * (c0 * cj(c21) * s32 + s0 * cj(c32))
    r[3, 2] = d1 * as21 * cj(c32) * s32 + d2 * (c0 * cj(c21) * s32 + s0 * cj(c32)) * a
    r[3, 3] = d1 * as21 * abs(s32) ** 2 + d2 * abs(c0 * cj(c21) * s32 + s0 * cj(c32)) ** 2 + m3
    return r


def random_coords(rng: np.random.Generator, **fixed: float) -> TwoQubitCoords:
    """Uniform angles and a uniform point of the nu simplex; ``fixed`` overrides."""
    flat = {}
    for key in ("theta", "theta_p", "theta21", "theta32", "theta0"):
        flat[key] = rng.uniform(0.0, math.pi)
    for key in ("psi", "psi_p", "psi21", "psi32", "psi0", "zeta"):
        flat[key] = rng.uniform(0.0, TWO_PI)
    flat["chi"] = rng.uniform(0.0, math.pi / 4)
    w = rng.dirichlet(np.ones(4))
    flat["nu1"], flat["nu2"], flat["nu3"] = (float(x) for x in w[:3])
    flat.update(fixed)
    return TwoQubitCoords.from_flat(flat)


def random_unit_vector(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def pure_projector(v: Iterable[complex]) -> np.ndarray:
    v = np.asarray(list(v) if not isinstance(v, np.ndarray) else v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())
