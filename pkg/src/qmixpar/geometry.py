"""Scaled Hilbert-Schmidt geometry and generalized Werner lines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entangle import (
    SEPARABLE_TOL,
    EntanglementReport,
    concurrence_pure,
    negativity_oracle,
    slice_s21_zero,
)
from .errors import CoordinateError, DimensionError, InvariantViolation
from .linalg import EPS_MATCH
from .parametrize import (
    MixingWeights,
    TwoQubitCoords,
    density,
    ek_basis,
    pure_projector,
    random_unit_vector,
    two_qubit_pure,
)

SQRT6 = math.sqrt(6.0)
R_OUT = SQRT6 / 4  # distance from I/4 to every pure state
DIST_TOL = 1e-12


def hs_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``D_2 = ||rho - sigma||_F / sqrt(2)``."""
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    return float(np.linalg.norm(rho - sigma) / math.sqrt(2.0))


def hs_distance_to_top(mu) -> float:
    """Distance from a state with spectrum ``mu`` to its dominant eigenprojector."""
    m0, m1, m2, m3 = tuple(mu)
    return math.sqrt(max((1 - m0) ** 2 - (m1 * m2 + m2 * m3 + m3 * m1), 0.0))


def anchor_projector(coords: TwoQubitCoords) -> np.ndarray:
    """``E_Psi`` for the pure part of ``coords``."""
    return pure_projector(two_qubit_pure(coords.local_a, coords.local_b, coords.zeta, coords.chi))


def product_projector(coords: TwoQubitCoords) -> np.ndarray:
    """``S_Psi = |phi phi'><phi phi'|``, the product state nearest ``E_Psi``."""
    return anchor_projector(coords.with_(chi=0.0))


def closest_pure_check(coords: TwoQubitCoords, trials: int = 1000, rng: np.random.Generator | None = None) -> bool:
    """Sample ``trials`` random pure states and confirm none is closer than ``E_Psi``.

    Probabilistic: a ``True`` result means no counterexample was found.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    rho = density(coords)
    best = hs_distance(rho, pure_projector(ek_basis(coords)[:, 0]))
    for _ in range(trials):
        p = pure_projector(random_unit_vector(rng))
        if hs_distance(rho, p) + DIST_TOL < best:
            return False
    return True


@dataclass(frozen=True)
class WernerSpec:
    """``x E_Phi + (1 - x)/4 I`` with ``E_Phi`` the pure anchor state."""

    anchor: TwoQubitCoords
    x: float

    def __post_init__(self):
        if not -1.0 / 3 - DIST_TOL <= self.x <= 1.0 + DIST_TOL:
            raise CoordinateError(f"x={self.x} outside [-1/3, 1]")
        if tuple(self.anchor.nu) != (1.0, 0.0, 0.0):
            object.__setattr__(self, "anchor", self.anchor.with_(nu1=1.0, nu2=0.0, nu3=0.0))

    @classmethod
    def from_mu(cls, anchor: TwoQubitCoords, mu: float) -> "WernerSpec":
        return cls(anchor, 1.0 - 4.0 * mu)

    @property
    def mu(self) -> float:
        return (1.0 - self.x) / 4.0

    @property
    def c_p(self) -> float:
        return 2 * self.anchor.q_plus * self.anchor.q_minus

    @property
    def weights(self) -> MixingWeights:
        """Eigenvalue weights; relaxed (inverted order) for negative ``x``."""
        m = self.mu
        return MixingWeights((1 - 3 * m, m, m, m), relaxed=self.x < 0)


def werner_state(spec: WernerSpec) -> np.ndarray:
    return spec.x * anchor_projector(spec.anchor) + (1 - spec.x) / 4 * np.eye(4)


def werner_mu_report(mu: MixingWeights, c_p: float) -> EntanglementReport:
    """Closed forms along ``W_mu = mu0 E_Psi + mu1 E_Psi_perp + mu2 |2><2| + mu3 |3><3|``."""
    m0, m1, m2, m3 = tuple(mu)
    if not 0.0 <= c_p <= 1.0 + DIST_TOL:
        raise CoordinateError(f"c_p={c_p} outside [0, 1]")
    bound = 2 * math.sqrt(m2 * m3)
    separable = c_p * (m0 - m1) <= bound
    neg = math.sqrt(c_p**2 * (m0 - m1) ** 2 + (m2 - m3) ** 2) - (m2 + m3)
    conc = (m0 - m1) * c_p - bound
    if separable or neg <= SEPARABLE_TOL:
        report = EntanglementReport(True, 0.0, 0.0, "werner_line")
    else:
        report = EntanglementReport(False, neg, max(conc, 0.0), "werner_line")
    # the W_mu family sits inside the theta21 = 0 slice with C_Psi2 = 0
    ref = slice_s21_zero(mu, c_p, 0.0)
    if abs(ref.negativity - report.negativity) > EPS_MATCH or abs(ref.concurrence - report.concurrence) > EPS_MATCH:
        raise InvariantViolation("Werner line disagrees with the theta21=0 slice")
    return report


def werner_threshold(c_p: float) -> tuple[float, float]:
    """Smallest separable ``mu`` on the line and the matching largest ``nu1``."""
    if not 0.0 <= c_p <= 1.0:
        raise CoordinateError(f"c_p={c_p} outside [0, 1]")
    return c_p / (2 * (2 * c_p + 1)), 1 / (2 * c_p + 1)


def werner_negativity_line(c_p: float, nu1: float) -> float:
    """``((2 C_p + 1) nu1 - 1)/2`` above threshold, zero below."""
    return max(0.0, ((2 * c_p + 1) * nu1 - 1) / 2)


def werner_distances(mu: float, coords: TwoQubitCoords) -> tuple[float, float]:
    """``D_2(W_mu, E_Psi) = sqrt(6) mu`` and ``D_2(W_mu, I/4) = sqrt(6)/4 nu1``.

    Both are confirmed against the direct Frobenius distance.
    """
    if not -DIST_TOL <= mu <= 0.25 + DIST_TOL:
        raise CoordinateError(f"mu={mu} outside [0, 1/4]")
    nu1 = 1 - 4 * mu
    d_anchor, d_center = SQRT6 * mu, R_OUT * nu1
    w = werner_state(WernerSpec.from_mu(coords, mu))
    if abs(hs_distance(w, anchor_projector(coords)) - d_anchor) > DIST_TOL:
        raise InvariantViolation("distance to anchor disagrees with sqrt(6) mu")
    if abs(hs_distance(w, np.eye(4) / 4) - d_center) > DIST_TOL:
        raise InvariantViolation("distance to centre disagrees with sqrt(6)/4 nu1")
    return d_anchor, d_center


def inverted_werner_state(mu_prime: float, coords: TwoQubitCoords) -> np.ndarray:
    """``(1 - 4 mu') E_e3 + mu' I`` for ``mu'`` in [1/4, 1/3]."""
    if not 0.25 - DIST_TOL <= mu_prime <= 1.0 / 3 + DIST_TOL:
        raise CoordinateError(f"mu'={mu_prime} outside [1/4, 1/3]")
    e3 = ek_basis(coords)[:, 3]
    return (1 - 4 * mu_prime) * pure_projector(e3) + mu_prime * np.eye(4)


def inverted_werner_separable(mu_prime: float, coords: TwoQubitCoords | None = None) -> bool:
    """Separability of the inverted-order line, checked two ways.

    The closed condition ``C'_p <= 2 mu'/(4 mu' - 1)`` always holds for
    ``mu' >= 1/4``; the oracle negativity of the constructed state must
    agree.
    """
    coords = coords if coords is not None else TwoQubitCoords()
    rho = inverted_werner_state(mu_prime, coords)
    c_prime = concurrence_pure(ek_basis(coords)[:, 3])
    closed = mu_prime <= 0.25 + DIST_TOL or c_prime * (4 * mu_prime - 1) <= 2 * mu_prime
    oracle = negativity_oracle(rho) <= SEPARABLE_TOL
    if closed != oracle:
        raise InvariantViolation("closed-form and oracle separability disagree")
    return closed and oracle


def footnote_projection_check(r: float, coords: TwoQubitCoords | None = None) -> tuple[float, bool]:
    """Foot of the perpendicular from ``S_Psi`` onto the ``W_mu`` line.

    Returns ``mu = (1 - r)/6`` and whether ``W_mu`` there is entangled
    (``C_p > 2 mu/(1 - 4 mu)``); the verdict is cross-checked with the
    oracle and the projection point is cross-checked geometrically.
    """
    if not 0.0 <= r <= 1.0:
        raise CoordinateError(f"r={r} outside [0, 1]")
    mu = (1 - r) / 6
    c_p = math.sqrt(1 - r * r)
    entangled = c_p * (1 - 4 * mu) - 2 * mu > SEPARABLE_TOL
    chi = 0.5 * math.acos(r)
    base = (coords if coords is not None else TwoQubitCoords()).with_(chi=chi, nu1=1.0, nu2=0.0, nu3=0.0)
    w = werner_state(WernerSpec.from_mu(base, mu))
    if (negativity_oracle(w) > SEPARABLE_TOL) != entangled:
        raise InvariantViolation("projection-point verdict disagrees with the oracle")
    # projection: (S - W) must be orthogonal to the line direction (E - I/4)
    e_psi, s_psi = anchor_projector(base), product_projector(base)
    direction = e_psi - np.eye(4) / 4
    if abs(np.vdot(direction, s_psi - w).real) > DIST_TOL:
        raise InvariantViolation("projection point is not orthogonal")
    return mu, entangled


def bisect_threshold(anchor: TwoQubitCoords, tol: float = 1e-9) -> float:
    """Locate the separability edge on ``W_mu`` by bisection on the oracle."""
    lo, hi = 0.0, 0.25  # entangled at lo (for C_p > 0), separable at hi
    if negativity_oracle(werner_state(WernerSpec.from_mu(anchor, lo))) <= SEPARABLE_TOL:
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if negativity_oracle(werner_state(WernerSpec.from_mu(anchor, mid))) > SEPARABLE_TOL:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
