"""PPT verdicts, negativity and concurrence for two-qubit states.

Two routes are kept side by side: a general numerical one built on the
Jacobi eigensolver, and the closed forms that hold on special coordinate
slices. The numerical route is authoritative; the closed forms are checked
against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CoordinateError, InvariantViolation
from .linalg import EPS_EIG, EPS_MATCH, dagger, herm_eigen, partial_transpose
from .parametrize import (
    MixingWeights,
    TwoQubitCoords,
    appendix_density,
    bold_basis,
    ek_basis,
    from_bold,
)

SEPARABLE_TOL = 1e-10
LIMIT_TOL = 1e-12
RANK_TOL = 1e-14

# sigma_y (x) sigma_y
SPIN_FLIP = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)

BRANCHES = ("general_oracle", "s21_zero", "c21_zero_mu23", "werner_line", "table1")
TABLE1_CASES = ("s21", "c21", "s32", "c32", "s0", "c0")


@dataclass(frozen=True)
class EntanglementReport:
    ppt_satisfied: bool
    negativity: float
    concurrence: float
    branch: str
    case: Optional[str] = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.ppt_satisfied != (self.negativity <= SEPARABLE_TOL):
            raise InvariantViolation("negativity and PPT verdict disagree")

    def as_dict(self) -> dict:
        out = {
            "branch": self.branch,
            "ppt_satisfied": self.ppt_satisfied,
            "negativity": self.negativity,
            "concurrence": self.concurrence,
        }
        if self.case is not None:
            out["case"] = self.case
        out.update(self.detail)
        return out


# --- general route ----------------------------------------------------------

def pt_spectrum(rho: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of the partial transpose (on qubit B)."""
    return herm_eigen(partial_transpose(rho, "B")).values


def negativity_oracle(rho: np.ndarray) -> float:
    """Twice the magnitude of the negative partial-transpose eigenvalue.

    A two-qubit partial transpose has at most one negative eigenvalue; a
    second one below -1e-11 raises InvariantViolation.
    """
    vals = pt_spectrum(rho)
    if np.sum(vals < -EPS_EIG) > 1:
        raise InvariantViolation(f"partial transpose has several negative eigenvalues: {vals}")
    return 2.0 * max(0.0, -float(vals[-1]))


def concurrence_wootters(rho: np.ndarray) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    With ``rho = X X^dagger`` (``X = V sqrt(Lambda)``), the ``l_i`` are the
    singular values of ``tau = X^T (sy sy) X``. They are read off as the
    non-negative eigenvalues of the Hermitian dilation ``[[0, tau], [tau^dagger, 0]]``,
    which avoids square-rooting squared eigenvalues.
    """
    eig = herm_eigen(rho)
    # eigenvalues at the solver noise floor are exact zeros; keeping them
    # would inject sqrt(noise) ~ 1e-9 into tau for rank-deficient states
    cutoff = RANK_TOL * max(1.0, float(np.sum(np.abs(eig.values))))
    w = np.where(eig.values < cutoff, 0.0, eig.values)
    x = eig.vectors * np.sqrt(w)
    tau = x.T @ SPIN_FLIP @ x
    dilation = np.block([[np.zeros((4, 4)), tau], [dagger(tau), np.zeros((4, 4))]])
    lam = herm_eigen(dilation).values[:4]
    lam = np.where(lam < 0.0, 0.0, lam)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_pure(v: np.ndarray) -> float:
    """``|<v*| sy sy |v>|`` for a normalized two-qubit vector."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError("expected a C^4 vector")
    if abs(np.linalg.norm(v) - 1.0) > EPS_MATCH:
        raise ValueError("vector is not normalized")
    return float(abs(v @ SPIN_FLIP @ v))


def general_report(rho: np.ndarray) -> EntanglementReport:
    neg = negativity_oracle(rho)
    conc = concurrence_wootters(rho)
    lam_min = float(pt_spectrum(rho)[-1])
    return EntanglementReport(
        ppt_satisfied=neg <= SEPARABLE_TOL,
        negativity=neg,
        concurrence=conc,
        branch="general_oracle",
        detail={"pt_min_eigenvalue": lam_min, "boundary": abs(lam_min) <= SEPARABLE_TOL},
    )


def coords_density(coords: TwoQubitCoords) -> np.ndarray:
    """Computational-basis density matrix via the closed-form bold entries."""
    basis = bold_basis(coords.local_a, coords.local_b)
    return from_bold(appendix_density(coords), basis)


# --- pure-state parts -------------------------------------------------------

@dataclass(frozen=True)
class PartConcurrences:
    """Concurrences of the pure states in the eigenensemble.

    ``c_psi2``/``c_psi3`` are NaN when the corresponding component of
    ``e_2``/``e_3`` in span{|2>, |3>} vanishes (the part state is undefined).
    """

    c_p: float
    c_psi1: float
    c_psi2: float
    c_psi3: float
    c_e1: float
    c_e2: float
    c_e3: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _norm_or_nan(num: float, den: float) -> float:
    return num / den if den > LIMIT_TOL else float("nan")


def part_concurrences(coords: TwoQubitCoords) -> PartConcurrences:
    """Closed-form concurrences of ``Psi``, ``Psi_1..3`` and ``e_1..e_3``."""
    cj = complex.conjugate
    qp, qm = coords.q_plus, coords.q_minus
    z = complex(math.cos(coords.zeta), math.sin(coords.zeta))
    c21, s21 = coords.a21.c, coords.a21.s
    c32, s32 = coords.a32.c, coords.a32.s
    c0, s0 = coords.a0.c, coords.a0.s

    c_p = 2 * qp * qm
    c_psi1 = abs(2 * s32 * c32)
    c_e1 = abs(c_p * z * cj(c21) ** 2 + c_psi1 * cj(s21) ** 2)

    t2 = 2 * (cj(c0) * c21 * cj(s32) + cj(s0) * c32) * (cj(c0) * c21 * cj(c32) - cj(s0) * s32)
    c_e2 = abs(c_p * z * cj(c0) ** 2 * s21**2 + t2)
    c_psi2 = _norm_or_nan(abs(t2), abs(s0) ** 2 + abs(c0) ** 2 * abs(c21) ** 2)

    t3 = 2 * (s0 * c21 * cj(c32) + c0 * s32) * (s0 * c21 * cj(s32) - c0 * c32)
    c_e3 = abs(c_p * z * s0**2 * s21**2 + t3)
    c_psi3 = _norm_or_nan(abs(t3), abs(c0) ** 2 + abs(s0) ** 2 * abs(c21) ** 2)
    return PartConcurrences(c_p, c_psi1, c_psi2, c_psi3, c_e1, c_e2, c_e3)


def part_states(coords: TwoQubitCoords) -> dict[str, Optional[np.ndarray]]:
    """Normalized ``Psi, Psi_perp, Psi_1, Psi_2, Psi_3`` in the computational basis.

    ``Psi_i`` is the normalized span{|2>, |3>} component of ``e_i``;
    ``None`` when that component vanishes.
    """
    basis = bold_basis(coords.local_a, coords.local_b).vectors
    e = ek_basis(coords)
    out: dict[str, Optional[np.ndarray]] = {}
    qp, qm = coords.q_plus, coords.q_minus
    zb = complex(math.cos(coords.zeta), -math.sin(coords.zeta))
    out["psi"] = e[:, 0]
    out["psi_perp"] = basis @ np.array([-zb * qm, qp, 0, 0])
    c32, s32 = coords.a32.c, coords.a32.s
    out["psi1"] = basis @ np.array([0, 0, c32, s32])
    for i in (2, 3):
        coeffs = dagger(basis) @ e[:, i]
        part = np.array([0, 0, coeffs[2], coeffs[3]])
        nrm = np.linalg.norm(part)
        out[f"psi{i}"] = basis @ (part / nrm) if nrm > math.sqrt(LIMIT_TOL) else None
    return out


def part_concurrences_oracle(coords: TwoQubitCoords) -> PartConcurrences:
    """Same quantities computed directly from the state vectors."""
    e = ek_basis(coords)
    parts = part_states(coords)

    def conc(v):
        return float("nan") if v is None else concurrence_pure(v)

    return PartConcurrences(
        c_p=concurrence_pure(e[:, 0]),
        c_psi1=conc(parts["psi1"]),
        c_psi2=conc(parts["psi2"]),
        c_psi3=conc(parts["psi3"]),
        c_e1=concurrence_pure(e[:, 1]),
        c_e2=concurrence_pure(e[:, 2]),
        c_e3=concurrence_pure(e[:, 3]),
    )


def interference_extremes(c_a: float, c_b: float, weight_a: float) -> tuple[float, float]:
    """Range of ``|w C_a e^{i alpha} + (1 - w) C_b e^{i beta}|`` over the phases."""
    wa, wb = weight_a * c_a, (1.0 - weight_a) * c_b
    return abs(wa - wb), wa + wb


# --- closed-form slices -----------------------------------------------------

def _mu(mu: MixingWeights | tuple) -> tuple[float, float, float, float]:
    return tuple(mu.mu) if isinstance(mu, MixingWeights) else MixingWeights(tuple(mu)).mu


def _check_unit(name: str, value: float) -> float:
    if not -LIMIT_TOL <= value <= 1.0 + LIMIT_TOL:
        raise CoordinateError(f"{name}={value} outside [0, 1]")
    return min(max(float(value), 0.0), 1.0)


def _report(violated: bool, neg: float, conc: float, branch: str, **kw) -> EntanglementReport:
    if violated and neg > SEPARABLE_TOL:
        return EntanglementReport(False, neg, max(conc, 0.0), branch, **kw)
    return EntanglementReport(True, 0.0, 0.0, branch, **kw)


def slice_s21_zero(mu: MixingWeights, c_p: float, c_psi2: float) -> EntanglementReport:
    """Closed forms for states with ``theta21 = 0``."""
    m0, m1, m2, m3 = _mu(mu)
    c_p, c_psi2 = _check_unit("c_p", c_p), _check_unit("c_psi2", c_psi2)
    # first block condition holds automatically since mu0 mu1 >= (mu2 - mu3)^2
    if m0 * m1 + (m0 - m1) ** 2 * c_p**2 / 4 < (m2 - m3) ** 2 * c_psi2**2 / 4 - EPS_MATCH:
        raise InvariantViolation("first diagonal-block PPT condition failed")
    lhs = 4 * m2 * m3 + (m2 - m3) ** 2 * c_psi2**2
    rhs = (m0 - m1) ** 2 * c_p**2
    neg = math.sqrt((m0 - m1) ** 2 * c_p**2 + (m2 - m3) ** 2 * (1 - c_psi2**2)) - (m2 + m3)
    conc = (m0 - m1) * c_p - math.sqrt(lhs)
    return _report(lhs < rhs, neg, conc, "s21_zero", detail={"ppt_lhs": lhs, "ppt_rhs": rhs})


def slice_c21_zero_mu23(mu: MixingWeights, c_p: float, c_psi1: float) -> EntanglementReport:
    """Closed forms for ``theta21 = pi`` with ``mu2 = mu3``."""
    m0, m1, m2, m3 = _mu(mu)
    if abs(m2 - m3) > LIMIT_TOL:
        raise CoordinateError("this slice needs mu2 == mu3")
    c_p, c_psi1 = _check_unit("c_p", c_p), _check_unit("c_psi1", c_psi1)
    first_ok = 4 * m0 * m2 + (m0 - m2) ** 2 * c_p**2 >= (m1 - m2) ** 2 * c_psi1**2
    second_ok = 4 * m1 * m2 + (m1 - m2) ** 2 * c_psi1**2 >= (m0 - m2) ** 2 * c_p**2
    if not first_ok and not second_ok:
        raise InvariantViolation("both c21=0 PPT conditions violated")
    if not first_ok:
        neg = math.sqrt((m1 - m2) ** 2 * c_psi1**2 + (m0 - m2) ** 2 * (1 - c_p**2)) - (m0 + m2)
        conc = (m1 - m2) * c_psi1 - math.sqrt((m0 - m2) ** 2 * c_p**2 + 4 * m0 * m2)
        return _report(True, neg, conc, "c21_zero_mu23", detail={"violated": 1})
    if not second_ok:
        neg = math.sqrt((m0 - m2) ** 2 * c_p**2 + (m1 - m2) ** 2 * (1 - c_psi1**2)) - (m1 + m2)
        conc = (m0 - m2) * c_p - math.sqrt((m1 - m2) ** 2 * c_psi1**2 + 4 * m1 * m2)
        return _report(True, neg, conc, "c21_zero_mu23", detail={"violated": 2})
    return _report(False, 0.0, 0.0, "c21_zero_mu23", detail={"violated": 0})


# --- limit table (one mixing angle at a pole) ------------------------------

@dataclass(frozen=True)
class PPTInequality:
    """``4 mu_h mu_k + lhs_extra >= rhs`` with ``h < k``."""

    h: int
    k: int
    lhs_extra: float
    rhs: float

    def holds(self, mu) -> bool:
        return 4 * mu[self.h] * mu[self.k] + self.lhs_extra >= self.rhs

    @property
    def f(self) -> float:
        return self.rhs - self.lhs_extra


def table1_caption_rule(mu_h: float, mu_k: float, rhs: float, lhs_extra: float = 0.0) -> tuple[float, float]:
    """Negativity and concurrence when ``4 mu_h mu_k >= f`` is violated.

    ``f = rhs - lhs_extra``. The negativity depends on ``f`` alone; the
    concurrence is ``sqrt(rhs) - sqrt(4 mu_h mu_k + lhs_extra)`` and so
    needs the split.
    """
    if mu_h < mu_k - LIMIT_TOL:
        raise CoordinateError("caption rule expects mu_h >= mu_k")
    f = rhs - lhs_extra
    if 4 * mu_h * mu_k >= f:
        raise CoordinateError("PPT condition is not violated")
    neg = math.sqrt(f + (mu_h - mu_k) ** 2) - (mu_h + mu_k)
    conc = math.sqrt(max(rhs, 0.0)) - math.sqrt(max(4 * mu_h * mu_k + lhs_extra, 0.0))
    return neg, conc


def _limit_value(coords: TwoQubitCoords, case: str) -> float:
    return abs({
        "s21": coords.a21.s, "c21": coords.a21.c,
        "s32": coords.a32.s, "c32": coords.a32.c,
        "s0": coords.a0.s, "c0": coords.a0.c,
    }[case])


def _table1_cells(case: str, pc: PartConcurrences, coords: TwoQubitCoords) -> dict[str, float]:
    c_p, c1 = pc.c_p, pc.c_psi1
    c21, c0, s0 = coords.a21.c, coords.a0.c, coords.a0.s
    if case == "s21":
        return {"psi": c_p, "psi1": c1, "psi2": pc.c_psi2, "psi3": pc.c_psi2,
                "e1": c_p, "e2": pc.c_psi2, "e3": pc.c_psi2}
    if case == "c21":
        return {"psi": c_p, "psi1": c1, "psi2": c1, "psi3": c1,
                "e1": c1, "e2": pc.c_e2, "e3": pc.c_e3}
    if case in ("s32", "c32"):
        num = 2 * abs(c0 * s0 * c21)
        cp2 = _norm_or_nan(num, abs(s0) ** 2 + abs(c0) ** 2 * abs(c21) ** 2)
        cp3 = _norm_or_nan(num, abs(c0) ** 2 + abs(s0) ** 2 * abs(c21) ** 2)
        return {"psi": c_p, "psi1": 0.0, "psi2": cp2, "psi3": cp3,
                "e1": abs(c21) ** 2 * c_p, "e2": pc.c_e2, "e3": pc.c_e3}
    if case == "s0":
        return {"psi": c_p, "psi1": c1, "psi2": c1, "psi3": c1,
                "e1": pc.c_e1, "e2": pc.c_e2, "e3": c1}
    if case == "c0":
        return {"psi": c_p, "psi1": c1, "psi2": c1, "psi3": c1,
                "e1": pc.c_e1, "e2": c1, "e3": pc.c_e3}
    raise ValueError(f"unknown limit-table case {case!r}")


# which (interference) cells mix which two parts, with the weight of the C_p part
def _interference_weights(case: str, coords: TwoQubitCoords) -> dict[str, tuple[str, float]]:
    c0, s0, c21 = abs(coords.a0.c) ** 2, abs(coords.a0.s) ** 2, abs(coords.a21.c) ** 2
    if case == "c21":
        return {"e2": ("psi1", c0), "e3": ("psi1", s0)}
    if case in ("s32", "c32"):
        s21 = abs(coords.a21.s) ** 2
        return {"e2": ("psi2", c0 * s21), "e3": ("psi3", s0 * s21)}
    if case == "s0":
        return {"e1": ("psi1", c21), "e2": ("psi1", 1.0 - c21)}
    if case == "c0":
        return {"e1": ("psi1", c21), "e3": ("psi1", 1.0 - c21)}
    return {}


def table1_conditions(coords: TwoQubitCoords, case: str, pc: PartConcurrences) -> Optional[list[PPTInequality]]:
    """The tabulated PPT inequalities that apply at these coordinates, if any."""
    m0, m1, m2, m3 = coords.mu
    cp2, c12 = pc.c_p**2, pc.c_psi1**2
    c21_zero = _limit_value(coords, "c21") <= LIMIT_TOL

    def eq(a, b):
        return abs(a - b) <= LIMIT_TOL

    if case == "s21":
        return [PPTInequality(2, 3, (m2 - m3) ** 2 * pc.c_psi2**2, (m0 - m1) ** 2 * cp2)]
    if case == "c21" and eq(m2, m3):
        return [
            PPTInequality(0, 2, (m0 - m2) ** 2 * cp2, (m1 - m2) ** 2 * c12),
            PPTInequality(1, 2, (m1 - m2) ** 2 * c12, (m0 - m2) ** 2 * cp2),
        ]
    if case == "s0":
        if eq(m1, m2):
            return [PPTInequality(1, 3, (m1 - m3) ** 2 * c12, (m0 - m1) ** 2 * cp2)]
        if c21_zero:
            return [
                PPTInequality(0, 2, (m0 - m2) ** 2 * cp2, (m1 - m3) ** 2 * c12),
                PPTInequality(1, 3, (m1 - m3) ** 2 * c12, (m0 - m2) ** 2 * cp2),
            ]
    if case == "c0" and c21_zero:
        return [
            PPTInequality(0, 3, (m0 - m3) ** 2 * cp2, (m1 - m2) ** 2 * c12),
            PPTInequality(1, 2, (m1 - m2) ** 2 * c12, (m0 - m3) ** 2 * cp2),
        ]
    return None


def table1_limits(coords: TwoQubitCoords, case: str) -> dict:
    """Evaluate one row of the limit table at ``coords``.

    Returns the seven pure-state concurrence cells, the interference ranges
    they must fall in, and where the row supplies one, the PPT verdict with
    the caption-rule negativity and concurrence.
    """
    if case not in TABLE1_CASES:
        raise ValueError(f"unknown limit-table case {case!r}")
    if _limit_value(coords, case) > LIMIT_TOL:
        raise CoordinateError(f"coordinates are not at the {case}=0 limit")
    pc = part_concurrences(coords)
    out: dict = {"case": case, "cells": _table1_cells(case, pc, coords)}

    bounds = {}
    for cell, (other, w) in _interference_weights(case, coords).items():
        partner = out["cells"][other] if other != "psi1" else pc.c_psi1
        bounds[cell] = interference_extremes(pc.c_p, partner, w)
    out["interference_bounds"] = bounds

    m = coords.mu
    if case in ("s32", "c32"):
        c21_zero = _limit_value(coords, "c21") <= LIMIT_TOL
        if pc.c_p <= LIMIT_TOL and (abs(m[2] - m[3]) <= LIMIT_TOL or c21_zero):
            out["ppt_satisfied"] = True
            out["negativity"] = 0.0
        return out

    conds = table1_conditions(coords, case, pc)
    if conds is None:
        return out
    violated = [c for c in conds if not c.holds(m)]
    if len(violated) > 1:
        raise InvariantViolation("more than one tabulated PPT inequality violated")
    out["ppt_satisfied"] = not violated
    if violated:
        c = violated[0]
        neg, conc = table1_caption_rule(m[c.h], m[c.k], c.rhs, c.lhs_extra)
        out["negativity"], out["concurrence"] = neg, max(conc, 0.0)
    else:
        out["negativity"], out["concurrence"] = 0.0, 0.0
    return out


def table1_report(coords: TwoQubitCoords, case: str) -> Optional[EntanglementReport]:
    row = table1_limits(coords, case)
    if "ppt_satisfied" not in row or "concurrence" not in row:
        return None
    neg = row["negativity"] if row["negativity"] > SEPARABLE_TOL else 0.0
    conc = row["concurrence"] if neg else 0.0
    return EntanglementReport(neg <= SEPARABLE_TOL, neg, conc, "table1", case=case)


def applicable_table1_cases(coords: TwoQubitCoords) -> list[str]:
    return [c for c in TABLE1_CASES if _limit_value(coords, c) <= LIMIT_TOL]


def weighted_concurrence_bound(coords: TwoQubitCoords) -> float:
    """``sum_k mu_k C(e_k)``, an upper bound on the mixed-state concurrence."""
    e = ek_basis(coords)
    return float(sum(m * concurrence_pure(e[:, k]) for k, m in enumerate(coords.mu)))
