"""Seeded verification suites comparing closed forms with the numerical oracle.

Each suite draws its own reproducible random stream and returns a
:class:`VerifyOutcome` holding the worst deviation it saw. Boolean
mismatches (a wrong PPT verdict, a misplaced extremum) count as an error
of 1.0.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import entangle as ent
from . import geometry as geo
from .linalg import dagger, herm_eigen, kron, partial_trace
from .parametrize import (
    AnglePair,
    MixingWeights,
    TwoQubitCoords,
    appendix_density,
    assemble_density,
    bold_basis,
    change_basis,
    density,
    ek_basis,
    ensemble,
    mu_to_nu,
    nu_to_mu,
    pure_projector,
    random_coords,
    single_qubit_mixed,
    su2,
    two_qubit_pure,
)


@dataclass(frozen=True)
class VerifyOutcome:
    suite: str
    cases_run: int
    max_abs_error: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.suite:<22} cases={self.cases_run:<6} max_err={self.max_abs_error:.3e} tol={self.tolerance:.0e}"

    def as_dict(self) -> dict:
        return asdict(self)


class _Tracker:
    def __init__(self, name: str, tol: float):
        self.name, self.tol = name, tol
        self.cases = 0
        self.err = 0.0

    def add(self, err: float) -> None:
        err = float(err)
        self.err = max(self.err, err if math.isfinite(err) else 1.0)

    def check(self, ok: bool) -> None:
        self.add(0.0 if ok else 1.0)

    def case(self) -> None:
        self.cases += 1

    def outcome(self) -> VerifyOutcome:
        return VerifyOutcome(self.name, self.cases, self.err, self.tol, self.err < self.tol)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for sub-stream ``stream`` of ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def _oracle_pair(rho: np.ndarray) -> tuple[float, float]:
    return ent.negativity_oracle(rho), ent.concurrence_wootters(rho)


# --- suites -----------------------------------------------------------------

def suite_appendix(rng, samples=1000) -> VerifyOutcome:
    t = _Tracker("appendix-vs-ensemble", 1e-12)
    for _ in range(samples):
        c = random_coords(rng)
        bold = change_basis(assemble_density(ensemble(c)), bold_basis(c.local_a, c.local_b))
        closed = appendix_density(c)
        t.add(np.max(np.abs(closed - bold)))
        t.add(np.max(np.abs(closed - dagger(closed))))
        t.case()
    return t.outcome()


def suite_eigen_recovery(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("eigen-recovery", 1e-11)
    for _ in range(samples):
        c = random_coords(rng)
        t.add(np.max(np.abs(herm_eigen(density(c)).values - np.asarray(c.mu))))
        t.case()
    return t.outcome()


def suite_nu_roundtrip(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("nu-roundtrip", 1e-14)
    for _ in range(samples):
        nu = tuple(rng.dirichlet(np.ones(4))[:3])
        mu = nu_to_mu(nu)
        t.add(max(abs(a - b) for a, b in zip(mu_to_nu(mu), nu)))
        t.check(all(a >= b for a, b in zip(mu.mu, mu.mu[1:])) and mu.mu[3] >= 0)
        t.case()
    return t.outcome()


def suite_reduced_state(rng, samples=200) -> VerifyOutcome:
    t = _Tracker("reduced-state", 1e-12)
    for _ in range(samples):
        c = random_coords(rng)
        v = two_qubit_pure(c.local_a, c.local_b, c.zeta, c.chi)
        rho = pure_projector(v)
        t.add(np.max(np.abs(partial_trace(rho, "A") - single_qubit_mixed(c.r, c.local_a))))
        t.add(np.max(np.abs(partial_trace(rho, "B") - single_qubit_mixed(c.r, c.local_b))))
        t.case()
    return t.outcome()


def suite_pure_concurrences(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("pure-concurrences", 1e-10)
    for _ in range(samples):
        c = random_coords(rng)
        closed = ent.part_concurrences(c)
        direct = ent.part_concurrences_oracle(c)
        for name, value in closed.as_dict().items():
            other = getattr(direct, name)
            if not (math.isnan(value) and math.isnan(other)):
                t.add(abs(value - other))
        t.add(abs(closed.c_p - math.sin(2 * c.chi)))
        t.add(abs(closed.c_psi1 - math.sin(c.a32.theta)))
        # pure states: three measures coincide
        e = ek_basis(c)
        for k in range(4):
            proj = pure_projector(e[:, k])
            cp = ent.concurrence_pure(e[:, k])
            t.add(abs(cp - ent.concurrence_wootters(proj)))
            t.add(abs(cp - ent.negativity_oracle(proj)))
        t.case()
    return t.outcome()


def suite_interference(rng, samples=50, grid=720) -> VerifyOutcome:
    """Locate the extrema of C(e_1) over psi21 on a grid."""
    step = 2 * math.pi / grid
    t = _Tracker("interference-extremum", 1.0 + 1e-9)
    psis = np.arange(grid) * step
    for _ in range(samples):
        base = random_coords(rng)
        theta21 = base.a21.theta
        values = np.array([ent.concurrence_pure(ek_basis(base.with_(psi21=p))[:, 1]) for p in psis])
        pc = ent.part_concurrences(base)
        hi = abs(pc.c_p * math.cos(theta21 / 2) ** 2 + pc.c_psi1 * math.sin(theta21 / 2) ** 2)
        lo = abs(pc.c_p * math.cos(theta21 / 2) ** 2 - pc.c_psi1 * math.sin(theta21 / 2) ** 2)
        # predicted: exp(i(2 psi21 + zeta)) = +1 at the max, -1 at the min
        for target, want, pick in ((0.0, hi, np.argmax), (math.pi, lo, np.argmin)):
            found = psis[pick(values)]
            preds = [((target - base.zeta) / 2 + k * math.pi) % (2 * math.pi) for k in (0, 1)]
            dist = min(min(abs(found - p), 2 * math.pi - abs(found - p)) for p in preds)
            t.add(dist / step)  # in grid steps, must be <= 1
            for p in preds:
                at = ent.concurrence_pure(ek_basis(base.with_(psi21=p))[:, 1])
                t.add(abs(at - want) / 1e-10 * 1.0 if abs(at - want) > 1e-10 else 0.0)
        t.case()
    return t.outcome()


def suite_s21(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("s21-slice", 1e-10)
    for _ in range(samples):
        c = random_coords(rng, theta21=0.0)
        pc = ent.part_concurrences(c)
        rep = ent.slice_s21_zero(c.weights, pc.c_p, pc.c_psi2)
        neg, conc = _oracle_pair(density(c))
        t.check(rep.ppt_satisfied == (neg <= ent.SEPARABLE_TOL))
        t.add(abs(rep.negativity - neg))
        t.add(abs(rep.concurrence - conc))
        t.case()
    # mu2 == mu3: negativity = concurrence, independent of C_Psi2
    for _ in range(max(samples // 10, 5)):
        c = random_coords(rng, theta21=0.0)
        m = list(c.mu)
        m[2] = m[3] = (m[2] + m[3]) / 2
        c = c.with_weights(m)
        vals = []
        for th32, th0 in zip(rng.uniform(0, math.pi, 8), rng.uniform(0, math.pi, 8)):
            neg, conc = _oracle_pair(density(c.with_(theta32=float(th32), theta0=float(th0))))
            t.add(abs(neg - conc))
            vals.append(neg)
        t.add(max(vals) - min(vals))
        t.case()
    return t.outcome()


def suite_monotone(rng, samples=100, h=1e-4) -> VerifyOutcome:
    """Negativity/concurrence on theta21 = 0 do not decrease with any nu_i."""
    t = _Tracker("s21-monotone", 1e-10)
    for _ in range(samples):
        c = random_coords(rng, theta21=0.0)
        nu = list(c.nu)
        if sum(nu) > 1 - 2 * h:
            continue
        base = _oracle_pair(density(c))
        for i in range(3):
            bumped = nu.copy()
            bumped[i] += h
            up = _oracle_pair(density(c.with_(nu1=bumped[0], nu2=bumped[1], nu3=bumped[2])))
            t.add(max(0.0, base[0] - up[0]))
            t.add(max(0.0, base[1] - up[1]))
        t.case()
    return t.outcome()


def suite_c21(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("c21-slice", 1e-10)
    for _ in range(samples):
        c = random_coords(rng, theta21=math.pi)
        m = list(c.mu)
        m[2] = m[3] = (m[2] + m[3]) / 2
        c = c.with_weights(m)
        pc = ent.part_concurrences(c)
        rep = ent.slice_c21_zero_mu23(c.weights, pc.c_p, pc.c_psi1)
        neg, conc = _oracle_pair(density(c))
        t.check(rep.ppt_satisfied == (neg <= ent.SEPARABLE_TOL))
        t.add(abs(rep.negativity - neg))
        t.add(abs(rep.concurrence - conc))
        t.case()
    # extremal value (sqrt 2 - 1)/2 at mu = (1/2, 1/2, 0, 0), C_Psi1 = 1, C_p = 0
    c = TwoQubitCoords.from_flat({"chi": 0.0, "theta21": math.pi, "theta32": math.pi / 2, "nu1": 0.0, "nu2": 1.0, "nu3": 0.0})
    target = (math.sqrt(2) - 1) / 2
    rep = ent.slice_c21_zero_mu23(c.weights, 0.0, 1.0)
    edge = math.sqrt(0.5**2 * 1.0 + 0.5**2) - 0.5
    t.add(abs(rep.negativity - target) / 1e-12 * 1e-10 if abs(rep.negativity - target) > 1e-12 else 0.0)
    t.add(abs(edge - target) / 1e-12 * 1e-10 if abs(edge - target) > 1e-12 else 0.0)
    oracle = ent.negativity_oracle(density(c))
    t.add(abs(oracle - target) / 1e-12 * 1e-10 if abs(oracle - target) > 1e-12 else 0.0)
    t.case()
    return t.outcome()


_TABLE1_DRAWS: dict[str, tuple[dict, tuple[str, ...]]] = {
    "s21": ({"theta21": 0.0}, (None,)),
    "c21": ({"theta21": math.pi}, (None, "mu23")),
    "s32": ({"theta32": 0.0}, (None, "cp0_mu23", "cp0_c21")),
    "c32": ({"theta32": math.pi}, (None, "cp0_mu23", "cp0_c21")),
    "s0": ({"theta0": 0.0}, (None, "mu12", "c21")),
    "c0": ({"theta0": math.pi}, (None, "c21")),
}


def _table1_draw(rng, case: str, extra) -> TwoQubitCoords:
    fixed = dict(_TABLE1_DRAWS[case][0])
    if extra in ("c21", "cp0_c21"):
        fixed["theta21"] = math.pi
    if extra and extra.startswith("cp0"):
        fixed["chi"] = 0.0
    c = random_coords(rng, **fixed)
    m = list(c.mu)
    if extra in ("mu23", "cp0_mu23"):
        m[2] = m[3] = (m[2] + m[3]) / 2
        c = c.with_weights(m)
    if extra == "mu12":
        m[1] = m[2] = (m[1] + m[2]) / 2
        c = c.with_weights(m)
    return c


def suite_table1(rng, samples=200) -> VerifyOutcome:
    t = _Tracker("table1", 1e-10)
    for case, (_, extras) in _TABLE1_DRAWS.items():
        for extra in extras:
            for _ in range(samples):
                c = _table1_draw(rng, case, extra)
                row = ent.table1_limits(c, case)
                direct = ent.part_concurrences_oracle(c)
                oracle_cells = {
                    "psi": direct.c_p, "psi1": direct.c_psi1, "psi2": direct.c_psi2,
                    "psi3": direct.c_psi3, "e1": direct.c_e1, "e2": direct.c_e2, "e3": direct.c_e3,
                }
                for cell, value in row["cells"].items():
                    other = oracle_cells[cell]
                    # a vanishing part leaves only the tabulated limit value
                    if not math.isnan(other):
                        t.add(abs(value - other))
                for cell, (lo, hi) in row["interference_bounds"].items():
                    v = oracle_cells[cell]
                    t.check(lo - 1e-12 <= v <= hi + 1e-12)
                if "ppt_satisfied" in row:
                    neg, conc = _oracle_pair(density(c))
                    t.check(row["ppt_satisfied"] == (neg <= ent.SEPARABLE_TOL))
                    t.add(abs(row["negativity"] - neg))
                    if "concurrence" in row:
                        t.add(abs(row["concurrence"] - conc))
                elif extra is not None:
                    t.check(False)  # a sub-case draw must reach a tabulated condition
                t.case()
    return t.outcome()


def suite_werner(rng, samples=50) -> VerifyOutcome:
    t = _Tracker("werner-thresholds", 1e-10)
    # exact rationals
    for cp, mu_star, nu_star in ((Fraction(1), Fraction(1, 6), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 8), Fraction(1, 2))):
        t.check(geo.werner_threshold(cp) == (mu_star, nu_star))
        t.check(geo.werner_threshold(float(cp)) == (float(mu_star), float(nu_star)))
    t.check(geo.werner_threshold(0.0)[0] == 0.0)
    t.case()
    # bisection on the oracle brackets the closed form
    chis = [math.pi / 4, math.pi / 12] + list(rng.uniform(0.05, math.pi / 4, samples))
    for chi in chis:
        anchor = random_coords(rng, chi=float(chi), nu1=1.0, nu2=0.0, nu3=0.0)
        cp = math.sin(2 * chi)
        mu_star, nu_star = geo.werner_threshold(cp)
        found = geo.bisect_threshold(anchor)
        t.add(abs(found - mu_star) / 1e-6 * 1e-10 if abs(found - mu_star) > 1e-6 else 0.0)
        for nu1 in np.linspace(nu_star, 1.0, 7)[1:]:
            w = geo.werner_state(geo.WernerSpec(anchor, float(nu1)))
            neg, conc = _oracle_pair(w)
            closed = geo.werner_negativity_line(cp, float(nu1))
            t.add(abs(neg - closed))
            t.add(abs(conc - closed))
            rep = geo.werner_mu_report(geo.WernerSpec(anchor, float(nu1)).weights, cp)
            t.add(abs(rep.negativity - neg))
        t.case()
    # generalized W_mu with free weights
    for _ in range(samples):
        c = random_coords(rng, theta21=0.0, theta32=0.0, theta0=0.0)
        rep = geo.werner_mu_report(c.weights, 2 * c.q_plus * c.q_minus)
        neg, conc = _oracle_pair(density(c))
        t.add(abs(rep.negativity - neg))
        t.add(abs(rep.concurrence - conc))
        t.case()
    return t.outcome()


def suite_inverted(rng, samples=20, grid=50) -> VerifyOutcome:
    t = _Tracker("inverted-werner", 1e-10)
    xs = np.linspace(-1.0 / 3, 0.0, grid, endpoint=False)
    for _ in range(samples):
        anchor = random_coords(rng, nu1=1.0, nu2=0.0, nu3=0.0)
        for x in xs:
            t.add(ent.negativity_oracle(geo.werner_state(geo.WernerSpec(anchor, float(x)))))
            t.case()
        for mp in np.linspace(0.25, 1.0 / 3, 5):
            t.check(geo.inverted_werner_separable(float(mp), random_coords(rng)))
    return t.outcome()


def suite_geometry(rng, samples=500) -> VerifyOutcome:
    t = _Tracker("geometry", 1e-12)
    for _ in range(samples):
        c = random_coords(rng)
        rho = density(c)
        e_psi = pure_projector(ek_basis(c)[:, 0])
        t.add(abs(geo.hs_distance(rho, e_psi) - geo.hs_distance_to_top(c.mu)))
        t.case()
    for _ in range(max(samples // 10, 5)):
        anchor = random_coords(rng, nu1=1.0, nu2=0.0, nu3=0.0)
        e_psi = geo.anchor_projector(anchor)
        centre = geo.werner_state(geo.WernerSpec.from_mu(anchor, 0.25))
        t.add(abs(geo.hs_distance(centre, e_psi) - geo.R_OUT))
        t.add(abs(geo.hs_distance(centre, geo.product_projector(anchor)) - geo.R_OUT))
        mu = float(rng.uniform(0, 0.25))
        w = geo.werner_state(geo.WernerSpec.from_mu(anchor, mu))
        t.add(abs(geo.hs_distance(w, e_psi) - math.sqrt(6) * mu))
        t.add(abs(geo.hs_distance(w, centre) - geo.R_OUT * (1 - 4 * mu)))
        t.add(abs(geo.hs_distance(geo.product_projector(anchor), e_psi) - anchor.q_minus))
        t.case()
    for r in np.linspace(0.0, 1.0, 21):
        r = float(r)
        anchor = random_coords(rng, chi=0.5 * math.acos(r), nu1=1.0, nu2=0.0, nu3=0.0)
        mu, entangled = geo.footnote_projection_check(r, anchor)
        t.add(abs(mu - (1 - r) / 6))
        w = geo.werner_state(geo.WernerSpec.from_mu(anchor, mu))
        t.add(abs(geo.hs_distance(w, geo.anchor_projector(anchor)) - (1 - r) / math.sqrt(6)))
        t.check(entangled == (0.0 < r < 1.0))
        if r == 0.0:
            t.check(ent.negativity_oracle(w) <= ent.SEPARABLE_TOL)
        t.case()
    return t.outcome()


def suite_closest_pure(rng, samples=20, trials=1000) -> VerifyOutcome:
    t = _Tracker("closest-pure", 1e-12)
    for _ in range(samples):
        c = random_coords(rng)
        t.check(geo.closest_pure_check(c, trials, rng))
        t.case()
    c = random_coords(rng, nu1=1.0, nu2=0.0, nu3=0.0)
    t.add(geo.hs_distance(density(c), geo.anchor_projector(c)))
    return t.outcome()


def _random_local(rng) -> dict:
    return {
        "theta": float(rng.uniform(0, math.pi)), "psi": float(rng.uniform(0, 2 * math.pi)),
        "theta_p": float(rng.uniform(0, math.pi)), "psi_p": float(rng.uniform(0, 2 * math.pi)),
    }


def suite_structural(rng, samples=1000, pt_samples=5000) -> VerifyOutcome:
    t = _Tracker("structural", 1e-10)
    for i in range(samples):
        c = random_coords(rng)
        # weighted-average bound
        conc = ent.concurrence_wootters(density(c))
        t.check(conc <= ent.weighted_concurrence_bound(c) + 1e-10)
        if i < samples // 4:
            moved = c.with_(**_random_local(rng))
            a, b = density(c), density(moved)
            t.add(np.max(np.abs(herm_eigen(a).values - herm_eigen(b).values)))
            t.add(abs(ent.negativity_oracle(a) - ent.negativity_oracle(b)))
            t.add(abs(conc - ent.concurrence_wootters(b)))
        t.case()
    for _ in range(pt_samples):
        vals = ent.pt_spectrum(density(random_coords(rng)))
        t.check(vals[-2] >= -1e-11)
        t.case()
    return t.outcome()


def suite_linalg(rng, samples=200) -> VerifyOutcome:
    t = _Tracker("linalg", 1e-11)
    for _ in range(samples):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        t.add(np.max(np.abs(kron(a, b) @ kron(c, d) - kron(a @ c, b @ d))))
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (x + dagger(x)) / 4
        e = herm_eigen(h)
        t.add(np.linalg.norm(e.reconstruct() - h))
        t.add(np.linalg.norm(dagger(e.vectors) @ e.vectors - np.eye(4)))
        t.add(abs(np.sum(e.values) - np.trace(h).real))
        p = AnglePair(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
        u = su2(p)
        t.add(np.max(np.abs(dagger(u) @ u - np.eye(2))))
        t.add(abs(np.linalg.det(u) - 1))
        t.case()
    return t.outcome()


SUITES: dict[str, Callable[..., VerifyOutcome]] = {
    "linalg": suite_linalg,
    "appendix-vs-ensemble": suite_appendix,
    "eigen-recovery": suite_eigen_recovery,
    "nu-roundtrip": suite_nu_roundtrip,
    "reduced-state": suite_reduced_state,
    "pure-concurrences": suite_pure_concurrences,
    "interference-extremum": suite_interference,
    "s21-slice": suite_s21,
    "s21-monotone": suite_monotone,
    "c21-slice": suite_c21,
    "table1": suite_table1,
    "werner-thresholds": suite_werner,
    "inverted-werner": suite_inverted,
    "geometry": suite_geometry,
    "closest-pure": suite_closest_pure,
    "structural": suite_structural,
}


def run_suite(name: str, seed: int = 42, samples: int | None = None) -> VerifyOutcome:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    stream = list(SUITES).index(name)
    rng = make_rng(seed, stream)
    fn = SUITES[name]
    return fn(rng) if samples is None else fn(rng, samples)


def _run_packed(args) -> VerifyOutcome:
    return run_suite(*args)


def run_suites(names: list[str], seed: int = 42, samples: int | None = None, jobs: int = 1) -> list[VerifyOutcome]:
    """Run suites (optionally in worker processes); results keep ``names`` order."""
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}")
    tasks = [(n, seed, samples) for n in names]
    if jobs <= 1 or len(tasks) == 1:
        return [_run_packed(a) for a in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_packed, tasks))
