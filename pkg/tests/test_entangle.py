import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracle
from conftest import GENERIC, coords
from qmixpar import entangle as ent
from qmixpar.errors import CoordinateError, InvariantViolation
from qmixpar.parametrize import TwoQubitCoords, density, ek_basis, pure_projector, random_unit_vector

# frozen from the LAPACK reference (tests/oracle.py)
GOLDEN = [
    (GENERIC, 0.3458172800431385, 0.3475449776150445),
    (
        dict(theta=1.9, psi=0.2, theta_p=0.3, psi_p=3.3, zeta=4.4, chi=0.75, theta21=0.0,
             theta32=1.7, psi32=1.0, theta0=0.9, psi0=2.0, nu1=0.4, nu2=0.2, nu3=0.1),
        0.21574698695897712,
        0.2158439370984333,
    ),
    (dict(chi=0.3, theta21=math.pi, theta32=2.2, nu1=0.2, nu2=0.5, nu3=0.0), 0.0, 0.0),
]


@pytest.mark.parametrize("flat,neg,conc", GOLDEN)
def test_frozen_reference_values(flat, neg, conc):
    rep = ent.general_report(density(TwoQubitCoords.from_flat(flat)))
    assert rep.negativity == pytest.approx(neg, abs=1e-12)
    assert rep.concurrence == pytest.approx(conc, abs=1e-12)


def test_bell_values():
    rep = ent.general_report(oracle.bell_phi_plus())
    assert rep.negativity == pytest.approx(1, abs=1e-12)
    assert rep.concurrence == pytest.approx(1, abs=1e-12)
    assert not rep.ppt_satisfied


def test_maximally_mixed_is_separable():
    rep = ent.general_report(np.eye(4) / 4)
    assert rep.ppt_satisfied and rep.negativity == 0 and rep.concurrence == 0


@given(coords())
def test_oracles_match_lapack(c):
    rho = density(c)
    assert abs(ent.negativity_oracle(rho) - oracle.negativity(rho)) < 1e-10
    # the textbook square-root route itself is only good to ~1e-7 on rank-deficient states
    assert abs(ent.concurrence_wootters(rho) - oracle.concurrence(rho)) < 1e-6


@given(st.integers(0, 2**32 - 1))
def test_pure_state_measures_agree(seed):
    v = random_unit_vector(np.random.default_rng(seed))
    p = pure_projector(v)
    c = oracle.concurrence_vector(v)
    assert abs(ent.concurrence_pure(v) - c) < 1e-12
    assert abs(ent.concurrence_wootters(p) - c) < 1e-10
    assert abs(ent.negativity_oracle(p) - c) < 1e-10


@given(coords())
def test_negativity_at_most_concurrence(c):
    rep = ent.general_report(density(c))
    assert rep.negativity <= rep.concurrence + 1e-10
    assert rep.concurrence <= ent.weighted_concurrence_bound(c) + 1e-10


@given(coords())
def test_single_negative_pt_eigenvalue(c):
    assert ent.pt_spectrum(density(c))[-2] >= -1e-11


def test_report_invariant():
    with pytest.raises(InvariantViolation):
        ent.EntanglementReport(True, 0.5, 0.5, "general_oracle")
    with pytest.raises(ValueError):
        ent.EntanglementReport(True, 0.0, 0.0, "nowhere")


def test_concurrence_pure_needs_normalized():
    with pytest.raises(ValueError):
        ent.concurrence_pure(np.ones(4))


@given(coords())
def test_part_concurrences_closed_forms(c):
    closed, direct = ent.part_concurrences(c), ent.part_concurrences_oracle(c)
    for name, value in closed.as_dict().items():
        other = getattr(direct, name)
        if math.isnan(other) or math.isnan(value):
            continue
        assert abs(value - other) < 1e-10, name
    assert closed.c_p == pytest.approx(math.sin(2 * c.chi), abs=1e-12)
    assert closed.c_psi1 == pytest.approx(math.sin(c.a32.theta), abs=1e-12)


@given(coords())
def test_interference_extremes_bound_e1(c):
    pc = ent.part_concurrences(c)
    w = math.cos(c.a21.theta / 2) ** 2
    lo, hi = ent.interference_extremes(pc.c_p, pc.c_psi1, w)
    assert lo - 1e-12 <= pc.c_e1 <= hi + 1e-12


def test_e1_extremes_at_predicted_phase():
    base = TwoQubitCoords.from_flat(dict(zeta=0.8, chi=0.5, theta21=1.2, theta32=0.9))
    pc = ent.part_concurrences(base)
    w = math.cos(0.6) ** 2
    lo, hi = ent.interference_extremes(pc.c_p, pc.c_psi1, w)
    at_max = ent.concurrence_pure(ek_basis(base.with_(psi21=(2 * math.pi - 0.8) / 2))[:, 1])
    at_min = ent.concurrence_pure(ek_basis(base.with_(psi21=(math.pi - 0.8) / 2))[:, 1])
    assert at_max == pytest.approx(hi, abs=1e-12)
    assert at_min == pytest.approx(lo, abs=1e-12)


@given(coords(theta21=0.0))
def test_s21_slice(c):
    pc = ent.part_concurrences(c)
    rep = ent.slice_s21_zero(c.weights, pc.c_p, pc.c_psi2)
    ref = ent.general_report(density(c))
    assert rep.ppt_satisfied == ref.ppt_satisfied
    assert abs(rep.negativity - ref.negativity) < 1e-10
    assert abs(rep.concurrence - ref.concurrence) < 1e-10


@given(coords(theta21=math.pi))
def test_c21_slice(c):
    m = list(c.mu)
    m[2] = m[3] = (m[2] + m[3]) / 2
    c = c.with_weights(m)
    pc = ent.part_concurrences(c)
    rep = ent.slice_c21_zero_mu23(c.weights, pc.c_p, pc.c_psi1)
    ref = ent.general_report(density(c))
    assert rep.ppt_satisfied == ref.ppt_satisfied
    assert abs(rep.negativity - ref.negativity) < 1e-10
    assert abs(rep.concurrence - ref.concurrence) < 1e-10


def test_c21_slice_extremal_value():
    rep = ent.slice_c21_zero_mu23((0.5, 0.5, 0.0, 0.0), 0.0, 1.0)
    assert rep.negativity == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)
    assert rep.detail["violated"] == 1


def test_c21_slice_needs_equal_tail():
    with pytest.raises(CoordinateError):
        ent.slice_c21_zero_mu23((0.5, 0.3, 0.2, 0.0), 0.5, 0.5)


def test_caption_rule():
    neg, conc = ent.table1_caption_rule(0.6, 0.1, rhs=0.49)
    assert neg == pytest.approx(math.sqrt(0.49 + 0.25) - 0.7)
    assert conc == pytest.approx(0.7 - math.sqrt(0.24))
    with pytest.raises(CoordinateError):
        ent.table1_caption_rule(0.6, 0.1, rhs=0.1)


@pytest.mark.parametrize("case", ent.TABLE1_CASES)
def test_table1_rows(case, rng):
    fixed = {"s21": {"theta21": 0.0}, "c21": {"theta21": math.pi}, "s32": {"theta32": 0.0},
             "c32": {"theta32": math.pi}, "s0": {"theta0": 0.0}, "c0": {"theta0": math.pi}}[case]
    from qmixpar.parametrize import random_coords

    for _ in range(40):
        c = random_coords(rng, **fixed)
        assert case in ent.applicable_table1_cases(c)
        row = ent.table1_limits(c, case)
        direct = ent.part_concurrences_oracle(c)
        names = {"psi": "c_p", "psi1": "c_psi1", "psi2": "c_psi2", "psi3": "c_psi3", "e1": "c_e1", "e2": "c_e2", "e3": "c_e3"}
        for cell, value in row["cells"].items():
            other = getattr(direct, names[cell])
            if not math.isnan(other):
                assert abs(value - other) < 1e-10
        if "ppt_satisfied" in row:
            ref = ent.general_report(density(c))
            assert row["ppt_satisfied"] == ref.ppt_satisfied
            assert abs(row["negativity"] - ref.negativity) < 1e-10


def test_table1_s21_row_always_decides():
    c = TwoQubitCoords.from_flat(dict(GOLDEN[1][0]))
    rep = ent.table1_report(c, "s21")
    assert rep is not None and rep.negativity == pytest.approx(GOLDEN[1][1], abs=1e-12)


@given(coords(), st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_local_invariance(c, t, p, tp, pp):
    moved = c.with_(theta=t, psi=p, theta_p=tp, psi_p=pp)
    a, b = ent.general_report(density(c)), ent.general_report(density(moved))
    assert abs(a.negativity - b.negativity) < 1e-10
    assert abs(a.concurrence - b.concurrence) < 1e-10
