import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from qmixpar.parametrize import TwoQubitCoords, nu_to_mu  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

angle_theta = st.floats(0.0, math.pi, allow_nan=False)
angle_psi = st.floats(0.0, 2 * math.pi, allow_nan=False)


@st.composite
def nu_triples(draw):
    # integer compositions keep every weight either exactly 0 or >= 1/16000;
    # weights in (0, 1e-14) put sqrt(mu) below what a float matrix resolves
    raw = draw(st.lists(st.integers(0, 4000), min_size=4, max_size=4))
    total = sum(raw)
    if total == 0:
        return (1.0, 0.0, 0.0)
    return tuple(x / total for x in raw[:3])


@st.composite
def coords(draw, **fixed):
    flat = {
        "theta": draw(angle_theta), "psi": draw(angle_psi),
        "theta_p": draw(angle_theta), "psi_p": draw(angle_psi),
        "zeta": draw(angle_psi), "chi": draw(st.floats(0.0, math.pi / 4)),
        "theta21": draw(angle_theta), "psi21": draw(angle_psi),
        "theta32": draw(angle_theta), "psi32": draw(angle_psi),
        "theta0": draw(angle_theta), "psi0": draw(angle_psi),
    }
    nu = draw(nu_triples())
    flat.update(nu1=nu[0], nu2=nu[1], nu3=nu[2])
    flat.update(fixed)
    return TwoQubitCoords.from_flat(flat)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(2024))


# a fixed generic point used for frozen reference values
GENERIC = dict(
    theta=0.7, psi=1.3, theta_p=2.1, psi_p=4.0, zeta=0.9, chi=0.6,
    theta21=1.1, psi21=2.5, theta32=0.4, psi32=5.2, theta0=2.8, psi0=0.3,
    nu1=0.55, nu2=0.1, nu3=0.05,
)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
