"""Cascaded-unitary parametrization of two-qubit mixed states and their entanglement."""

from .entangle import (
    EntanglementReport,
    PartConcurrences,
    concurrence_pure,
    concurrence_wootters,
    general_report,
    negativity_oracle,
    part_concurrences,
)
from .linalg import herm_eigen, partial_trace, partial_transpose
from .parametrize import (
    AnglePair,
    MixingWeights,
    TwoQubitCoords,
    appendix_density,
    assemble_density,
    density,
    ensemble,
)

__version__ = "0.1.0"
