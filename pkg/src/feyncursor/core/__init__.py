"""
光标与机器核心计算模块
"""

from .cursor_kernel import (
    amplitude,
    amplitude_ode,
    amplitudes,
    build_spectrum,
    group_velocity,
    integrate_amplitudes,
    position_distribution,
    position_variance,
)
from .errors import BranchAbsentError, ResourceLimitError
from .models import (
    AmplitudeVector,
    CursorSpectrum,
    DensityMatrix,
    MachineState,
    SchmidtPair,
    UnitaryProgram,
)

__all__ = [
    "AmplitudeVector",
    "BranchAbsentError",
    "CursorSpectrum",
    "DensityMatrix",
    "MachineState",
    "ResourceLimitError",
    "SchmidtPair",
    "UnitaryProgram",
    "amplitude",
    "amplitude_ode",
    "amplitudes",
    "build_spectrum",
    "group_velocity",
    "integrate_amplitudes",
    "position_distribution",
    "position_variance",
]
