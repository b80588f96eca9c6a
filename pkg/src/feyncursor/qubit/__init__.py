"""
单量子比特例子：Grover 参数化与寄存器读出
"""

from .grover import (
    bloch_trajectory,
    bloch_vector,
    conjugate_cursor_states,
    entropy_closed,
    grover_factors,
    grover_params,
    initial_register,
    landauer_cost,
    optimal_tau,
    reduced_eigensystem,
    rotation_model,
    step_unitary,
    success_probability,
)
from .measurement import (
    collapse,
    cursor_position_distributions,
    energy_distribution,
    machine_energy_basis,
    mean_energy,
    mean_speed,
)
from .models import BlochVector, GroverParams, RotationModel

__all__ = [
    "BlochVector",
    "GroverParams",
    "RotationModel",
    "bloch_trajectory",
    "bloch_vector",
    "collapse",
    "conjugate_cursor_states",
    "cursor_position_distributions",
    "energy_distribution",
    "entropy_closed",
    "grover_factors",
    "grover_params",
    "initial_register",
    "landauer_cost",
    "machine_energy_basis",
    "mean_energy",
    "mean_speed",
    "optimal_tau",
    "reduced_eigensystem",
    "rotation_model",
    "step_unitary",
    "success_probability",
]
