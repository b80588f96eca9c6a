"""
CSV 数据表构建

每个函数返回一个 pandas DataFrame，列名即 CSV 表头：
  bloch.csv      t,s1,s3,r,gamma
  entropy.csv    t,S_nats
  success.csv    t,p_target,p_undesired
  collapse_q.csv x,P1,P2            (时刻 τ)
  energy.csv     k,E_k,p_pre,p1,p2  (时刻 τ)
  variance.csv   t,varQ
  summary.csv    key,value          (时刻 τ 的标量)
"""
import math
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..common.config import Config
from ..core.cursor_kernel import amplitudes, position_variance
from ..core.models import AmplitudeVector
from ..qubit.grover import (
    bloch_components,
    bloch_trajectory,
    entropy_closed,
    landauer_cost,
    program,
    reduced_eigensystem,
    spectrum,
    success_curve,
)
from ..qubit.measurement import (
    collapse,
    cursor_position_distributions,
    energy_distribution,
    machine_energy_basis,
    mean_energy,
    mean_speed,
    pre_measurement_state,
)
from ..qubit.models import BlochVector, EnergyDistribution, RotationModel, TauSearch

EMISSION_FILES = {
    "bloch": "bloch.csv",
    "entropy": "entropy.csv",
    "success": "success.csv",
    "collapse": "collapse_q.csv",
    "energy": "energy.csv",
    "variance": "variance.csv",
}
SUMMARY_FILE = "summary.csv"


def sample_times(t_max: float, dt: float) -> np.ndarray:
    """0, dt, 2dt, ..., 不超过 t_max 的等距时刻"""
    n = int(math.floor(t_max / dt + 1e-9))
    return np.arange(n + 1) * dt


def bloch_frame(model: RotationModel, times: np.ndarray) -> pd.DataFrame:
    vectors = bloch_trajectory(model, times)
    return pd.DataFrame({
        "t": times,
        "s1": [b.s1 for b in vectors],
        "s3": [b.s3 for b in vectors],
        "r": [b.r for b in vectors],
        "gamma": [b.gamma for b in vectors],
    })


def entropy_frame(model: RotationModel, times: np.ndarray) -> pd.DataFrame:
    comps = bloch_components(model, times)
    entropy = [entropy_closed(BlochVector(*row)) for row in comps]
    return pd.DataFrame({"t": times, "S_nats": entropy})


def success_frame(model: RotationModel, times: np.ndarray) -> pd.DataFrame:
    target, undesired = success_curve(model, times)
    return pd.DataFrame({"t": times, "p_target": target, "p_undesired": undesired})


def variance_frame(model: RotationModel, times: np.ndarray) -> pd.DataFrame:
    coeffs = amplitudes(spectrum(model), times)
    variance = [position_variance(AmplitudeVector(t=float(t), values=c)) for t, c in zip(times, coeffs)]
    return pd.DataFrame({"t": times, "varQ": variance})


def collapse_frame(model: RotationModel, tau: float) -> pd.DataFrame:
    p1, p2 = cursor_position_distributions(collapse(model, tau))
    return pd.DataFrame({"x": np.arange(1, model.s + 1), "P1": p1, "P2": p2})


def _outcome_distribution(outcome, basis) -> EnergyDistribution:
    if not outcome.present:
        return EnergyDistribution(energies=basis.level_energies.copy(),
                                  probabilities=np.zeros(basis.level_energies.size))
    return energy_distribution(outcome.machine_vector, basis)


def energy_frame(model: RotationModel, tau: float) -> pd.DataFrame:
    basis = machine_energy_basis(model)
    pre = energy_distribution(pre_measurement_state(model, tau), basis)
    first, second = collapse(model, tau)
    return pd.DataFrame({
        "k": np.arange(1, model.s + 1),
        "E_k": basis.level_energies,
        "p_pre": pre.probabilities,
        "p1": _outcome_distribution(first, basis).probabilities,
        "p2": _outcome_distribution(second, basis).probabilities,
    })


def summary_frame(model: RotationModel, tau: float,
                  search: Optional[TauSearch] = None) -> pd.DataFrame:
    """时刻 τ 的标量汇总：本征值、熵、Landauer 代价、测量后能量与光标速率"""
    bloch = BlochVector(*bloch_components(model, [tau])[0])
    eig = reduced_eigensystem(bloch)
    entropy = entropy_closed(bloch)
    basis = machine_energy_basis(model)
    spec = spectrum(model)
    prog = program(model)
    state = pre_measurement_state(model, tau)
    pre = energy_distribution(state, basis)
    first, second = collapse(model, tau)
    dist1, dist2 = _outcome_distribution(first, basis), _outcome_distribution(second, basis)

    rows = [
        ("tau", tau),
        ("lambda1", eig.lambda1),
        ("lambda2", eig.lambda2),
        ("gamma", bloch.gamma),
        ("p_outcome1", first.probability),
        ("p_outcome0", second.probability),
        ("entropy_nats", entropy),
        ("landauer_joule_per_machine_300K", landauer_cost(entropy, 1, 300.0)),
        ("mean_energy_pre", mean_energy(state, prog, model.lam)),
        ("mean_energy_1", mean_energy(first.machine_vector, prog, model.lam) if first.present else 0.0),
        ("mean_energy_0", mean_energy(second.machine_vector, prog, model.lam) if second.present else 0.0),
        ("mean_speed_pre", mean_speed(pre, spec)),
        ("mean_speed_1", mean_speed(dist1, spec)),
        ("mean_speed_0", mean_speed(dist2, spec)),
        ("tv_distance_1", dist1.total_variation(pre)),
        ("tv_distance_0", dist2.total_variation(pre)),
    ]
    if search is not None:
        extra = [("tau_peak", search.tau), ("p_max", search.p_max)]
        if search.tau_aligned is not None:
            extra += [("tau_aligned", search.tau_aligned), ("p_aligned", search.p_aligned)]
        extra.append(("first_local_is_global", float(search.first_local_is_global)))
        rows[1:1] = extra
    return pd.DataFrame(rows, columns=["key", "value"])


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """以 12 位有效数字、'\\n' 换行写出 CSV"""
    frame.to_csv(path, index=False, float_format=Config.CSV_FLOAT_FORMAT, lineterminator="\n")
    return path
