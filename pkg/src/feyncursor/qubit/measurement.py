"""
读取寄存器：投影测量后的坍缩态、光标位置分布与机器能量分布
"""
import math
from typing import Optional, Tuple, Union

import numpy as np
from loguru import logger

from ..common.config import Config
from ..core.cursor_kernel import build_spectrum, group_velocity
from ..core.machine import evolve, hamiltonian_matvec
from ..core.models import CursorSpectrum, UnitaryProgram
from .grover import SIGMA3_DOWN, SIGMA3_UP, initial_register, program, spectrum
from .models import CollapseOutcome, EnergyBasis, EnergyDistribution, RotationModel

SIGMA2_EIGENSTATES = {
    +1: np.array([1, 1j], dtype=complex) / math.sqrt(2),
    -1: np.array([1, -1j], dtype=complex) / math.sqrt(2),
}


def pre_measurement_state(p: RotationModel, t: float) -> np.ndarray:
    """测量前的全机器向量 |M(t)⟩"""
    return evolve(program(p), initial_register(p), spectrum(p), t).vector()


def collapse(p: RotationModel, tau: float,
             cutoff: float = Config.SCHMIDT_CUTOFF) -> Tuple[CollapseOutcome, CollapseOutcome]:
    """
    在时刻 tau 测量投影算子 (I+σ₃)/2 ⊗ I_cursor

    Returns:
        (结果 1, 结果 0)；结果 1 的光标部分为 c(τ,x;s) cos(φ_x/2) 归一化，
        结果 0 为 c(τ,x;s) sin(φ_x/2) 归一化。概率为 (1 ± s₃(τ))/2，
        在 γ(τ)=0 的时刻等于 ρ_r 的本征值 (λ₁, λ₂)。
    """
    m = evolve(program(p), initial_register(p), spectrum(p), tau)
    matrix = m.as_matrix()
    outcomes = []
    for bit, row, register in ((1, matrix[0], SIGMA3_UP), (0, matrix[1], SIGMA3_DOWN)):
        prob = float(np.vdot(row, row).real)
        if prob < cutoff:
            logger.warning(f"测量结果 {bit} 的概率 {prob:.3e} 低于截断，视为不存在的分支")
            zeros = np.zeros_like(row)
            outcomes.append(CollapseOutcome(outcome_bit=bit, probability=prob,
                                            machine_vector=np.kron(register, zeros),
                                            cursor_vector=zeros, present=False))
            continue
        cursor = row / math.sqrt(prob)
        outcomes.append(CollapseOutcome(outcome_bit=bit, probability=prob,
                                        machine_vector=np.kron(register, cursor),
                                        cursor_vector=cursor))
    return outcomes[0], outcomes[1]


def cursor_position_distributions(
        outcomes: Tuple[CollapseOutcome, CollapseOutcome]) -> Tuple[np.ndarray, np.ndarray]:
    """两个坍缩态中光标位置 Q 的分布 P₁(x,τ)、P₂(x,τ)；不存在的分支返回全零"""
    first, second = outcomes
    return np.abs(first.cursor_vector) ** 2, np.abs(second.cursor_vector) ** 2


def _rotation_angle(prog: UnitaryProgram) -> float:
    """从常数 σ₂ 旋转程序中读出 α，不是该形式时抛出 ValueError"""
    if prog.dim_register != 2:
        raise ValueError(f"能量本征基只对单量子比特程序有定义，实际寄存器维数 {prog.dim_register}")
    if prog.steps.shape[0] == 0:
        return 0.0
    if not prog.is_constant():
        raise ValueError("能量本征基要求每一步是同一个旋转")
    u = prog.steps[0]
    alpha = 2 * math.atan2(u[1, 0].real, u[0, 0].real)
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    if np.max(np.abs(u - np.array([[c, -s], [s, c]]))) > Config.UNITARY_TOL:
        raise ValueError("程序步骤不是绕 e₂ 轴的旋转 exp(-iασ₂/2)")
    return alpha


def machine_energy_basis(model: Union[RotationModel, UnitaryProgram],
                         lam: Optional[float] = None) -> EnergyBasis:
    """
    机器哈密顿量的 2s 个正交归一本征向量

    |E_k; σ₂=±1⟩ = |σ₂=±1⟩ ⊗ Σ_x v_k(x) exp(∓iα(x-1)/2) |C(x)⟩，本征值 E_k = -λ cos ϑ(k;s)。

    Args:
        model: 旋转模型，或常数 σ₂ 旋转的幺正程序（此时必须给出 lam）
        lam: 耦合常数
    """
    if isinstance(model, UnitaryProgram):
        if lam is None:
            raise ValueError("以幺正程序构造能量本征基时必须给出 lam")
        alpha, s = _rotation_angle(model), model.s
    else:
        alpha, s, lam = model.alpha, model.s, model.lam
    spec = build_spectrum(s, lam)
    x = np.arange(1, s + 1)

    columns, energies, labels = [], [], []
    for k in range(s):
        for eta in (+1, -1):
            cursor = spec.modes[k] * np.exp(-1j * eta * alpha * (x - 1) / 2)
            columns.append(np.kron(SIGMA2_EIGENSTATES[eta], cursor))
            energies.append(spec.energies[k])
            labels.append(eta)
    return EnergyBasis(energies=np.array(energies), labels=np.array(labels),
                       vectors=np.array(columns).T, level_energies=spec.energies.copy())


def energy_distribution(state: np.ndarray, basis: EnergyBasis) -> EnergyDistribution:
    """p(E_k) = Σ_{η=±1} |⟨E_k; σ₂=η | state⟩|²"""
    state = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(state)
    if abs(norm - 1) > 1e-10:
        raise ValueError(f"机器态必须归一化 (|state| = {norm:.15g})")
    weights = np.abs(basis.vectors.conj().T @ state) ** 2
    probabilities = weights.reshape(-1, 2).sum(axis=1)
    return EnergyDistribution(energies=basis.level_energies.copy(), probabilities=probabilities)


def mean_energy(state: np.ndarray, prog: UnitaryProgram, lam: float) -> float:
    """⟨state|H|state⟩"""
    value = np.vdot(state, hamiltonian_matvec(prog, lam, state))
    if abs(value.imag) > 1e-10:
        logger.warning(f"能量期望值虚部异常: {value.imag:.3e}")
    return float(value.real)


def mean_speed(distribution: EnergyDistribution, spec: CursorSpectrum) -> float:
    """光标平均速率 Σ_k p(E_k) · λ sin ϑ_k"""
    return float(np.dot(distribution.probabilities, group_velocity(spec)))
