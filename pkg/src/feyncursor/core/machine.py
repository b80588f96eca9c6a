"""
Feynman 机器：寄存器 ⊗ 光标

乘积形式演化、部分迹、Schmidt 分解与 von Neumann 熵，
以及不构造 (d·s)² 矩阵的全空间 RK4 对照积分。
"""
from typing import List, Sequence

import numpy as np
from loguru import logger
from scipy import linalg, special

from ..common.config import Config
from .cursor_kernel import amplitudes, rk4_march
from .errors import ResourceLimitError
from .models import (
    AmplitudeVector,
    CursorSpectrum,
    DensityMatrix,
    MachineState,
    SchmidtPair,
    UnitaryProgram,
)


def _as_register_vector(prog: UnitaryProgram, r1: Sequence[complex]) -> np.ndarray:
    r1 = np.asarray(r1, dtype=complex).reshape(-1)
    if r1.shape[0] != prog.dim_register:
        raise ValueError(f"初始寄存器维数 {r1.shape[0]} 与程序维数 {prog.dim_register} 不一致")
    norm = np.linalg.norm(r1)
    if abs(norm - 1) > Config.NORM_TOL:
        raise ValueError(f"初始寄存器态必须归一化 (|r1| = {norm:.15g})")
    return r1


def register_trajectory(prog: UnitaryProgram, r1: Sequence[complex]) -> np.ndarray:
    """
    计算寄存器轨迹 R(1)=r1, R(x)=U_{x-1} R(x-1)

    Returns:
        np.ndarray: 形状 (s, d)，第 x-1 行为 R(x)
    """
    r = _as_register_vector(prog, r1)
    trajectory = np.empty((prog.s, prog.dim_register), dtype=complex)
    trajectory[0] = r
    for x, u in enumerate(prog.steps, 1):
        trajectory[x] = u @ trajectory[x - 1]
    return trajectory


def _check_program_length(prog: UnitaryProgram, spec: CursorSpectrum) -> None:
    if prog.s != spec.s:
        raise ValueError(f"程序长度 {prog.s - 1} 与光标格点数 s={spec.s} 不匹配 (应为 s-1)")


def evolve(prog: UnitaryProgram, r1: Sequence[complex], spec: CursorSpectrum, t: float) -> MachineState:
    """乘积形式的机器态 |M(t)⟩"""
    return evolve_series(prog, r1, spec, [t])[0]


def evolve_series(prog: UnitaryProgram, r1: Sequence[complex], spec: CursorSpectrum,
                  times: Sequence[float]) -> List[MachineState]:
    """一组时刻上的机器态，轨迹只计算一次"""
    _check_program_length(prog, spec)
    trajectory = register_trajectory(prog, r1)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    coeffs = amplitudes(spec, times)
    return [
        MachineState(amplitudes=AmplitudeVector(t=float(t), values=c), trajectory=trajectory)
        for t, c in zip(times, coeffs)
    ]


def hamiltonian_matvec(prog: UnitaryProgram, lam: float, v: np.ndarray) -> np.ndarray:
    """
    作用哈密顿量 H = -(λ/2) Σ_x [U_x ⊗ |C(x+1)⟩⟨C(x)| + U_x† ⊗ |C(x)⟩⟨C(x+1)|]

    Args:
        prog: 幺正程序
        lam: 耦合常数
        v: 长度 d·s 的全机器向量（寄存器 ⊗ 光标顺序）
    """
    d, s = prog.dim_register, prog.s
    v = np.asarray(v, dtype=complex)
    if v.shape != (d * s,):
        raise ValueError(f"全机器向量维数应为 {d * s}，实际为 {v.shape}")
    psi = v.reshape(d, s)
    out = np.zeros_like(psi)
    if s > 1:
        out[:, 1:] += np.einsum("xij,jx->ix", prog.steps, psi[:, :-1])
        out[:, :-1] += np.einsum("xji,jx->ix", prog.steps.conj(), psi[:, 1:])
    return (-0.5 * lam) * out.reshape(-1)


def initial_machine_vector(prog: UnitaryProgram, r1: Sequence[complex]) -> np.ndarray:
    """|M(0)⟩ = |R(1)⟩ ⊗ |C(1)⟩"""
    r = _as_register_vector(prog, r1)
    psi = np.zeros((prog.dim_register, prog.s), dtype=complex)
    psi[:, 0] = r
    return psi.reshape(-1)


def evolve_oracle_series(prog: UnitaryProgram, r1: Sequence[complex], lam: float,
                         times: Sequence[float], dt: float = Config.DEFAULT_ODE_DT) -> np.ndarray:
    """
    全空间薛定谔方程的固定步长 RK4 积分（矩阵无关实现）

    Returns:
        np.ndarray: 形状 (len(times), d·s)
    """
    size = prog.dim_register * prog.s
    if size > Config.FULL_SPACE_LIMIT:
        raise ResourceLimitError(f"全空间维数 d·s = {size} 超过上限 {Config.FULL_SPACE_LIMIT}")
    if lam <= 0:
        raise ValueError(f"耦合常数必须为正: {lam}")
    if dt <= 0 or dt > Config.max_ode_dt(lam) * (1 + 1e-12):
        raise ValueError(f"ODE 步长 dt={dt} 超出允许范围 (0, {Config.max_ode_dt(lam):.6g}]")
    times = np.atleast_1d(np.asarray(times, dtype=float))

    def deriv(v: np.ndarray) -> np.ndarray:
        return -1j * hamiltonian_matvec(prog, lam, v)

    result, total_steps = rk4_march(deriv, initial_machine_vector(prog, r1), times, dt)
    drift = float(np.max(np.abs(np.linalg.norm(result, axis=1) - 1), initial=0.0))
    logger.debug(f"全空间积分完成: d={prog.dim_register}, s={prog.s}, 步数={total_steps}, 范数漂移={drift:.3e}")
    return result


def evolve_oracle(prog: UnitaryProgram, r1: Sequence[complex], lam: float, t: float,
                  dt: float = Config.DEFAULT_ODE_DT) -> np.ndarray:
    """单一时刻的全空间积分结果"""
    return evolve_oracle_series(prog, r1, lam, [t], dt)[0]


def register_density(m: MachineState) -> DensityMatrix:
    """ρ_r(t) = Σ_x |c(t,x;s)|² |R(x)⟩⟨R(x)|"""
    matrix = m.as_matrix()
    return DensityMatrix(entries=matrix @ matrix.conj().T)


def cursor_density(m: MachineState) -> DensityMatrix:
    """对寄存器求部分迹得到的 s×s 光标密度矩阵"""
    matrix = m.as_matrix()
    return DensityMatrix(entries=matrix.T @ matrix.conj())


def schmidt(m: MachineState, cutoff: float = Config.SCHMIDT_CUTOFF) -> SchmidtPair:
    """
    Schmidt 分解

    寄存器基取 ρ_r 的本征向量，光标基按
    |d_j⟩ = λ_j^{-1/2} Σ_x c(t,x;s) ⟨b_j|R(x)⟩ |C(x)⟩ 构造；权重低于 cutoff 的分支视为不存在。
    """
    weights, vectors = linalg.eigh(register_density(m).entries)
    order = np.argsort(weights)[::-1]
    weights, vectors = weights[order], vectors[:, order]
    keep = weights > cutoff
    weights, vectors = weights[keep], vectors[:, keep]
    overlaps = m.trajectory @ vectors.conj()  # ⟨b_j|R(x)⟩
    cursor_basis = m.amplitudes.values[:, None] * overlaps / np.sqrt(weights)
    logger.debug(f"Schmidt 分解: t={m.t:.6g}, 秩={weights.size}")
    return SchmidtPair(weights=weights, register_basis=vectors, cursor_basis=cursor_basis)


def von_neumann_entropy(rho: DensityMatrix, cutoff: float = Config.SCHMIDT_CUTOFF) -> float:
    """S(ρ) = -Σ λ_j ln λ_j（自然对数），只计入大于 cutoff 的本征值"""
    eig = rho.eigenvalues()
    eig = eig[eig > cutoff]
    return max(0.0, float(np.sum(special.entr(eig))))


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """纯态保真度 |⟨u|v⟩|²"""
    return float(abs(np.vdot(u, v)) ** 2)
