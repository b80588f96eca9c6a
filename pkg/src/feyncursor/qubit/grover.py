"""
可解析求解的自旋 1/2 例子及其 Grover 参数化

寄存器为单量子比特，每一步绕 e₂ 轴旋转固定角度 α。
Bloch 向量始终位于 e₁-e₃ 平面内，约化密度矩阵的本征系统和熵都有闭式表达。
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import constants, optimize, special

from ..common.config import Config
from ..core.cursor_kernel import amplitude, amplitude_rates, amplitudes, build_spectrum
from ..core.models import CursorSpectrum, DensityMatrix, UnitaryProgram
from .models import (
    BlochVector,
    ConjugateCursorStates,
    GroverParams,
    ReducedEigensystem,
    RotationModel,
    TauSearch,
)

PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}
SIGMA3_UP = np.array([1, 0], dtype=complex)
SIGMA3_DOWN = np.array([0, 1], dtype=complex)


def grover_params(mu: int, lam: float = Config.DEFAULT_LAMBDA) -> GroverParams:
    """
    μ 位标记字对应的 Grover 参数

    Args:
        mu: 标记字长度 (>= 1)
        lam: 耦合常数
    """
    if isinstance(mu, bool) or int(mu) != mu or mu < 1:
        raise ValueError(f"mu 必须为正整数: {mu}")
    if lam <= 0:
        raise ValueError(f"耦合常数必须为正: {lam}")
    mu = int(mu)
    chi = math.asin(2.0 ** (-mu / 2))
    return GroverParams(theta=math.pi - 2 * chi, alpha=-4 * chi, s=2 ** mu + 1,
                        lam=float(lam), mu=mu, chi=chi)


def rotation_model(s: int, theta: float, alpha: float,
                   lam: float = Config.DEFAULT_LAMBDA) -> RotationModel:
    """不带 Grover 约束的旋转程序（custom 模式）"""
    if isinstance(s, bool) or int(s) != s or s < 1:
        raise ValueError(f"格点数 s 必须为正整数: {s}")
    if lam <= 0:
        raise ValueError(f"耦合常数必须为正: {lam}")
    return RotationModel(theta=float(theta), alpha=float(alpha), s=int(s), lam=float(lam))


def initial_register(p: RotationModel) -> np.ndarray:
    """R(1) = cos(θ/2)|σ₃=+1⟩ + sin(θ/2)|σ₃=-1⟩"""
    return np.array([math.cos(p.theta / 2), math.sin(p.theta / 2)], dtype=complex)


def step_unitary(p: RotationModel) -> np.ndarray:
    """exp(-iασ₂/2)"""
    c, s = math.cos(p.alpha / 2), math.sin(p.alpha / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def program(p: RotationModel) -> UnitaryProgram:
    return UnitaryProgram.constant(step_unitary(p), p.s)


def spectrum(p: RotationModel) -> CursorSpectrum:
    return build_spectrum(p.s, p.lam)


def grover_factors(p: RotationModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Grover 迭代的两个反射

    Returns:
        (A, B): oracle 步 A = I - 2|ω⟩⟨ω| 与估计步 B = 2|ι⟩⟨ι| - I
    """
    identity = np.eye(2, dtype=complex)
    iota = initial_register(p)
    a = identity - 2 * np.outer(SIGMA3_UP, SIGMA3_UP.conj())
    b = 2 * np.outer(iota, iota.conj()) - identity
    return a, b


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """2×2 密度矩阵的 Bloch 向量"""
    if rho.dimension != 2:
        raise ValueError(f"Bloch 向量只对 2×2 密度矩阵有定义，实际维数 {rho.dimension}")
    s1, s2, s3 = (float(np.real(np.trace(rho.entries @ PAULI[j]))) for j in (1, 2, 3))
    return BlochVector(s1, s2, s3)


def bloch_components(p: RotationModel, times: Sequence[float],
                     spec: Optional[CursorSpectrum] = None) -> np.ndarray:
    """
    s(t) = Σ_x |c(t,x;s)|² (sin φ_x, 0, cos φ_x)，φ_x = θ + (x-1)α

    Returns:
        np.ndarray: 形状 (len(times), 3)
    """
    spec = spec or spectrum(p)
    weights = np.abs(amplitudes(spec, times)) ** 2
    phases = p.site_phases()
    out = np.zeros((weights.shape[0], 3))
    out[:, 0] = weights @ np.sin(phases)
    out[:, 2] = weights @ np.cos(phases)
    return out


def bloch_rates(p: RotationModel, times: Sequence[float],
                spec: Optional[CursorSpectrum] = None) -> np.ndarray:
    """
    ds(t)/dt，由 d|c|²/dt = 2 Re(c̄ dc/dt) 逐格点求和

    Returns:
        np.ndarray: 形状 (len(times), 3)
    """
    spec = spec or spectrum(p)
    rates = 2 * np.real(np.conj(amplitudes(spec, times)) * amplitude_rates(spec, times))
    phases = p.site_phases()
    out = np.zeros((rates.shape[0], 3))
    out[:, 0] = rates @ np.sin(phases)
    out[:, 2] = rates @ np.cos(phases)
    return out


def bloch_trajectory(p: RotationModel, times: Sequence[float]) -> List[BlochVector]:
    """一组时刻上寄存器的 Bloch 向量"""
    return [BlochVector(*row) for row in bloch_components(p, times)]


def reduced_eigensystem(b: BlochVector) -> ReducedEigensystem:
    """λ₁,₂ = (1 ± r)/2，b₁ = (cos γ/2, sin γ/2)，b₂ = (-sin γ/2, cos γ/2)"""
    r = b.r
    if r > 1 + Config.BLOCH_RADIUS_TOL:
        raise ValueError(f"Bloch 向量长度超过 1: r = {r:.15g}")
    r = min(r, 1.0)
    half = b.gamma / 2
    return ReducedEigensystem(
        lambda1=(1 + r) / 2,
        lambda2=(1 - r) / 2,
        b1=np.array([math.cos(half), math.sin(half)]),
        b2=np.array([-math.sin(half), math.cos(half)]),
    )


def conjugate_cursor_states(p: RotationModel, t: float,
                            cutoff: float = Config.SCHMIDT_CUTOFF) -> ConjugateCursorStates:
    """
    与 b₁(t)、b₂(t) 共轭的光标态

    |d₁⟩ = λ₁^{-1/2} Σ_x c(t,x;s) cos((φ_x - γ)/2) |C(x)⟩，
    |d₂⟩ = λ₂^{-1/2} Σ_x c(t,x;s) sin((φ_x - γ)/2) |C(x)⟩。
    """
    spec = spectrum(p)
    bloch = BlochVector(*bloch_components(p, [t], spec)[0])
    eig = reduced_eigensystem(bloch)
    c = amplitude(spec, t).values
    half = (p.site_phases() - bloch.gamma) / 2

    states = []
    for weight, profile in ((eig.lambda1, np.cos(half)), (eig.lambda2, np.sin(half))):
        if weight <= cutoff:
            states.append(None)
            continue
        states.append(c * profile / math.sqrt(weight))
    if states[1] is None:
        logger.debug(f"t={t:.6g} 时 λ₂ 低于截断，只有一个 Schmidt 分支")
    if states[0] is None:
        logger.warning(f"t={t:.6g} 时 λ₁ 低于截断")
    return ConjugateCursorStates(d1=states[0], d2=states[1], gamma=bloch.gamma)


def entropy_closed(b: BlochVector) -> float:
    """S = -λ₁ ln λ₁ - λ₂ ln λ₂，λ₁,₂ = (1 ± r)/2"""
    r = min(b.r, 1.0)
    return float(special.entr((1 + r) / 2) + special.entr((1 - r) / 2))


def success_curve(p: RotationModel, times: Sequence[float],
                  spec: Optional[CursorSpectrum] = None) -> Tuple[np.ndarray, np.ndarray]:
    """目标态与非目标态概率 (1 ± s₃(t))/2"""
    s3 = bloch_components(p, times, spec)[:, 2]
    return (1 + s3) / 2, (1 - s3) / 2


def success_probability(p: RotationModel, t: float) -> Tuple[float, float]:
    target, undesired = success_curve(p, [t])
    return float(target[0]), float(undesired[0])


def aligned_tau(p: RotationModel, near: float, step: float = Config.TAU_GRID_STEP,
                spec: Optional[CursorSpectrum] = None) -> Optional[float]:
    """
    离 near 最近的 s₁(t)=0 时刻，即 γ(t)=0 的读出时刻

    从 near 出发以 step 向两侧逐格寻找 s₁ 变号的第一个区间，用 brentq 求根，
    取两侧中离 near 较近者。[0, s/λ] 内没有过零点时返回 None。
    """
    spec = spec or spectrum(p)
    t_end = p.s / p.lam

    def s1(t: float) -> float:
        return float(bloch_components(p, [t], spec)[0, 0])

    if s1(near) == 0.0:
        return float(near)
    roots = []
    for direction, count in ((1, math.floor((t_end - near) / step)), (-1, math.floor(near / step))):
        points = near + direction * step * np.arange(count + 1)
        values = bloch_components(p, points, spec)[:, 0]
        crossings = np.flatnonzero(values[:-1] * values[1:] <= 0)
        if crossings.size:
            j = int(crossings[0])
            a, b = sorted((float(points[j]), float(points[j + 1])))
            try:
                roots.append(optimize.brentq(s1, a, b, xtol=Config.TAU_REFINE_TOL / p.lam))
            except ValueError as e:
                logger.debug(f"区间 [{a:.6g}, {b:.6g}] 内 s₁ 求根失败: {e}")
    if not roots:
        return None
    return float(min(roots, key=lambda t: abs(t - near)))


def optimal_tau(p: RotationModel, grid_step: float = Config.TAU_GRID_STEP) -> TauSearch:
    """
    目标态概率首次达到全局最大值的时刻 τ，以及离它最近的 γ=0 时刻

    在 [0, s/λ] 上以 grid_step 网格搜索，取全局最大值（容差 1e-9 内取最早者），
    再在相邻两格内用 brentq 求 ds₃/dt 的零点。
    """
    if grid_step <= 0 or grid_step > Config.TAU_MAX_GRID_STEP / p.lam * (1 + 1e-12):
        raise ValueError(f"网格步长 {grid_step} 超出允许范围 (0, {Config.TAU_MAX_GRID_STEP / p.lam:.6g}]")
    spec = spectrum(p)
    t_end = p.s / p.lam
    n = int(math.floor(t_end / grid_step + 1e-9))
    grid = np.arange(n + 1) * grid_step
    curve, _ = success_curve(p, grid, spec)

    g = int(np.argmax(curve >= curve.max() - Config.TAU_TIE_TOL))
    tau, p_max = float(grid[g]), float(curve[g])

    def slope(t: float) -> float:
        return float(bloch_rates(p, [t], spec)[0, 2])

    lo, hi = max(0.0, grid[g] - grid_step), min(t_end, grid[g] + grid_step)
    if hi > lo and slope(lo) * slope(hi) < 0:
        root = optimize.brentq(slope, lo, hi, xtol=Config.TAU_REFINE_TOL / p.lam)
        p_root = float(success_curve(p, [root], spec)[0][0])
        if p_root >= p_max:
            tau, p_max = float(root), p_root

    # 第一个局部极大值（网格精度）
    first = g
    for j in range(1, curve.size - 1):
        if curve[j] >= curve[j - 1] and curve[j] > curve[j + 1]:
            first = j
            break
    first_is_global = abs(grid[first] - grid[g]) <= grid_step
    if not first_is_global:
        logger.warning(
            f"第一个局部极大值 t={grid[first]:.4f} (p={curve[first]:.6f}) "
            f"不是全局最大值 t={grid[g]:.4f} (p={curve[g]:.6f})"
        )
    aligned = aligned_tau(p, tau, grid_step, spec)
    p_aligned = None
    if aligned is None:
        logger.warning(f"[0, {t_end:g}] 内 s₁(t) 没有过零点，γ=0 的读出时刻不存在")
    else:
        p_aligned = float(success_curve(p, [aligned], spec)[0][0])
    logger.debug(f"最优读出时刻: τ={tau:.6f}, p_max={p_max:.10f}, γ=0 时刻={aligned}, 网格点数={grid.size}")
    return TauSearch(tau=tau, p_max=p_max, first_local_tau=float(grid[first]),
                     first_local_is_global=bool(first_is_global),
                     tau_aligned=aligned, p_aligned=p_aligned)


def landauer_cost(entropy_nats: float, n_machines: int, temperature_kelvin: float) -> float:
    """
    重置 N 台机器寄存器所需排出的热量 N k_B T S（焦耳）

    k_B 取 SI 精确值 1.380649e-23 J/K。
    """
    if entropy_nats < 0:
        raise ValueError(f"熵不能为负: {entropy_nats}")
    if isinstance(n_machines, bool) or int(n_machines) != n_machines or n_machines < 1:
        raise ValueError(f"机器数量必须为正整数: {n_machines}")
    if temperature_kelvin <= 0:
        raise ValueError(f"温度必须为正: {temperature_kelvin}")
    return float(n_machines * constants.k * temperature_kelvin * entropy_nats)
