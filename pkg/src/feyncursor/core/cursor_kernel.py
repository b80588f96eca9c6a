"""
自由光标的谱计算

s 格点线性链上的连续时间量子行走：本征模、振幅闭式解，
以及作为对照的离散薛定谔方程 RK4 积分器。
"""
import math
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..common.config import Config
from .models import AmplitudeVector, CursorSpectrum

Coupling = Union[float, Sequence[float], np.ndarray]


def _check_site_count(s: int) -> int:
    if isinstance(s, bool) or int(s) != s or s < 1:
        raise ValueError(f"格点数 s 必须为正整数: {s}")
    return int(s)


def bond_couplings(s: int, coupling: Coupling) -> np.ndarray:
    """
    将耦合参数规范为 s-1 个键耦合，键 x 连接格点 x 与 x+1

    Args:
        s: 格点数
        coupling: 标量；长度 s-1 的键耦合；或长度 s 的格点耦合（相邻平均到键上）

    Returns:
        np.ndarray: 长度 s-1 的正实数数组
    """
    s = _check_site_count(s)
    values = np.atleast_1d(np.asarray(coupling, dtype=float))
    if values.size == 1:
        bonds = np.full(s - 1, float(values[0]))
        if values[0] <= 0:
            raise ValueError(f"耦合常数必须为正: {values[0]}")
    elif values.size == s - 1:
        bonds = values.copy()
    elif values.size == s:
        bonds = 0.5 * (values[:-1] + values[1:])
    else:
        raise ValueError(f"耦合数组长度应为 1、{s - 1} 或 {s}，实际为 {values.size}")
    if np.any(values <= 0):
        raise ValueError("耦合常数必须全部为正")
    return bonds


def build_spectrum(s: int, lam: Coupling = Config.DEFAULT_LAMBDA) -> CursorSpectrum:
    """
    构建 s 格点光标的本征角、能量与本征模

    Args:
        s: 格点数 (>= 1)
        lam: 耦合常数；若给出数组则必须为常数，非均匀耦合只能走 ODE 路径

    Returns:
        CursorSpectrum
    """
    s = _check_site_count(s)
    values = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(values <= 0):
        raise ValueError(f"耦合常数必须为正: {lam}")
    if np.ptp(values) > 0:
        raise ValueError("闭式解只支持常数耦合，位置相关耦合请使用 amplitude_ode")
    lam = float(values[0])

    k = np.arange(1, s + 1)
    angles = k * np.pi / (s + 1)
    energies = -lam * np.cos(angles)
    modes = math.sqrt(2.0 / (s + 1)) * np.sin(np.outer(angles, k))
    return CursorSpectrum(s=s, lam=lam, angles=angles, energies=energies, modes=modes)


def amplitudes(spec: CursorSpectrum, times: Sequence[float]) -> np.ndarray:
    """
    批量计算闭式振幅 c(t,x;s) = Σ_k e^{-iE_k t} v_k(1) v_k(x)

    Returns:
        np.ndarray: 形状 (len(times), s) 的复数组
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    weights = spec.initial_weights[:, None] * spec.modes
    phases = np.exp(-1j * np.outer(times, spec.energies))
    return phases @ weights


def amplitude_rates(spec: CursorSpectrum, times: Sequence[float]) -> np.ndarray:
    """dc(t,x;s)/dt = Σ_k (-iE_k) e^{-iE_k t} v_k(1) v_k(x)，形状与 amplitudes 相同"""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    weights = (spec.initial_weights * spec.energies)[:, None] * spec.modes
    phases = np.exp(-1j * np.outer(times, spec.energies))
    return -1j * (phases @ weights)


def amplitude(spec: CursorSpectrum, t: float) -> AmplitudeVector:
    """单一时刻的闭式振幅"""
    return AmplitudeVector(t=float(t), values=amplitudes(spec, [t])[0])


def rk4_march(deriv: Callable[[np.ndarray], np.ndarray], v0: np.ndarray,
              times: np.ndarray, dt: float) -> Tuple[np.ndarray, int]:
    """
    从 t=0 出发的固定步长 RK4 推进

    非负时刻按升序向前积分，负时刻按降序向后积分（步长取负）；
    每段区间等分为不超过 |dt| 的步。

    Returns:
        (结果, 总步数)：结果形状 (len(times), len(v0))，行顺序与输入时刻一致
    """
    result = np.empty((times.size, v0.size), dtype=complex)
    total_steps = 0
    for indices in (np.flatnonzero(times >= 0), np.flatnonzero(times < 0)):
        order = indices[np.argsort(np.abs(times[indices]), kind="stable")]
        v, current = v0.copy(), 0.0
        for idx in order:
            span = times[idx] - current
            n = int(math.ceil(abs(span) / dt - 1e-9)) if span != 0 else 0
            if n:
                h = span / n
                for _ in range(n):
                    k1 = deriv(v)
                    k2 = deriv(v + 0.5 * h * k1)
                    k3 = deriv(v + 0.5 * h * k2)
                    k4 = deriv(v + h * k3)
                    v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                total_steps += n
                current = times[idx]
            result[idx] = v
    return result, total_steps


def _hop(c: np.ndarray, bonds: np.ndarray) -> np.ndarray:
    """H c，其中 (Hc)(x) = -(1/2)(J_{x-1} c(x-1) + J_x c(x+1))"""
    out = np.zeros_like(c)
    out[1:] += bonds * c[:-1]
    out[:-1] += bonds * c[1:]
    return -0.5 * out


def integrate_amplitudes(s: int, coupling: Coupling, times: Sequence[float],
                         dt: float = Config.DEFAULT_ODE_DT) -> np.ndarray:
    """
    以固定步长四阶 Runge-Kutta 积分 i dc/dt = H c，初值 c(0,x) = δ_{x,1}

    一次积分按时间顺序经过所有采样时刻，负时刻向后积分。

    Args:
        s: 格点数
        coupling: 见 bond_couplings
        times: 采样时刻
        dt: 最大积分步长，须满足 dt <= 0.01 / max(coupling)

    Returns:
        np.ndarray: 形状 (len(times), s)，行顺序与输入时刻一致
    """
    s = _check_site_count(s)
    bonds = bond_couplings(s, coupling)
    max_coupling = float(np.max(np.atleast_1d(coupling)))
    if dt <= 0 or dt > Config.max_ode_dt(max_coupling) * (1 + 1e-12):
        raise ValueError(
            f"ODE 步长 dt={dt} 超出允许范围 (0, {Config.max_ode_dt(max_coupling):.6g}]"
        )
    times = np.atleast_1d(np.asarray(times, dtype=float))
    c0 = np.zeros(s, dtype=complex)
    c0[0] = 1.0

    def deriv(v: np.ndarray) -> np.ndarray:
        return -1j * _hop(v, bonds)

    result, total_steps = rk4_march(deriv, c0, times, dt)
    drift = float(np.max(np.abs(np.linalg.norm(result, axis=1) - 1), initial=0.0))
    logger.debug(f"RK4 积分完成: s={s}, 步数={total_steps}, 范数漂移={drift:.3e}")
    return result


def amplitude_ode(s: int, coupling: Coupling, t: float,
                  dt: float = Config.DEFAULT_ODE_DT) -> AmplitudeVector:
    """单一时刻的 ODE 振幅"""
    return AmplitudeVector(t=float(t), values=integrate_amplitudes(s, coupling, [t], dt)[0])


def position_distribution(a: AmplitudeVector) -> np.ndarray:
    """光标位置 Q 的分布 |c(t,x;s)|²"""
    return np.abs(a.values) ** 2


def position_variance(a: AmplitudeVector) -> float:
    """光标位置 Q 的方差"""
    p = position_distribution(a)
    x = np.arange(1, a.s + 1)
    mean = float(np.dot(p, x))
    return float(np.dot(p, (x - mean) ** 2))


def group_velocity(spec: CursorSpectrum) -> np.ndarray:
    """色散关系 E(p) = -λ cos p 的斜率 dE/dp = λ sin ϑ_k"""
    return spec.lam * np.sin(spec.angles)
