"""
单量子比特例子的数据类
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import BranchAbsentError


@dataclass(frozen=True)
class RotationModel:
    """
    绕 e₂ 轴的等角旋转程序

    初态 R(1) = cos(θ/2)|σ₃=+1⟩ + sin(θ/2)|σ₃=-1⟩，每步 U_x = exp(-iασ₂/2)，
    光标 s 个格点，耦合常数 lam。
    """
    theta: float
    alpha: float
    s: int
    lam: float = 1.0

    def phase(self, x: np.ndarray) -> np.ndarray:
        """第 x 个格点上寄存器的 Bloch 角 θ + (x-1)α"""
        return self.theta + (np.asarray(x) - 1) * self.alpha

    def site_phases(self) -> np.ndarray:
        return self.phase(np.arange(1, self.s + 1))


@dataclass(frozen=True)
class GroverParams(RotationModel):
    """Grover 参数化：χ = arcsin(2^{-μ/2})，θ = π - 2χ，α = -4χ，s = 2^μ + 1"""
    mu: int = 1
    chi: float = 0.0


@dataclass(frozen=True)
class BlochVector:
    """Bloch 向量 (Tr ρσ₁, Tr ρσ₂, Tr ρσ₃)"""
    s1: float
    s2: float
    s3: float

    @property
    def r(self) -> float:
        return math.sqrt(self.s1 ** 2 + self.s2 ** 2 + self.s3 ** 2)

    @property
    def gamma(self) -> float:
        """极角 γ = atan2(s1, s3)，γ=0 对应目标态 +e₃；r=0 时定义为 0"""
        if self.s1 == 0 and self.s3 == 0:
            return 0.0
        return math.atan2(self.s1, self.s3)


@dataclass(frozen=True, eq=False)
class ReducedEigensystem:
    """ρ_r 的本征值 λ₁ ≥ λ₂ 与对应本征向量"""
    lambda1: float
    lambda2: float
    b1: np.ndarray
    b2: np.ndarray


@dataclass(frozen=True, eq=False)
class ConjugateCursorStates:
    """与 b₁、b₂ 共轭的光标态；权重为零的分支为 None"""
    d1: Optional[np.ndarray]
    d2: Optional[np.ndarray]
    gamma: float

    def branch(self, index: int) -> np.ndarray:
        """取第 index (1 或 2) 个光标态，分支不存在时抛出 BranchAbsentError"""
        if index not in (1, 2):
            raise ValueError(f"分支编号必须为 1 或 2: {index}")
        state = self.d1 if index == 1 else self.d2
        if state is None:
            raise BranchAbsentError(f"第 {index} 个 Schmidt 分支的权重低于截断阈值")
        return state


@dataclass(frozen=True)
class TauSearch:
    """
    最优读出时刻搜索结果

    tau 为目标概率最大值的时刻；tau_aligned 为离 tau 最近的 s₁(t)=0 时刻
    （γ=0，Bloch 向量与 +e₃ 同向），在 [0, s/λ] 内没有过零点时为 None。
    """
    tau: float
    p_max: float
    first_local_tau: float
    first_local_is_global: bool
    tau_aligned: Optional[float] = None
    p_aligned: Optional[float] = None

    def instant(self, readout: str) -> float:
        """按名称取读出时刻: 'peak' 或 'aligned'（无过零点时退回 peak）"""
        if readout == "peak":
            return self.tau
        if readout != "aligned":
            raise ValueError(f"未知的读出时刻: {readout}")
        return self.tau if self.tau_aligned is None else self.tau_aligned


@dataclass(frozen=True, eq=False)
class CollapseOutcome:
    """
    测量 (I+σ₃)/2 之后的机器态

    outcome_bit=1 对应 |σ₃=+1⟩，0 对应 |σ₃=-1⟩。
    概率低于截断阈值时 present=False，向量为零向量。
    """
    outcome_bit: int
    probability: float
    machine_vector: np.ndarray
    cursor_vector: np.ndarray
    present: bool = True


@dataclass(frozen=True, eq=False)
class EnergyBasis:
    """
    机器哈密顿量的本征基 |E_k; σ₂=η⟩

    vectors 的第 j 列对应 energies[j] 与 labels[j] (η = ±1)，
    排列为 k=1..s 依次给出 η=+1、η=-1。
    """
    energies: np.ndarray
    labels: np.ndarray
    vectors: np.ndarray
    level_energies: np.ndarray  # 长度 s，不重复的 E_k


@dataclass(frozen=True, eq=False)
class EnergyDistribution:
    """机器能量 H 的分布 p(E_k)，对二重简并求和"""
    energies: np.ndarray
    probabilities: np.ndarray

    def total_variation(self, other: "EnergyDistribution") -> float:
        return 0.5 * float(np.sum(np.abs(self.probabilities - other.probabilities)))
