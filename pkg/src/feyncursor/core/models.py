"""
数据模型类 - 光标谱、振幅、幺正程序、机器态与约化密度矩阵

全机器向量的分量顺序为 寄存器 ⊗ 光标，即下标 r*s + (x-1)，
对应矩阵形式 (dim_register, s) 的按行展开。
"""
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import linalg

from ..common.config import Config


@dataclass(frozen=True, eq=False)
class CursorSpectrum:
    """s 格点自由光标的谱数据"""
    s: int
    lam: float
    angles: np.ndarray    # ϑ(k;s) = kπ/(s+1), k=1..s
    energies: np.ndarray  # E_k = -λ cos ϑ(k;s)
    modes: np.ndarray     # modes[k-1, x-1] = v_k(x)

    @property
    def initial_weights(self) -> np.ndarray:
        """v_k(1)，初态 |C(1)⟩ 在各本征模上的分量"""
        return self.modes[:, 0]


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """时刻 t 的光标振幅 c(t,x;s)"""
    t: float
    values: np.ndarray

    @property
    def s(self) -> int:
        return int(self.values.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class UnitaryProgram:
    """
    幺正程序 U_1..U_{s-1}

    steps 的形状为 (s-1, d, d)。s=1 时允许空程序，此时必须显式给出 dim_register。
    """
    dim_register: int
    steps: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim_register < 1:
            raise ValueError(f"寄存器维数必须为正整数: {self.dim_register}")
        steps = np.asarray(self.steps, dtype=complex)
        if steps.size == 0:
            steps = np.zeros((0, self.dim_register, self.dim_register), dtype=complex)
        d = self.dim_register
        if steps.ndim != 3 or steps.shape[1:] != (d, d):
            raise ValueError(f"程序步骤形状应为 (s-1, {d}, {d})，实际为 {steps.shape}")
        identity = np.eye(d)
        for x, u in enumerate(steps, 1):
            err = np.max(np.abs(u.conj().T @ u - identity))
            if err >= Config.UNITARY_TOL:
                raise ValueError(f"U_{x} 不是幺正矩阵 (max|U†U-I| = {err:.3e})")
        object.__setattr__(self, "steps", steps)

    @property
    def s(self) -> int:
        """光标格点数"""
        return int(self.steps.shape[0]) + 1

    @classmethod
    def from_steps(cls, steps: Sequence[np.ndarray], dim_register: Optional[int] = None) -> "UnitaryProgram":
        if dim_register is None:
            if len(steps) == 0:
                raise ValueError("空程序需要显式给出 dim_register")
            dim_register = int(np.asarray(steps[0]).shape[0])
        return cls(dim_register=dim_register, steps=np.array(list(steps), dtype=complex))

    @classmethod
    def identity(cls, dim_register: int, s: int) -> "UnitaryProgram":
        if s < 1:
            raise ValueError(f"格点数必须为正整数: {s}")
        steps = np.broadcast_to(np.eye(dim_register, dtype=complex), (s - 1, dim_register, dim_register))
        return cls(dim_register=dim_register, steps=np.array(steps))

    @classmethod
    def constant(cls, unitary: np.ndarray, s: int) -> "UnitaryProgram":
        """每一步都是同一个幺正矩阵"""
        if s < 1:
            raise ValueError(f"格点数必须为正整数: {s}")
        u = np.asarray(unitary, dtype=complex)
        steps = np.broadcast_to(u, (s - 1,) + u.shape)
        return cls(dim_register=u.shape[0], steps=np.array(steps))

    def padded(self, extra: int) -> "UnitaryProgram":
        """在程序末尾追加 extra 个恒等步骤（光标的非活动区域）"""
        if extra < 0:
            raise ValueError(f"填充步数不能为负: {extra}")
        pad = np.broadcast_to(np.eye(self.dim_register, dtype=complex),
                              (extra, self.dim_register, self.dim_register))
        return UnitaryProgram(self.dim_register, np.concatenate([self.steps, pad]))

    def is_constant(self, tol: float = 1e-12) -> bool:
        if self.steps.shape[0] == 0:
            return True
        return bool(np.max(np.abs(self.steps - self.steps[0])) < tol)


@dataclass(frozen=True, eq=False)
class MachineState:
    """乘积形式的机器态 Σ_x c(t,x;s) |R(x)⟩ ⊗ |C(x)⟩"""
    amplitudes: AmplitudeVector
    trajectory: np.ndarray  # 形状 (s, d)，第 x-1 行为 R(x)

    @property
    def t(self) -> float:
        return self.amplitudes.t

    @property
    def s(self) -> int:
        return int(self.trajectory.shape[0])

    @property
    def dim_register(self) -> int:
        return int(self.trajectory.shape[1])

    def as_matrix(self) -> np.ndarray:
        """(d, s) 矩阵形式，M[r, x] = c_x · R(x)_r"""
        return (self.trajectory * self.amplitudes.values[:, None]).T

    def vector(self) -> np.ndarray:
        return self.as_matrix().reshape(-1)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """约化密度矩阵（寄存器或光标）"""
    entries: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def eigenvalues(self) -> np.ndarray:
        """升序本征值"""
        return linalg.eigvalsh(self.entries)

    def check(self, tol: float = 1e-12) -> None:
        """验证厄米、单位迹、半正定，不满足时抛出 ValueError"""
        rho = self.entries
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > tol:
            raise ValueError(f"密度矩阵不是厄米的 (偏差 {herm:.3e})")
        trace = np.trace(rho)
        if abs(trace - 1) > tol:
            raise ValueError(f"密度矩阵迹不为 1 (trace = {trace})")
        lowest = self.eigenvalues()[0]
        if lowest < -tol:
            raise ValueError(f"密度矩阵存在负本征值 {lowest:.3e}")


@dataclass(frozen=True, eq=False)
class SchmidtPair:
    """Schmidt 分解 Σ_j √λ_j |b_j⟩ ⊗ |d_j⟩，权重降序"""
    weights: np.ndarray
    register_basis: np.ndarray  # (d, n) 按列
    cursor_basis: np.ndarray    # (s, n) 按列

    @property
    def rank(self) -> int:
        return int(self.weights.shape[0])

    def reconstruct(self) -> np.ndarray:
        """重建全机器向量"""
        matrix = np.einsum("j,rj,xj->rx", np.sqrt(self.weights), self.register_basis, self.cursor_basis)
        return matrix.reshape(-1)

    def branches(self) -> Iterable[tuple]:
        for j in range(self.rank):
            yield self.weights[j], self.register_basis[:, j], self.cursor_basis[:, j]
