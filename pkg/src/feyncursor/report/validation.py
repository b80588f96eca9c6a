"""
不变量校验套件

每项检查返回 CheckResult（名称、最大误差、容差）。检查内部抛出的异常被记录为失败，
以便 validate 子命令列出所有未通过的项目而不是在第一个错误处中断。
"""
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from loguru import logger
from scipy.stats import unitary_group

from ..common.config import Config
from ..core.cursor_kernel import amplitudes, build_spectrum, integrate_amplitudes
from ..core.machine import (
    cursor_density,
    evolve,
    evolve_oracle_series,
    evolve_series,
    fidelity,
    hamiltonian_matvec,
    register_density,
    schmidt,
    von_neumann_entropy,
)
from ..core.models import UnitaryProgram
from ..qubit.grover import (
    bloch_components,
    bloch_vector,
    entropy_closed,
    grover_factors,
    grover_params,
    initial_register,
    optimal_tau,
    program,
    reduced_eigensystem,
    spectrum,
    step_unitary,
)
from ..qubit.measurement import (
    collapse,
    cursor_position_distributions,
    energy_distribution,
    machine_energy_basis,
    pre_measurement_state,
)
from ..qubit.models import BlochVector, GroverParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_error)) and self.max_error <= self.tolerance


@dataclass(frozen=True)
class ValidationSettings:
    mu: int = Config.VALIDATE_MU
    lam: float = Config.DEFAULT_LAMBDA
    ode_dt: float = Config.DEFAULT_ODE_DT
    seed: int = Config.VALIDATE_SEED
    n_programs: int = 5
    n_entropy_samples: int = 100


def _random_program(rng: np.random.Generator, d: int, s: int) -> Tuple[UnitaryProgram, np.ndarray]:
    steps = unitary_group.rvs(d, size=s - 1, random_state=rng).reshape(s - 1, d, d)
    r1 = rng.normal(size=d) + 1j * rng.normal(size=d)
    return UnitaryProgram(dim_register=d, steps=steps), r1 / np.linalg.norm(r1)


def check_amplitude_oracle(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    """闭式振幅 vs RK4；振幅归一化；ODE 范数漂移"""
    times = np.arange(0, 2 * p.s / cfg.lam + 1e-9, 0.5)
    closed = amplitudes(build_spectrum(p.s, cfg.lam), times)
    ode = integrate_amplitudes(p.s, cfg.lam, times, cfg.ode_dt)
    return [
        CheckResult("amplitude_ode", float(np.max(np.abs(closed - ode))), 1e-8,
                    f"s={p.s}, t∈[0,{times[-1]:g}]"),
        CheckResult("amplitude_norm", float(np.max(np.abs(np.sum(np.abs(closed) ** 2, axis=1) - 1))), 1e-12),
        CheckResult("ode_norm_drift", float(np.max(np.abs(np.linalg.norm(ode, axis=1) - 1))), 1e-9),
    ]


def check_machine_oracle(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    """乘积形式 vs 全空间积分（随机程序，d=2,3）与能量守恒"""
    rng = np.random.default_rng(cfg.seed)
    s = min(p.s, Config.VALIDATE_MAX_ORACLE_SITES)
    spec = build_spectrum(s, cfg.lam)
    t = s / (2 * cfg.lam)
    worst_fidelity, worst_energy = 0.0, 0.0
    for d in (2, 3):
        for _ in range(cfg.n_programs):
            prog, r1 = _random_program(rng, d, s)
            oracle = evolve_oracle_series(prog, r1, cfg.lam, [0.0, t / 2, t], cfg.ode_dt)
            product = evolve(prog, r1, spec, t).vector()
            worst_fidelity = max(worst_fidelity, 1 - fidelity(oracle[-1], product))
            energies = [np.vdot(v, hamiltonian_matvec(prog, cfg.lam, v)).real for v in oracle]
            worst_energy = max(worst_energy, float(np.ptp(energies)))
    return [
        CheckResult("machine_oracle", worst_fidelity, 1e-8, f"s={s}, t={t:g}, 1-fidelity"),
        CheckResult("energy_conservation", worst_energy, 1e-8),
    ]


def check_reduced_states(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    """S(ρ_r)=S(ρ_c)、Bloch 一致性、闭式熵、Schmidt 重建"""
    times = np.linspace(0, 2 * p.s / cfg.lam, cfg.n_entropy_samples, endpoint=False)
    states = evolve_series(program(p), initial_register(p), spectrum(p), times)
    closed = bloch_components(p, times)
    sym, bloch_err, ent_err, rec_err = 0.0, 0.0, 0.0, 0.0
    for m, row in zip(states, closed):
        rho_r = register_density(m)
        s_r = von_neumann_entropy(rho_r)
        sym = max(sym, abs(s_r - von_neumann_entropy(cursor_density(m))))
        numeric = bloch_vector(rho_r)
        bloch_err = max(bloch_err, float(np.max(np.abs(
            np.array([numeric.s1, numeric.s2, numeric.s3]) - row))))
        ent_err = max(ent_err, abs(entropy_closed(BlochVector(*row)) - s_r))
        rec_err = max(rec_err, float(np.linalg.norm(schmidt(m).reconstruct() - m.vector())))
    return [
        CheckResult("entropy_symmetry", sym, 1e-9, f"{times.size} 个采样时刻"),
        CheckResult("bloch_consistency", bloch_err, 1e-10),
        CheckResult("entropy_closed_form", ent_err, 1e-10),
        CheckResult("schmidt_reconstruction", rec_err, 1e-9),
    ]


def check_grover_factorization(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    worst = 0.0
    for mu in range(1, 11):
        q = grover_params(mu, cfg.lam)
        a, b = grover_factors(q)
        worst = max(worst, float(np.max(np.abs(b @ a - step_unitary(q)))))
    return [CheckResult("grover_factorization", worst, 1e-12, "μ=1..10")]


def check_energy_basis(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    basis = machine_energy_basis(p)
    prog = program(p)
    residual = max(
        float(np.linalg.norm(hamiltonian_matvec(prog, p.lam, vec) - energy * vec))
        for energy, vec in zip(basis.energies, basis.vectors.T)
    )
    v = basis.vectors
    completeness = float(np.max(np.abs(v @ v.conj().T - np.eye(v.shape[0]))))
    return [
        CheckResult("energy_eigen_residual", residual, 1e-10),
        CheckResult("energy_completeness", completeness, 1e-10),
    ]


def check_measurement(cfg: ValidationSettings, p: GroverParams) -> List[CheckResult]:
    """γ(τ)=0 读出时刻的测量概率 = (λ₁, λ₂)、混合恒等式、坍缩态归一化、测量前能量分布"""
    tau = optimal_tau(p).instant("aligned")
    eig = reduced_eigensystem(BlochVector(*bloch_components(p, [tau])[0]))
    outcomes = collapse(p, tau)
    p1, p2 = cursor_position_distributions(outcomes)
    weights = np.abs(amplitudes(spectrum(p), [tau])[0]) ** 2
    mixture = eig.lambda1 * p1 + eig.lambda2 * p2
    norms = [abs(np.sum(dist) - 1) for dist, o in zip((p1, p2), outcomes) if o.present]
    eigen_gap = max(abs(outcomes[0].probability - eig.lambda1), abs(outcomes[1].probability - eig.lambda2))

    basis = machine_energy_basis(p)
    pre_tau = energy_distribution(pre_measurement_state(p, tau), basis).probabilities
    pre_zero = energy_distribution(pre_measurement_state(p, 0.0), basis).probabilities
    expected = spectrum(p).initial_weights ** 2
    return [
        CheckResult("outcome_eigenvalues", eigen_gap, 1e-10, f"τ={tau:.6f}"),
        CheckResult("mixture_identity", float(np.max(np.abs(mixture - weights))), 1e-10, f"τ={tau:.6f}"),
        CheckResult("outcome_normalization", float(max(norms, default=0.0)), 1e-10),
        CheckResult("pre_measurement_energy", float(np.max(np.abs(pre_tau - expected))), 1e-10),
        CheckResult("energy_time_invariance", float(np.max(np.abs(pre_tau - pre_zero))), 1e-9),
    ]


CHECKS: List[Tuple[str, Callable[[ValidationSettings, GroverParams], List[CheckResult]]]] = [
    ("amplitude_ode", check_amplitude_oracle),
    ("machine_oracle", check_machine_oracle),
    ("reduced_states", check_reduced_states),
    ("grover_factorization", check_grover_factorization),
    ("energy_basis", check_energy_basis),
    ("measurement", check_measurement),
]


def run_checks(cfg: ValidationSettings) -> List[CheckResult]:
    """依次执行全部检查"""
    p = grover_params(cfg.mu, cfg.lam)
    results: List[CheckResult] = []
    for name, check in CHECKS:
        logger.info(f"执行校验: {name}")
        try:
            results.extend(check(cfg, p))
        except Exception as e:
            logger.error(f"校验 {name} 执行失败: {e}")
            results.append(CheckResult(name, float("inf"), 0.0, f"{type(e).__name__}: {e}"))
    return results
