"""
FeynCursor 运行 API
统一对外接口：场景运行 (grover / custom) 与不变量校验
"""
import traceback
from pathlib import Path
from typing import List, Optional

from loguru import logger

from ..common.config import Config
from ..common.run_config import RunConfig, RunConfigValidator
from ..qubit.grover import grover_params, optimal_tau, rotation_model
from ..qubit.models import RotationModel, TauSearch
from .emitters import (
    EMISSION_FILES,
    SUMMARY_FILE,
    bloch_frame,
    collapse_frame,
    energy_frame,
    entropy_frame,
    sample_times,
    success_frame,
    summary_frame,
    variance_frame,
    write_csv,
)
from .validation import CheckResult, ValidationSettings, run_checks

# 随时间采样的输出
TIME_SERIES_BUILDERS = {
    "bloch": bloch_frame,
    "entropy": entropy_frame,
    "success": success_frame,
    "variance": variance_frame,
}
# 在读出时刻 τ 计算的输出
TAU_BUILDERS = {
    "collapse": collapse_frame,
    "energy": energy_frame,
}


def build_model(cfg: RunConfig) -> RotationModel:
    """根据运行参数构造旋转模型"""
    if cfg.mode == "grover":
        return grover_params(cfg.mu, cfg.lam)
    return rotation_model(cfg.s, cfg.theta, cfg.alpha, cfg.lam)


def run_scenario(cfg: RunConfig, quiet: bool = False) -> bool:
    """
    运行一个场景并写出请求的 CSV 文件

    Args:
        cfg: 运行参数；emit 为空时写出全部输出类型
        quiet: 是否静默模式

    Returns:
        bool: 全部文件写出成功返回True，失败返回False
    """
    try:
        ok, msg = RunConfigValidator.validate(cfg)
        if not ok:
            logger.error(f"运行参数无效: {msg}")
            return False

        model = build_model(cfg)
        emit = cfg.emit or Config.EMISSIONS
        out_dir = Path(cfg.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

        if not quiet:
            print(f"  模式: {cfg.mode}")
            print(f"  光标格点数 s: {model.s}")
            print(f"  θ = {model.theta:.12g}, α = {model.alpha:.12g}, λ = {model.lam:.12g}")
            print(f"  输出目录: {out_dir}")

        written: List[Path] = []
        times = sample_times(cfg.resolved_t_max, cfg.dt)
        for name in emit:
            if name in TIME_SERIES_BUILDERS:
                frame = TIME_SERIES_BUILDERS[name](model, times)
                written.append(write_csv(frame, out_dir / EMISSION_FILES[name]))
                logger.info(f"写出 {EMISSION_FILES[name]}: {len(frame)} 行")

        tau_outputs = [name for name in emit if name in TAU_BUILDERS]
        if tau_outputs:
            search: Optional[TauSearch] = None
            if isinstance(cfg.tau, str):
                search = optimal_tau(model)
                tau = search.instant(cfg.tau)
                if cfg.tau == "aligned" and search.tau_aligned is None:
                    logger.warning(f"γ=0 的读出时刻不存在，改用目标概率最大值时刻 τ={search.tau:.6f}")
            else:
                tau = float(cfg.tau)
            if not quiet:
                print(f"  读出时刻 τ = {tau:.12g} ({cfg.tau if isinstance(cfg.tau, str) else '指定'})")
            for name in tau_outputs:
                frame = TAU_BUILDERS[name](model, tau)
                written.append(write_csv(frame, out_dir / EMISSION_FILES[name]))
                logger.info(f"写出 {EMISSION_FILES[name]}: {len(frame)} 行")
            written.append(write_csv(summary_frame(model, tau, search), out_dir / SUMMARY_FILE))

        if not quiet:
            for path in written:
                print(f"  ✅ {path}")
        return True

    except Exception as e:
        logger.error(f"场景运行失败: {e}")
        logger.error(traceback.format_exc())
        return False


def format_check(result: CheckResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    line = f"{status}  {result.name:<24} max_error={result.max_error:.3e}  tol={result.tolerance:.1e}"
    if result.detail:
        line += f"  ({result.detail})"
    return line


def run_validation(settings: ValidationSettings, quiet: bool = False) -> bool:
    """
    运行全部不变量校验并打印每项最大误差

    Returns:
        bool: 所有检查都在容差内返回True
    """
    try:
        results = run_checks(settings)
        failures = [r for r in results if not r.passed]
        for result in results:
            if not quiet or not result.passed:
                print(format_check(result))
        if failures:
            print(f"❌ {len(failures)} 项校验未通过: {', '.join(r.name for r in failures)}")
            return False
        if not quiet:
            print(f"✅ 全部 {len(results)} 项校验通过 (μ={settings.mu}, λ={settings.lam:g}, dt={settings.ode_dt:g})")
        return True

    except Exception as e:
        logger.error(f"校验执行失败: {e}")
        logger.error(traceback.format_exc())
        return False


__all__ = ["build_model", "run_scenario", "run_validation"]
