"""
全局配置与日志设置
"""
import sys
from pathlib import Path
from typing import Optional

from loguru import logger


class Config:
    """配置类 - 数值容差、默认参数与日志格式"""

    # 耦合常数与时间步长（时间单位 1/lambda）
    DEFAULT_LAMBDA = 1.0
    DEFAULT_SAMPLE_DT = 0.5
    DEFAULT_ODE_DT = 0.005
    MAX_ODE_DT_FACTOR = 0.01  # dt <= 0.01 / max(coupling)

    # 最优读出时间搜索
    TAU_GRID_STEP = 0.05
    TAU_MAX_GRID_STEP = 0.1
    TAU_REFINE_TOL = 1e-13  # brentq xtol
    TAU_TIE_TOL = 1e-9
    READOUT_INSTANTS = ("aligned", "peak")  # γ(τ)=0 时刻 / 目标概率最大值
    DEFAULT_READOUT = "aligned"

    # 数值截断
    SCHMIDT_CUTOFF = 1e-12
    UNITARY_TOL = 1e-12
    NORM_TOL = 1e-12
    BLOCH_RADIUS_TOL = 1e-12

    # 全空间积分的桌面规模上限 (dim_register * s)
    FULL_SPACE_LIMIT = 2 ** 16

    # CSV 输出
    CSV_FLOAT_FORMAT = "%.12g"
    DEFAULT_OUT_DIR = "out"
    EMISSIONS = ("bloch", "entropy", "success", "collapse", "energy", "variance")

    # validate 子命令默认参数
    VALIDATE_MU = 5
    VALIDATE_SEED = 20240607
    VALIDATE_MAX_ORACLE_SITES = 33

    # 日志配置
    LOG_LEVEL = "INFO"
    LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {message}"
    LOG_FILE_NAME = "feyncursor.log"

    @classmethod
    def get_log_file(cls, log_dir: Path) -> Path:
        """获取日志文件路径"""
        return Path(log_dir) / cls.LOG_FILE_NAME

    @classmethod
    def max_ode_dt(cls, max_coupling: float) -> float:
        """RK4 积分允许的最大步长"""
        return cls.MAX_ODE_DT_FACTOR / max_coupling


def setup_logging(log_dir: Optional[str] = None, quiet: bool = False,
                  level: Optional[str] = None) -> None:
    """
    设置日志配置

    Args:
        log_dir: 日志目录 (可选，为空则只输出到控制台)
        quiet: 静默模式，控制台只输出 WARNING 及以上
        level: 覆盖默认日志级别
    """
    console_level = "WARNING" if quiet else (level or Config.LOG_LEVEL)
    try:
        logger.remove()  # 移除默认处理器
        logger.add(
            sys.stderr,
            format=Config.LOG_FORMAT,
            level=console_level,
            colorize=True
        )
        if log_dir:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            logger.add(
                Config.get_log_file(log_path),
                format=Config.LOG_FORMAT,
                level=level or Config.LOG_LEVEL,
                rotation="10 MB",
                retention="7 days",
                encoding="utf-8"
            )
    except Exception as e:
        print(f"设置日志失败: {e}", file=sys.stderr)
