"""
运行参数定义、key=value 配置文件读取与校验
"""
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from loguru import logger

from .config import Config

# 配置文件键名 -> RunConfig 字段名
CONFIG_KEYS = {
    "mode": "mode",
    "mu": "mu",
    "s": "s",
    "theta": "theta",
    "alpha": "alpha",
    "lambda": "lam",
    "lam": "lam",
    "t_max": "t_max",
    "dt": "dt",
    "tau": "tau",
    "out_dir": "out_dir",
    "emit": "emit",
}


@dataclass(frozen=True)
class RunConfig:
    """一次场景运行的参数"""
    mode: str = "grover"
    mu: Optional[int] = None
    s: Optional[int] = None
    theta: Optional[float] = None
    alpha: Optional[float] = None
    lam: float = Config.DEFAULT_LAMBDA
    t_max: Optional[float] = None
    dt: float = Config.DEFAULT_SAMPLE_DT
    tau: Union[float, str] = Config.DEFAULT_READOUT  # 数值，或 aligned / peak
    out_dir: Path = Path(Config.DEFAULT_OUT_DIR)
    emit: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def sites(self) -> int:
        """光标格点数 (grover 模式为 2^μ + 1)"""
        if self.mode == "grover":
            return 2 ** int(self.mu) + 1
        return int(self.s)

    @property
    def resolved_t_max(self) -> float:
        """未指定 t_max 时取 2s/λ"""
        if self.t_max is not None:
            return float(self.t_max)
        return 2.0 * self.sites / self.lam


class RunConfigValidator:
    """运行参数校验器"""

    MODES = ("grover", "custom")

    @staticmethod
    def validate(cfg: RunConfig) -> Tuple[bool, Optional[str]]:
        """
        验证运行参数

        Returns:
            (是否有效, 错误信息)
        """
        if cfg.mode not in RunConfigValidator.MODES:
            return False, f"mode 必须是 grover 或 custom 之一: {cfg.mode}"

        if cfg.mode == "grover":
            if cfg.mu is None:
                return False, "grover 模式需要 mu"
            if cfg.mu < 1:
                return False, f"mu 必须为正整数: {cfg.mu}"
            overrides = [name for name in ("s", "theta", "alpha") if getattr(cfg, name) is not None]
            if overrides:
                return False, f"grover 模式不允许覆盖 {', '.join(overrides)}"
        else:
            missing = [name for name in ("s", "theta", "alpha") if getattr(cfg, name) is None]
            if missing:
                return False, f"custom 模式需要 {', '.join(missing)}"
            if cfg.mu is not None:
                return False, "custom 模式不接受 mu"
            if cfg.s < 1:
                return False, f"s 必须为正整数: {cfg.s}"

        if cfg.lam <= 0:
            return False, f"lambda 必须为正: {cfg.lam}"
        if cfg.dt <= 0:
            return False, f"dt 必须为正: {cfg.dt}"
        if cfg.dt > cfg.resolved_t_max:
            return False, f"dt={cfg.dt} 不能大于 t_max={cfg.resolved_t_max}"
        if isinstance(cfg.tau, str):
            if cfg.tau not in Config.READOUT_INSTANTS:
                return False, f"tau 必须是数值或 {', '.join(Config.READOUT_INSTANTS)} 之一: {cfg.tau}"
        elif cfg.tau < 0:
            return False, f"tau 不能为负: {cfg.tau}"

        unknown = [name for name in cfg.emit if name not in Config.EMISSIONS]
        if unknown:
            return False, f"未知的输出类型: {', '.join(unknown)} (可选: {', '.join(Config.EMISSIONS)})"
        return True, None


def parse_emit(value: Any) -> Tuple[str, ...]:
    """'bloch,entropy' 或列表 -> 去重后保持顺序的元组"""
    if value is None:
        return ()
    if isinstance(value, str):
        items = [v.strip() for v in value.split(",")]
    else:
        items = [str(v).strip() for v in value]
    seen = []
    for item in items:
        if item and item not in seen:
            seen.append(item)
    return tuple(seen)


def load_config_file(path: Path) -> Dict[str, str]:
    """
    读取 key=value 格式的配置文件

    空行与 # 开头的行被忽略；键名中的 '-' 视同 '_'。
    """
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno} 不是 key=value 格式: {line}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_").lower()
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno} 未知的配置项: {key}")
            values[CONFIG_KEYS[key]] = value
    logger.debug(f"读取配置文件 {path}: {sorted(values)}")
    return values


def _convert(name: str, value: Any) -> Any:
    if value is None:
        return None
    if name in ("mu", "s"):
        number = float(value)
        if not number.is_integer():
            raise ValueError(f"{name} 必须为整数: {value}")
        return int(number)
    if name == "tau":
        keyword = str(value).strip().lower()
        if keyword in Config.READOUT_INSTANTS:
            return keyword
        return float(value)
    if name in ("theta", "alpha", "lam", "t_max", "dt"):
        return float(value)
    if name == "out_dir":
        return Path(value)
    if name == "emit":
        return parse_emit(value)
    return str(value)


def build_run_config(file_values: Optional[Dict[str, Any]] = None,
                     overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    合并配置文件与命令行参数，命令行中非 None 的值优先
    """
    merged: Dict[str, Any] = {}
    for source in (file_values or {}, overrides or {}):
        for name, value in source.items():
            if value is not None:
                merged[name] = _convert(name, value)
    return replace(RunConfig(), **merged)
