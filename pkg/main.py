#!/usr/bin/env python3
"""
FeynCursor 主入口脚本
使用方法:
  python main.py grover --mu 7           # Grover 参数化的单量子比特例子
  python main.py custom --s 2 ...        # 自定义旋转程序
  python main.py validate                # 运行不变量校验
  python main.py --help                  # 查看帮助
"""
import sys
import argparse
from pathlib import Path
from typing import Any, Dict

# 添加src目录到Python路径
sys.path.insert(0, str(Path(__file__).parent / "src"))


def validate_file_exists(path_str: str, param_name: str) -> Path:
    """验证文件是否存在并返回Path对象"""
    path = Path(path_str)
    if not path.is_file():
        raise ValueError(f"{param_name} 文件不存在: {path_str}")
    return path


def collect_overrides(args, mode: str) -> Dict[str, Any]:
    """命令行参数 -> RunConfig 字段（未给出的为 None，不覆盖配置文件）"""
    overrides = {
        "mode": mode,
        "lam": args.lam,
        "t_max": args.t_max,
        "dt": args.dt,
        "tau": args.tau,
        "out_dir": args.out_dir,
        "emit": args.emit,
    }
    if mode == "grover":
        overrides["mu"] = args.mu
    else:
        overrides.update({"s": args.s, "theta": args.theta, "alpha": args.alpha})
    return overrides


def handle_run_command(args, mode: str) -> int:
    """处理grover/custom命令"""
    try:
        from feyncursor.common.config import setup_logging
        from feyncursor.common.run_config import (
            RunConfigValidator,
            build_run_config,
            load_config_file,
        )
        from feyncursor.report.api import run_scenario

        setup_logging(log_dir=args.log_dir, quiet=args.quiet)

        file_values = {}
        if args.config:
            config_path = validate_file_exists(args.config, "--config")
            file_values = load_config_file(config_path)

        cfg = build_run_config(file_values, collect_overrides(args, mode))
        ok, msg = RunConfigValidator.validate(cfg)
        if not ok:
            print(f"❌ 参数验证失败: {msg}")
            return 1

        if not args.quiet:
            print(f"开始运行 {mode} 场景...")

        if run_scenario(cfg, quiet=args.quiet):
            if not args.quiet:
                print(f"✅ {mode} 场景运行成功")
            return 0
        else:
            print(f"❌ {mode} 场景运行失败，请检查日志")
            return 1

    except ValueError as e:
        print(f"❌ 参数验证失败: {e}")
        return 1
    except ImportError as e:
        print(f"❌ 导入模块失败: {e}")
        print("请确保已安装 requirements.txt 中的依赖")
        return 1
    except Exception as e:
        print(f"❌ {mode} 命令执行失败: {e}")
        return 1


def handle_grover_command(args) -> int:
    """处理grover命令"""
    return handle_run_command(args, "grover")


def handle_custom_command(args) -> int:
    """处理custom命令"""
    return handle_run_command(args, "custom")


def handle_validate_command(args) -> int:
    """处理validate命令"""
    try:
        from feyncursor.common.config import Config, setup_logging
        from feyncursor.report.api import run_validation
        from feyncursor.report.validation import ValidationSettings

        setup_logging(log_dir=args.log_dir, quiet=args.quiet)

        if args.mu < 1:
            print(f"❌ 错误：--mu 必须为正整数: {args.mu}")
            return 1
        if args.lam <= 0 or args.dt <= 0:
            print("❌ 错误：--lambda 与 --dt 必须为正")
            return 1

        settings = ValidationSettings(
            mu=args.mu,
            lam=args.lam,
            ode_dt=args.dt,
            seed=args.seed if args.seed is not None else Config.VALIDATE_SEED,
        )
        if not args.quiet:
            print(f"开始校验 (μ={settings.mu}, λ={settings.lam:g}, ODE dt={settings.ode_dt:g})...")

        return 0 if run_validation(settings, quiet=args.quiet) else 1

    except ImportError as e:
        print(f"❌ 导入模块失败: {e}")
        print("请确保已安装 requirements.txt 中的依赖")
        return 1
    except Exception as e:
        print(f"❌ validate命令执行失败: {e}")
        return 1


def add_run_arguments(sub: argparse.ArgumentParser) -> None:
    """grover 与 custom 共用的参数"""
    sub.add_argument('--lambda', dest='lam', type=float, help='耦合常数 λ (默认 1)')
    sub.add_argument('--t-max', dest='t_max', type=float, help='采样时间上限 (默认 2s/λ)')
    sub.add_argument('--dt', type=float, help='CSV 采样步长 (默认 0.5)')
    sub.add_argument('--tau', type=str,
                     help='读出时刻: aligned (γ=0, 默认)、peak (目标概率最大值) 或具体数值')
    sub.add_argument('--out-dir', dest='out_dir', type=str, help='CSV 输出目录 (默认 out)')
    sub.add_argument('--emit', type=str,
                     help='逗号分隔的输出类型: bloch,entropy,success,collapse,energy,variance (默认全部)')
    sub.add_argument('--config', type=str, help='key=value 格式的配置文件')
    sub.add_argument('--log-dir', dest='log_dir', type=str, help='日志目录(可选)')
    sub.add_argument('--quiet', action='store_true', help='静默模式')


def main(argv=None):
    from feyncursor.common.config import Config

    parser = argparse.ArgumentParser(
        description='FeynCursor - 量子力学计算机的光标时钟模拟工具',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
子命令:
  grover    Grover 参数化的单量子比特例子 (s = 2^μ + 1)
  custom    自定义旋转程序 (s, θ, α)
  validate  运行全部不变量校验

示例:
  python main.py grover --mu 7 --t-max 258 --dt 0.5 --emit entropy

  python main.py custom --s 2 --theta 0 --alpha 3.14159265 --emit success

  python main.py grover --config run.conf --out-dir results

  python main.py validate --mu 5
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    # grover子命令
    grover_parser = subparsers.add_parser('grover', help='Grover 参数化场景')
    grover_parser.add_argument('--mu', type=int, help='标记字长度 μ')
    add_run_arguments(grover_parser)

    # custom子命令
    custom_parser = subparsers.add_parser('custom', help='自定义旋转程序场景')
    custom_parser.add_argument('--s', type=int, help='光标格点数')
    custom_parser.add_argument('--theta', type=float, help='初态角 θ')
    custom_parser.add_argument('--alpha', type=float, help='每步旋转角 α')
    add_run_arguments(custom_parser)

    # validate子命令
    validate_parser = subparsers.add_parser('validate', help='运行不变量校验')
    validate_parser.add_argument('--mu', type=int, default=Config.VALIDATE_MU,
                                 help=f'标记字长度 μ (默认 {Config.VALIDATE_MU})')
    validate_parser.add_argument('--lambda', dest='lam', type=float, default=Config.DEFAULT_LAMBDA,
                                 help='耦合常数 λ (默认 1)')
    validate_parser.add_argument('--dt', type=float, default=Config.DEFAULT_ODE_DT,
                                 help=f'RK4 积分步长 (默认 {Config.DEFAULT_ODE_DT})')
    validate_parser.add_argument('--seed', type=int, help='随机幺正程序的种子')
    validate_parser.add_argument('--log-dir', dest='log_dir', type=str, help='日志目录(可选)')
    validate_parser.add_argument('--quiet', action='store_true', help='静默模式')

    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    try:
        if args.command == 'grover':
            return handle_grover_command(args)
        elif args.command == 'custom':
            return handle_custom_command(args)
        elif args.command == 'validate':
            return handle_validate_command(args)
    except KeyboardInterrupt:
        print("\n❌ 操作被用户取消")
        return 1
    except Exception as e:
        print(f"❌ 程序执行异常: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
