"""
模块名称: Command Line Entry (命令行入口)

功能描述:

    GHZ 信道协议模拟器的命令行外壳。子命令:

        teleport   运行量子传输方案 (tight / ghz / nparty / onebit / two_epr)，输出分支记录 JSON
        densecode  运行稠密编码方案，逐条消息往返并输出 JSON
        teleclone  混态远程克隆，输出 ρ'_BC、ρ_B、ρ_C
        basis      生成测量基 JSON 与完备性残差
        capacity   扫描 α² 网格，输出容量 CSV
        verify     运行恒等式校验套件，打印通过/失败表

设计理念:

    1.  **先加载环境**: 与库模块导入前先用 python-dotenv 读取 `config/app.env`，保证 Settings 拿到最新变量。
    2.  **库只抛异常**: 所有 `ProtocolError` 在 `main` 中统一捕获并映射为退出码。
    3.  **退出码**: 0 成功；1 保真度不足或检查失败；2 参数/输入校验失败。

依赖关系:

    - python-dotenv: 环境变量加载
    - argparse: 命令行解析
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
import argparse                                                        # 命令行解析
import os                                                              # 环境变量
import sys                                                             # 退出码
from dataclasses import dataclass                                      # 数据类：运行配置
from pathlib import Path                                               # 路径处理
from typing import Optional, Sequence                                  # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
from dotenv import load_dotenv                                         # 环境变量加载

# [加载环境变量] =========================================================================================================
# 必须在导入 src.* 之前执行，Settings 在导入时读取环境变量
try:
    env_path = os.getenv("APP_ENV_PATH", "config/app.env")
    load_dotenv(dotenv_path=env_path, override=True, encoding="utf-8")
except UnicodeDecodeError:
    load_dotenv(dotenv_path=env_path, override=True, encoding="gbk")

# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import get_settings                             # 全局配置
from src.core.bases import (                                           # 测量基
    bell_basis,
    converted_dense_basis,
    ghz_class_basis,
    nparty_teleport_basis,
    teleport_basis_ghz,
)
from src.core.capacity import capacity_sweep                           # 容量扫描
from src.core.executor import DENSE_SCHEMES, execute_protocol          # 协议执行器
from src.core.locc import summarize                                    # 分支汇总
from src.core.verification import CHECKS, run_verification             # 校验套件
from src.protocols.dense_coding import all_messages                    # 消息枚举
from src.protocols.specs import StateKind                              # 未知态类型
from src.services.logging import log_error, log_info, log_warn, set_log_level  # 统一日志服务
from src.tools.common import parse_message, parse_mixed_spec, parse_state_spec  # 输入解析
from src.tools.export import (                                         # 序列化
    SCHEMA_VERSION,
    basis_to_dict,
    capacity_csv_bytes,
    complex_pair,
    state_to_json,
    to_json_bytes,
    transcripts_payload,
    write_buffer,
)
from src.utils.errors import (                                         # 异常层次
    BranchImpossibleError,
    CapacityMismatchError,
    InvalidStateError,
    LocalityError,
    ProtocolError,
    UnsupportedStateError,
    UsageError,
    VerificationError,
)

settings = get_settings()

# [创建全局变量] =========================================================================================================
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CLI_TELEPORT_SCHEMES = ("tight", "ghz", "nparty", "onebit", "two_epr")
BASIS_KINDS = ("bell", "ghz_class", "teleport_ghz", "nparty", "converted")

# 各传输方案默认的未知态类型
_DEFAULT_STATE_KIND = {
    "tight": "single",
    "ghz": "epr",
    "nparty": "ghz",
    "onebit": "epr00",
    "two_epr": "epr",
}


# [定义类] ##############################################################################################################
# [运行配置] =============================================================================================================
@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    protocol: Optional[str] = None
    mode: str = "exhaustive"
    seed: Optional[int] = None
    nonlocal_allowed: bool = False
    output: Optional[Path] = None
    fmt: str = "json"

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sample"):
            raise UsageError(f"未知运行模式: {self.mode}")
        if self.mode == "sample" and self.seed is None:
            raise UsageError("sample 模式需要 --seed")

    def output_path(self, default_name: str) -> Path:
        return self.output if self.output is not None else settings.output_dir / default_name


# [定义函数] ############################################################################################################
# [内部-构造配置] =========================================================================================================
def _config(args: argparse.Namespace, protocol: Optional[str] = None, fmt: str = "json") -> RunConfig:
    if getattr(args, "mode", "exhaustive") == "exhaustive" and getattr(args, "seed", None) is not None:
        log_warn("[CLI] exhaustive 模式忽略 --seed")
    return RunConfig(
        subcommand=args.command,
        protocol=protocol,
        mode=getattr(args, "mode", "exhaustive"),
        seed=getattr(args, "seed", None),
        nonlocal_allowed=getattr(args, "nonlocal_allowed", False),
        output=Path(args.output) if getattr(args, "output", None) else None,
        fmt=fmt,
    )


# [子命令-量子传输] =======================================================================================================
def cmd_teleport(args: argparse.Namespace) -> int:
    """
    运行传输方案并写出分支记录。
    GHZ 方案收到一般两比特态时改为运行反例检查，报告最低分支保真度。
    """
    config = _config(args, protocol=f"teleport:{args.scheme}")
    width = (args.n - 1) if args.scheme == "nparty" else 1
    spec = parse_state_spec(args.state, args.alpha, args.beta, _DEFAULT_STATE_KIND[args.scheme], width=width)
    path = config.output_path(f"teleport_{args.scheme}.json")

    # [step1] GHZ 方案 + 一般两比特态 → 反例检查
    if args.scheme == "ghz" and spec.kind == StateKind.GENERAL_TWO_QUBIT:
        report = execute_protocol("teleport:negative_check", {"spec": spec})
        extra = {"negative_check": {"applicable": report.applicable, "min_fidelity": report.min_fidelity,
                                    "impossible_branches": report.impossible_branches}}
        write_buffer(to_json_bytes(transcripts_payload(report.transcripts, extra)), path)
        print(f"teleport_ghz on {spec.describe()}: min branch fidelity = {report.min_fidelity:.12f}")
        return EXIT_FAILURE if report.fails else EXIT_OK

    # [step2] GHZ 方案的非局域修正变体只运行 x=0 分支
    if args.scheme == "ghz" and args.nonlocal_variant:
        transcripts = [execute_protocol("teleport:ghz_nonlocal",
                                        {"spec": spec, "nonlocal_allowed": config.nonlocal_allowed})]
    else:
        call_args = {"spec": spec, "mode": config.mode, "seed": config.seed}
        if args.scheme == "nparty":
            call_args["N"] = args.n
        transcripts = execute_protocol(config.protocol, call_args)

    # [step3] 写出并汇总
    write_buffer(to_json_bytes(transcripts_payload(transcripts)), path)
    summary = summarize(transcripts)
    print(f"{summary.protocol_name}: {summary.branches} branch(es), {summary.possible_branches} possible, "
          f"min fidelity = {summary.min_fidelity}")
    return EXIT_OK if summary.all_perfect else EXIT_FAILURE


# [子命令-稠密编码] =======================================================================================================
def _dense_call(scheme: str, message, args: argparse.Namespace) -> dict:
    if scheme == "nparty":
        return {"message": message, "N": args.n}
    if scheme == "modified":
        return {"N": args.n, "k": args.k, "n": args.width, "message": message}
    return {"message": message}


def _message_length(scheme: str, args: argparse.Namespace) -> int:
    if scheme == "tight":
        return 2
    if scheme in ("nparty", "modified"):
        if args.n is None:
            raise UsageError(f"densecode --scheme {scheme} 需要 --n")
        return args.n
    return 3


def cmd_densecode(args: argparse.Namespace) -> int:
    """未给出 --message 时对全部 2^N 条消息做往返"""
    config = _config(args, protocol=f"densecode:{args.scheme}")
    length = _message_length(args.scheme, args)
    messages = [parse_message(args.message, length)] if args.message else all_messages(length)

    results = [execute_protocol(config.protocol, _dense_call(args.scheme, m, args)) for m in messages]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "scheme": args.scheme,
        "results": [{
            "message": str(r.message),
            "decoded": str(r.decoded),
            "probability": r.probability,
            "manipulated_qubits": list(r.manipulated_qubits),
            "nonlocal_encoding": r.nonlocal_encoding,
            "basis_label": r.basis_label,
            "encoded_state": state_to_json(r.encoded_state),
            "notes": list(r.notes),
        } for r in results],
    }
    write_buffer(to_json_bytes(payload), config.output_path(f"densecode_{args.scheme}.json"))
    for r in results:
        print(f"{r.message} -> {r.decoded}  p={r.probability:.12f}")
    failed = [r for r in results if not r.succeeded]
    if failed:
        log_error(f"[CLI] {len(failed)} 条消息未能正确解码")
    return EXIT_FAILURE if failed else EXIT_OK


# [子命令-远程克隆] =======================================================================================================
def cmd_teleclone(args: argparse.Namespace) -> int:
    config = _config(args, protocol="teleclone")
    spec = parse_mixed_spec(args.lambda0)
    result = execute_protocol(config.protocol, {"spec": spec})
    payload = transcripts_payload(result.transcripts, {
        "rho_bc": state_to_json(result.rho_bc),
        "rho_b": state_to_json(result.rho_b),
        "rho_c": state_to_json(result.rho_c),
    })
    write_buffer(to_json_bytes(payload), config.output_path("teleclone.json"))
    expected = spec.density().entries
    exact = (np.allclose(result.rho_b.entries, expected, atol=settings.tolerance)
             and np.allclose(result.rho_c.entries, expected, atol=settings.tolerance))
    print(f"ρ_B diag = {[complex_pair(v)[0] for v in np.diag(result.rho_b.entries)]}")
    print(f"ρ_C diag = {[complex_pair(v)[0] for v in np.diag(result.rho_c.entries)]}")
    return EXIT_OK if exact else EXIT_FAILURE


# [子命令-测量基] =========================================================================================================
def cmd_basis(args: argparse.Namespace) -> int:
    config = _config(args)
    builders = {
        "bell": lambda: bell_basis(),
        "ghz_class": lambda: ghz_class_basis(args.n),
        "teleport_ghz": lambda: teleport_basis_ghz(),
        "nparty": lambda: nparty_teleport_basis(args.n),
        "converted": lambda: converted_dense_basis(),
    }
    if args.kind in ("ghz_class", "nparty") and args.n is None:
        raise UsageError(f"basis --kind {args.kind} 需要 --n")
    basis = builders[args.kind]()
    suffix = f"_{args.n}" if args.kind in ("ghz_class", "nparty") else ""
    write_buffer(to_json_bytes(basis_to_dict(basis)), config.output_path(f"basis_{args.kind}{suffix}.json"))
    print(f"{basis.label}: {len(basis.elements)} elements, completeness residual = {basis.completeness_residual():.3e}")
    return EXIT_OK


# [子命令-容量扫描] =======================================================================================================
def cmd_capacity(args: argparse.Namespace) -> int:
    config = _config(args, fmt="csv")
    rows = capacity_sweep(args.n, points=args.alpha_grid)
    write_buffer(capacity_csv_bytes(rows), config.output_path("capacity.csv"))
    worst = max(row.abs_diff for row in rows)
    print(f"{len(rows)} rows, max |c − (1 + E/(N−1))| = {worst:.3e}")
    return EXIT_OK if worst <= settings.tolerance else EXIT_FAILURE


# [子命令-校验] ===========================================================================================================
def cmd_verify(args: argparse.Namespace) -> int:
    results = run_verification(args.check or None)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.seconds:7.3f}s  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


# [外部-参数解析器] =======================================================================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghz-protocols", description="GHZ 信道量子通信协议模拟器")
    parser.add_argument("--log-level", help="覆盖 LOG_LEVEL (DEBUG / INFO / WARNING / ERROR)")
    sub = parser.add_subparsers(dest="command", required=True)

    teleport = sub.add_parser("teleport", help="量子传输")
    teleport.add_argument("--scheme", choices=CLI_TELEPORT_SCHEMES, required=True)
    teleport.add_argument("--alpha")
    teleport.add_argument("--beta")
    teleport.add_argument("--state", help="single:α,β | epr:α,β | epr00:α,β | ghz:α,β | general:a,b,c,d")
    teleport.add_argument("--n", type=int, default=3, help="nparty 方案的 N")
    teleport.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    teleport.add_argument("--seed", type=int)
    teleport.add_argument("--nonlocal-variant", action="store_true", help="GHZ 方案 x=0 分支使用非局域修正")
    teleport.add_argument("--nonlocal-allowed", action="store_true")
    teleport.add_argument("--output")
    teleport.set_defaults(handler=cmd_teleport)

    dense = sub.add_parser("densecode", help="稠密编码")
    dense.add_argument("--scheme", choices=DENSE_SCHEMES, required=True)
    dense.add_argument("--message")
    dense.add_argument("--n", type=int)
    dense.add_argument("--k", type=int, default=0, help="modified 方案中独立比特数")
    dense.add_argument("--width", type=int, default=0, help="modified 方案中 Den(n) 的宽度")
    dense.add_argument("--output")
    dense.set_defaults(handler=cmd_densecode)

    clone = sub.add_parser("teleclone", help="混态远程克隆")
    clone.add_argument("--lambda0", type=float, required=True)
    clone.add_argument("--output")
    clone.set_defaults(handler=cmd_teleclone)

    basis = sub.add_parser("basis", help="生成测量基")
    basis.add_argument("--kind", choices=BASIS_KINDS, required=True)
    basis.add_argument("--n", type=int)
    basis.add_argument("--output")
    basis.set_defaults(handler=cmd_basis)

    cap = sub.add_parser("capacity", help="容量扫描")
    cap.add_argument("--n", type=int, nargs="+", required=True)
    cap.add_argument("--alpha-grid", type=int, default=21)
    cap.add_argument("--output")
    cap.set_defaults(handler=cmd_capacity)

    verify = sub.add_parser("verify", help="运行校验套件")
    verify.add_argument("--check", action="append", choices=list(CHECKS))
    verify.set_defaults(handler=cmd_verify)
    return parser


# [外部-主入口] ===========================================================================================================
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    try:
        code = args.handler(args)
    except (UsageError, InvalidStateError, UnsupportedStateError, LocalityError, BranchImpossibleError) as e:
        log_error(f"[CLI] 参数或输入无效: {e}")
        return EXIT_USAGE
    except (CapacityMismatchError, VerificationError) as e:
        log_error(f"[CLI] 校验失败: {e}")
        return EXIT_FAILURE
    except ProtocolError as e:
        log_error(f"[CLI] 协议错误: {e}")
        return EXIT_USAGE
    log_info(f"[CLI] {args.command} 结束，退出码 {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
