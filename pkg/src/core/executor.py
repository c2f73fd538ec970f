"""
模块名称: Protocol Executor (协议执行器)

功能描述:

    按名称分发协议运行：命令行各子命令通过 `execute_protocol("teleport:ghz", {...})` 调用协议。

设计理念:

    1.  **白名单**: 只有在 `ALLOWED_PROTOCOLS` 中注册的协议可以被按名称调用。
    2.  **统一接口**: 所有协议调用都经过 `execute_protocol`，便于日志记录和异常处理。
"""

from typing import Any, Callable, Dict

from src.protocols import dense_coding, telecloning, teleportation
from src.services.logging import log_debug
from src.utils.errors import UsageError

# [创建全局变量] =========================================================================================================
# 协议白名单：名称 → 可调用对象
ALLOWED_PROTOCOLS: Dict[str, Callable[..., Any]] = {
    "teleport:tight": teleportation.teleport_tight,
    "teleport:ghz": teleportation.teleport_ghz,
    "teleport:nparty": teleportation.teleport_nparty,
    "teleport:onebit": teleportation.teleport_onebit_style,
    "teleport:two_epr": teleportation.teleport_two_epr_pairs,
    "teleport:ghz_nonlocal": teleportation.teleport_ghz_nonlocal_variant,
    "teleport:negative_check": teleportation.general_two_qubit_negative_check,
    "densecode:tight": dense_coding.dense_code_tight,
    "densecode:ghz": dense_coding.dense_code_ghz,
    "densecode:ghz_converted": dense_coding.dense_code_ghz_converted,
    "densecode:ghz_from_epr": dense_coding.dense_code_ghz_from_epr,
    "densecode:nparty": dense_coding.dense_code_nparty,
    "densecode:modified": dense_coding.modified_dense_scheme,
    "teleclone": telecloning.teleclone,
}

TELEPORT_SCHEMES = tuple(name.split(":", 1)[1] for name in ALLOWED_PROTOCOLS if name.startswith("teleport:"))
DENSE_SCHEMES = tuple(name.split(":", 1)[1] for name in ALLOWED_PROTOCOLS if name.startswith("densecode:"))


# [定义函数] ############################################################################################################
# [外部-执行协议] =========================================================================================================
def execute_protocol(name: str, args: Dict[str, Any] | None = None) -> Any:
    """
    执行白名单中的协议。
    :param name: 协议名，例如 "teleport:ghz"
    :param args: 关键字参数
    :return: 协议返回值
    """
    # [step1] 卫语句：协议名不在白名单
    if name not in ALLOWED_PROTOCOLS:
        raise UsageError(f"未注册的协议: {name}（可选 {', '.join(ALLOWED_PROTOCOLS)}）")
    # [step2] 执行
    log_debug(f"[Executor] 执行 {name}，参数 {sorted((args or {}).keys())}")
    return ALLOWED_PROTOCOLS[name](**(args or {}))


