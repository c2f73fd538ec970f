"""
模块名称: Unified Logging (统一日志服务)
功能描述:

    协议运行、分支统计、表加载、校验结果等日志统一经由名为 `ghz_protocols` 的日志器输出到 stderr，
    stdout 只留给 CLI 的结果表格。日志级别取自环境变量 LOG_LEVEL，也可由命令行 `--log-level` 覆盖。

设计理念:

    1.  **只配置一次**: 模块导入时挂载唯一的彩色 Handler，重复导入不会重复输出。
    2.  **组件标签**: 调用方在消息前写 `[LOCC]`、`[Capacity]`、`[CLI]` 等标签，便于 grep 过滤。
    3.  **快捷函数**: `log_info` / `log_warn` / `log_error` / `log_debug` 接受多个参数并以空格拼接。

线程安全性:

    - 标准库 `logging` 自带锁，分支线程池与校验线程池可以直接调用。
"""

import logging
import os
import sys

import colorlog

# [创建全局变量] =========================================================================================================
LOGGER_NAME = "ghz_protocols"
LOG_FORMAT = "%(log_color)s%(asctime)s [%(levelname)s]%(reset)s %(message)s"
DATE_FORMAT = "%H:%M:%S"
LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}

_logger = logging.getLogger(LOGGER_NAME)


# [定义函数] ############################################################################################################
# [外部-设置级别] =========================================================================================================
def set_log_level(level: str | None) -> int:
    """
    按名称设置日志级别，未知名称回退到 INFO。
    :param level: DEBUG / INFO / WARN / WARNING / ERROR
    :return: 生效的数值级别
    """
    name = (level or "INFO").upper()
    name = "WARNING" if name == "WARN" else name
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        numeric = logging.INFO
    _logger.setLevel(numeric)
    return numeric


# [内部-挂载 Handler] =====================================================================================================
def _install_handler() -> None:
    if _logger.handlers:
        return
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT, datefmt=DATE_FORMAT, log_colors=LOG_COLORS))
    _logger.addHandler(handler)
    _logger.propagate = False


def _emit(level: int, args: tuple) -> None:
    if _logger.isEnabledFor(level):
        _logger.log(level, " ".join(str(arg) for arg in args))


# [日志快捷函数] ==========================================================================================================
def log_info(*args) -> None:
    _emit(logging.INFO, args)


def log_warn(*args) -> None:
    _emit(logging.WARNING, args)


def log_error(*args) -> None:
    _emit(logging.ERROR, args)


def log_debug(*args) -> None:
    """DEBUG 级别：逐分支细节、表加载路径等"""
    _emit(logging.DEBUG, args)


# [模块初始化] ===========================================================================================================
_install_handler()
set_log_level(os.getenv("LOG_LEVEL"))
