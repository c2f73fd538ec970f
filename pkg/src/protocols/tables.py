"""
模块名称: Protocol Tables (协议表加载)

功能描述:

    从 `config/protocol_tables.yaml` 读取各协议的修正表与编码表，缓存在全局变量 PROTOCOL_TABLES 中。
    文件缺失或格式错误时记录错误日志并回退到内置默认表。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from typing import Any                                                # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import yaml                                                            # YAML 解析：读取协议表
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置：协议表路径
from src.core.gates import QubitOperator, product_operator, signed_pauli  # 算符库
from src.services.logging import log_error, log_debug                  # 统一日志服务

# [创建全局变量] =========================================================================================================
DEFAULT_TABLES: dict[str, Any] = {
    "tight": {
        "teleport_corrections": ["I", "X", "Z", "minus_iY"],
        "dense_encoding": ["I", "X", "Z", "minus_iY"],
    },
    "teleport_ghz": {
        "corrections": [
            ["X", "I"], ["iY", "I"], ["minus_iY", "I"], ["-X", "I"],
            ["I", "X"], ["I", "minus_iY"], ["I", "iY"], ["I", "-X"],
        ],
    },
    "dense_ghz": {
        "encoding": {
            "000": ["I", "I"], "001": ["I", "X"], "010": ["Z", "I"], "011": ["Z", "X"],
            "100": ["X", "I"], "101": ["X", "X"], "110": ["minus_iY", "I"], "111": ["minus_iY", "X"],
        },
    },
    "teleclone": {
        "corrections": [["I", "I"], ["X", "X"], ["Z", "I"], ["iY", "X"]],
    },
}


# [定义函数] ############################################################################################################
# [内部-校验表结构] =======================================================================================================
def _validate(tables: Any) -> None:
    """检查表的形状与标签是否合法，非法时抛出 ValueError"""
    if not isinstance(tables, dict):
        raise ValueError("顶层必须是字典")
    tight = tables["tight"]
    for key in ("teleport_corrections", "dense_encoding"):
        if len(tight[key]) != 4:
            raise ValueError(f"tight.{key} 需要 4 项")
        for label in tight[key]:
            signed_pauli(str(label))
    expectations = (("teleport_ghz", 8), ("teleclone", 4))
    for name, rows in expectations:
        table = tables[name]["corrections"]
        if len(table) != rows or any(len(row) != 2 for row in table):
            raise ValueError(f"{name}.corrections 需要 {rows} 行，每行 2 个标签")
        for row in table:
            for label in row:
                signed_pauli(str(label))
    encoding = tables["dense_ghz"]["encoding"]
    if sorted(str(k) for k in encoding) != [format(x, "03b") for x in range(8)]:
        raise ValueError("dense_ghz.encoding 必须覆盖 000..111")


# [外部-加载协议表] =======================================================================================================
def load_protocol_tables(path=None) -> dict:
    """
    读取协议表 YAML。
    :param path: 可选路径，默认取 settings.protocol_tables_path
    :return: 协议表字典，失败时返回内置默认表
    """
    path = path or settings.protocol_tables_path
    # [step1] 尝试读取并解析 YAML
    try:
        with open(path, "r", encoding="utf-8") as f:
            tables = yaml.safe_load(f)
        _validate(tables)
        log_debug(f"[Tables] 已加载协议表: {path}")
        return tables
    # [step2] 捕获异常并记录错误日志，回退到默认表
    except Exception as e:
        log_error(f"[Tables] 加载 {path} 失败，使用内置默认表: {e}")
        return DEFAULT_TABLES


# [创建全局变量] =========================================================================================================
PROTOCOL_TABLES: dict = load_protocol_tables()


# [外部-表访问] ===========================================================================================================
def tight_teleport_corrections() -> list[str]:
    return [str(label) for label in PROTOCOL_TABLES["tight"]["teleport_corrections"]]


def tight_dense_encoding() -> list[str]:
    return [str(label) for label in PROTOCOL_TABLES["tight"]["dense_encoding"]]


def teleport_ghz_corrections() -> list[tuple[str, str]]:
    return [(str(b), str(c)) for b, c in PROTOCOL_TABLES["teleport_ghz"]["corrections"]]


def teleclone_corrections() -> list[tuple[str, str]]:
    return [(str(b), str(c)) for b, c in PROTOCOL_TABLES["teleclone"]["corrections"]]


def dense_ghz_encoding() -> dict[str, tuple[str, str]]:
    encoding = PROTOCOL_TABLES["dense_ghz"]["encoding"]
    return {str(k): (str(v[0]), str(v[1])) for k, v in sorted(encoding.items(), key=lambda kv: str(kv[0]))}


def dense_ghz_operators() -> list[QubitOperator]:
    """按 x̃ = 000..111 顺序返回 1⊗B_x⊗C_x（作用在比特 1,2,3 上）"""
    return [
        product_operator(["I", b, c], [1, 2, 3], label=f"1⊗{b}⊗{c}")
        for b, c in dense_ghz_encoding().values()
    ]
