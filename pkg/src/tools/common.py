"""
模块名称: Common Tools (通用工具集)
功能描述:

    命令行输入的解析与清洗：复数振幅、比特串消息、未知态描述。

设计理念:

    1.  **纯函数**: 无副作用，便于测试和复用。
    2.  **容错归一化**: 振幅偏离归一化不足 1e-6 时自动归一化并给出警告，偏差更大时报错。

线程安全性:

    - 无状态函数，线程安全。
"""

import re
from typing import Optional, Sequence

import numpy as np

from src.core.settings import settings
from src.core.bases import BitString
from src.protocols.specs import UnknownStateSpec
from src.services.logging import log_warn
from src.utils.errors import UsageError

# [创建全局变量] =========================================================================================================
AUTO_NORMALIZE_LIMIT = 1e-6

_AMPLITUDE_PATTERN = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)(e[+-]?\d+)?([+-](\d+\.?\d*|\.\d+)(e[+-]?\d+)?i)?$|"
                                r"^[+-]?(\d+\.?\d*|\.\d+)(e[+-]?\d+)?i$", re.IGNORECASE)


# [定义函数] ############################################################################################################
# [工具-解析振幅] =========================================================================================================
def parse_amplitude(text: str) -> complex:
    """
    解析 `re` 或 `re+imi` 形式的复数，例如 "0.6"、"0.5-0.5i"。
    :param text: 命令行字符串
    :return: complex
    """
    # [step1] 清洗空白并校验格式
    clean_text = text.strip().replace(" ", "")
    if not _AMPLITUDE_PATTERN.match(clean_text):
        raise UsageError(f"无法解析振幅: {text!r}（格式应为 re 或 re+imi）")
    # [step2] 虚数单位 i → j 后交给 complex()
    return complex(clean_text.lower().replace("i", "j"))


def parse_amplitudes(text: str) -> list[complex]:
    """逗号分隔的振幅列表"""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("振幅列表为空")
    return [parse_amplitude(p) for p in parts]


# [工具-归一化] ===========================================================================================================
def normalize_amplitudes(amplitudes: Sequence[complex]) -> list[complex]:
    """
    偏差 ≤ tolerance 原样返回；< 1e-6 自动归一化并警告；否则报错。
    """
    norm_sq = float(np.sum(np.abs(np.asarray(amplitudes, dtype=np.complex128)) ** 2))
    deviation = abs(norm_sq - 1.0)
    if deviation <= settings.tolerance:
        return list(amplitudes)
    if deviation < AUTO_NORMALIZE_LIMIT:
        log_warn(f"[CLI] 振幅 Σ|a|² = {norm_sq:.12g}，已自动归一化")
        scale = 1.0 / np.sqrt(norm_sq)
        return [complex(a * scale) for a in amplitudes]
    raise UsageError(f"振幅未归一化: Σ|a|² = {norm_sq:.12g}")


# [工具-解析消息] =========================================================================================================
def parse_message(text: str, length: Optional[int] = None) -> BitString:
    bits = BitString.from_str(text)
    if length is not None and len(bits) != length:
        raise UsageError(f"消息 {text} 的长度应为 {length}")
    return bits


# [工具-解析未知态] =======================================================================================================
def parse_state_spec(state: Optional[str], alpha: Optional[str], beta: Optional[str],
                     default_kind: str, width: int = 1) -> UnknownStateSpec:
    """
    组装未知态：
      - `--state general:a,b,c,d`、`--state epr:α,β`、`--state epr00:α,β`、`--state ghz:α,β`、`--state single:α,β`
      - 或者 `--alpha/--beta` 配合方案默认的态类型 default_kind
    :param width: ghz 形式的比特数
    """
    # [step1] 决定态类型与振幅
    if state:
        kind, _, payload = state.partition(":")
        kind = kind.strip().lower()
        amplitudes = parse_amplitudes(payload)
    else:
        if alpha is None or beta is None:
            raise UsageError("需要提供 --state 或者 --alpha 与 --beta")
        kind = default_kind
        amplitudes = [parse_amplitude(alpha), parse_amplitude(beta)]
    amplitudes = normalize_amplitudes(amplitudes)

    # [step2] 构造
    builders = {
        "single": lambda a: UnknownStateSpec.single_qubit(*a),
        "epr": lambda a: UnknownStateSpec.epr_form(*a),
        "epr00": lambda a: UnknownStateSpec.epr_form(*a, parallel=True),
        "ghz": lambda a: UnknownStateSpec.ghz_form(width, *a),
        "general": lambda a: UnknownStateSpec.general_two_qubit(a),
    }
    if kind not in builders:
        raise UsageError(f"未知的态类型: {kind}（可选 {', '.join(builders)}）")
    expected = 4 if kind == "general" else 2
    if len(amplitudes) != expected:
        raise UsageError(f"{kind} 需要 {expected} 个振幅，收到 {len(amplitudes)}")
    return builders[kind](amplitudes)


def parse_mixed_spec(lambda0: float) -> UnknownStateSpec:
    if not 0.0 <= lambda0 <= 1.0:
        raise UsageError(f"λ₀ 必须在 [0, 1] 内，收到 {lambda0}")
    return UnknownStateSpec.mixed_diagonal(lambda0)
