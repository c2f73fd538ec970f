"""
模块名称: Unknown State Specs (待传输未知态)

功能描述:

    描述协议要传输或编码的未知态 ζ / ρ₁：
    单比特态、EPR 形式两比特态、GHZ 形式 (N−1) 比特态、一般两比特态、对角混合态。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类
from enum import Enum                                                  # 枚举：态的种类
from typing import Sequence                                            # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import DensityMatrix, StateVector                    # 态对象
from src.utils.errors import InvalidStateError, UnsupportedStateError, UsageError  # 异常层次


# [定义类] ##############################################################################################################
class StateKind(str, Enum):
    SINGLE_QUBIT = "single_qubit"
    EPR_FORM = "epr_form"
    GHZ_FORM = "ghz_form"
    GENERAL_TWO_QUBIT = "general_two_qubit"
    MIXED_DIAGONAL = "mixed_diagonal"


@dataclass(frozen=True)
class UnknownStateSpec:
    """
    kind 决定如何解释 amplitudes：
      - single_qubit: (α, β) → α|0⟩+β|1⟩
      - epr_form: (α, β) → α|01⟩+β|10⟩；parallel=True 时为 α|00⟩+β|11⟩
      - ghz_form: (α, β) 与 width → α|0⟩^width + β|1⟩^width
      - general_two_qubit: 4 个振幅
      - mixed_diagonal: weights = (λ₀, λ₁)
    """
    kind: StateKind
    amplitudes: tuple[complex, ...] = ()
    width: int = 1
    weights: tuple[float, ...] = ()
    parallel: bool = False

    def __post_init__(self):
        if self.kind == StateKind.MIXED_DIAGONAL:
            lam = self.weights
            if len(lam) != 2 or min(lam) < 0 or abs(sum(lam) - 1.0) > settings.tolerance:
                raise InvalidStateError(f"混合态权重必须非负且和为 1，收到 {lam}")
            return
        norm_sq = float(np.sum(np.abs(np.asarray(self.amplitudes, dtype=np.complex128)) ** 2))
        if abs(norm_sq - 1.0) > settings.tolerance:
            raise InvalidStateError(f"{self.kind.value} 振幅未归一化: Σ|a|² = {norm_sq:.12g}")

    # ========== 构造器 ==========
    @classmethod
    def single_qubit(cls, alpha: complex, beta: complex) -> "UnknownStateSpec":
        return cls(StateKind.SINGLE_QUBIT, (complex(alpha), complex(beta)), width=1)

    @classmethod
    def epr_form(cls, alpha: complex, beta: complex, parallel: bool = False) -> "UnknownStateSpec":
        return cls(StateKind.EPR_FORM, (complex(alpha), complex(beta)), width=2, parallel=parallel)

    @classmethod
    def ghz_form(cls, width: int, alpha: complex, beta: complex) -> "UnknownStateSpec":
        if width < 1:
            raise UsageError(f"ghz_form 宽度至少为 1，收到 {width}")
        return cls(StateKind.GHZ_FORM, (complex(alpha), complex(beta)), width=width)

    @classmethod
    def general_two_qubit(cls, amplitudes: Sequence[complex]) -> "UnknownStateSpec":
        if len(amplitudes) != 4:
            raise UsageError(f"一般两比特态需要 4 个振幅，收到 {len(amplitudes)}")
        return cls(StateKind.GENERAL_TWO_QUBIT, tuple(complex(a) for a in amplitudes), width=2)

    @classmethod
    def mixed_diagonal(cls, lambda0: float, lambda1: float | None = None) -> "UnknownStateSpec":
        lambda1 = 1.0 - lambda0 if lambda1 is None else lambda1
        return cls(StateKind.MIXED_DIAGONAL, weights=(float(lambda0), float(lambda1)), width=1)

    # ========== 属性 ==========
    @property
    def num_qubits(self) -> int:
        return self.width

    def state(self) -> StateVector:
        """纯态形式；混合态请使用 density()"""
        if self.kind == StateKind.MIXED_DIAGONAL:
            raise UnsupportedStateError("对角混合态没有纯态形式")
        alpha, beta = self.amplitudes[0], self.amplitudes[-1]
        if self.kind == StateKind.GENERAL_TWO_QUBIT:
            return StateVector(2, np.array(self.amplitudes))
        if self.kind == StateKind.EPR_FORM:
            amps = np.zeros(4, dtype=np.complex128)
            if self.parallel:
                amps[0], amps[3] = alpha, beta
            else:
                amps[1], amps[2] = alpha, beta
            return StateVector(2, amps)
        amps = np.zeros(2 ** self.width, dtype=np.complex128)
        amps[0], amps[-1] = alpha, beta
        return StateVector(self.width, amps)

    def density(self) -> DensityMatrix:
        if self.kind == StateKind.MIXED_DIAGONAL:
            return DensityMatrix.diagonal(self.weights)
        psi = self.state().amplitudes
        return DensityMatrix(self.width, np.outer(psi, psi.conj()))

    def describe(self) -> str:
        """写入 transcript 的简短描述"""
        if self.kind == StateKind.MIXED_DIAGONAL:
            return f"mixed_diagonal(lambda0={self.weights[0]!r}, lambda1={self.weights[1]!r})"
        amps = ", ".join(_format_complex(a) for a in self.amplitudes)
        if self.kind == StateKind.GHZ_FORM:
            return f"ghz_form(width={self.width}; {amps})"
        if self.kind == StateKind.EPR_FORM and self.parallel:
            return f"epr_form_parallel({amps})"
        return f"{self.kind.value}({amps})"


def _format_complex(value: complex) -> str:
    if value.imag == 0:
        return repr(value.real)
    return f"{value.real!r}{value.imag:+}i"


def require_kind(spec: UnknownStateSpec, *kinds: StateKind, protocol: str) -> None:
    if spec.kind not in kinds:
        allowed = ", ".join(k.value for k in kinds)
        raise UnsupportedStateError(f"{protocol} 只支持 {allowed}，收到 {spec.kind.value}")
