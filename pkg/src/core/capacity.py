"""
模块名称: Channel Capacity (信道容量计算)

功能描述:

    计算稠密编码的 Holevo 量与每比特容量：
      - holevo: S(Σpᵢρᵢ) − Σpᵢ S(ρᵢ)；
      - channel_entanglement: 非最大纠缠信道 αΩ₀ + βΩ₁ 的纠缠度 E；
      - ensemble_density: 非最大信道生成的 2^N 个编码态的平均密度矩阵，并校验其分解为 ρ'(1)⊗(I/2)^⊗(N−1)；
      - per_bit_capacity: Holevo/(N−1)，并与闭式 1 + E/(N−1) 交叉校验；
      - capacity_sweep: 按 |α|² 网格批量计算，输出 CSV 行。

约定:

    - 每比特容量统一按 N−1 个被操作比特归一化，N=2 时 c=2。
    - α、β 可以是复数，E 只依赖于模长。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类
from typing import Sequence                                            # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import DensityMatrix, StateVector, to_density, von_neumann_entropy  # 线性代数层
from src.core.bases import BitString                                   # 比特串
from src.services.logging import log_debug, log_info                   # 统一日志服务
from src.utils.errors import (                                         # 异常层次
    CapacityMismatchError,
    DimensionMismatchError,
    InvalidStateError,
    UsageError,
)


# [定义类] ##############################################################################################################
# [系综] =================================================================================================================
@dataclass(frozen=True, eq=False)
class Ensemble:
    states: tuple[DensityMatrix, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if not self.states or len(self.states) != len(self.probabilities):
            raise UsageError("系综的态与概率数量必须相同且非空")
        if any(p < 0 for p in self.probabilities) or abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise InvalidStateError(f"系综概率必须非负且和为 1，收到和 {sum(self.probabilities):.15g}")
        dims = {s.num_qubits for s in self.states}
        if len(dims) != 1:
            raise DimensionMismatchError(f"系综中态的比特数不一致: {sorted(dims)}")

    @property
    def num_qubits(self) -> int:
        return self.states[0].num_qubits

    def average(self) -> DensityMatrix:
        total = sum(p * s.entries for p, s in zip(self.probabilities, self.states))
        return DensityMatrix(self.num_qubits, total)


# [容量行] ===============================================================================================================
@dataclass(frozen=True)
class CapacityRow:
    N: int
    alpha_sq: float
    E: float
    holevo: float
    c: float
    c_closed_form: float
    abs_diff: float


# [定义函数] ############################################################################################################
# [外部-Holevo 量] ========================================================================================================
def holevo(ensemble: Ensemble) -> float:
    """χ = S(ρ̄) − Σ pᵢ S(ρᵢ)"""
    mixed = von_neumann_entropy(ensemble.average())
    members = sum(p * von_neumann_entropy(s) for p, s in zip(ensemble.probabilities, ensemble.states))
    value = mixed - members
    if value < -settings.tolerance:
        raise InvalidStateError(f"Holevo 量为负: {value:.3e}")
    return max(value, 0.0)


def dense_coding_ensemble(states: Sequence[StateVector]) -> Ensemble:
    """等概率纯态系综"""
    if not states:
        raise UsageError("空的态集合")
    p = 1.0 / len(states)
    return Ensemble(tuple(to_density(s) for s in states), tuple([p] * len(states)))


# [外部-信道纠缠度] =======================================================================================================
def _check_normalized(alpha: complex, beta: complex) -> tuple[float, float]:
    a2, b2 = float(abs(alpha) ** 2), float(abs(beta) ** 2)
    if abs(a2 + b2 - 1.0) > settings.tolerance:
        raise InvalidStateError(f"|α|² + |β|² = {a2 + b2:.12g} ≠ 1")
    return a2, b2


def channel_entanglement(alpha: complex, beta: complex) -> float:
    """E = −|α|² log₂|α|² − |β|² log₂|β|²"""
    a2, b2 = _check_normalized(alpha, beta)
    return float(sum(-p * np.log2(p) for p in (a2, b2) if p > settings.entropy_clamp))


def non_maximal_state(bits: BitString, alpha: complex, beta: complex) -> StateVector:
    """Φ'_{b} = α|0⟩⊗|b₂…b_N⟩ + (−1)^{b₁}β|1⟩⊗|b̄₂…b̄_N⟩"""
    N = len(bits)
    tail = bits.bits[1:]
    low = int("".join(str(b) for b in (0,) + tail), 2)
    high = int("".join(str(b) for b in (1,) + tuple(1 - b for b in tail)), 2)
    amps = np.zeros(2 ** N, dtype=np.complex128)
    amps[low] = alpha
    amps[high] += (-1) ** bits.bits[0] * beta
    return StateVector(N, amps)


def _non_maximal_vectors(N: int, alpha: complex, beta: complex) -> np.ndarray:
    return np.stack([non_maximal_state(BitString.from_int(x, N), alpha, beta).amplitudes for x in range(2 ** N)])


# [外部-系综密度矩阵] =====================================================================================================
def ensemble_density(N: int, alpha: complex, beta: complex) -> DensityMatrix:
    """
    2^N 个 Φ'_b 等概率平均，并校验 ρ = diag(|α|², |β|²) ⊗ (I/2)^⊗(N−1)。
    """
    if N < 2 or N > settings.ensemble_max_qubits:
        raise UsageError(f"ensemble_density 要求 2 ≤ N ≤ {settings.ensemble_max_qubits}，收到 {N}")
    a2, b2 = _check_normalized(alpha, beta)
    vectors = _non_maximal_vectors(N, alpha, beta)
    average = (vectors.T @ vectors.conj()) / 2 ** N
    expected = np.kron(np.diag([a2, b2]), np.eye(2 ** (N - 1)) / 2 ** (N - 1))
    deviation = float(np.max(np.abs(average - expected)))
    if deviation > settings.tolerance:
        raise CapacityMismatchError(f"系综密度矩阵未按 ρ'(1)⊗(I/2)^⊗(N−1) 分解 (偏差 {deviation:.3e})")
    return DensityMatrix(N, average)


# [外部-每比特容量] =======================================================================================================
def capacity_row(N: int, alpha: complex, beta: complex) -> CapacityRow:
    """Holevo 与闭式两种方式计算容量，不一致时抛出 CapacityMismatchError"""
    if N < 2:
        raise UsageError(f"per_bit_capacity 要求 N ≥ 2，收到 {N}")
    a2, _ = _check_normalized(alpha, beta)
    # [step1] Holevo：成员均为纯态，Σ p S(ρᵢ) 按系综逐个计算
    vectors = _non_maximal_vectors(N, alpha, beta)
    ensemble = Ensemble(
        tuple(to_density(StateVector(N, v)) for v in vectors),
        tuple([1.0 / 2 ** N] * 2 ** N),
    )
    ensemble_density(N, alpha, beta)
    chi = holevo(ensemble)
    # [step2] 闭式
    entanglement = channel_entanglement(alpha, beta)
    c = chi / (N - 1)
    closed = 1.0 + entanglement / (N - 1)
    diff = abs(c - closed)
    if diff > settings.tolerance:
        raise CapacityMismatchError(f"N={N}, |α|²={a2}: Holevo 容量 {c} 与闭式 {closed} 不一致")
    log_debug(f"[Capacity] N={N} |α|²={a2:.4f} E={entanglement:.6f} c={c:.12f}")
    return CapacityRow(N, a2, entanglement, chi, c, closed, diff)


def per_bit_capacity(N: int, alpha: complex, beta: complex) -> float:
    """c = χ/(N−1) = 1 + E/(N−1)"""
    return capacity_row(N, alpha, beta).c


def max_per_bit_capacity(N: int) -> float:
    """E = 1 时的最大值 N/(N−1)"""
    if N < 2:
        raise UsageError(f"max_per_bit_capacity 要求 N ≥ 2，收到 {N}")
    return N / (N - 1)


# [外部-网格扫描] =========================================================================================================
def alpha_grid(points: int) -> np.ndarray:
    if points < 2:
        raise UsageError(f"网格至少需要 2 个点，收到 {points}")
    return np.linspace(0.0, 1.0, points)


def capacity_sweep(Ns: Sequence[int], points: int = 21) -> list[CapacityRow]:
    """对每个 N 与 |α|² 网格点计算一行，α = √(|α|²)，β = √(1 − |α|²)"""
    rows = []
    for N in Ns:
        for a2 in alpha_grid(points):
            a2 = float(a2)
            rows.append(capacity_row(N, np.sqrt(a2), np.sqrt(1.0 - a2)))
    log_info(f"[Capacity] 扫描完成: N={list(Ns)}, {points} 个网格点, 共 {len(rows)} 行")
    return rows
