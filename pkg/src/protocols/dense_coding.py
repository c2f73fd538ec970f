"""
模块名称: Dense Coding Protocols (稠密编码协议族)

功能描述:

    发送方只操作信道中的部分比特，把经典消息编码进共享纠缠态；接收方在完备基中测量解码。
    覆盖紧致方案 (2 比特 / 1 个被操作比特)、GHZ 方案 (3 比特 / 2 个被操作比特) 及其两种变形
    (解码前做 H_B C_BC 转换、从 EPR⊗|0⟩ 出发在编码中内联制备 GHZ)、N 比特推广，
    以及带 Ent/Den 的修改方案。

设计理念:

    1.  **查表解码**: 测量结果先映射到基下标，再通过"编码态 ↔ 基元素"的匹配表得到消息。
    2.  **发送方视角**: 被操作比特通常是 2…N，比特 1 在接收方手中；修改方案取 n = N 时 Den(N) 也作用在比特 1 上。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类：编码结果
from functools import lru_cache                                        # 缓存：解码查找表
from typing import Sequence                                            # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import StateVector, basis_state, single_qubit_entropies, tensor  # 线性代数层
from src.core.gates import (                                           # 算符库
    NONLOCAL,
    QubitOperator,
    apply_operator,
    cnot,
    compose,
    disentangle_op,
    entangle_op,
    signed_pauli,
)
from src.core.bases import (                                           # 测量基
    BitString,
    ProjectiveBasis,
    bell_basis,
    converted_dense_basis,
    generating_operator,
    ghz_class_basis,
    ghz_dense_states,
    ghz_state,
    teleport_table_states,
)
from src.core.locc import branch_probabilities                         # 测量概率
from src.protocols.tables import dense_ghz_operators, tight_dense_encoding  # 编码表
from src.services.logging import log_debug                             # 统一日志服务
from src.utils.errors import UsageError                                # 异常层次


# [定义类] ##############################################################################################################
@dataclass(frozen=True, eq=False)
class DenseCodingResult:
    message: BitString
    decoded: BitString
    probability: float
    encoded_state: StateVector
    manipulated_qubits: tuple[int, ...]
    nonlocal_encoding: bool
    basis_label: str
    notes: tuple[str, ...] = ()

    @property
    def succeeded(self) -> bool:
        return self.decoded == self.message and abs(self.probability - 1.0) <= settings.tolerance


# [定义函数] ############################################################################################################
# [内部-消息解析] =========================================================================================================
def _as_message(message: BitString | str, length: int) -> BitString:
    bits = BitString.from_str(message) if isinstance(message, str) else message
    if len(bits) != length:
        raise UsageError(f"消息长度应为 {length}，收到 {bits}")
    return bits


# [内部-测量解码] =========================================================================================================
def _decode(state: StateVector, basis: ProjectiveBasis, lookup: Sequence[int] | None = None) -> tuple[int, float]:
    """
    对全部比特做基测量，取概率最大的结果。
    :param lookup: 可选，基下标 → 消息数值
    """
    probabilities = branch_probabilities(state, basis, range(1, state.num_qubits + 1))
    index = int(np.argmax(probabilities))
    value = lookup[index] if lookup is not None else index
    return value, float(probabilities[index])


def _encoding_flags(op: QubitOperator) -> bool:
    return op.locality_tag == NONLOCAL


@lru_cache(maxsize=None)
def _ghz_lookup() -> tuple[int, ...]:
    """ghz_class_basis(3) 下标 → 编码表消息 x̃"""
    basis = ghz_class_basis(3)
    lookup = [-1] * 8
    for x, state in enumerate(ghz_dense_states()):
        index = basis.index_of(state)
        if index is None:
            raise UsageError(f"编码表消息 {x:03b} 的编码态不在 GHZ 类完备集中")
        lookup[index] = x
    if -1 in lookup:
        raise UsageError("编码表没有覆盖 GHZ 类完备集的全部元素")
    return tuple(lookup)


# [外部-紧致方案] =========================================================================================================
def dense_code_tight(message: BitString | str) -> DenseCodingResult:
    """发送方对 Ω 的第 2 个比特作用 U_x，接收方做 Bell 测量"""
    bits = _as_message(message, 2)
    op = signed_pauli(tight_dense_encoding()[bits.value], 2)
    encoded = apply_operator(op, ghz_state(2))
    value, probability = _decode(encoded, bell_basis())
    return DenseCodingResult(bits, BitString.from_int(value, 2), probability, encoded, (2,),
                             _encoding_flags(op), "bell")


# [外部-GHZ 方案] =========================================================================================================
def ghz_encoding_operator(message: BitString | str) -> QubitOperator:
    """编码表中的 1⊗B_x⊗C_x"""
    return dense_ghz_operators()[_as_message(message, 3).value]


def dense_code_ghz(message: BitString | str) -> DenseCodingResult:
    bits = _as_message(message, 3)
    op = ghz_encoding_operator(bits)
    encoded = apply_operator(op, ghz_state(3))
    value, probability = _decode(encoded, ghz_class_basis(3), _ghz_lookup())
    return DenseCodingResult(bits, BitString.from_int(value, 3), probability, encoded, (2, 3),
                             _encoding_flags(op), "ghz_class(3)")


def conversion_operator() -> QubitOperator:
    """H_B·C_BC（C_BC 先作用）"""
    return disentangle_op(2).on((2, 3))


def dense_code_ghz_converted(message: BitString | str) -> DenseCodingResult:
    """
    编码后追加 H_B C_BC，使编码态变为"一个独立比特 + 一对最大纠缠"的直积形式。
    追加步骤同时作用于 B 与 C，编码因此是非局域的。
    """
    bits = _as_message(message, 3)
    op = compose([conversion_operator(), ghz_encoding_operator(bits)], 3, label=f"H_B·C_BC·D_{bits}")
    encoded = apply_operator(op, ghz_state(3))
    basis = converted_dense_basis()
    value, probability = _decode(encoded, basis)
    entropies = ", ".join(f"{s:.6f}" for s in single_qubit_entropies(encoded))
    return DenseCodingResult(bits, BitString.from_int(value, 3), probability, encoded, (2, 3),
                             _encoding_flags(op), basis.label,
                             notes=(f"single-qubit entropies of the encoded state: ({entropies})",))


def epr_ancilla_channel() -> StateVector:
    """Φ⁺_AB ⊗ |0⟩_C"""
    return tensor(ghz_state(2), basis_state("0"))


def dense_code_ghz_from_epr(message: BitString | str) -> DenseCodingResult:
    """信道从 Φ⁺⊗|0⟩ 出发，每个编码算符先作用 C_BC，把 GHZ 的制备并入编码"""
    bits = _as_message(message, 3)
    op = compose([ghz_encoding_operator(bits), cnot(2, 3)], 3, label=f"U_{bits}·C_BC")
    encoded = apply_operator(op, epr_ancilla_channel())
    value, probability = _decode(encoded, ghz_class_basis(3), _ghz_lookup())
    return DenseCodingResult(bits, BitString.from_int(value, 3), probability, encoded, (2, 3),
                             _encoding_flags(op), "ghz_class(3)",
                             notes=("channel prepared from an EPR pair and an ancilla",))


# [外部-N 比特推广] =======================================================================================================
def dense_code_nparty(message: BitString | str, N: int | None = None) -> DenseCodingResult:
    """Ω(N) 上作用 generating_operator(message)，在 ghz_class_basis(N) 中解码"""
    bits = BitString.from_str(message) if isinstance(message, str) else message
    N = len(bits) if N is None else N
    if N < 2 or N > settings.density_max_qubits:
        raise UsageError(f"dense_code_nparty 要求 2 ≤ N ≤ {settings.density_max_qubits}，收到 {N}")
    bits = _as_message(bits, N)
    op = generating_operator(bits)
    encoded = apply_operator(op, ghz_state(N))
    value, probability = _decode(encoded, ghz_class_basis(N))
    return DenseCodingResult(bits, BitString.from_int(value, N), probability, encoded, tuple(range(2, N + 1)),
                             _encoding_flags(op), f"ghz_class({N})")


# [外部-Ent/Den 修改方案] =================================================================================================
def modified_channel(N: int, k: int) -> StateVector:
    """(N−k) 比特 GHZ 类纠缠块 ⊗ k 个处于 |0⟩ 的独立比特"""
    if k == 0:
        return ghz_state(N)
    return tensor(ghz_state(N - k), basis_state("0" * k))


def modified_encoding_operator(N: int, k: int, n: int, message: BitString) -> QubitOperator:
    """
    Den(n)·U_x·Ent_ladder(k+1)。
    Ent_ladder 是不含 H 的 Ent 变体，作用在 (纠缠块最后一个比特, k 个独立比特) 上，把独立比特并入纠缠块；
    Den 作用在最后 n 个比特上，n = N 时覆盖整个寄存器。
    """
    steps: list[QubitOperator] = []
    if n > 0:
        steps.append(disentangle_op(n).on(tuple(range(N - n + 1, N + 1))))
    steps.append(generating_operator(message))
    if k > 0:
        steps.append(entangle_op(k + 1, hadamard_first=False).on(tuple(range(N - k, N + 1))))
    return compose(steps, N, label=f"Den({n})·U_{message}·Ent_ladder({k + 1})")


@lru_cache(maxsize=None)
def modified_decoder_basis(N: int, n: int) -> ProjectiveBasis:
    """ghz_class_basis(N) 经 Den(n) 变换后的基"""
    basis = ghz_class_basis(N)
    if n == 0:
        return basis
    den = disentangle_op(n).on(tuple(range(N - n + 1, N + 1)))
    return basis.transformed(den, f"Den({n})·ghz_class({N})")


def modified_dense_scheme(N: int, k: int, n: int, message: BitString | str) -> DenseCodingResult:
    """
    信道含 k 个独立比特，编码算符替换为 Den(n)·U_x·Ent_ladder(k+1)，要求 n = 0 或 2 ≤ n ≤ N。
    k = n = 0 时退化为 dense_code_nparty。GHZ 情形 N=3, k=1：n=2 时 Den(2) = H_B C_BC；
    n=3 时 Den(3) 作用在全部三个比特上，被操作比特包含比特 1。
    """
    # [step1] 宽度检查
    if N < 2 or N > settings.density_max_qubits:
        raise UsageError(f"modified_dense_scheme 要求 2 ≤ N ≤ {settings.density_max_qubits}，收到 {N}")
    if k < 0 or N - k < 2:
        raise UsageError(f"纠缠块至少需要 2 个比特: N={N}, k={k}")
    if n == 1 or n < 0 or n > N:
        raise UsageError(f"Den(n) 的宽度必须为 0 或 2..{N}，收到 {n}")
    bits = _as_message(message, N)

    # [step2] 编码
    op = modified_encoding_operator(N, k, n, bits)
    encoded = apply_operator(op, modified_channel(N, k))

    # [step3] 在 Den(n) 变换后的基中解码
    basis = modified_decoder_basis(N, n)
    value, probability = _decode(encoded, basis)
    manipulated = tuple(range(1 if n == N else 2, N + 1))
    log_debug(f"[Dense] modified N={N} k={k} n={n}: {bits} → {value:0{N}b}")
    return DenseCodingResult(bits, BitString.from_int(value, N), probability, encoded, manipulated,
                             _encoding_flags(op), basis.label)


# [外部-传输表不完备] =====================================================================================================
def teleport_set_gram_rank(tol: float = 1e-8) -> int:
    """由 GHZ 传输修正表 (B_x, C_x) 生成的八个态的 Gram 矩阵秩（小于 8 表示不是完备集）"""
    vectors = np.stack([s.amplitudes for s in teleport_table_states()])
    gram = vectors.conj() @ vectors.T
    return int(np.linalg.matrix_rank(gram, tol=tol))


# [外部-批量往返] =========================================================================================================
def all_messages(N: int) -> list[BitString]:
    return [BitString.from_int(x, N) for x in range(2 ** N)]
