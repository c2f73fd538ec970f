"""
模块名称: Measurement Bases (测量基构造与校验)

功能描述:

    构造并校验协议使用的测量基：Bell 基、GHZ 类完备纠缠集 Φ_{b₁…b_N}(N)、
    π±⊗Bell 直积基及其 N 方推广 (π±)^⊗(N−2)⊗Bell，以及稠密编码态到传输基的转换。

设计理念:

    1.  **构造即校验**: `ProjectiveBasis` 构造时检查 Gram 矩阵等于单位阵，非正交或不完备的集合无法被创建。
    2.  **比特串下标**: 基元素按比特串数值编号，b₁ 为最高位。
    3.  **表驱动**: 稠密编码表 (B_x, C_x) 来自 `config/protocol_tables.yaml`。

索引约定:

    - bell_basis: x = 0..3 依次为 Φ⁺, Ψ⁺, Φ⁻, Ψ⁻，与 ghz_class_basis(2) 逐元素相同。
    - teleport_basis_ghz: x = 0..7 依次为 π⁺Φ⁺, π⁺Φ⁻, π⁻Φ⁺, π⁻Φ⁻, π⁺Ψ⁺, π⁺Ψ⁻, π⁻Ψ⁺, π⁻Ψ⁻。
    - nparty_teleport_basis(N): 高 N−2 位为 π 的符号位 (0 表示 +)，低两位为 Bell 下标。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass, field                               # 数据类
from functools import cached_property, lru_cache                       # 缓存：基只构造一次
from itertools import product                                          # 笛卡尔积：枚举符号位
from typing import Optional, Sequence                                  # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import StateVector, basis_state, tensor              # 态矢量
from src.core.gates import (                                           # 算符库
    QubitOperator,
    PAULI_MATRICES,
    apply_operator,
    cnot,
    compose,
    hadamard,
    product_operator,
    validate_arity,
)
from src.services.logging import log_debug                             # 统一日志服务
from src.utils.errors import InvalidStateError, UsageError             # 异常层次

_SQRT2 = np.sqrt(2.0)


# [定义类] ##############################################################################################################
# [比特串] ===============================================================================================================
@dataclass(frozen=True)
class BitString:
    """有序比特 b₁…b_N，数值 x = Σ b_k·2^{N−k}"""
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise UsageError(f"比特只能为 0 或 1: {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if length < 0 or value < 0 or value >= 2 ** length:
            raise UsageError(f"数值 {value} 无法用 {length} 个比特表示")
        return cls(tuple((value >> (length - 1 - k)) & 1 for k in range(length)))

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or any(c not in "01" for c in text):
            raise UsageError(f"非法比特串: {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def value(self) -> int:
        result = 0
        for b in self.bits:
            result = (result << 1) | b
        return result

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


# [投影测量基] ===========================================================================================================
@dataclass(frozen=True, eq=False)
class ProjectiveBasis:
    """N 比特正交归一完备基，elements[x] 对应结果 x"""
    label: str
    num_qubits: int
    elements: tuple[StateVector, ...] = field(repr=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(elements) != 2 ** self.num_qubits:
            raise UsageError(f"基 {self.label} 元素数 {len(elements)} 不等于 2^{self.num_qubits}")
        if any(e.num_qubits != self.num_qubits for e in elements):
            raise UsageError(f"基 {self.label} 的元素比特数不一致")
        object.__setattr__(self, "elements", elements)
        # 方阵 V 的行正交归一即完备
        gram = self.vectors.conj() @ self.vectors.T
        deviation = float(np.max(np.abs(gram - np.eye(len(elements)))))
        if deviation > settings.tolerance:
            raise InvalidStateError(f"基 {self.label} 不是正交归一集 (偏差 {deviation:.3e})")

    @cached_property
    def vectors(self) -> np.ndarray:
        """行向量矩阵 V，V[x] 为第 x 个元素的振幅"""
        stacked = np.stack([e.amplitudes for e in self.elements])
        stacked.setflags(write=False)
        return stacked

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, x: int | BitString) -> StateVector:
        index = x.value if isinstance(x, BitString) else int(x)
        return self.elements[index]

    def completeness_residual(self) -> float:
        """‖Σ_x |Φ_x⟩⟨Φ_x| − I‖_max"""
        total = self.vectors.T @ self.vectors.conj()
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))

    def index_of(self, psi: StateVector, tol: Optional[float] = None) -> Optional[int]:
        """按全局相位比较查找 psi 在基中的下标，找不到返回 None"""
        tol = settings.tolerance if tol is None else tol
        if psi.num_qubits != self.num_qubits:
            return None
        overlaps = np.abs(self.vectors.conj() @ psi.amplitudes) ** 2
        best = int(np.argmax(overlaps))
        return best if abs(overlaps[best] - 1.0) <= tol else None

    def transformed(self, op: QubitOperator, label: str) -> "ProjectiveBasis":
        """酉变换后的基 {U|Φ_x⟩}"""
        return ProjectiveBasis(label, self.num_qubits, tuple(apply_operator(op, e) for e in self.elements))


# [定义函数] ############################################################################################################
# [内部-单比特态] =========================================================================================================
def pi_state(sign: int) -> StateVector:
    """π± = (|0⟩ ± |1⟩)/√2，sign=0 表示 +"""
    return StateVector(1, np.array([1.0, -1.0 if sign else 1.0]) / _SQRT2)


# [外部-GHZ 态] ===========================================================================================================
def ghz_state(N: int) -> StateVector:
    """Ω(N) = (|0…0⟩ + |1…1⟩)/√2"""
    if N < 1:
        raise UsageError(f"GHZ 态至少需要 1 个比特，收到 {N}")
    amps = np.zeros(2 ** N, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / _SQRT2
    return StateVector(N, amps)


# [外部-GHZ 类完备集] =====================================================================================================
def ghz_class_element(bits: BitString) -> StateVector:
    """(|0⟩⊗|b₂…b_N⟩ + (−1)^{b₁}|1⟩⊗|b̄₂…b̄_N⟩)/√2"""
    N = len(bits)
    tail = bits.bits[1:]
    low = int("".join(str(b) for b in (0,) + tail), 2)
    high = int("".join(str(b) for b in (1,) + tuple(1 - b for b in tail)), 2)
    amps = np.zeros(2 ** N, dtype=np.complex128)
    amps[low] = 1 / _SQRT2
    amps[high] = (-1) ** bits.bits[0] / _SQRT2
    return StateVector(N, amps)


@lru_cache(maxsize=None)
def ghz_class_basis(N: int) -> ProjectiveBasis:
    """N 比特最大纠缠完备集，元素 0…0 即 Ω(N)"""
    if N < 2 or N > settings.ghz_basis_max_qubits:
        raise UsageError(f"ghz_class_basis 要求 2 ≤ N ≤ {settings.ghz_basis_max_qubits}，收到 {N}")
    check_family_arity(N, N - 1)
    elements = tuple(ghz_class_element(BitString.from_int(x, N)) for x in range(2 ** N))
    log_debug(f"[Bases] 构造 GHZ 类完备集 N={N}")
    return ProjectiveBasis(f"ghz_class({N})", N, elements)


@lru_cache(maxsize=None)
def bell_basis() -> ProjectiveBasis:
    """Φ⁺, Ψ⁺, Φ⁻, Ψ⁻"""
    return ProjectiveBasis("bell", 2, ghz_class_basis(2).elements)


# [外部-生成算符] =========================================================================================================
def check_family_arity(N: int, m: int) -> None:
    """登记 N 比特基的生成算符族前检查元数 m ≥ N/2，不满足时无法张成 2^N 个正交态"""
    if not validate_arity(N, m):
        raise UsageError(f"{m} 元算符族不足以生成 N={N} 的完备纠缠集 (需要 m ≥ N/2)")


def generating_operator(bits: BitString) -> QubitOperator:
    """
    U_{b₁…b_N}(N−1) = σ_x^{b₂}σ_z^{b₁} ⊗ σ_x^{b₃} ⊗ … ⊗ σ_x^{b_N}，作用在比特 2…N 上。
    满足 (1 ⊗ U)Ω = ghz_class_basis(N)[bits]。
    """
    N = len(bits)
    if N < 2:
        raise UsageError(f"generating_operator 要求 N ≥ 2，收到 {N}")
    check_family_arity(N, N - 1)
    b = bits.bits
    x, z, eye = PAULI_MATRICES["X"], PAULI_MATRICES["Z"], PAULI_MATRICES["I"]
    first = (x if b[1] else eye) @ (z if b[0] else eye)
    rest = [x if bit else eye for bit in b[2:]]
    return QubitOperator.from_factors([first] + rest, range(2, N + 1), f"U_{bits}")


# [外部-单比特与计算基] ===================================================================================================
@lru_cache(maxsize=None)
def pi_basis() -> ProjectiveBasis:
    return ProjectiveBasis("pi", 1, (pi_state(0), pi_state(1)))


@lru_cache(maxsize=None)
def computational_basis(N: int) -> ProjectiveBasis:
    if N < 1 or N > settings.ghz_basis_max_qubits:
        raise UsageError(f"computational_basis 要求 1 ≤ N ≤ {settings.ghz_basis_max_qubits}，收到 {N}")
    elements = tuple(basis_state(format(x, f"0{N}b")) for x in range(2 ** N))
    return ProjectiveBasis(f"computational({N})", N, elements)


# [外部-直积基] ===========================================================================================================
def product_basis(first: ProjectiveBasis, second: ProjectiveBasis, label: str) -> ProjectiveBasis:
    """first ⊗ second，下标 x = x₁·|second| + x₂"""
    elements = tuple(tensor(a, b) for a in first.elements for b in second.elements)
    return ProjectiveBasis(label, first.num_qubits + second.num_qubits, elements)


@lru_cache(maxsize=None)
def teleport_basis_ghz() -> ProjectiveBasis:
    """GHZ 传输测量基 {π±₁ ⊗ Φ±₂A, π±₁ ⊗ Ψ±₂A}，顺序见模块说明"""
    bell = bell_basis()
    phi_plus, psi_plus, phi_minus, psi_minus = bell.elements
    order = [
        (0, phi_plus), (0, phi_minus), (1, phi_plus), (1, phi_minus),
        (0, psi_plus), (0, psi_minus), (1, psi_plus), (1, psi_minus),
    ]
    elements = tuple(tensor(pi_state(sign), pair) for sign, pair in order)
    return ProjectiveBasis("teleport_ghz", 3, elements)


@lru_cache(maxsize=None)
def nparty_teleport_basis(N: int) -> ProjectiveBasis:
    """(π^{s₁}⊗…⊗π^{s_{N−2}}) ⊗ Bell，下标 = (符号位 << 2) | Bell 下标"""
    if N < 3 or N > settings.ghz_basis_max_qubits:
        raise UsageError(f"nparty_teleport_basis 要求 3 ≤ N ≤ {settings.ghz_basis_max_qubits}，收到 {N}")
    bell = bell_basis()
    elements = []
    for signs in product((0, 1), repeat=N - 2):
        prefix = pi_state(signs[0])
        for sign in signs[1:]:
            prefix = tensor(prefix, pi_state(sign))
        elements.extend(tensor(prefix, pair) for pair in bell.elements)
    return ProjectiveBasis(f"nparty_teleport({N})", N, tuple(elements))


# [外部-稠密编码态] =======================================================================================================
def ghz_dense_states() -> list[StateVector]:
    """按稠密编码表 x̃ = 000…111 生成 D_x = (1⊗B_x⊗C_x)|GHZ⟩"""
    from src.protocols.tables import dense_ghz_operators  # 延迟导入，避免循环依赖

    ghz = ghz_state(3)
    return [apply_operator(op, ghz) for op in dense_ghz_operators()]


def _conversion_operator() -> QubitOperator:
    """H_B·C_BC（C_BC 先作用）"""
    return compose([hadamard(2), cnot(2, 3)], 3, label="H_B·C_BC")


def convert_dense_to_teleport(x: BitString) -> StateVector:
    """H_B C_BC D_x"""
    if len(x) != 3:
        raise UsageError(f"convert_dense_to_teleport 只适用于 3 比特消息，收到 {x}")
    return apply_operator(_conversion_operator(), ghz_dense_states()[x.value])


@lru_cache(maxsize=None)
def converted_dense_basis() -> ProjectiveBasis:
    """{H_B C_BC D_x}，作为转换后稠密编码的解码基"""
    elements = tuple(convert_dense_to_teleport(BitString.from_int(x, 3)) for x in range(8))
    return ProjectiveBasis("converted_dense", 3, elements)


def teleport_table_states() -> list[StateVector]:
    """用 GHZ 传输表的修正算符 (B_x, C_x) 作用于 |GHZ⟩ 得到的八个态"""
    from src.protocols.tables import teleport_ghz_corrections

    ghz = ghz_state(3)
    states = []
    for labels in teleport_ghz_corrections():
        op = product_operator(["I", labels[0], labels[1]], [1, 2, 3])
        states.append(apply_operator(op, ghz))
    return states


def basis_from_states(states: Sequence[StateVector], label: str) -> ProjectiveBasis:
    if not states:
        raise UsageError("空的态集合")
    return ProjectiveBasis(label, states[0].num_qubits, tuple(states))


def basis_from_generators(generators: Sequence[QubitOperator], N: int, label: str) -> ProjectiveBasis:
    """
    以 Ω(N) 为参考态登记一族生成算符：第 x 个元素为 generators[x]·Ω。
    算符族的元数取各算符作用比特数的最大值，先经 check_family_arity 检查，再由 ProjectiveBasis 校验正交完备。
    """
    if len(generators) != 2 ** N:
        raise UsageError(f"N={N} 需要 {2 ** N} 个生成算符，收到 {len(generators)}")
    check_family_arity(N, max(op.arity for op in generators))
    omega = ghz_state(N)
    return ProjectiveBasis(label, N, tuple(apply_operator(op, omega) for op in generators))
