"""
模块名称: Gate Library (量子门算符库)

功能描述:

    提供协议使用的全部酉算符：Pauli 族、Hadamard、CNOT、CNOT 阶梯，以及纠缠/解纠缠变换 Ent(k)/Den(k)。
    支持算符在 N 比特寄存器中的嵌入、复合与作用。

设计理念:

    1.  **局域性标签**: 每个算符在构造时被标记为 local-single / factorized / nonlocal，
        协议引擎据此判断一次修正是否属于 LOCC。
    2.  **因子化存储**: 可分解的算符按比特保存 2×2 因子，作用时逐比特进行，矩阵只在需要时惰性生成。
    3.  **精确比较**: 算符按矩阵精确比较（区分 −iσ_y 与 iσ_y），态则按全局相位比较。

线程安全性:

    - 算符对象不可变；惰性矩阵通过 `cached_property` 缓存，重复计算结果相同，不影响正确性。

依赖关系:

    - `numpy`: 矩阵运算与 SVD。
    - `src.core.qla`: 按比特作用矩阵。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass, field                               # 数据类：不可变算符
from functools import cached_property, reduce                          # 惰性矩阵与因子连乘
from typing import Optional, Sequence                                  # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import (                                             # 线性代数层
    DensityMatrix,
    StateVector,
    apply_matrix,
    apply_matrix_batch,
    apply_matrix_density,
)
from src.utils.errors import InvalidStateError, UsageError             # 异常层次

# [创建全局变量] =========================================================================================================
LOCAL_SINGLE = "local-single"
FACTORIZED = "factorized"
NONLOCAL = "nonlocal"

_SQRT2 = np.sqrt(2.0)

# σ_y = i σ_x σ_z
PAULI_MATRICES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "minus_iY": np.array([[0, -1], [1, 0]], dtype=np.complex128),
    "iY": np.array([[0, 1], [-1, 0]], dtype=np.complex128),
}

HADAMARD_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2

CNOT_MATRIX = np.array([[1, 0, 0, 0],
                        [0, 1, 0, 0],
                        [0, 0, 0, 1],
                        [0, 0, 1, 0]], dtype=np.complex128)


# [定义类] ##############################################################################################################
# [量子比特算符] =========================================================================================================
@dataclass(frozen=True, eq=False)
class QubitOperator:
    """
    作用在有序比特子集 targets 上的酉算符。

    二选一提供：
      - dense: 完整的 2^m×2^m 矩阵，构造时检查酉性并计算局域性标签；
      - factors: 每个目标比特一个 2×2 因子，标签直接为 local-single / factorized。
    """
    targets: tuple[int, ...]
    label: str = ""
    dense: Optional[np.ndarray] = field(default=None, repr=False)
    factors: Optional[tuple[np.ndarray, ...]] = field(default=None, repr=False)
    locality_tag: str = field(init=False)

    def __post_init__(self):
        # [step1] 目标比特检查
        targets = tuple(int(t) for t in self.targets)
        if not targets:
            raise UsageError("算符至少作用在一个比特上")
        if any(t < 1 for t in targets):
            raise UsageError(f"比特下标必须从 1 开始: {targets}")
        if len(set(targets)) != len(targets):
            raise UsageError(f"目标比特重复: {targets}")
        object.__setattr__(self, "targets", targets)
        m = len(targets)

        if (self.dense is None) == (self.factors is None):
            raise UsageError("QubitOperator 需要且只需要 dense 或 factors 之一")

        # [step2] 因子形式：逐个检查 2×2 酉性
        if self.factors is not None:
            if len(self.factors) != m:
                raise UsageError(f"因子个数 {len(self.factors)} 与目标比特数 {m} 不符")
            factors = tuple(_checked_unitary(np.asarray(f, dtype=np.complex128), 1) for f in self.factors)
            object.__setattr__(self, "factors", factors)
            object.__setattr__(self, "locality_tag", LOCAL_SINGLE if m == 1 else FACTORIZED)
            return

        # [step3] 稠密形式：检查规模与酉性，再判断可分解性
        if m > settings.operator_max_qubits:
            raise UsageError(f"稠密算符比特数 {m} 超过上限 {settings.operator_max_qubits}")
        matrix = _checked_unitary(np.asarray(self.dense, dtype=np.complex128), m)
        matrix.setflags(write=False)
        object.__setattr__(self, "dense", matrix)
        if m == 1:
            tag = LOCAL_SINGLE
        elif is_factorizable(matrix, m):
            tag = FACTORIZED
        else:
            tag = NONLOCAL
        object.__setattr__(self, "locality_tag", tag)

    # ========== 构造器 ==========
    @classmethod
    def from_matrix(cls, matrix: np.ndarray, targets: Sequence[int], label: str = "") -> "QubitOperator":
        return cls(targets=tuple(targets), label=label, dense=np.asarray(matrix))

    @classmethod
    def from_factors(cls, factors: Sequence[np.ndarray], targets: Sequence[int], label: str = "") -> "QubitOperator":
        return cls(targets=tuple(targets), label=label, factors=tuple(factors))

    # ========== 属性 ==========
    @property
    def arity(self) -> int:
        return len(self.targets)

    @cached_property
    def matrix(self) -> np.ndarray:
        """完整矩阵（比特顺序与 targets 一致）"""
        if self.dense is not None:
            return self.dense
        full = reduce(np.kron, self.factors)
        full.setflags(write=False)
        return full

    # ========== 变换 ==========
    def on(self, targets: Sequence[int]) -> "QubitOperator":
        """同一矩阵换到另一组目标比特上"""
        if len(targets) != self.arity:
            raise UsageError(f"新目标比特数 {len(targets)} 与算符元数 {self.arity} 不符")
        if self.factors is not None:
            return QubitOperator.from_factors(self.factors, targets, self.label)
        return QubitOperator.from_matrix(self.dense, targets, self.label)

    def dagger(self) -> "QubitOperator":
        label = f"({self.label})†" if self.label else ""
        if self.factors is not None:
            return QubitOperator.from_factors([f.conj().T for f in self.factors], self.targets, label)
        return QubitOperator.from_matrix(self.dense.conj().T, self.targets, label)

    def local_factors(self) -> list["QubitOperator"]:
        """拆成单比特算符，仅对因子形式有效"""
        if self.factors is None:
            raise UsageError(f"算符 {self.label or self.targets} 不是因子形式")
        return [QubitOperator.from_factors([f], [t], _factor_label(f)) for f, t in zip(self.factors, self.targets)]

    def equals(self, other: "QubitOperator", tol: Optional[float] = None) -> bool:
        """矩阵精确相等（不忽略相位），要求目标比特一致"""
        tol = settings.tolerance if tol is None else tol
        return self.targets == other.targets and np.max(np.abs(self.matrix - other.matrix)) <= tol


# [定义函数] ############################################################################################################
# [内部-酉性检查] =========================================================================================================
def _checked_unitary(matrix: np.ndarray, m: int) -> np.ndarray:
    dim = 2 ** m
    if matrix.shape != (dim, dim):
        raise UsageError(f"算符形状 {matrix.shape} 与 ({dim}, {dim}) 不符")
    if not np.all(np.isfinite(matrix)):
        raise InvalidStateError("算符中存在 NaN 或 Inf")
    if np.max(np.abs(matrix @ matrix.conj().T - np.eye(dim))) > settings.tolerance:
        raise InvalidStateError("算符不是酉矩阵")
    return matrix.copy()


def _factor_label(factor: np.ndarray) -> str:
    for name, matrix in PAULI_MATRICES.items():
        if np.allclose(factor, matrix, atol=settings.tolerance):
            return name
        if np.allclose(factor, -matrix, atol=settings.tolerance):
            return f"-{name}"
    if np.allclose(factor, HADAMARD_MATRIX, atol=settings.tolerance):
        return "H"
    return "U"


# [外部-可分解性判定] =====================================================================================================
def is_factorizable(matrix: np.ndarray, m: int, tol: Optional[float] = None) -> bool:
    """
    判断 m 比特矩阵是否为单比特矩阵的张量积。
    对每个"单比特 | 其余"的切分做重排 (realignment)，检查算符 Schmidt 秩是否为 1。
    """
    tol = settings.factorization_tolerance if tol is None else tol
    view = np.asarray(matrix).reshape([2] * (2 * m))
    for k in range(m):
        others = [i for i in range(m) if i != k]
        perm = [k, m + k] + others + [m + i for i in others]
        realigned = np.transpose(view, perm).reshape(4, 4 ** (m - 1))
        singular_values = np.linalg.svd(realigned, compute_uv=False)
        if singular_values.size > 1 and singular_values[1] > tol * max(singular_values[0], 1.0):
            return False
    return True


# [外部-基本门] ===========================================================================================================
def pauli(which: str, target: int = 1) -> QubitOperator:
    """
    Pauli 族单比特算符：I, X, Y, Z, minus_iY (= σ_xσ_z), iY。
    """
    if which not in PAULI_MATRICES:
        raise UsageError(f"未知 Pauli 算符: {which}")
    return QubitOperator.from_factors([PAULI_MATRICES[which]], [target], which)


def signed_pauli(label: str, target: int = 1) -> QubitOperator:
    """带符号的 Pauli 标签，例如协议表中的 "-X" """
    sign = 1.0
    name = label.strip()
    if name.startswith("-") and name[1:] in PAULI_MATRICES:
        sign, name = -1.0, name[1:]
    if name not in PAULI_MATRICES:
        raise UsageError(f"未知 Pauli 标签: {label}")
    return QubitOperator.from_factors([sign * PAULI_MATRICES[name]], [target], label.strip())


def identity(targets: Sequence[int] = (1,)) -> QubitOperator:
    return QubitOperator.from_factors([PAULI_MATRICES["I"]] * len(targets), targets, "I")


def hadamard(target: int = 1) -> QubitOperator:
    return QubitOperator.from_factors([HADAMARD_MATRIX], [target], "H")


def cnot(control: int, target: int) -> QubitOperator:
    """C_ct：控制位 control，目标位 target"""
    if control == target:
        raise UsageError(f"CNOT 的控制位与目标位相同: {control}")
    return QubitOperator.from_matrix(CNOT_MATRIX, [control, target], f"C{control}{target}")


def product_operator(labels: Sequence[str], targets: Sequence[int], label: str = "") -> QubitOperator:
    """由带符号 Pauli 标签列表组成的直积算符"""
    if len(labels) != len(targets):
        raise UsageError(f"标签数 {len(labels)} 与目标比特数 {len(targets)} 不符")
    factors = [signed_pauli(name).factors[0] for name in labels]
    return QubitOperator.from_factors(factors, targets, label or "⊗".join(labels))


# [外部-作用算符] =========================================================================================================
def apply_operator(op: QubitOperator, state: StateVector | DensityMatrix) -> StateVector | DensityMatrix:
    """
    把算符作用到纯态或密度矩阵上。
    因子形式逐比特作用；稠密形式一次作用在 targets 上。
    """
    if max(op.targets) > state.num_qubits:
        raise UsageError(f"算符目标 {op.targets} 超出寄存器大小 {state.num_qubits}")
    apply = apply_matrix_density if isinstance(state, DensityMatrix) else apply_matrix
    if op.factors is not None:
        for factor, target in zip(op.factors, op.targets):
            state = apply(state, factor, [target])
        return state
    return apply(state, op.dense, op.targets)


# [外部-嵌入] =============================================================================================================
def embed(op: QubitOperator, register_size: int) -> QubitOperator:
    """
    把算符嵌入 N 比特寄存器：目标比特上作用 op，其余为恒等，结果的 targets 为 (1..N)。
    """
    if max(op.targets) > register_size:
        raise UsageError(f"算符目标 {op.targets} 超出寄存器大小 {register_size}")
    register = tuple(range(1, register_size + 1))

    # [step1] 因子形式：直接补恒等因子
    if op.factors is not None:
        by_qubit = dict(zip(op.targets, op.factors))
        factors = [by_qubit.get(q, PAULI_MATRICES["I"]) for q in register]
        return QubitOperator.from_factors(factors, register, op.label)

    # [step2] 稠密形式：把矩阵作用到单位阵的每一列
    dim = 2 ** register_size
    if register_size > settings.operator_max_qubits:
        raise UsageError(f"嵌入寄存器 {register_size} 超过上限 {settings.operator_max_qubits}")
    full = apply_matrix_batch(np.eye(dim, dtype=np.complex128), op.dense, op.targets, register_size)
    return QubitOperator.from_matrix(full, register, op.label)


# [外部-复合] =============================================================================================================
def compose(ops: Sequence[QubitOperator], register_size: int, label: str = "") -> QubitOperator:
    """
    ops[0]·ops[1]·…·ops[-1]：最后一个算符最先作用。
    全部为因子形式时逐比特相乘，结果仍为因子形式。
    """
    if not ops:
        return identity(tuple(range(1, register_size + 1)))
    label = label or "·".join(op.label or "U" for op in ops)
    embedded = [embed(op, register_size) for op in ops]
    register = tuple(range(1, register_size + 1))

    if all(op.factors is not None for op in embedded):
        factors = [reduce(np.matmul, [op.factors[i] for op in embedded]) for i in range(register_size)]
        return QubitOperator.from_factors(factors, register, label)

    dim = 2 ** register_size
    columns = np.eye(dim, dtype=np.complex128)
    for op in reversed(ops):
        if op.factors is not None:
            for factor, target in zip(op.factors, op.targets):
                columns = apply_matrix_batch(columns, factor, [target], register_size)
        else:
            columns = apply_matrix_batch(columns, op.dense, op.targets, register_size)
    return QubitOperator.from_matrix(columns, register, label)


# [外部-CNOT 阶梯] ========================================================================================================
def cnot_ladder(qubits: Sequence[int]) -> QubitOperator:
    """
    C_{q1q2} 先作用，然后 C_{q2q3}，依此类推。
    结果的 targets 与 qubits 相同。
    """
    qubits = tuple(qubits)
    if len(qubits) < 2:
        raise UsageError(f"CNOT 阶梯至少需要两个比特: {qubits}")
    width = len(qubits)
    steps = [cnot(i, i + 1) for i in range(1, width)]
    ladder = compose(list(reversed(steps)), width, label=f"Ladder{qubits}")
    return ladder.on(qubits)


# [外部-纠缠/解纠缠] ======================================================================================================
def entangle_op(k: int, hadamard_first: bool = True) -> QubitOperator:
    """
    Ent(k)：先 H₁ 再 C₁₂, C₂₃, …，把 |0⟩^⊗k 变成 (|0…0⟩+|1…1⟩)/√2。
    hadamard_first=False 得到只含 CNOT 阶梯的并入变体 Ent_ladder(k)：
    比特 1 已属于纠缠块时，把 GHZ(m)⊗|0…0⟩ 扩展为 GHZ(m+k−1)。
    """
    if k < 2:
        raise UsageError(f"Ent(k) 要求 k ≥ 2，收到 {k}")
    ladder = cnot_ladder(range(1, k + 1))
    if not hadamard_first:
        return QubitOperator.from_matrix(ladder.matrix, ladder.targets, label=f"Ent_ladder({k})")
    return compose([ladder, hadamard(1)], k, label=f"Ent({k})")


def disentangle_op(k: int) -> QubitOperator:
    """Den(k) = Ent(k)†：先逆序执行 CNOT 阶梯，最后 H₁"""
    if k < 2:
        raise UsageError(f"Den(k) 要求 k ≥ 2，收到 {k}")
    steps = [cnot(i, i + 1) for i in range(1, k)]
    return compose([hadamard(1)] + steps, k, label=f"Den({k})")


# [外部-元数检查] =========================================================================================================
def validate_arity(N: int, m: int) -> bool:
    """生成 N 比特完备纠缠集所需的算符元数下界：m ≥ N/2"""
    if N < 1 or m < 1 or m > N:
        raise UsageError(f"非法的 (N, m) = ({N}, {m})")
    return 2 * m >= N
