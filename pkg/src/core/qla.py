"""
模块名称: Qubit Linear Algebra (多量子比特线性代数)

功能描述:

    提供纯态与混合态的稠密复数线性代数运算：张量积、偏迹、内积与保真度、投影测量、冯诺依曼熵。
    所有协议模拟都建立在这一层之上。

设计理念:

    1.  **大端序**: 量子比特编号从 1 开始，qubit 1 是基矢下标的最高位，与比特串 b₁b₂…b_N 的读法一致。
    2.  **不可变值**: `StateVector` 与 `DensityMatrix` 构造后只读，运算均返回新对象。
    3.  **张量视图**: 所有按量子比特的操作都先 reshape 成 [2]*N 的张量，再用 tensordot / einsum 完成，避免构造大矩阵。
    4.  **全局相位**: 态的相等性通过保真度判定，忽略全局相位。

线程安全性:

    - 无全局可变状态，所有对象构造后只读，可在线程间自由共享。

依赖关系:

    - `numpy`: 全部数值计算。
    - `src.core.settings`: 容差与比特数上限。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass, field                               # 数据类：不可变的态对象
from typing import NamedTuple, Optional, Sequence                      # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算：稠密复数线性代数
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置：容差与规模上限
from src.utils.errors import (                                         # 异常层次
    DimensionMismatchError,
    InvalidStateError,
    UsageError,
)


# [定义类] ##############################################################################################################
# [纯态] =================================================================================================================
@dataclass(frozen=True, eq=False)
class StateVector:
    """
    N 比特纯态，振幅按大端序排列。
    num_qubits 允许为 0（全部比特被测量后的空寄存器）。
    """
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        # [step1] 规模检查
        if self.num_qubits < 0 or self.num_qubits > settings.statevector_max_qubits:
            raise UsageError(f"态矢量比特数 {self.num_qubits} 超出范围 [0, {settings.statevector_max_qubits}]")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2 ** self.num_qubits:
            raise DimensionMismatchError(f"振幅长度 {amps.shape[0]} 与 2^{self.num_qubits} 不符")
        # [step2] 数值合法性与归一化
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("振幅中存在 NaN 或 Inf")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > settings.tolerance:
            raise InvalidStateError(f"态未归一化: Σ|a|² = {norm_sq:.12g}")
        # [step3] 冻结数组
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "StateVector":
        """根据振幅列表推断比特数并构造纯态"""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        num_qubits = int(round(np.log2(amps.shape[0]))) if amps.shape[0] > 0 else -1
        if num_qubits < 0 or 2 ** num_qubits != amps.shape[0]:
            raise DimensionMismatchError(f"振幅长度 {amps.shape[0]} 不是 2 的幂")
        return cls(num_qubits, amps)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "StateVector":
        """先归一化再构造，零向量视为非法"""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm < settings.zero_probability_cutoff:
            raise InvalidStateError("零向量无法归一化")
        return cls.from_amplitudes(amps / norm)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.num_qubits)


# [混合态] ===============================================================================================================
@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    N 比特密度矩阵：厄米、迹为 1、半正定。
    check_psd=False 时跳过特征值检查，仅用于构造上必然半正定的矩阵（如纯态外积）。
    """
    num_qubits: int
    entries: np.ndarray = field(repr=False)
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        # [step1] 规模检查
        if self.num_qubits < 0 or self.num_qubits > settings.density_max_qubits:
            raise UsageError(f"密度矩阵比特数 {self.num_qubits} 超出范围 [0, {settings.density_max_qubits}]")
        dim = 2 ** self.num_qubits
        rho = np.array(self.entries, dtype=np.complex128)
        if rho.shape != (dim, dim):
            raise DimensionMismatchError(f"密度矩阵形状 {rho.shape} 与 ({dim}, {dim}) 不符")
        if not np.all(np.isfinite(rho)):
            raise InvalidStateError("密度矩阵中存在 NaN 或 Inf")
        # [step2] 厄米性与迹
        if np.max(np.abs(rho - rho.conj().T)) > settings.tolerance:
            raise InvalidStateError("密度矩阵不是厄米矩阵")
        trace = np.trace(rho).real
        if abs(trace - 1.0) > settings.tolerance:
            raise InvalidStateError(f"密度矩阵迹为 {trace:.12g}")
        # [step3] 半正定
        if self.check_psd and np.min(np.linalg.eigvalsh(rho)) < -settings.tolerance:
            raise InvalidStateError("密度矩阵存在负特征值")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def from_matrix(cls, entries: np.ndarray) -> "DensityMatrix":
        """根据矩阵维度推断比特数"""
        rho = np.asarray(entries, dtype=np.complex128)
        num_qubits = int(round(np.log2(rho.shape[0]))) if rho.ndim == 2 and rho.shape[0] > 0 else -1
        if num_qubits < 0 or 2 ** num_qubits != rho.shape[0]:
            raise DimensionMismatchError(f"矩阵维度 {rho.shape} 不是 2 的幂")
        return cls(num_qubits, rho)

    @classmethod
    def diagonal(cls, weights: Sequence[float]) -> "DensityMatrix":
        """对角混合态，例如 λ₀|0⟩⟨0| + λ₁|1⟩⟨1|"""
        return cls.from_matrix(np.diag(np.asarray(weights, dtype=np.complex128)))


# [投影结果] =============================================================================================================
class Projection(NamedTuple):
    """投影测量的结果：概率与归一化后的剩余态（概率低于截断值时为 None）"""
    probability: float
    residual: Optional[StateVector]


class DensityProjection(NamedTuple):
    probability: float
    residual: Optional[DensityMatrix]


# [定义函数] ############################################################################################################
# [内部-校验比特下标] =====================================================================================================
def _check_qubits(qubits: Sequence[int], num_qubits: int) -> tuple[int, ...]:
    """校验 1 起始的比特下标：范围合法且互不重复"""
    qubits = tuple(int(q) for q in qubits)
    for q in qubits:
        if q < 1 or q > num_qubits:
            raise UsageError(f"量子比特下标 {q} 超出范围 [1, {num_qubits}]")
    if len(set(qubits)) != len(qubits):
        raise UsageError(f"量子比特下标重复: {qubits}")
    return qubits


def _rest_of(qubits: Sequence[int], num_qubits: int) -> tuple[int, ...]:
    chosen = set(qubits)
    return tuple(q for q in range(1, num_qubits + 1) if q not in chosen)


# [外部-计算基矢] =========================================================================================================
def basis_state(bits: str | Sequence[int], num_qubits: Optional[int] = None) -> StateVector:
    """
    构造计算基矢 |b₁b₂…b_N⟩。
    :param bits: 比特串 "010" 或比特列表
    :param num_qubits: 可选，校验长度
    """
    bit_list = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bit_list):
        raise UsageError(f"非法比特串: {bits}")
    if num_qubits is not None and num_qubits != len(bit_list):
        raise DimensionMismatchError(f"比特串长度 {len(bit_list)} 与 {num_qubits} 不符")
    index = int("".join(str(b) for b in bit_list), 2) if bit_list else 0
    amps = np.zeros(2 ** len(bit_list), dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(len(bit_list), amps)


# [外部-张量积] ===========================================================================================================
def tensor(a: StateVector, b: StateVector) -> StateVector:
    """a ⊗ b，a 的比特在前（高位）"""
    return StateVector(a.num_qubits + b.num_qubits, np.kron(a.amplitudes, b.amplitudes))


def tensor_density(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(a.num_qubits + b.num_qubits, np.kron(a.entries, b.entries), check_psd=False)


# [外部-纯态转密度矩阵] ===================================================================================================
def to_density(psi: StateVector) -> DensityMatrix:
    """ρ = |ψ⟩⟨ψ|"""
    return DensityMatrix(psi.num_qubits, np.outer(psi.amplitudes, psi.amplitudes.conj()), check_psd=False)


# [外部-偏迹] =============================================================================================================
def partial_trace(rho: DensityMatrix | StateVector, keep: Sequence[int]) -> DensityMatrix:
    """
    对 keep 以外的比特求偏迹，结果中的比特顺序与 keep 给出的顺序一致。
    :param rho: 密度矩阵，也接受纯态（按 |ψ⟩⟨ψ| 处理但不构造完整外积）
    :param keep: 保留的比特（1 起始，有序）
    """
    if len(keep) == 0:
        raise UsageError("partial_trace 的保留集合不能为空")
    n = rho.num_qubits
    keep = _check_qubits(keep, n)
    rest = _rest_of(keep, n)
    k_dim, r_dim = 2 ** len(keep), 2 ** len(rest)

    # [step1] 纯态：直接由振幅矩阵 M (keep × rest) 得到 M·M†
    if isinstance(rho, StateVector):
        perm = [q - 1 for q in keep] + [q - 1 for q in rest]
        m = np.transpose(rho.as_tensor(), perm).reshape(k_dim, r_dim)
        return DensityMatrix(len(keep), m @ m.conj().T, check_psd=False)

    # [step2] 密度矩阵：行列两组指标同步重排后对 rest 求和
    tensor_view = rho.entries.reshape([2] * (2 * n))
    perm = ([q - 1 for q in keep] + [q - 1 for q in rest]
            + [n + q - 1 for q in keep] + [n + q - 1 for q in rest])
    reshaped = np.transpose(tensor_view, perm).reshape(k_dim, r_dim, k_dim, r_dim)
    reduced = np.einsum("ajbj->ab", reshaped)
    return DensityMatrix(len(keep), reduced, check_psd=False)


# [外部-冯诺依曼熵] =======================================================================================================
def von_neumann_entropy(rho: DensityMatrix) -> float:
    """
    S(ρ) = −Σ λ log₂ λ，约定 0·log 0 = 0。
    接近零的特征值先截断为 0；低于 −1e-8 的特征值视为非法态。
    """
    eigenvalues = np.linalg.eigvalsh(rho.entries)
    if eigenvalues.size and np.min(eigenvalues) < -settings.negative_eigenvalue_limit:
        raise InvalidStateError(f"密度矩阵存在负特征值 {np.min(eigenvalues):.3e}")
    positive = eigenvalues[eigenvalues > settings.entropy_clamp]
    entropy = float(-np.sum(positive * np.log2(positive)))
    return max(entropy, 0.0)


def single_qubit_entropies(state: StateVector | DensityMatrix) -> tuple[float, ...]:
    """每个比特的约化熵，按比特顺序返回"""
    return tuple(von_neumann_entropy(partial_trace(state, [q])) for q in range(1, state.num_qubits + 1))


def is_product_state(psi: StateVector, tol: Optional[float] = None) -> bool:
    """所有单比特约化态都是纯态时，纯态是完全直积态"""
    tol = settings.tolerance if tol is None else tol
    return all(s < tol for s in single_qubit_entropies(psi))


# [外部-保真度] ===========================================================================================================
def fidelity_pure(a: StateVector, b: StateVector) -> float:
    """|⟨a|b⟩|²，与全局相位无关"""
    if a.num_qubits != b.num_qubits:
        raise DimensionMismatchError(f"比特数不一致: {a.num_qubits} vs {b.num_qubits}")
    value = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(value, 1.0))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = np.linalg.eigh(matrix)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    return (vectors * np.sqrt(eigenvalues)) @ vectors.conj().T


def fidelity_mixed(rho: DensityMatrix | StateVector, sigma: DensityMatrix | StateVector) -> float:
    """
    Uhlmann 保真度 (tr √(√ρ σ √ρ))²。
    任一参数为纯态时退化为 ⟨ψ|σ|ψ⟩。
    """
    if rho.num_qubits != sigma.num_qubits:
        raise DimensionMismatchError(f"比特数不一致: {rho.num_qubits} vs {sigma.num_qubits}")
    if isinstance(rho, StateVector) and isinstance(sigma, StateVector):
        return fidelity_pure(rho, sigma)
    if isinstance(rho, StateVector):
        rho, sigma = sigma, rho
    if isinstance(sigma, StateVector):
        psi = sigma.amplitudes
        return float(min(max(np.vdot(psi, rho.entries @ psi).real, 0.0), 1.0))
    root = _psd_sqrt(rho.entries)
    inner = root @ sigma.entries @ root
    eigenvalues = np.clip(np.linalg.eigvalsh((inner + inner.conj().T) / 2), 0.0, None)
    value = float(np.sum(np.sqrt(eigenvalues)) ** 2)
    return min(value, 1.0)


# [外部-投影测量] =========================================================================================================
def project(psi: StateVector, projector_state: StateVector, on_qubits: Sequence[int]) -> Projection:
    """
    用 |φ⟩⟨φ| 投影 on_qubits 上的子系统。
    :return: (概率, 剩余比特上的归一化态)；剩余比特保持原有相对顺序
    """
    on_qubits = _check_qubits(on_qubits, psi.num_qubits)
    if projector_state.num_qubits != len(on_qubits):
        raise DimensionMismatchError(
            f"投影态比特数 {projector_state.num_qubits} 与测量比特数 {len(on_qubits)} 不符")
    rest = _rest_of(on_qubits, psi.num_qubits)

    # [step1] 把被测比特移到最前，得到 (2^m, 2^r) 振幅矩阵
    perm = [q - 1 for q in on_qubits] + [q - 1 for q in rest]
    matrix = np.transpose(psi.as_tensor(), perm).reshape(2 ** len(on_qubits), 2 ** len(rest))

    # [step2] 部分内积
    unnormalized = projector_state.amplitudes.conj() @ matrix
    probability = float(np.vdot(unnormalized, unnormalized).real)
    if probability < settings.zero_probability_cutoff:
        return Projection(probability, None)

    # [step3] 重新归一化
    return Projection(probability, StateVector(len(rest), unnormalized / np.sqrt(probability)))


def project_density(rho: DensityMatrix, projector_state: StateVector, on_qubits: Sequence[int]) -> DensityProjection:
    """密度矩阵版本的投影：p = tr(Pρ)，剩余态 = tr_on(PρP)/p"""
    n = rho.num_qubits
    on_qubits = _check_qubits(on_qubits, n)
    if projector_state.num_qubits != len(on_qubits):
        raise DimensionMismatchError(
            f"投影态比特数 {projector_state.num_qubits} 与测量比特数 {len(on_qubits)} 不符")
    rest = _rest_of(on_qubits, n)
    m_dim, r_dim = 2 ** len(on_qubits), 2 ** len(rest)

    perm = ([q - 1 for q in on_qubits] + [q - 1 for q in rest]
            + [n + q - 1 for q in on_qubits] + [n + q - 1 for q in rest])
    blocks = np.transpose(rho.entries.reshape([2] * (2 * n)), perm).reshape(m_dim, r_dim, m_dim, r_dim)
    phi = projector_state.amplitudes
    unnormalized = np.einsum("a,arbs,b->rs", phi.conj(), blocks, phi)
    probability = float(np.trace(unnormalized).real)
    if probability < settings.zero_probability_cutoff:
        return DensityProjection(probability, None)
    residual = unnormalized / probability
    residual = (residual + residual.conj().T) / 2
    return DensityProjection(probability, DensityMatrix(len(rest), residual))


# [外部-按比特作用矩阵] ===================================================================================================
def apply_matrix(psi: StateVector, matrix: np.ndarray, targets: Sequence[int]) -> StateVector:
    """
    在 targets 上作用 2^m×2^m 矩阵，不构造完整的 2^N 矩阵。
    targets 的顺序决定矩阵的比特顺序（targets[0] 为矩阵的最高位）。
    """
    targets = _check_qubits(targets, psi.num_qubits)
    result = _apply_to_axes(psi.as_tensor(), matrix, [t - 1 for t in targets])
    return StateVector(psi.num_qubits, result.reshape(-1))


def apply_matrix_density(rho: DensityMatrix, matrix: np.ndarray, targets: Sequence[int]) -> DensityMatrix:
    """ρ → UρU†，U 只作用在 targets 上"""
    n = rho.num_qubits
    targets = _check_qubits(targets, n)
    view = rho.entries.reshape([2] * (2 * n))
    view = _apply_to_axes(view, matrix, [t - 1 for t in targets])
    view = _apply_to_axes(view, matrix.conj(), [n + t - 1 for t in targets])
    dim = 2 ** n
    return DensityMatrix(n, view.reshape(dim, dim), check_psd=False)


def _apply_to_axes(tensor_view: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """对张量的指定轴做矩阵乘法，其余轴（包括批量轴）保持不动"""
    m = len(axes)
    op_tensor = np.asarray(matrix, dtype=np.complex128).reshape([2] * (2 * m))
    moved = np.tensordot(op_tensor, tensor_view, axes=(list(range(m, 2 * m)), list(axes)))
    return np.moveaxis(moved, list(range(m)), list(axes))


def apply_matrix_batch(vectors: np.ndarray, matrix: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """
    对一组列向量 (2^N, K) 同时作用矩阵，供算符嵌入与基变换使用。
    """
    targets = _check_qubits(targets, num_qubits)
    batch = vectors.shape[1]
    view = vectors.reshape([2] * num_qubits + [batch])
    return _apply_to_axes(view, matrix, [t - 1 for t in targets]).reshape(2 ** num_qubits, batch)
