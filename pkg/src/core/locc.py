"""
模块名称: LOCC Protocol Engine (多方协议执行引擎)

功能描述:

    执行"测量 → 经典通信 → 局域修正"三步式多方量子协议，并为每个测量分支生成完整的执行记录 (transcript)。
    支持穷举全部分支、按种子抽样单个分支，以及在纯态或密度矩阵表示下运行。

设计理念:

    1.  **表驱动修正**: 修正既可以是按结果 x 查表的字典，也可以是根据剩余态即时求解的规则函数。
    2.  **局域性强制**: 每一步修正都经过 `Correction.check_locality`，违规立即抛出 `LocalityError`。
    3.  **零概率分支**: 穷举时不跳过零概率分支，而是记录为不可能分支 (probability=0, fidelity=None)，
        保证结果条数恒为 2^k。
    4.  **可复现抽样**: 使用 numpy `Generator` + 指定算法 (默认 PCG64)，记录算法与种子。

线程安全性:

    - 分支之间没有共享可变状态；穷举时通过 `ThreadPoolExecutor.map` 并行执行，结果按 x 排序返回。

依赖关系:

    - `numpy`: 概率计算与随机数。
    - `src.core.qla` / `src.core.gates` / `src.core.bases`: 投影、作用算符、测量基。
    - `src.agents.party`: 参与方与修正操作。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from concurrent.futures import ThreadPoolExecutor                      # 线程池：分支并行执行
from dataclasses import dataclass, field                               # 数据类
from typing import Callable, Mapping, Optional, Sequence               # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算与随机数
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import (                                             # 线性代数层
    DensityMatrix,
    StateVector,
    fidelity_mixed,
    partial_trace,
    project,
    project_density,
)
from src.core.gates import apply_operator                              # 作用算符
from src.core.bases import BitString, ProjectiveBasis                  # 测量基与比特串
from src.agents.party import (                                         # 参与方
    ClassicalMessage,
    Correction,
    Party,
    check_ownership,
)
from src.services.logging import log_debug, log_info, log_warn         # 统一日志服务
from src.utils.errors import BranchImpossibleError, DimensionMismatchError, UsageError  # 异常层次

# [创建全局变量] =========================================================================================================
State = StateVector | DensityMatrix
CorrectionRule = Callable[[int, State], Sequence[Correction]]


# [定义类] ##############################################################################################################
# [协议设定] =============================================================================================================
@dataclass(frozen=True, eq=False)
class ProtocolSetup:
    """
    一次协议运行所需的全部信息。
    measured_qubits 按基的比特顺序给出；修正与目标态都以未测量比特（保持原顺序）为寄存器。
    """
    name: str
    parties: tuple[Party, ...]
    initial_state: State
    measured_qubits: tuple[int, ...]
    basis: ProjectiveBasis
    measuring_party: str
    receivers: tuple[str, ...]
    corrections: Mapping[int, Sequence[Correction]] | CorrectionRule
    target: State
    initial_descriptor: str = ""
    nonlocal_allowed: bool = False
    pre_operations: tuple[Correction, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        # [step1] 参与方所有权
        by_name = check_ownership(self.parties)
        register = set(range(1, self.initial_state.num_qubits + 1))
        owned = set().union(*(p.owned_qubits for p in self.parties)) if self.parties else set()
        if owned != register:
            raise UsageError(f"协议 {self.name}: 参与方的比特 {sorted(owned)} 未恰好覆盖寄存器 {sorted(register)}")
        for name in (self.measuring_party, *self.receivers):
            if name not in by_name:
                raise UsageError(f"协议 {self.name}: 未知参与方 {name}")

        # [step2] 测量比特与测量基
        measured = tuple(int(q) for q in self.measured_qubits)
        if len(set(measured)) != len(measured) or not set(measured) <= register:
            raise UsageError(f"协议 {self.name}: 非法的测量比特 {measured}")
        if self.basis.num_qubits != len(measured):
            raise DimensionMismatchError(
                f"协议 {self.name}: 测量基 {self.basis.label} 的比特数与测量比特数 {len(measured)} 不符")
        object.__setattr__(self, "measured_qubits", measured)

        # [step3] 目标态寄存器
        if self.target.num_qubits != len(register) - len(measured):
            raise DimensionMismatchError(f"协议 {self.name}: 目标态比特数与剩余寄存器不符")

    @property
    def party_map(self) -> dict[str, Party]:
        return {p.name: p for p in self.parties}

    @property
    def remaining_qubits(self) -> tuple[int, ...]:
        measured = set(self.measured_qubits)
        return tuple(q for q in range(1, self.initial_state.num_qubits + 1) if q not in measured)

    @property
    def outcome_bits(self) -> int:
        return len(self.measured_qubits)


# [随机数记录] ===========================================================================================================
@dataclass(frozen=True)
class RngRecord:
    algorithm: str
    seed: int


# [执行记录] =============================================================================================================
@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    """单个测量分支的完整记录"""
    protocol_name: str
    initial_state: str
    basis_label: str
    outcome: BitString
    outcome_probability: float
    branch_possible: bool
    messages: tuple[ClassicalMessage, ...]
    corrections: tuple[Correction, ...]
    final_state: Optional[State]
    fidelity: Optional[float]
    classical_bits_sent: int
    nonlocal_allowed: bool
    pre_operations: tuple[Correction, ...] = ()
    notes: tuple[str, ...] = ()
    rng: Optional[RngRecord] = None

    @property
    def is_perfect(self) -> bool:
        return self.fidelity is not None and abs(self.fidelity - 1.0) <= settings.tolerance


# [分支汇总] =============================================================================================================
@dataclass(frozen=True)
class BranchSummary:
    protocol_name: str
    branches: int
    possible_branches: int
    total_probability: float
    min_fidelity: Optional[float]
    all_perfect: bool = field(default=False)


# [定义函数] ############################################################################################################
# [外部-预处理] ===========================================================================================================
def prepared_state(setup: ProtocolSetup) -> State:
    """依次执行测量前的操作（例如单比特方案中的纠缠步骤）"""
    state = setup.initial_state
    parties = setup.party_map
    for step in setup.pre_operations:
        step.check_locality(parties, setup.nonlocal_allowed)
        state = apply_operator(step.operator, state)
    return state


# [外部-分支概率] =========================================================================================================
def branch_probabilities(state: State, basis: ProjectiveBasis, on_qubits: Sequence[int]) -> np.ndarray:
    """
    在 on_qubits 上按 basis 测量时各结果的概率（向量化计算）。
    :return: 长度 2^m 的概率数组
    """
    if basis.num_qubits != len(on_qubits):
        raise DimensionMismatchError(f"测量基比特数 {basis.num_qubits} 与测量比特数 {len(on_qubits)} 不符")
    # [step1] 被测子系统的约化密度矩阵
    reduced = partial_trace(state, on_qubits)
    # [step2] p_x = ⟨Φ_x|ρ|Φ_x⟩
    vectors = basis.vectors
    probabilities = np.einsum("xi,ij,xj->x", vectors.conj(), reduced.entries, vectors).real
    return np.clip(probabilities, 0.0, None)


# [内部-重映射修正] =======================================================================================================
def _localize(correction: Correction, positions: dict[int, int]) -> Correction:
    """把全局比特编号的修正换成剩余寄存器中的编号"""
    missing = [t for t in correction.operator.targets if t not in positions]
    if missing:
        raise UsageError(f"修正 {correction.operator.label} 作用在已测量的比特 {missing} 上")
    return Correction(correction.party, correction.operator.on([positions[t] for t in correction.operator.targets]))


def _resolve_corrections(setup: ProtocolSetup, x: int, residual: State) -> tuple[Correction, ...]:
    if callable(setup.corrections):
        return tuple(setup.corrections(x, residual))
    if x not in setup.corrections:
        raise UsageError(f"协议 {setup.name} 未定义结果 {x} 的修正")
    return tuple(setup.corrections[x])


# [内部-执行单个分支] =====================================================================================================
def _execute_branch(setup: ProtocolSetup, state: State, x: int, allow_impossible: bool,
                    rng: Optional[RngRecord] = None) -> ProtocolTranscript:
    """
    投影 → 发送经典比特 → 施加修正 → 与目标态比较。
    """
    outcome = BitString.from_int(x, setup.outcome_bits)
    projector = setup.basis[x]

    # [step1] 投影测量
    if isinstance(state, DensityMatrix):
        probability, residual = project_density(state, projector, setup.measured_qubits)
    else:
        probability, residual = project(state, projector, setup.measured_qubits)

    common = dict(
        protocol_name=setup.name,
        initial_state=setup.initial_descriptor,
        basis_label=setup.basis.label,
        outcome=outcome,
        classical_bits_sent=setup.outcome_bits,
        nonlocal_allowed=setup.nonlocal_allowed,
        pre_operations=setup.pre_operations,
        notes=setup.notes,
        rng=rng,
    )

    # [step2] 零概率分支
    if residual is None:
        if not allow_impossible:
            raise BranchImpossibleError(f"协议 {setup.name} 的结果 {outcome} 概率为零")
        log_debug(f"[LOCC] {setup.name}: 结果 {outcome} 概率为零")
        return ProtocolTranscript(outcome_probability=0.0, branch_possible=False, messages=(),
                                  corrections=(), final_state=None, fidelity=None, **common)

    # [step3] 经典通信：测量方把结果发给每个接收方
    messages = tuple(ClassicalMessage(setup.measuring_party, r, outcome) for r in setup.receivers)

    # [step4] 局域修正
    corrections = _resolve_corrections(setup, x, residual)
    parties = setup.party_map
    positions = {q: i + 1 for i, q in enumerate(setup.remaining_qubits)}
    final_state = residual
    for correction in corrections:
        correction.check_locality(parties, setup.nonlocal_allowed)
        final_state = apply_operator(_localize(correction, positions).operator, final_state)

    # [step5] 与目标态比较
    fidelity = fidelity_mixed(final_state, setup.target)
    return ProtocolTranscript(outcome_probability=probability, branch_possible=True, messages=messages,
                              corrections=corrections, final_state=final_state, fidelity=fidelity, **common)


# [外部-执行单个分支] =====================================================================================================
def run_branch(setup: ProtocolSetup, x: int) -> ProtocolTranscript:
    """确定性地执行结果 x 的分支，概率为零时抛出 BranchImpossibleError"""
    if x < 0 or x >= len(setup.basis):
        raise UsageError(f"结果 {x} 超出范围 [0, {len(setup.basis) - 1}]")
    return _execute_branch(setup, prepared_state(setup), x, allow_impossible=False)


# [外部-穷举全部分支] =====================================================================================================
def run_all_branches(setup: ProtocolSetup, max_workers: Optional[int] = None) -> list[ProtocolTranscript]:
    """
    执行全部 2^k 个分支，零概率分支以不可能分支记录。
    :param max_workers: 线程数，默认 settings.max_workers
    """
    state = prepared_state(setup)
    outcomes = range(len(setup.basis))
    workers = max_workers or settings.max_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        transcripts = list(pool.map(lambda x: _execute_branch(setup, state, x, allow_impossible=True), outcomes))

    summary = summarize(transcripts)
    if abs(summary.total_probability - 1.0) > settings.tolerance:
        log_warn(f"[LOCC] {setup.name}: 分支概率之和为 {summary.total_probability:.12g}")
    log_info(f"[LOCC] {setup.name}: {summary.branches} 个分支, "
             f"{summary.possible_branches} 个可能, 最低保真度 {summary.min_fidelity}")
    return transcripts


# [外部-种子抽样] =========================================================================================================
def make_rng(seed: int) -> tuple[np.random.Generator, RngRecord]:
    """按 settings.rng_algorithm 构造可复现的随机数生成器"""
    if not isinstance(seed, (int, np.integer)) or seed < 0 or seed >= 2 ** 64:
        raise UsageError(f"种子必须是 64 位非负整数，收到 {seed!r}")
    bit_generator = getattr(np.random, settings.rng_algorithm)(int(seed))
    return np.random.Generator(bit_generator), RngRecord(settings.rng_algorithm, int(seed))


def sample_outcomes(setup: ProtocolSetup, seed: int, shots: int) -> np.ndarray:
    """按分支概率一次抽取 shots 个结果"""
    if shots < 1:
        raise UsageError(f"抽样次数必须为正，收到 {shots}")
    rng, _ = make_rng(seed)
    probabilities = branch_probabilities(prepared_state(setup), setup.basis, setup.measured_qubits)
    probabilities = probabilities / probabilities.sum()
    return rng.choice(len(probabilities), size=shots, p=probabilities)


def sample_branch(setup: ProtocolSetup, seed: int) -> ProtocolTranscript:
    """相同种子得到相同的结果与记录"""
    rng, record = make_rng(seed)
    state = prepared_state(setup)
    probabilities = branch_probabilities(state, setup.basis, setup.measured_qubits)
    probabilities = probabilities / probabilities.sum()
    x = int(rng.choice(len(probabilities), p=probabilities))
    log_debug(f"[LOCC] {setup.name}: 种子 {seed} 抽中结果 {x}")
    return _execute_branch(setup, state, x, allow_impossible=False, rng=record)


# [外部-汇总] =============================================================================================================
def summarize(transcripts: Sequence[ProtocolTranscript]) -> BranchSummary:
    possible = [t for t in transcripts if t.branch_possible]
    fidelities = [t.fidelity for t in possible if t.fidelity is not None]
    return BranchSummary(
        protocol_name=transcripts[0].protocol_name if transcripts else "",
        branches=len(transcripts),
        possible_branches=len(possible),
        total_probability=float(sum(t.outcome_probability for t in transcripts)),
        min_fidelity=min(fidelities) if fidelities else None,
        all_perfect=bool(possible) and all(t.is_perfect for t in possible),
    )
