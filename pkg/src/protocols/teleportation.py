"""
模块名称: Teleportation Protocols (量子隐形传态协议族)

功能描述:

    在 LOCC 引擎之上组装各类隐形传态方案：
      - 紧致方案：EPR 信道传输单比特态，2 个经典比特；
      - GHZ 方案：GHZ 信道把 EPR 形式的两比特态同时传给 Bob 与 Claire，3 个经典比特；
      - GHZ 方案的非局域修正变体，以及一般两比特态的反例检查；
      - N 方推广：Ω(N) 信道传输 GHZ 形式的 N−1 比特态，N 个经典比特；
      - 单 EPR 对方案：先做纠缠步骤 C_A2，再以 2 个经典比特传输两个纠缠比特（非 LOCC）；
      - 两个 EPR 对逐个传输两比特态，作为对照。

设计理念:

    1.  **表驱动**: 紧致与 GHZ 方案的修正来自 `config/protocol_tables.yaml`。
    2.  **修正求解**: 没有现成表格的方案（N 方、单 EPR 对），按分支在 I < X < Y < Z 的字典序中
        搜索第一个能把剩余态还原为目标态的直积 Pauli 算符，并拆分给各接收方。
    3.  **统一模式**: 所有方案支持 exhaustive（穷举全部分支）与 sample（按种子抽样）两种模式。

依赖关系:

    - `src.core.locc`: 协议执行引擎。
    - `src.protocols.tables`: 修正表。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类：检查报告
from itertools import product                                          # 枚举 Pauli 组合
from typing import Optional, Sequence                                  # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core.qla import StateVector, fidelity_pure, tensor            # 线性代数层
from src.core.gates import (                                           # 算符库
    apply_operator,
    cnot,
    compose,
    pauli,
    product_operator,
    signed_pauli,
)
from src.core.bases import (                                           # 测量基
    bell_basis,
    computational_basis,
    ghz_class_basis,
    ghz_state,
    nparty_teleport_basis,
    pi_basis,
    product_basis,
    teleport_basis_ghz,
)
from src.core.locc import (                                            # 协议引擎
    ProtocolSetup,
    ProtocolTranscript,
    branch_probabilities,
    run_all_branches,
    run_branch,
    sample_branch,
    summarize,
)
from src.agents.party import Correction, Party                         # 参与方
from src.protocols.specs import StateKind, UnknownStateSpec, require_kind  # 未知态
from src.protocols.tables import teleport_ghz_corrections, tight_teleport_corrections  # 协议表
from src.services.logging import log_info, log_warn                    # 统一日志服务
from src.utils.errors import UnsupportedStateError, UsageError         # 异常层次

# [创建全局变量] =========================================================================================================
EXHAUSTIVE = "exhaustive"
SAMPLE = "sample"

RECEIVER_NAMES = ("Bob", "Claire", "Dave", "Eve", "Frank")


# [定义类] ##############################################################################################################
# [反例检查报告] =========================================================================================================
@dataclass(frozen=True)
class NegativeCheckReport:
    """用 GHZ 传输协议原样传输一般两比特态的结果"""
    applicable: bool
    min_fidelity: float
    branch_fidelities: tuple[Optional[float], ...]
    impossible_branches: int
    transcripts: tuple[ProtocolTranscript, ...]

    @property
    def fails(self) -> bool:
        return self.min_fidelity < 1.0 - 1e-6


# [定义函数] ############################################################################################################
# [内部-运行模式] =========================================================================================================
def run_setup(setup: ProtocolSetup, mode: str = EXHAUSTIVE, seed: Optional[int] = None) -> list[ProtocolTranscript]:
    """exhaustive 返回全部分支；sample 需要种子，返回单个分支"""
    if mode == EXHAUSTIVE:
        return run_all_branches(setup)
    if mode == SAMPLE:
        if seed is None:
            raise UsageError("sample 模式需要提供种子")
        return [sample_branch(setup, seed)]
    raise UsageError(f"未知运行模式: {mode}")


# [外部-直积 Pauli 修正求解] ==============================================================================================
def synthesize_pauli_correction(residual: StateVector, target: StateVector) -> tuple[str, ...]:
    """
    按 I < X < Y < Z 的字典序搜索第一个把 residual 映射到 target（忽略全局相位）的直积 Pauli。
    """
    n = residual.num_qubits
    for labels in product("IXYZ", repeat=n):
        candidate = apply_operator(product_operator(labels, range(1, n + 1)), residual)
        if abs(fidelity_pure(candidate, target) - 1.0) <= settings.tolerance:
            return labels
    raise UnsupportedStateError("不存在把剩余态还原为目标态的直积 Pauli 修正")


def _pauli_rule(target: StateVector, owners: Sequence[tuple[str, int]]):
    """
    生成修正规则：求解直积 Pauli，并按 owners[i] = (参与方, 全局比特) 拆成逐比特修正。
    恒等因子不生成修正。
    """
    def rule(x: int, residual: StateVector) -> list[Correction]:
        labels = synthesize_pauli_correction(residual, target)
        return [Correction(party, pauli(label, qubit)) for label, (party, qubit) in zip(labels, owners)
                if label != "I"]
    return rule


# [外部-紧致方案] =========================================================================================================
def tight_teleport_setup(spec: UnknownStateSpec) -> ProtocolSetup:
    """寄存器 [1, A, B]：Alice 拥有 1 与 A，Bob 拥有 B"""
    require_kind(spec, StateKind.SINGLE_QUBIT, protocol="teleport_tight")
    zeta = spec.state()
    table = tight_teleport_corrections()
    corrections = {x: [Correction("Bob", signed_pauli(label, 3))] for x, label in enumerate(table)}
    return ProtocolSetup(
        name="teleport_tight",
        parties=(Party("Alice", (1, 2)), Party("Bob", (3,))),
        initial_state=tensor(zeta, ghz_state(2)),
        measured_qubits=(1, 2),
        basis=bell_basis(),
        measuring_party="Alice",
        receivers=("Bob",),
        corrections=corrections,
        target=zeta,
        initial_descriptor=spec.describe(),
    )


def teleport_tight(spec: UnknownStateSpec, mode: str = EXHAUSTIVE, seed: Optional[int] = None) -> list[ProtocolTranscript]:
    return run_setup(tight_teleport_setup(spec), mode, seed)


# [外部-GHZ 方案] =========================================================================================================
def ghz_teleport_setup(spec: UnknownStateSpec, strict: bool = True, corrections=None,
                       nonlocal_allowed: bool = False, name: str = "teleport_ghz") -> ProtocolSetup:
    """
    寄存器 [1, 2, A, B, C]：Alice 拥有 1, 2, A；Bob 拥有 B；Claire 拥有 C。
    strict=False 时接受任意两比特态（用于反例检查）。
    """
    if strict:
        require_kind(spec, StateKind.EPR_FORM, protocol="teleport_ghz")
        if spec.parallel:
            raise UnsupportedStateError("teleport_ghz 传输 α|01⟩+β|10⟩ 形式，收到 α|00⟩+β|11⟩")
    elif spec.num_qubits != 2:
        raise UnsupportedStateError(f"GHZ 传输需要两比特态，收到 {spec.num_qubits} 比特")
    zeta = spec.state()
    if corrections is None:
        corrections = {
            x: [Correction("Bob", signed_pauli(b, 4)), Correction("Claire", signed_pauli(c, 5))]
            for x, (b, c) in enumerate(teleport_ghz_corrections())
        }
    return ProtocolSetup(
        name=name,
        parties=(Party("Alice", (1, 2, 3)), Party("Bob", (4,)), Party("Claire", (5,))),
        initial_state=tensor(zeta, ghz_state(3)),
        measured_qubits=(1, 2, 3),
        basis=teleport_basis_ghz(),
        measuring_party="Alice",
        receivers=("Bob", "Claire"),
        corrections=corrections,
        target=zeta,
        initial_descriptor=spec.describe(),
        nonlocal_allowed=nonlocal_allowed,
    )


def teleport_ghz(spec: UnknownStateSpec, mode: str = EXHAUSTIVE, seed: Optional[int] = None) -> list[ProtocolTranscript]:
    return run_setup(ghz_teleport_setup(spec), mode, seed)


def nonlocal_correction():
    """(σ_x⊗1)·C_BC·C_CB·C_BC，作用在 (B, C) = 比特 (4, 5) 上"""
    op = compose([pauli("X", 1), cnot(1, 2), cnot(2, 1), cnot(1, 2)], 2, label="(X⊗1)·C_BC·C_CB·C_BC")
    return op.on((4, 5))


def teleport_ghz_nonlocal_variant(spec: UnknownStateSpec, x: int = 0,
                                  nonlocal_allowed: bool = True) -> ProtocolTranscript:
    """
    用非局域修正替代 x=0 分支的直积修正 (σ_x, 1)。
    nonlocal_allowed=False 时引擎抛出 LocalityError。
    """
    if x != 0:
        raise UsageError(f"非局域变体只定义了 x=0 分支，收到 {x}")
    setup = ghz_teleport_setup(
        spec,
        corrections={0: [Correction("Bob", nonlocal_correction())]},
        nonlocal_allowed=nonlocal_allowed,
        name="teleport_ghz_nonlocal",
    )
    return run_branch(setup, 0)


# [外部-一般两比特态反例] =================================================================================================
def general_two_qubit_negative_check(spec: UnknownStateSpec) -> NegativeCheckReport:
    """
    原样运行 GHZ 传输协议，报告各分支保真度的最小值。
    振幅在 span{|01⟩, |10⟩} 之外的分量都不超过 0.1 时，检查不适用（applicable=False）。
    """
    require_kind(spec, StateKind.GENERAL_TWO_QUBIT, StateKind.EPR_FORM, protocol="general_two_qubit_negative_check")
    amplitudes = spec.state().amplitudes
    applicable = bool(max(abs(amplitudes[0]), abs(amplitudes[3])) > 0.1)
    transcripts = run_all_branches(ghz_teleport_setup(spec, strict=False, name="teleport_ghz_general"))
    fidelities = tuple(t.fidelity for t in transcripts)
    possible = [f for f in fidelities if f is not None]
    report = NegativeCheckReport(
        applicable=applicable,
        min_fidelity=min(possible),
        branch_fidelities=fidelities,
        impossible_branches=sum(1 for f in fidelities if f is None),
        transcripts=tuple(transcripts),
    )
    if applicable:
        log_info(f"[Teleport] 一般两比特态 {spec.describe()}: 最低分支保真度 {report.min_fidelity:.6f}")
    else:
        log_warn(f"[Teleport] {spec.describe()} 属于 EPR 形式，反例检查不适用")
    return report


# [外部-GHZ 完备集测量统计] ===============================================================================================
def ghz_outcome_distribution(spec: UnknownStateSpec) -> np.ndarray:
    """在 GHZ 类完备集 (而非传输基) 中测量 ζ⊗GHZ 的 (1, 2, A) 时的结果分布"""
    if spec.num_qubits != 2 or spec.kind == StateKind.MIXED_DIAGONAL:
        raise UnsupportedStateError("需要两比特纯态")
    state = tensor(spec.state(), ghz_state(3))
    return branch_probabilities(state, ghz_class_basis(3), (1, 2, 3))


def ghz_channel_outcome_distribution(spec: UnknownStateSpec, channel: StateVector) -> np.ndarray:
    """
    以任意三比特态代替 GHZ 信道时，传输基测量 (1, 2, A) 的结果分布。
    GHZ 信道给出均匀的 1/8；直积信道或非最大纠缠信道使分布依赖于未知态的振幅。
    """
    if channel.num_qubits != 3:
        raise UsageError(f"信道必须是三比特态，收到 {channel.num_qubits} 比特")
    if spec.num_qubits != 2 or spec.kind == StateKind.MIXED_DIAGONAL:
        raise UnsupportedStateError("需要两比特纯态")
    state = tensor(spec.state(), channel)
    return branch_probabilities(state, teleport_basis_ghz(), (1, 2, 3))


def ghz_outcomes_depend_on_state(specs: Sequence[UnknownStateSpec]) -> bool:
    """不同未知态给出的结果分布是否不同"""
    if len(specs) < 2:
        raise UsageError("至少需要两个未知态才能比较")
    distributions = [ghz_outcome_distribution(s) for s in specs]
    reference = distributions[0]
    return any(np.max(np.abs(d - reference)) > settings.tolerance for d in distributions[1:])


# [外部-N 方推广] =========================================================================================================
def nparty_teleport_setup(spec: UnknownStateSpec, N: int) -> ProtocolSetup:
    """
    寄存器 [u₁…u_{N−1}, c₁…c_N]：Alice 拥有全部 u 与 c₁，c_j (j ≥ 2) 各属于一个接收方。
    测量 (u₁…u_{N−1}, c₁)，剩余 c₂…c_N。
    """
    if N < 3 or N > settings.nparty_teleport_max_qubits:
        raise UsageError(f"teleport_nparty 要求 3 ≤ N ≤ {settings.nparty_teleport_max_qubits}，收到 {N}")
    require_kind(spec, StateKind.GHZ_FORM, protocol="teleport_nparty")
    if spec.width != N - 1:
        raise UnsupportedStateError(f"teleport_nparty(N={N}) 需要 {N - 1} 比特的 GHZ 形式态，收到 {spec.width} 比特")
    zeta = spec.state()
    channel_first = N
    receivers = RECEIVER_NAMES[:N - 1]
    owners = [(receivers[j], channel_first + 1 + j) for j in range(N - 1)]
    parties = (Party("Alice", tuple(range(1, N)) + (channel_first,)),) + tuple(Party(name, (q,)) for name, q in owners)
    return ProtocolSetup(
        name=f"teleport_nparty({N})",
        parties=parties,
        initial_state=tensor(zeta, ghz_state(N)),
        measured_qubits=tuple(range(1, N + 1)),
        basis=nparty_teleport_basis(N),
        measuring_party="Alice",
        receivers=receivers,
        corrections=_pauli_rule(zeta, owners),
        target=zeta,
        initial_descriptor=spec.describe(),
    )


def teleport_nparty(spec: UnknownStateSpec, N: int, mode: str = EXHAUSTIVE,
                    seed: Optional[int] = None) -> list[ProtocolTranscript]:
    return run_setup(nparty_teleport_setup(spec, N), mode, seed)


# [外部-单 EPR 对方案] ====================================================================================================
def onebit_teleport_setup(spec: UnknownStateSpec) -> ProtocolSetup:
    """
    寄存器 [1, 2, A, B]：Alice 拥有 1, 2；Bob 拥有 A, B。
    纠缠步骤 C_A2 同时作用于双方的比特，因此协议不是 LOCC。
    """
    if spec.kind not in (StateKind.EPR_FORM, StateKind.GHZ_FORM) or spec.num_qubits != 2:
        raise UnsupportedStateError("teleport_onebit_style 需要两比特 EPR 形式态")
    zeta = spec.state()
    return ProtocolSetup(
        name="teleport_onebit_style",
        parties=(Party("Alice", (1, 2)), Party("Bob", (3, 4))),
        initial_state=tensor(zeta, ghz_state(2)),
        measured_qubits=(1, 2),
        basis=product_basis(pi_basis(), computational_basis(1), "pi⊗computational"),
        measuring_party="Alice",
        receivers=("Bob",),
        corrections=_pauli_rule(zeta, [("Bob", 3), ("Bob", 4)]),
        target=zeta,
        initial_descriptor=spec.describe(),
        nonlocal_allowed=True,
        pre_operations=(Correction("Alice", cnot(3, 2)),),
        notes=("not an LOCC protocol: the entangling step C_A2 acts on qubits of both parties",),
    )


def teleport_onebit_style(spec: UnknownStateSpec, mode: str = EXHAUSTIVE,
                          seed: Optional[int] = None) -> list[ProtocolTranscript]:
    return run_setup(onebit_teleport_setup(spec), mode, seed)


# [外部-两个 EPR 对逐个传输] ==============================================================================================
def two_epr_teleport_setup(spec: UnknownStateSpec) -> ProtocolSetup:
    """
    寄存器 [1, 2, A₁, B₁, A₂, B₂]：比特 1 经 (A₁, B₁) 传给 Bob，比特 2 经 (A₂, B₂) 传给 Claire。
    """
    if spec.kind == StateKind.MIXED_DIAGONAL or spec.num_qubits != 2:
        raise UnsupportedStateError("teleport_two_epr_pairs 需要两比特纯态")
    zeta = spec.state()
    table = tight_teleport_corrections()
    corrections = {
        4 * x1 + x2: [Correction("Bob", signed_pauli(table[x1], 4)), Correction("Claire", signed_pauli(table[x2], 6))]
        for x1 in range(4) for x2 in range(4)
    }
    return ProtocolSetup(
        name="teleport_two_epr_pairs",
        parties=(Party("Alice", (1, 2, 3, 5)), Party("Bob", (4,)), Party("Claire", (6,))),
        initial_state=tensor(tensor(zeta, ghz_state(2)), ghz_state(2)),
        measured_qubits=(1, 3, 2, 5),
        basis=product_basis(bell_basis(), bell_basis(), "bell⊗bell"),
        measuring_party="Alice",
        receivers=("Bob", "Claire"),
        corrections=corrections,
        target=zeta,
        initial_descriptor=spec.describe(),
    )


def teleport_two_epr_pairs(spec: UnknownStateSpec, mode: str = EXHAUSTIVE,
                           seed: Optional[int] = None) -> list[ProtocolTranscript]:
    return run_setup(two_epr_teleport_setup(spec), mode, seed)


# [外部-汇总日志] =========================================================================================================
def all_branches_perfect(transcripts: Sequence[ProtocolTranscript]) -> bool:
    return summarize(transcripts).all_perfect
