"""
模块名称: Telecloning (混态远程克隆)

功能描述:

    Alice 对未知混态 ρ₁ 与自己手中的 GHZ 比特做 Bell 测量，把 2 个经典比特发给 Bob 和 Claire，
    两人各自做局域修正后得到经典关联的可分离态 ρ'_BC = λ₀|00⟩⟨00| + λ₁|11⟩⟨11|，
    各自的约化态都是输入 ρ₁ 的完美拷贝。

    整个流程在密度矩阵表示下运行。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类：克隆结果
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.qla import DensityMatrix, partial_trace, tensor_density, to_density  # 线性代数层
from src.core.gates import signed_pauli                                # 算符库
from src.core.bases import bell_basis, ghz_state                       # 测量基
from src.core.locc import ProtocolSetup, ProtocolTranscript, run_all_branches  # 协议引擎
from src.agents.party import Correction, Party                         # 参与方
from src.protocols.specs import StateKind, UnknownStateSpec, require_kind  # 未知态
from src.protocols.tables import teleclone_corrections                 # 修正表
from src.services.logging import log_info                              # 统一日志服务


@dataclass(frozen=True, eq=False)
class TelecloneResult:
    rho_bc: DensityMatrix
    rho_b: DensityMatrix
    rho_c: DensityMatrix
    transcripts: tuple[ProtocolTranscript, ...]


def teleclone_setup(spec: UnknownStateSpec) -> ProtocolSetup:
    """寄存器 [1, A, B, C]：Alice 拥有 1 与 A，Bob 拥有 B，Claire 拥有 C"""
    require_kind(spec, StateKind.MIXED_DIAGONAL, protocol="teleclone")
    lambda0, lambda1 = spec.weights
    corrections = {
        x: [Correction("Bob", signed_pauli(b, 3)), Correction("Claire", signed_pauli(c, 4))]
        for x, (b, c) in enumerate(teleclone_corrections())
    }
    return ProtocolSetup(
        name="teleclone",
        parties=(Party("Alice", (1, 2)), Party("Bob", (3,)), Party("Claire", (4,))),
        initial_state=tensor_density(spec.density(), to_density(ghz_state(3))),
        measured_qubits=(1, 2),
        basis=bell_basis(),
        measuring_party="Alice",
        receivers=("Bob", "Claire"),
        corrections=corrections,
        target=DensityMatrix.diagonal([lambda0, 0.0, 0.0, lambda1]),
        initial_descriptor=spec.describe(),
    )


def teleclone(spec: UnknownStateSpec) -> TelecloneResult:
    """
    穷举 4 个 Bell 分支，按概率平均各分支修正后的 ρ_BC。
    :return: (ρ'_BC, ρ_B, ρ_C, transcripts)
    """
    transcripts = run_all_branches(teleclone_setup(spec))
    # [step1] 各分支加权平均
    averaged = sum(t.outcome_probability * t.final_state.entries for t in transcripts if t.branch_possible)
    averaged = (averaged + np.conj(averaged).T) / 2
    rho_bc = DensityMatrix(2, averaged)
    # [step2] 两份拷贝
    rho_b = partial_trace(rho_bc, [1])
    rho_c = partial_trace(rho_bc, [2])
    log_info(f"[Teleclone] {spec.describe()}: ρ_B 对角元 {np.real(np.diag(rho_b.entries)).round(12).tolist()}")
    return TelecloneResult(rho_bc, rho_b, rho_c, tuple(transcripts))
