"""
模块名称: Protocol Parties (协议参与方)

功能描述:

    定义多方协议中的参与者 (Alice, Bob, Claire …)、它们之间传递的经典消息，以及参与方施加的修正操作。

设计理念:

    1.  **所有权**: 每个参与方拥有寄存器中一组互不相交的量子比特，只能对自己的比特做局域操作。
    2.  **局域性判定**: `Correction.check_locality` 给出统一的 LOCC 规则，协议引擎在执行每一步前调用。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
from dataclasses import dataclass                                      # 数据类
from typing import Sequence                                            # 类型提示
# [内部模块 | Internal Modules] =========================================================================================
from src.core.bases import BitString                                   # 比特串
from src.core.gates import NONLOCAL, QubitOperator                     # 算符与局域性标签
from src.utils.errors import LocalityError, UsageError                 # 异常层次


# [定义类] ##############################################################################################################
# [参与方] ===============================================================================================================
@dataclass(frozen=True)
class Party:
    name: str
    owned_qubits: tuple[int, ...]

    def __post_init__(self):
        owned = tuple(int(q) for q in self.owned_qubits)
        if len(set(owned)) != len(owned):
            raise UsageError(f"参与方 {self.name} 的比特重复: {owned}")
        object.__setattr__(self, "owned_qubits", owned)

    def owns(self, qubits: Sequence[int]) -> bool:
        return set(qubits) <= set(self.owned_qubits)


# [经典消息] =============================================================================================================
@dataclass(frozen=True)
class ClassicalMessage:
    sender: str
    recipient: str
    bits: BitString

    def __post_init__(self):
        if len(self.bits) < 1:
            raise UsageError("经典消息至少包含 1 个比特")


# [修正操作] =============================================================================================================
@dataclass(frozen=True)
class Correction:
    """参与方 party 对 operator.targets（全局比特编号）施加的酉操作"""
    party: str
    operator: QubitOperator

    @property
    def locality_tag(self) -> str:
        return self.operator.locality_tag

    def check_locality(self, parties: dict[str, Party], nonlocal_allowed: bool) -> None:
        """
        LOCC 规则：目标比特必须全部属于执行方；
        例外仅限标记为 nonlocal 且协议允许非局域操作的情形。
        """
        if self.party not in parties:
            raise UsageError(f"未知参与方: {self.party}")
        if self.locality_tag == NONLOCAL and not nonlocal_allowed:
            raise LocalityError(
                f"{self.party} 的操作 {self.operator.label} 是非局域的，但协议未允许非局域操作")
        if not parties[self.party].owns(self.operator.targets):
            if self.locality_tag == NONLOCAL and nonlocal_allowed:
                return
            raise LocalityError(
                f"{self.party} 试图作用于不属于自己的比特 {self.operator.targets}")


# [定义函数] ############################################################################################################
# [外部-校验所有权] =======================================================================================================
def check_ownership(parties: Sequence[Party]) -> dict[str, Party]:
    """参与方名称唯一，比特集合两两不相交"""
    by_name: dict[str, Party] = {}
    seen: set[int] = set()
    for party in parties:
        if party.name in by_name:
            raise UsageError(f"参与方名称重复: {party.name}")
        overlap = seen & set(party.owned_qubits)
        if overlap:
            raise UsageError(f"比特 {sorted(overlap)} 被多个参与方拥有")
        seen |= set(party.owned_qubits)
        by_name[party.name] = party
    return by_name
