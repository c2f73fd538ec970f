"""
模块名称: Export Tools (导出工具)
功能描述:

    把协议记录、测量基、克隆结果与容量扫描序列化为 JSON / CSV。

设计理念:

    1.  **内存缓冲**: 先在 `io.BytesIO` 中生成内容，再一次性写入文件。
    2.  **稳定输出**: 字段顺序固定、浮点数按最短往返表示输出，相同输入得到逐字节相同的文件。
    3.  **版本化**: JSON 顶层带 `schema_version: 1`。

线程安全性:

    - 无状态函数，线程安全。
"""

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from src.core.qla import DensityMatrix, StateVector
from src.core.bases import ProjectiveBasis
from src.core.capacity import CapacityRow
from src.core.locc import ProtocolTranscript
from src.agents.party import Correction
from src.services.logging import log_info

# [创建全局变量] =========================================================================================================
SCHEMA_VERSION = 1
CAPACITY_COLUMNS = ("N", "alpha_sq", "E", "holevo", "c", "c_closed_form", "abs_diff")


# [定义函数] ############################################################################################################
# [内部-数值转换] =========================================================================================================
def complex_pair(value: complex) -> list[float]:
    value = complex(value)
    return [float(value.real), float(value.imag)]


def state_to_json(state: StateVector | DensityMatrix | None) -> Any:
    """纯态 → 振幅 [re, im] 列表；密度矩阵 → 二维 [re, im] 列表"""
    if state is None:
        return None
    if isinstance(state, StateVector):
        return {"kind": "statevector", "num_qubits": state.num_qubits,
                "amplitudes": [complex_pair(a) for a in state.amplitudes]}
    return {"kind": "density_matrix", "num_qubits": state.num_qubits,
            "entries": [[complex_pair(a) for a in row] for row in state.entries]}


def _correction_to_json(correction: Correction) -> dict:
    op = correction.operator
    return {"party": correction.party, "operator": op.label, "targets": list(op.targets),
            "locality_tag": op.locality_tag}


# [外部-协议记录] =========================================================================================================
def transcript_to_dict(transcript: ProtocolTranscript) -> dict:
    return {
        "protocol_name": transcript.protocol_name,
        "initial_state": transcript.initial_state,
        "basis_label": transcript.basis_label,
        "outcome": str(transcript.outcome),
        "outcome_value": transcript.outcome.value,
        "outcome_probability": float(transcript.outcome_probability),
        "branch_possible": transcript.branch_possible,
        "classical_bits_sent": transcript.classical_bits_sent,
        "messages": [{"from": m.sender, "to": m.recipient, "bits": str(m.bits)} for m in transcript.messages],
        "pre_operations": [_correction_to_json(c) for c in transcript.pre_operations],
        "corrections": [_correction_to_json(c) for c in transcript.corrections],
        "nonlocal_allowed": transcript.nonlocal_allowed,
        "final_state": state_to_json(transcript.final_state),
        "fidelity": None if transcript.fidelity is None else float(transcript.fidelity),
        "notes": list(transcript.notes),
        "rng": None if transcript.rng is None else {"algorithm": transcript.rng.algorithm, "seed": transcript.rng.seed},
    }


def transcripts_payload(transcripts: Sequence[ProtocolTranscript], extra: dict | None = None) -> dict:
    payload = {"schema_version": SCHEMA_VERSION, "transcripts": [transcript_to_dict(t) for t in transcripts]}
    payload.update(extra or {})
    return payload


# [外部-测量基] ===========================================================================================================
def basis_to_dict(basis: ProjectiveBasis) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "label": basis.label,
        "N": basis.num_qubits,
        "completeness_residual": basis.completeness_residual(),
        "elements": [[complex_pair(a) for a in element.amplitudes] for element in basis.elements],
    }


# [外部-JSON 输出] ========================================================================================================
def to_json_bytes(payload: dict) -> io.BytesIO:
    """生成 JSON 文件流"""
    buffer = io.BytesIO()
    text = json.dumps(payload, indent=2, ensure_ascii=False, default=_json_default)
    buffer.write((text + "\n").encode("utf-8"))
    buffer.seek(0)
    return buffer


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (complex, np.complexfloating)):
        return complex_pair(value)
    raise TypeError(f"无法序列化类型 {type(value).__name__}")


# [外部-CSV 输出] =========================================================================================================
def capacity_csv_bytes(rows: Iterable[CapacityRow]) -> io.BytesIO:
    """生成容量扫描 CSV 文件流"""
    text = io.StringIO()
    writer = csv.DictWriter(text, fieldnames=CAPACITY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(float(v)) if isinstance(v, float) else v for k, v in asdict(row).items()})
    buffer = io.BytesIO(text.getvalue().encode("utf-8"))
    buffer.seek(0)
    return buffer


# [外部-写文件] ===========================================================================================================
def write_buffer(buffer: io.BytesIO, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(buffer.getvalue())
    log_info(f"[Export] 已写入 {path}")
    return path
