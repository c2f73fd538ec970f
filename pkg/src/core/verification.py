"""
模块名称: Verification Suite (恒等式校验套件)

功能描述:

    把各模块的不变量与协议性质整理成一组具名检查，供 CLI `verify` 子命令运行并输出通过/失败表。
    所有检查在 N ≤ 6 的规模下运行。

设计理念:

    1.  **具名检查**: 每个检查是一个无参函数，成功时返回简短说明，失败时抛出 `VerificationError`。
    2.  **隔离失败**: 单个检查抛出的任何异常都被记录为失败，不影响其余检查。
    3.  **并发执行**: 检查之间相互独立，通过线程池并行运行，结果顺序与注册顺序一致。
"""

# [导入模块] ############################################################################################################
# [标准库 | Standard Libraries] =========================================================================================
import time                                                            # 计时
from concurrent.futures import ThreadPoolExecutor                      # 线程池：并行执行检查
from dataclasses import dataclass                                      # 数据类：检查结果
from typing import Callable, Optional                                  # 类型提示
# [第三方库 | Third-party Libraries] =====================================================================================
import numpy as np                                                     # 数值计算
# [内部模块 | Internal Modules] =========================================================================================
from src.core.settings import settings                                 # 全局配置
from src.core import qla, gates, bases, capacity, locc                 # 核心模块
from src.protocols import dense_coding, telecloning, teleportation     # 协议族
from src.protocols.specs import UnknownStateSpec                       # 未知态
from src.services.logging import log_error, log_info                   # 统一日志服务
from src.utils.errors import LocalityError, VerificationError          # 异常层次

# [创建全局变量] =========================================================================================================
MAX_N = 6
IDENTITY_TOL = 1e-12
VERIFY_SEED = 20240611


# [定义类] ##############################################################################################################
@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


# [定义函数] ############################################################################################################
# [内部-断言] =============================================================================================================
def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise VerificationError(message)


def _close(a, b, tol: float = settings.tolerance) -> bool:
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol)


# [检查-线性代数] =========================================================================================================
def check_partial_trace_of_products() -> str:
    rng = np.random.default_rng(VERIFY_SEED)
    for _ in range(100):
        a = qla.StateVector.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))
        b = qla.StateVector.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
        reduced = qla.partial_trace(qla.to_density(qla.tensor(a, b)), [1, 2])
        _expect(_close(reduced.entries, qla.to_density(a).entries), "tr_B(|a⊗b⟩⟨a⊗b|) ≠ |a⟩⟨a|")
    return "100 random product pairs"


def check_ghz_single_qubit_entropies() -> str:
    for N in range(2, MAX_N + 1):
        for element in bases.ghz_class_basis(N).elements:
            entropies = qla.single_qubit_entropies(element)
            _expect(_close(entropies, [1.0] * N), f"N={N}: 单比特熵 {entropies}")
    return f"N=2..{MAX_N}"


# [检查-算符] =============================================================================================================
def check_nonuniqueness_identity() -> str:
    psi = qla.StateVector.normalized([0, 1, 0, 0, 0, 0, -1, 0])
    left = gates.apply_operator(gates.product_operator(["I", "Z", "X"], [1, 2, 3]), psi)
    right = gates.apply_operator(gates.product_operator(["I", "I", "iY"], [1, 2, 3]), psi)
    _expect(_close(left.amplitudes, right.amplitudes, IDENTITY_TOL), "(1⊗σz⊗σx) 与 (1⊗1⊗iσy) 作用结果不同")
    return "(1⊗σz⊗σx)(|001⟩−|110⟩) = (1⊗1⊗iσy)(|001⟩−|110⟩)"


def check_cnot_ghz_preparation() -> str:
    prepared = gates.apply_operator(gates.cnot(2, 3), qla.tensor(bases.ghz_state(2), qla.basis_state("0")))
    _expect(_close(prepared.amplitudes, bases.ghz_state(3).amplitudes, IDENTITY_TOL), "C23(Φ00⊗|0⟩) ≠ GHZ")
    return "(1⊗C23)(Φ00⊗|0⟩) = GHZ"


def check_entangle_inverse() -> str:
    for k in range(2, MAX_N + 1):
        product = gates.compose([gates.disentangle_op(k), gates.entangle_op(k)], k)
        _expect(_close(product.matrix, np.eye(2 ** k)), f"Den({k})·Ent({k}) ≠ I")
        ghz = gates.apply_operator(gates.entangle_op(k), qla.basis_state("0" * k))
        _expect(qla.fidelity_pure(ghz, bases.ghz_state(k)) > 1 - settings.tolerance, f"Ent({k})|0…0⟩ ≠ GHZ")
    return f"k=2..{MAX_N}"


def check_nonlocal_correction_identity() -> str:
    alpha, beta = 0.6, 0.8
    zeta = UnknownStateSpec.epr_form(alpha, beta).state()
    residual = qla.StateVector.from_amplitudes([beta, 0, 0, alpha])
    op = teleportation.nonlocal_correction().on((1, 2))
    restored = gates.apply_operator(op, residual)
    _expect(_close(restored.amplitudes, zeta.amplitudes, IDENTITY_TOL), "(σx⊗1)C_BC C_CB C_BC 未还原 ζ")
    _expect(op.locality_tag == gates.NONLOCAL, "非局域修正的标签错误")
    return "(σx⊗1)·C_BC·C_CB·C_BC (β|00⟩+α|11⟩) = ζ"


def _random_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    dim = 2 ** m
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_state(rng: np.random.Generator, n: int) -> qla.StateVector:
    return qla.StateVector.normalized(rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n))


def check_embed_compose_commute() -> str:
    rng = np.random.default_rng(VERIFY_SEED)
    for _ in range(50):
        pair = tuple(int(q) for q in rng.choice(4, size=2, replace=False) + 1)
        a = gates.QubitOperator.from_matrix(_random_unitary(rng, 2), pair, "A")
        b = gates.QubitOperator.from_matrix(_random_unitary(rng, 1), (int(rng.integers(1, 5)),), "B")
        composed = gates.compose([a, b], 4)
        expected = gates.embed(a, 4).matrix @ gates.embed(b, 4).matrix
        _expect(_close(composed.matrix, expected), f"compose(A{a.targets}, B{b.targets}) ≠ embed(A)·embed(B)")
    return "50 random (two-qubit, single-qubit) pairs"


def check_single_qubit_locality() -> str:
    rng = np.random.default_rng(VERIFY_SEED)
    for _ in range(50):
        target = int(rng.integers(1, 4))
        others = [q for q in (1, 2, 3) if q != target]
        op = gates.QubitOperator.from_matrix(_random_unitary(rng, 1), (target,))
        psi = _random_state(rng, 3)
        before = qla.partial_trace(psi, others)
        after = qla.partial_trace(gates.apply_operator(op, psi), others)
        _expect(_close(after.entries, before.entries), f"作用在比特 {target} 上的算符改变了其余比特的约化态")
    return "50 random three-qubit states"


# [检查-测量基] ===========================================================================================================
def check_preposition() -> str:
    for N in range(2, MAX_N + 1):
        basis = bases.ghz_class_basis(N)
        _expect(basis.completeness_residual() < settings.tolerance, f"N={N}: 完备性残差过大")
        omega = bases.ghz_state(N)
        for x in range(2 ** N):
            bits = bases.BitString.from_int(x, N)
            generated = gates.apply_operator(bases.generating_operator(bits), omega)
            _expect(_close(generated.amplitudes, basis[x].amplitudes, IDENTITY_TOL), f"N={N}, x={bits}: (1⊗U)Ω ≠ Φ_x")
    return f"N=2..{MAX_N}"


def check_product_bases() -> str:
    for N in range(3, MAX_N + 1):
        basis = bases.nparty_teleport_basis(N)
        _expect(basis.completeness_residual() < settings.tolerance, f"nparty_teleport_basis({N}) 不完备")
    _expect(bases.teleport_basis_ghz().completeness_residual() < settings.tolerance, "teleport_basis_ghz 不完备")
    converted = bases.converted_dense_basis()
    _expect(converted.completeness_residual() < IDENTITY_TOL, "H_B C_BC D_x 不完备")
    return "teleport_ghz, nparty(3..6), converted_dense"


# [检查-协议] =============================================================================================================
def _expect_perfect(transcripts, branches: int, probability: float, name: str) -> None:
    _expect(len(transcripts) == branches, f"{name}: 分支数 {len(transcripts)} ≠ {branches}")
    for t in transcripts:
        _expect(abs(t.outcome_probability - probability) <= settings.tolerance,
                f"{name}: 结果 {t.outcome} 概率 {t.outcome_probability}")
        _expect(t.is_perfect, f"{name}: 结果 {t.outcome} 保真度 {t.fidelity}")


def check_tight_schemes() -> str:
    transcripts = teleportation.teleport_tight(UnknownStateSpec.single_qubit(np.sqrt(0.5), np.sqrt(0.5)))
    _expect_perfect(transcripts, 4, 0.25, "teleport_tight")
    for message in dense_coding.all_messages(2):
        _expect(dense_coding.dense_code_tight(message).succeeded, f"dense_code_tight {message}")
    return "4 branches, 4 messages"


def check_ghz_teleport_table() -> str:
    transcripts = teleportation.teleport_ghz(UnknownStateSpec.epr_form(0.6, 0.8))
    _expect_perfect(transcripts, 8, 1 / 8, "teleport_ghz")
    _expect(all(c.locality_tag != gates.NONLOCAL for t in transcripts for c in t.corrections), "GHZ 传输出现非局域修正")
    return "8 branches at 1/8, fidelity 1"


def check_nonlocal_variant() -> str:
    spec = UnknownStateSpec.epr_form(0.6, 0.8)
    transcript = teleportation.teleport_ghz_nonlocal_variant(spec)
    _expect(transcript.is_perfect, "非局域变体保真度不为 1")
    try:
        teleportation.teleport_ghz_nonlocal_variant(spec, nonlocal_allowed=False)
    except LocalityError:
        return "fidelity 1; rejected without permission"
    raise VerificationError("未允许非局域操作时没有抛出 LocalityError")


def check_ghz_dense_coding() -> str:
    for message in dense_coding.all_messages(3):
        for scheme in (dense_coding.dense_code_ghz, dense_coding.dense_code_ghz_converted,
                       dense_coding.dense_code_ghz_from_epr):
            _expect(scheme(message).succeeded, f"{scheme.__name__}({message}) 解码失败")
    chi = capacity.holevo(capacity.dense_coding_ensemble(bases.ghz_dense_states()))
    _expect(abs(chi - 3.0) <= settings.tolerance, f"GHZ 稠密编码 Holevo 量 {chi} ≠ 3")
    _expect(abs(chi / 2 - 1.5) <= settings.tolerance, "每比特容量 ≠ 3/2")
    _expect(dense_coding.teleport_set_gram_rank() < 8, "传输表生成的态意外构成完备集")
    return "24 round trips, Holevo 3, c = 3/2"


def check_telecloning() -> str:
    rng = np.random.default_rng(VERIFY_SEED)
    for lambda0 in rng.uniform(0, 1, size=20):
        result = telecloning.teleclone(UnknownStateSpec.mixed_diagonal(float(lambda0)))
        expected = np.diag([lambda0, 1 - lambda0])
        _expect(_close(result.rho_b.entries, expected, IDENTITY_TOL), f"λ₀={lambda0}: ρ_B 不是 ρ₁")
        _expect(_close(result.rho_c.entries, expected, IDENTITY_TOL), f"λ₀={lambda0}: ρ_C 不是 ρ₁")
        off_diagonal = result.rho_bc.entries - np.diag(np.diag(result.rho_bc.entries))
        _expect(np.max(np.abs(off_diagonal)) <= IDENTITY_TOL, f"λ₀={lambda0}: ρ'_BC 存在非对角元")
    return "20 random λ₀"


def check_nparty_schemes() -> str:
    for N in range(3, 5):
        spec = UnknownStateSpec.ghz_form(N - 1, 0.6, 0.8)
        _expect_perfect(teleportation.teleport_nparty(spec, N), 2 ** N, 2.0 ** -N, f"teleport_nparty({N})")
    for N in range(2, MAX_N + 1):
        for message in dense_coding.all_messages(N):
            _expect(dense_coding.dense_code_nparty(message).succeeded, f"dense_code_nparty {message}")
    onebit = teleportation.teleport_onebit_style(UnknownStateSpec.epr_form(0.6, 0.8, parallel=True))
    _expect_perfect(onebit, 4, 0.25, "teleport_onebit_style")
    _expect(all(t.classical_bits_sent == 2 for t in onebit), "单 EPR 对方案应发送 2 个经典比特")
    return f"teleport N=3..4, dense N=2..{MAX_N}, one-EPR scheme"


def check_modified_dense() -> str:
    cases = [(3, 1, 2), (3, 1, 3), (3, 0, 0), (4, 1, 2), (4, 2, 3), (4, 1, 4)]
    for N, k, n in cases:
        for message in dense_coding.all_messages(N):
            result = dense_coding.modified_dense_scheme(N, k, n, message)
            _expect(result.succeeded, f"modified(N={N}, k={k}, n={n}) {message}")
    return ", ".join(f"(N={N},k={k},n={n})" for N, k, n in cases)


def check_negative_case() -> str:
    report = teleportation.general_two_qubit_negative_check(
        UnknownStateSpec.general_two_qubit([0.5, 0.5, 0.5, 0.5]))
    _expect(report.applicable and report.fails, f"一般两比特态最低保真度 {report.min_fidelity}")
    return f"min branch fidelity {report.min_fidelity:.6f}"


def check_sampling_determinism() -> str:
    setup = teleportation.ghz_teleport_setup(UnknownStateSpec.epr_form(0.6, 0.8))
    first = locc.sample_branch(setup, 7)
    second = locc.sample_branch(setup, 7)
    _expect(first.outcome == second.outcome, "相同种子抽到不同结果")
    return f"seed 7 → x={first.outcome}"


def check_channel_dependence() -> str:
    spec = UnknownStateSpec.epr_form(0.6, 0.8)
    uniform = teleportation.ghz_channel_outcome_distribution(spec, bases.ghz_state(3))
    _expect(_close(uniform, [1 / 8] * 8), "GHZ 信道的结果分布不均匀")
    product = teleportation.ghz_channel_outcome_distribution(spec, qla.basis_state("000"))
    _expect(_close(product, [0.16] * 4 + [0.09] * 4), f"直积信道分布 {product}")
    channel = capacity.non_maximal_state(bases.BitString.from_int(0, 3), np.sqrt(0.8), np.sqrt(0.2))
    skewed = teleportation.ghz_channel_outcome_distribution(spec, channel)
    ratio = skewed.max() / skewed.min()
    _expect(ratio > 1 + settings.tolerance, f"非最大纠缠信道的分布比值 {ratio}")
    return f"product max/min {product.max() / product.min():.4f}, non-maximal max/min {ratio:.4f}"


def check_sampling_frequencies() -> str:
    shots = 100_000
    setup = teleportation.ghz_teleport_setup(UnknownStateSpec.epr_form(0.6, 0.8))
    frequencies = np.bincount(locc.sample_outcomes(setup, VERIFY_SEED, shots), minlength=8) / shots
    bound = 3 * np.sqrt(0.125 * 0.875 / shots)
    worst = float(np.max(np.abs(frequencies - 0.125)))
    _expect(worst < bound, f"抽样频率偏离 1/8 达 {worst:.5f} (3σ = {bound:.5f})")
    return f"{shots} shots, max deviation {worst:.5f} < {bound:.5f}"


# [检查-容量] =============================================================================================================
def check_capacity_law() -> str:
    rows = capacity.capacity_sweep(range(2, MAX_N + 1), points=21)
    _expect(all(r.abs_diff <= settings.tolerance for r in rows), "Holevo 容量与闭式不一致")
    for N in range(2, MAX_N + 1):
        best = max(r.c for r in rows if r.N == N)
        _expect(abs(best - capacity.max_per_bit_capacity(N)) <= settings.tolerance, f"N={N}: 最大容量 {best}")
    return f"{len(rows)} grid rows"


def check_capacity_monotone() -> str:
    for N in range(2, MAX_N + 1):
        rows = capacity.capacity_sweep([N], points=21)
        ordered = sorted((r for r in rows if r.alpha_sq <= 0.5), key=lambda r: r.E)
        _expect(all(b.c > a.c for a, b in zip(ordered, ordered[1:])), f"N={N}: c 没有随 E 单调上升")
    return f"N=2..{MAX_N}, |α|² ∈ [0, 1/2]"


# [检查注册表] ===========================================================================================================
CHECKS: dict[str, Callable[[], str]] = {
    "partial_trace_of_products": check_partial_trace_of_products,
    "ghz_single_qubit_entropies": check_ghz_single_qubit_entropies,
    "nonuniqueness_identity": check_nonuniqueness_identity,
    "cnot_ghz_preparation": check_cnot_ghz_preparation,
    "entangle_disentangle_inverse": check_entangle_inverse,
    "nonlocal_correction_identity": check_nonlocal_correction_identity,
    "embed_compose_commute": check_embed_compose_commute,
    "single_qubit_locality": check_single_qubit_locality,
    "preposition": check_preposition,
    "product_bases": check_product_bases,
    "tight_schemes": check_tight_schemes,
    "ghz_teleport_table": check_ghz_teleport_table,
    "nonlocal_variant": check_nonlocal_variant,
    "ghz_dense_coding": check_ghz_dense_coding,
    "telecloning": check_telecloning,
    "nparty_schemes": check_nparty_schemes,
    "modified_dense_scheme": check_modified_dense,
    "negative_case": check_negative_case,
    "sampling_determinism": check_sampling_determinism,
    "sampling_frequencies": check_sampling_frequencies,
    "channel_dependence": check_channel_dependence,
    "capacity_law": check_capacity_law,
    "capacity_monotone": check_capacity_monotone,
}


# [外部-运行单个检查] =====================================================================================================
def run_check(name: str) -> CheckResult:
    if name not in CHECKS:
        raise VerificationError(f"未知检查: {name}")
    start = time.perf_counter()
    try:
        detail = CHECKS[name]()
        passed = True
    except Exception as e:
        detail, passed = f"{type(e).__name__}: {e}", False
        log_error(f"[Verify] {name} 失败: {e}")
    return CheckResult(name, passed, detail, time.perf_counter() - start)


# [外部-运行全部检查] =====================================================================================================
def run_verification(names: Optional[list[str]] = None, max_workers: Optional[int] = None) -> list[CheckResult]:
    """按注册顺序返回全部检查结果"""
    names = list(CHECKS) if names is None else names
    with ThreadPoolExecutor(max_workers=max_workers or settings.max_workers) as pool:
        results = list(pool.map(run_check, names))
    passed = sum(r.passed for r in results)
    log_info(f"[Verify] {passed}/{len(results)} 项检查通过")
    return results
