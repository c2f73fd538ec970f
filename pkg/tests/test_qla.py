"""线性代数层：态的构造、偏迹、熵、保真度与投影"""

import numpy as np
import pytest
from hypothesis import assume, given, settings as hyp_settings
from hypothesis.strategies import floats, lists

from src.core import qla
from src.core.bases import ghz_state
from src.utils.errors import DimensionMismatchError, InvalidStateError, UsageError

unit_floats = floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


def _random_state(values) -> qla.StateVector:
    values = np.asarray(values, dtype=float)
    half = len(values) // 2
    return qla.StateVector.normalized(values[:half] + 1j * values[half:])


# ========== 构造 ==========
def test_basis_state_is_big_endian():
    psi = qla.basis_state("01")
    np.testing.assert_allclose(psi.amplitudes, [0, 1, 0, 0])
    assert psi.num_qubits == 2


def test_tensor_orders_first_argument_as_high_qubits():
    joined = qla.tensor(qla.basis_state("1"), qla.basis_state("0"))
    np.testing.assert_allclose(joined.amplitudes, qla.basis_state("10").amplitudes)


def test_unnormalized_state_rejected():
    with pytest.raises(InvalidStateError):
        qla.StateVector(1, np.array([1.0, 1.0]))


def test_length_mismatch_rejected():
    with pytest.raises(DimensionMismatchError):
        qla.StateVector(2, np.array([1.0, 0.0]))


def test_nan_rejected():
    with pytest.raises(InvalidStateError):
        qla.StateVector(1, np.array([np.nan, 0.0]))


def test_register_cap_enforced():
    with pytest.raises(UsageError):
        qla.StateVector(17, np.array([1.0]))


def test_empty_register_allowed():
    psi = qla.StateVector(0, np.array([1.0]))
    assert psi.num_qubits == 0


def test_amplitudes_are_frozen():
    psi = qla.basis_state("0")
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0.5


def test_normalized_rejects_zero_vector():
    with pytest.raises(InvalidStateError):
        qla.StateVector.normalized([0.0, 0.0])


def test_density_matrix_invariants():
    with pytest.raises(InvalidStateError):
        qla.DensityMatrix.from_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidStateError):
        qla.DensityMatrix.from_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(InvalidStateError):
        qla.DensityMatrix.from_matrix(np.diag([0.5, 0.4]))


# ========== 偏迹 ==========
def test_partial_trace_respects_keep_order():
    psi = qla.basis_state("01")
    reduced = qla.partial_trace(psi, [2, 1])
    expected = np.zeros((4, 4))
    expected[2, 2] = 1.0
    np.testing.assert_allclose(reduced.entries, expected, atol=1e-12)


def test_partial_trace_state_and_density_agree():
    psi = ghz_state(3)
    from_state = qla.partial_trace(psi, [1, 3])
    from_density = qla.partial_trace(qla.to_density(psi), [1, 3])
    np.testing.assert_allclose(from_state.entries, from_density.entries, atol=1e-12)


def test_partial_trace_empty_keep_rejected():
    with pytest.raises(UsageError):
        qla.partial_trace(qla.basis_state("00"), [])


def test_partial_trace_out_of_range_rejected():
    with pytest.raises(UsageError):
        qla.partial_trace(qla.basis_state("00"), [3])


@hyp_settings(max_examples=50, deadline=None)
@given(lists(unit_floats, min_size=8, max_size=8), lists(unit_floats, min_size=4, max_size=4))
def test_partial_trace_of_product_recovers_factor(a_values, b_values):
    assume(np.linalg.norm(a_values) > 0.1 and np.linalg.norm(b_values) > 0.1)
    a, b = _random_state(a_values), _random_state(b_values)
    reduced = qla.partial_trace(qla.tensor(a, b), [1, 2])
    np.testing.assert_allclose(reduced.entries, qla.to_density(a).entries, atol=1e-10)


# ========== 熵 ==========
@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_ghz_single_qubit_entropies_are_one(N):
    np.testing.assert_allclose(qla.single_qubit_entropies(ghz_state(N)), [1.0] * N, atol=1e-10)


def test_entropy_of_maximally_mixed_qubit():
    assert qla.von_neumann_entropy(qla.DensityMatrix.diagonal([0.5, 0.5])) == pytest.approx(1.0, abs=1e-12)


def test_entropy_of_pure_state_is_zero():
    assert qla.von_neumann_entropy(qla.to_density(qla.basis_state("1"))) == 0.0


def test_product_state_detection():
    assert qla.is_product_state(qla.basis_state("010"))
    assert not qla.is_product_state(ghz_state(3))


# ========== 保真度 ==========
def test_fidelity_ignores_global_phase():
    psi = qla.StateVector.normalized([0.6, 0.8j])
    rotated = qla.StateVector(1, psi.amplitudes * np.exp(1j * 0.7))
    assert qla.fidelity_pure(psi, rotated) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        qla.fidelity_pure(qla.basis_state("0"), qla.basis_state("00"))


def test_mixed_fidelity_of_diagonal_states():
    rho = qla.DensityMatrix.diagonal([0.3, 0.7])
    sigma = qla.DensityMatrix.diagonal([0.7, 0.3])
    expected = (np.sqrt(0.3 * 0.7) + np.sqrt(0.7 * 0.3)) ** 2
    assert qla.fidelity_mixed(rho, sigma) == pytest.approx(expected, abs=1e-10)
    assert qla.fidelity_mixed(rho, rho) == pytest.approx(1.0, abs=1e-10)


def test_mixed_fidelity_with_pure_argument():
    rho = qla.DensityMatrix.diagonal([0.25, 0.75])
    assert qla.fidelity_mixed(rho, qla.basis_state("1")) == pytest.approx(0.75, abs=1e-12)


# ========== 投影 ==========
def test_project_ghz_first_qubit():
    probability, residual = qla.project(ghz_state(3), qla.basis_state("0"), [1])
    assert probability == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(residual.amplitudes, qla.basis_state("00").amplitudes, atol=1e-12)


def test_project_zero_probability_returns_none():
    probability, residual = qla.project(qla.basis_state("00"), qla.basis_state("1"), [1])
    assert probability == 0.0
    assert residual is None


def test_project_density_matches_pure_projection():
    psi = qla.StateVector.normalized([0.1, 0.3, 0.5j, 0.2, 0.4, -0.1, 0.3, 0.6])
    phi = qla.StateVector.normalized([1.0, 1.0j])
    pure = qla.project(psi, phi, [2])
    mixed = qla.project_density(qla.to_density(psi), phi, [2])
    assert mixed.probability == pytest.approx(pure.probability, abs=1e-12)
    np.testing.assert_allclose(mixed.residual.entries, qla.to_density(pure.residual).entries, atol=1e-10)


def test_project_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        qla.project(ghz_state(3), qla.basis_state("00"), [1])


# ========== 作用矩阵 ==========
def test_apply_matrix_on_second_qubit():
    x = np.array([[0, 1], [1, 0]])
    flipped = qla.apply_matrix(qla.basis_state("00"), x, [2])
    np.testing.assert_allclose(flipped.amplitudes, qla.basis_state("01").amplitudes)


def test_apply_matrix_target_order_sets_matrix_bit_order():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    # 控制位为比特 2，目标位为比特 1
    result = qla.apply_matrix(qla.basis_state("01"), cnot, [2, 1])
    np.testing.assert_allclose(result.amplitudes, qla.basis_state("11").amplitudes)


def test_apply_matrix_density_conjugates():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    rho = qla.apply_matrix_density(qla.to_density(qla.basis_state("0")), h, [1])
    np.testing.assert_allclose(rho.entries, np.full((2, 2), 0.5), atol=1e-12)


def test_apply_matrix_batch_matches_single_application():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    columns = qla.apply_matrix_batch(np.eye(4, dtype=complex), h, [1], 2)
    np.testing.assert_allclose(columns, np.kron(h, np.eye(2)), atol=1e-12)
