"""测量基：GHZ 类完备集、生成算符、传输基与稠密编码转换"""

import numpy as np
import pytest

from src.core import bases
from src.core.gates import apply_operator, hadamard, pauli
from src.core.qla import StateVector, basis_state, single_qubit_entropies
from src.utils.errors import InvalidStateError, UsageError

SQRT_HALF = 1 / np.sqrt(2)


# ========== BitString ==========
def test_bitstring_round_trip_values():
    bits = bases.BitString.from_str("101")
    assert bits.value == 5
    assert str(bits) == "101"
    assert len(bits) == 3
    assert bases.BitString.from_int(5, 3) == bits


@pytest.mark.parametrize("text", ["", "10a", "2"])
def test_bitstring_rejects_bad_text(text):
    with pytest.raises(UsageError):
        bases.BitString.from_str(text)


def test_bitstring_from_int_overflow():
    with pytest.raises(UsageError):
        bases.BitString.from_int(8, 3)


# ========== GHZ 类完备集 ==========
def test_bell_basis_order():
    bell = bases.bell_basis()
    np.testing.assert_allclose(bell[0].amplitudes, [SQRT_HALF, 0, 0, SQRT_HALF])
    np.testing.assert_allclose(bell[1].amplitudes, [0, SQRT_HALF, SQRT_HALF, 0])
    np.testing.assert_allclose(bell[2].amplitudes, [SQRT_HALF, 0, 0, -SQRT_HALF])
    np.testing.assert_allclose(bell[3].amplitudes, [0, SQRT_HALF, -SQRT_HALF, 0])


def test_ghz_class_first_element_is_ghz():
    np.testing.assert_allclose(bases.ghz_class_basis(4)[0].amplitudes, bases.ghz_state(4).amplitudes)


@pytest.mark.parametrize("N", range(2, 11))
def test_ghz_class_basis_is_complete_and_maximally_entangled(N):
    basis = bases.ghz_class_basis(N)
    assert len(basis) == 2 ** N
    assert basis.completeness_residual() < 1e-10
    for element in basis.elements:
        np.testing.assert_allclose(single_qubit_entropies(element), [1.0] * N, atol=1e-10)


@pytest.mark.parametrize("N", [2, 3, 5, 7])
def test_generating_operator_reproduces_elements(N):
    basis = bases.ghz_class_basis(N)
    omega = bases.ghz_state(N)
    for x in range(2 ** N):
        bits = bases.BitString.from_int(x, N)
        generated = apply_operator(bases.generating_operator(bits), omega)
        np.testing.assert_allclose(generated.amplitudes, basis[x].amplitudes, atol=1e-12)


@pytest.mark.parametrize("N, m", [(4, 1), (5, 2), (6, 2)])
def test_check_family_arity_rejects_small_families(N, m):
    with pytest.raises(UsageError):
        bases.check_family_arity(N, m)


def test_basis_from_generators_matches_ghz_class():
    generators = [bases.generating_operator(bases.BitString.from_int(x, 3)) for x in range(8)]
    basis = bases.basis_from_generators(generators, 3, "generated(3)")
    reference = bases.ghz_class_basis(3)
    for x in range(8):
        np.testing.assert_allclose(basis[x].amplitudes, reference[x].amplitudes, atol=1e-12)


def test_basis_from_generators_rejects_single_qubit_family():
    """单比特算符族对 N=4 元数不足，登记前即被拒绝"""
    with pytest.raises(UsageError):
        bases.basis_from_generators([pauli("X", 2)] * 16, 4, "single")
    with pytest.raises(UsageError):
        bases.basis_from_generators([pauli("X", 2)] * 3, 2, "short")


def test_generating_operator_leaves_first_qubit_alone():
    op = bases.generating_operator(bases.BitString.from_str("1101"))
    assert op.targets == (2, 3, 4)
    assert op.locality_tag == "factorized"


def test_ghz_class_basis_bounds():
    with pytest.raises(UsageError):
        bases.ghz_class_basis(1)
    with pytest.raises(UsageError):
        bases.ghz_class_basis(13)


def test_index_of_ignores_global_phase():
    basis = bases.ghz_class_basis(3)
    rotated = StateVector(3, basis[6].amplitudes * 1j)
    assert basis.index_of(rotated) == 6
    assert basis.index_of(basis_state("000")) is None


def test_basis_lookup_by_bitstring():
    basis = bases.ghz_class_basis(3)
    assert basis[bases.BitString.from_str("011")] is basis[3]


def test_non_orthonormal_basis_rejected():
    with pytest.raises(InvalidStateError):
        bases.ProjectiveBasis("bad", 1, (basis_state("0"), basis_state("0")))


def test_wrong_element_count_rejected():
    with pytest.raises(UsageError):
        bases.ProjectiveBasis("short", 1, (basis_state("0"),))


def test_transformed_basis_stays_complete():
    transformed = bases.ghz_class_basis(2).transformed(hadamard(1), "H·bell")
    assert transformed.completeness_residual() < 1e-10
    assert transformed.label == "H·bell"


# ========== 传输基 ==========
def test_teleport_basis_ghz_first_element():
    first = bases.teleport_basis_ghz()[0]
    expected = np.kron([SQRT_HALF, SQRT_HALF], [SQRT_HALF, 0, 0, SQRT_HALF])
    np.testing.assert_allclose(first.amplitudes, expected, atol=1e-12)


def test_teleport_basis_ghz_is_complete():
    assert bases.teleport_basis_ghz().completeness_residual() < 1e-10


@pytest.mark.parametrize("N", [3, 4, 5])
def test_nparty_teleport_basis_is_complete(N):
    basis = bases.nparty_teleport_basis(N)
    assert len(basis) == 2 ** N
    assert basis.completeness_residual() < 1e-10


def test_nparty_teleport_basis_index_layout():
    # 下标 = (符号位 << 2) | Bell 下标：x = 0b1_10 → π⁻ ⊗ Φ⁻
    element = bases.nparty_teleport_basis(3)[6]
    expected = np.kron([SQRT_HALF, -SQRT_HALF], [SQRT_HALF, 0, 0, -SQRT_HALF])
    np.testing.assert_allclose(element.amplitudes, expected, atol=1e-12)


def test_product_basis_dimensions():
    product = bases.product_basis(bases.pi_basis(), bases.computational_basis(1), "pi⊗z")
    assert product.num_qubits == 2
    assert product.completeness_residual() < 1e-10


# ========== 稠密编码转换 ==========
def test_ghz_dense_states_form_complete_set():
    states = bases.ghz_dense_states()
    assert len(states) == 8
    assert bases.basis_from_states(states, "dense_ghz").completeness_residual() < 1e-10


def test_converted_dense_basis_is_complete():
    assert bases.converted_dense_basis().completeness_residual() < 1e-12


def test_convert_dense_requires_three_bits():
    with pytest.raises(UsageError):
        bases.convert_dense_to_teleport(bases.BitString.from_str("10"))


def test_teleport_table_states_are_not_a_basis():
    with pytest.raises(InvalidStateError):
        bases.basis_from_states(bases.teleport_table_states(), "teleport_table")


def test_basis_from_states_requires_states():
    with pytest.raises(UsageError):
        bases.basis_from_states([], "empty")
