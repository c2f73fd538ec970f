"""算符库：局域性标签、嵌入、复合、Ent/Den"""

import numpy as np
import pytest

from src.core import gates
from src.core.bases import ghz_state
from src.core.qla import StateVector, basis_state, fidelity_pure, partial_trace, tensor
from src.utils.errors import InvalidStateError, UsageError


def test_pauli_phase_conventions():
    x, z = gates.PAULI_MATRICES["X"], gates.PAULI_MATRICES["Z"]
    np.testing.assert_allclose(gates.PAULI_MATRICES["minus_iY"], x @ z)
    np.testing.assert_allclose(gates.PAULI_MATRICES["Y"], 1j * x @ z)
    np.testing.assert_allclose(gates.PAULI_MATRICES["iY"], -(x @ z))


@pytest.mark.parametrize("label", ["I", "X", "Y", "Z", "minus_iY", "iY"])
def test_single_qubit_paulis_are_local(label):
    op = gates.pauli(label, 2)
    assert op.locality_tag == gates.LOCAL_SINGLE
    assert op.targets == (2,)


def test_unknown_pauli_rejected():
    with pytest.raises(UsageError):
        gates.pauli("W")
    with pytest.raises(UsageError):
        gates.signed_pauli("-Q")


def test_signed_pauli_negates_matrix():
    np.testing.assert_allclose(gates.signed_pauli("-X").matrix, -gates.PAULI_MATRICES["X"])


def test_cnot_is_nonlocal():
    assert gates.cnot(1, 2).locality_tag == gates.NONLOCAL
    with pytest.raises(UsageError):
        gates.cnot(2, 2)


def test_dense_product_is_detected_as_factorized():
    dense = np.kron(gates.PAULI_MATRICES["X"], gates.PAULI_MATRICES["Z"])
    op = gates.QubitOperator.from_matrix(dense, [1, 2])
    assert op.locality_tag == gates.FACTORIZED
    assert gates.is_factorizable(dense, 2)
    assert not gates.is_factorizable(gates.CNOT_MATRIX, 2)


def test_non_unitary_rejected():
    with pytest.raises(InvalidStateError):
        gates.QubitOperator.from_matrix(np.array([[1, 1], [0, 1]]), [1])


def test_operator_requires_exactly_one_representation():
    with pytest.raises(UsageError):
        gates.QubitOperator(targets=(1,))


def test_duplicate_or_zero_targets_rejected():
    with pytest.raises(UsageError):
        gates.QubitOperator.from_matrix(gates.CNOT_MATRIX, [1, 1])
    with pytest.raises(UsageError):
        gates.pauli("X", 0)


def test_apply_operator_beyond_register_rejected():
    with pytest.raises(UsageError):
        gates.apply_operator(gates.pauli("X", 3), basis_state("00"))


def test_embed_places_operator_on_targets():
    embedded = gates.embed(gates.cnot(3, 1), 3)
    result = gates.apply_operator(embedded, basis_state("001"))
    np.testing.assert_allclose(result.amplitudes, basis_state("101").amplitudes)
    assert embedded.targets == (1, 2, 3)


def test_compose_applies_last_operator_first():
    # H·X|0⟩ = |−⟩，X·H|0⟩ = |+⟩
    hx = gates.compose([gates.hadamard(1), gates.pauli("X", 1)], 1)
    result = gates.apply_operator(hx, basis_state("0"))
    np.testing.assert_allclose(result.amplitudes, np.array([1, -1]) / np.sqrt(2), atol=1e-12)


def test_compose_of_factors_stays_factorized():
    op = gates.compose([gates.pauli("X", 1), gates.pauli("Z", 2)], 2)
    assert op.factors is not None
    assert op.locality_tag == gates.FACTORIZED


def test_swap_from_three_cnots():
    swap = gates.compose([gates.cnot(1, 2), gates.cnot(2, 1), gates.cnot(1, 2)], 2)
    result = gates.apply_operator(swap, basis_state("01"))
    np.testing.assert_allclose(result.amplitudes, basis_state("10").amplitudes, atol=1e-12)


def test_on_relabels_targets():
    moved = gates.cnot(1, 2).on((4, 5))
    assert moved.targets == (4, 5)
    with pytest.raises(UsageError):
        gates.cnot(1, 2).on((4,))


def test_dagger_inverts():
    op = gates.compose([gates.hadamard(1), gates.cnot(1, 2)], 2)
    product = gates.compose([op.dagger(), op], 2)
    np.testing.assert_allclose(product.matrix, np.eye(4), atol=1e-12)


def test_equals_distinguishes_sign():
    assert gates.pauli("iY").equals(gates.signed_pauli("-minus_iY"))
    assert not gates.pauli("iY").equals(gates.pauli("minus_iY"))


def test_local_factors_of_product():
    op = gates.product_operator(["X", "Z"], [2, 3])
    factors = op.local_factors()
    assert [f.targets for f in factors] == [(2,), (3,)]
    with pytest.raises(UsageError):
        gates.cnot(1, 2).local_factors()


def test_cnot_prepares_ghz_from_epr():
    prepared = gates.apply_operator(gates.cnot(2, 3), tensor(ghz_state(2), basis_state("0")))
    np.testing.assert_allclose(prepared.amplitudes, ghz_state(3).amplitudes, atol=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_entangle_maps_zero_to_ghz(k):
    result = gates.apply_operator(gates.entangle_op(k), basis_state("0" * k))
    assert fidelity_pure(result, ghz_state(k)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_disentangle_is_inverse(k):
    product = gates.compose([gates.disentangle_op(k), gates.entangle_op(k)], k)
    np.testing.assert_allclose(product.matrix, np.eye(2 ** k), atol=1e-12)


def test_entangle_ladder_extends_ghz_block():
    ladder = gates.entangle_op(3, hadamard_first=False)
    assert ladder.label == "Ent_ladder(3)"
    result = gates.apply_operator(ladder.on((2, 3, 4)), tensor(ghz_state(2), basis_state("00")))
    assert fidelity_pure(result, ghz_state(4)) == pytest.approx(1.0, abs=1e-12)
    assert gates.entangle_op(3).label == "Ent(3)"


def test_entangle_requires_two_qubits():
    with pytest.raises(UsageError):
        gates.entangle_op(1)
    with pytest.raises(UsageError):
        gates.disentangle_op(1)


def test_cnot_ladder_targets():
    ladder = gates.cnot_ladder((2, 3, 4))
    assert ladder.targets == (2, 3, 4)
    result = gates.apply_operator(ladder, basis_state("0100"))
    np.testing.assert_allclose(result.amplitudes, basis_state("0111").amplitudes, atol=1e-12)


@pytest.mark.parametrize("N, m, expected", [(3, 2, True), (4, 2, True), (5, 2, False), (2, 1, True)])
def test_validate_arity(N, m, expected):
    assert gates.validate_arity(N, m) is expected


def test_validate_arity_rejects_bad_pairs():
    with pytest.raises(UsageError):
        gates.validate_arity(3, 4)


# ========== 随机算符 ==========
def _random_unitary(rng, m):
    dim = 2 ** m
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_state(rng, n):
    return StateVector.normalized(rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n))


def test_compose_matches_product_of_embeddings(rng):
    """50 组随机两比特与单比特酉算符：compose 等于嵌入后的矩阵乘积，且先作用最后一个"""
    for _ in range(50):
        pair = tuple(int(q) for q in rng.choice(4, size=2, replace=False) + 1)
        single = int(rng.integers(1, 5))
        a = gates.QubitOperator.from_matrix(_random_unitary(rng, 2), pair, "A")
        b = gates.QubitOperator.from_matrix(_random_unitary(rng, 1), (single,), "B")
        composed = gates.compose([a, b], 4)
        expected = gates.embed(a, 4).matrix @ gates.embed(b, 4).matrix
        np.testing.assert_allclose(composed.matrix, expected, atol=1e-10)

        psi = _random_state(rng, 4)
        sequential = gates.apply_operator(a, gates.apply_operator(b, psi))
        np.testing.assert_allclose(gates.apply_operator(composed, psi).amplitudes, sequential.amplitudes, atol=1e-10)


def test_single_qubit_operator_keeps_other_marginals(rng):
    """50 组随机三比特态：作用在一个比特上的酉算符不改变其余比特的约化态"""
    for _ in range(50):
        target = int(rng.integers(1, 4))
        others = tuple(q for q in (1, 2, 3) if q != target)
        op = gates.QubitOperator.from_matrix(_random_unitary(rng, 1), (target,))
        psi = _random_state(rng, 3)
        before = partial_trace(psi, others)
        after = partial_trace(gates.apply_operator(op, psi), others)
        np.testing.assert_allclose(after.entries, before.entries, atol=1e-10)
