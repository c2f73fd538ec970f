"""协议引擎：设定校验、分支执行、局域性规则与种子抽样"""

from dataclasses import replace

import numpy as np
import pytest

from src.agents.party import ClassicalMessage, Correction, Party, check_ownership
from src.core import locc
from src.core.bases import BitString, computational_basis, ghz_state
from src.core.gates import cnot, pauli
from src.core.qla import basis_state, tensor
from src.protocols.specs import UnknownStateSpec
from src.protocols.teleportation import ghz_teleport_setup
from src.utils.errors import BranchImpossibleError, DimensionMismatchError, LocalityError, UsageError


def _toy_setup(corrections=None, nonlocal_allowed=False, initial=None):
    """Alice 拥有 (1, 2)，Bob 拥有 3；测量比特 1，剩余 (2, 3)"""
    return locc.ProtocolSetup(
        name="toy",
        parties=(Party("Alice", (1, 2)), Party("Bob", (3,))),
        initial_state=initial or basis_state("000"),
        measured_qubits=(1,),
        basis=computational_basis(1),
        measuring_party="Alice",
        receivers=("Bob",),
        corrections=corrections if corrections is not None else {0: [], 1: []},
        target=basis_state("00"),
        nonlocal_allowed=nonlocal_allowed,
    )


# ========== 参与方 ==========
def test_party_ownership_must_be_disjoint():
    with pytest.raises(UsageError):
        check_ownership([Party("Alice", (1, 2)), Party("Bob", (2,))])
    with pytest.raises(UsageError):
        check_ownership([Party("Alice", (1,)), Party("Alice", (2,))])


def test_classical_message_needs_bits():
    with pytest.raises(UsageError):
        ClassicalMessage("Alice", "Bob", BitString(()))


def test_correction_locality_rules():
    parties = {"Alice": Party("Alice", (1, 2)), "Bob": Party("Bob", (3,))}
    Correction("Bob", pauli("X", 3)).check_locality(parties, nonlocal_allowed=False)
    with pytest.raises(LocalityError):
        Correction("Bob", pauli("X", 2)).check_locality(parties, nonlocal_allowed=False)
    with pytest.raises(LocalityError):
        Correction("Alice", cnot(1, 2)).check_locality(parties, nonlocal_allowed=False)
    Correction("Alice", cnot(2, 3)).check_locality(parties, nonlocal_allowed=True)


# ========== 设定校验 ==========
def test_setup_requires_full_coverage():
    with pytest.raises(UsageError):
        replace(_toy_setup(), parties=(Party("Alice", (1,)), Party("Bob", (3,))))


def test_setup_rejects_unknown_receiver():
    with pytest.raises(UsageError):
        replace(_toy_setup(), receivers=("Claire",))


def test_setup_rejects_basis_width_mismatch():
    with pytest.raises(DimensionMismatchError):
        replace(_toy_setup(), measured_qubits=(1, 2))


def test_setup_rejects_target_width_mismatch():
    with pytest.raises(DimensionMismatchError):
        replace(_toy_setup(), target=basis_state("0"))


def test_remaining_qubits_keep_order():
    setup = _toy_setup()
    assert setup.remaining_qubits == (2, 3)
    assert setup.outcome_bits == 1


# ========== 分支执行 ==========
def test_branch_probabilities_sum_to_one(epr_spec):
    setup = ghz_teleport_setup(epr_spec)
    probabilities = locc.branch_probabilities(setup.initial_state, setup.basis, setup.measured_qubits)
    np.testing.assert_allclose(probabilities, [1 / 8] * 8, atol=1e-10)


def test_zero_probability_branch_recorded_as_impossible():
    transcripts = locc.run_all_branches(_toy_setup())
    assert [t.branch_possible for t in transcripts] == [True, False]
    impossible = transcripts[1]
    assert impossible.outcome_probability == 0.0
    assert impossible.final_state is None and impossible.fidelity is None
    assert transcripts[0].is_perfect


def test_run_branch_raises_for_impossible_outcome():
    with pytest.raises(BranchImpossibleError):
        locc.run_branch(_toy_setup(), 1)


def test_run_branch_outcome_out_of_range():
    with pytest.raises(UsageError):
        locc.run_branch(_toy_setup(), 2)


def test_transcript_records_classical_messages():
    transcript = locc.run_branch(_toy_setup(), 0)
    assert transcript.messages == (ClassicalMessage("Alice", "Bob", BitString((0,))),)
    assert transcript.classical_bits_sent == 1
    assert transcript.outcome == BitString((0,))


def test_engine_rejects_correction_on_foreign_qubit():
    setup = _toy_setup(corrections={0: [Correction("Bob", pauli("X", 2))], 1: []})
    with pytest.raises(LocalityError):
        locc.run_branch(setup, 0)


def test_engine_rejects_nonlocal_without_permission():
    setup = _toy_setup(corrections={0: [Correction("Bob", cnot(2, 3))], 1: []})
    with pytest.raises(LocalityError):
        locc.run_branch(setup, 0)


def test_engine_applies_permitted_nonlocal_correction():
    # 初态 |010⟩，测得 0 后剩余 |10⟩，C_23 把它变成 |11⟩
    setup = replace(
        _toy_setup(corrections={0: [Correction("Bob", cnot(2, 3))], 1: []}, nonlocal_allowed=True,
                   initial=basis_state("010")),
        target=basis_state("11"),
    )
    transcript = locc.run_branch(setup, 0)
    assert transcript.is_perfect
    assert transcript.nonlocal_allowed


def test_missing_correction_entry_is_usage_error():
    setup = _toy_setup(corrections={1: []})
    with pytest.raises(UsageError):
        locc.run_branch(setup, 0)


def test_correction_on_measured_qubit_rejected():
    setup = _toy_setup(corrections={0: [Correction("Alice", pauli("X", 1))], 1: []})
    with pytest.raises(UsageError):
        locc.run_branch(setup, 0)


def test_pre_operations_applied_before_measurement():
    # Alice 先在自己的比特 1 上作用 X，测量结果必然为 1
    setup = replace(_toy_setup(), pre_operations=(Correction("Alice", pauli("X", 1)),))
    transcripts = locc.run_all_branches(setup)
    assert [t.branch_possible for t in transcripts] == [False, True]


# ========== 抽样 ==========
def test_sampling_is_deterministic(epr_spec):
    setup = ghz_teleport_setup(epr_spec)
    first = locc.sample_branch(setup, 7)
    second = locc.sample_branch(setup, 7)
    assert first.outcome == second.outcome
    assert first.rng == locc.RngRecord("PCG64", 7)
    assert first.is_perfect


def test_sample_outcomes_follow_probabilities(epr_spec):
    """10⁵ 次抽样，每个分支频率落在 1/8 的 3σ 之内"""
    shots = 100_000
    setup = ghz_teleport_setup(epr_spec)
    outcomes = locc.sample_outcomes(setup, seed=11, shots=shots)
    frequencies = np.bincount(outcomes, minlength=8) / shots
    sigma = np.sqrt(0.125 * 0.875 / shots)
    assert outcomes.shape == (shots,)
    assert np.all(np.abs(frequencies - 0.125) < 3 * sigma)


def test_sample_outcomes_reproducible(epr_spec):
    setup = ghz_teleport_setup(epr_spec)
    np.testing.assert_array_equal(locc.sample_outcomes(setup, 3, 50), locc.sample_outcomes(setup, 3, 50))


@pytest.mark.parametrize("seed", [-1, 2 ** 64, "7"])
def test_invalid_seed_rejected(seed):
    with pytest.raises(UsageError):
        locc.make_rng(seed)


def test_summarize(epr_spec):
    summary = locc.summarize(locc.run_all_branches(ghz_teleport_setup(epr_spec)))
    assert summary.branches == 8
    assert summary.possible_branches == 8
    assert summary.total_probability == pytest.approx(1.0, abs=1e-10)
    assert summary.all_perfect


def test_density_matrix_setup_runs():
    spec = UnknownStateSpec.mixed_diagonal(0.3)
    from src.protocols.telecloning import teleclone_setup
    transcripts = locc.run_all_branches(teleclone_setup(spec))
    assert len(transcripts) == 4
    assert all(t.is_perfect for t in transcripts)
    assert sum(t.outcome_probability for t in transcripts) == pytest.approx(1.0, abs=1e-10)


def test_tensor_initial_state_width():
    assert tensor(basis_state("0"), ghz_state(2)).num_qubits == 3
