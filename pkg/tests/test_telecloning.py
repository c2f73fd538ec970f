"""混态远程克隆"""

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis.strategies import floats

from src.core.bases import ghz_state
from src.protocols.specs import UnknownStateSpec
from src.protocols.telecloning import teleclone, teleclone_setup
from src.utils.errors import InvalidStateError, UnsupportedStateError


@hyp_settings(max_examples=20, deadline=None)
@given(floats(min_value=0.0, max_value=1.0))
def test_both_receivers_hold_exact_copies(lambda0):
    result = teleclone(UnknownStateSpec.mixed_diagonal(lambda0))
    expected = np.diag([lambda0, 1.0 - lambda0])
    np.testing.assert_allclose(result.rho_b.entries, expected, atol=1e-12)
    np.testing.assert_allclose(result.rho_c.entries, expected, atol=1e-12)


def test_joint_state_is_classically_correlated():
    result = teleclone(UnknownStateSpec.mixed_diagonal(0.3))
    np.testing.assert_allclose(result.rho_bc.entries, np.diag([0.3, 0, 0, 0.7]), atol=1e-12)


def test_teleclone_branches():
    result = teleclone(UnknownStateSpec.mixed_diagonal(0.25))
    assert len(result.transcripts) == 4
    for t in result.transcripts:
        assert t.outcome_probability == pytest.approx(0.25, abs=1e-10)
        assert t.classical_bits_sent == 2
        assert {m.recipient for m in t.messages} == {"Bob", "Claire"}


def test_teleclone_setup_register():
    setup = teleclone_setup(UnknownStateSpec.mixed_diagonal(0.5))
    assert setup.initial_state.num_qubits == 4
    assert setup.remaining_qubits == (3, 4)


def test_teleclone_rejects_pure_spec():
    with pytest.raises(UnsupportedStateError):
        teleclone(UnknownStateSpec.single_qubit(0.6, 0.8))


@pytest.mark.parametrize("lambda0", [-0.1, 1.5])
def test_mixed_weights_validated(lambda0):
    with pytest.raises(InvalidStateError):
        UnknownStateSpec.mixed_diagonal(lambda0)


def test_ghz_channel_width():
    assert ghz_state(3).num_qubits == 3
