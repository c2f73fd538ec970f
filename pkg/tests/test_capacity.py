"""信道容量：Holevo 量、纠缠度、系综分解与闭式交叉校验"""

import numpy as np
import pytest

from src.core import capacity
from src.core.bases import BitString, ghz_class_basis, ghz_dense_states
from src.core.qla import DensityMatrix, basis_state, to_density
from src.utils.errors import DimensionMismatchError, InvalidStateError, UsageError


def test_holevo_of_orthogonal_ensemble():
    chi = capacity.holevo(capacity.dense_coding_ensemble(ghz_dense_states()))
    assert chi == pytest.approx(3.0, abs=1e-10)


def test_holevo_of_identical_states_is_zero():
    ensemble = capacity.dense_coding_ensemble([basis_state("0")] * 4)
    assert capacity.holevo(ensemble) == pytest.approx(0.0, abs=1e-12)


def test_holevo_of_mixed_members():
    ensemble = capacity.Ensemble(
        (DensityMatrix.diagonal([0.5, 0.5]), to_density(basis_state("0"))),
        (0.5, 0.5),
    )
    # ρ̄ = diag(3/4, 1/4)
    expected = -(0.75 * np.log2(0.75) + 0.25 * np.log2(0.25)) - 0.5
    assert capacity.holevo(ensemble) == pytest.approx(expected, abs=1e-12)


def test_ensemble_validation():
    with pytest.raises(InvalidStateError):
        capacity.Ensemble((to_density(basis_state("0")),), (0.9,))
    with pytest.raises(UsageError):
        capacity.Ensemble((), ())
    with pytest.raises(DimensionMismatchError):
        capacity.Ensemble((to_density(basis_state("0")), to_density(basis_state("00"))), (0.5, 0.5))


@pytest.mark.parametrize("alpha_sq, expected", [(0.5, 1.0), (1.0, 0.0), (0.0, 0.0)])
def test_channel_entanglement(alpha_sq, expected):
    value = capacity.channel_entanglement(np.sqrt(alpha_sq), np.sqrt(1 - alpha_sq))
    assert value == pytest.approx(expected, abs=1e-12)


def test_channel_entanglement_ignores_phase():
    assert capacity.channel_entanglement(0.6, 0.8j) == pytest.approx(capacity.channel_entanglement(0.6, 0.8))


def test_channel_entanglement_requires_normalization():
    with pytest.raises(InvalidStateError):
        capacity.channel_entanglement(0.6, 0.6)


def test_maximal_non_maximal_state_is_ghz_class_element():
    bits = BitString.from_str("110")
    state = capacity.non_maximal_state(bits, 1 / np.sqrt(2), 1 / np.sqrt(2))
    np.testing.assert_allclose(state.amplitudes, ghz_class_basis(3)[bits].amplitudes, atol=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_ensemble_density_factorizes(N):
    alpha, beta = np.sqrt(0.3), np.sqrt(0.7)
    rho = capacity.ensemble_density(N, alpha, beta)
    expected = np.kron(np.diag([0.3, 0.7]), np.eye(2 ** (N - 1)) / 2 ** (N - 1))
    np.testing.assert_allclose(rho.entries, expected, atol=1e-10)


def test_ensemble_density_bounds():
    with pytest.raises(UsageError):
        capacity.ensemble_density(9, 1.0, 0.0)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_capacity_law_on_grid(N):
    for a2 in capacity.alpha_grid(21):
        c = capacity.per_bit_capacity(N, np.sqrt(a2), np.sqrt(1 - a2))
        E = capacity.channel_entanglement(np.sqrt(a2), np.sqrt(1 - a2))
        assert c == pytest.approx(1 + E / (N - 1), abs=1e-10)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_per_bit_capacity_grows_with_entanglement(N):
    """|α|² 从 0 增大到 1/2 时 E 单调上升，c 随之单调上升"""
    points = [(capacity.channel_entanglement(np.sqrt(a2), np.sqrt(1 - a2)),
               capacity.per_bit_capacity(N, np.sqrt(a2), np.sqrt(1 - a2)))
              for a2 in np.linspace(0.0, 0.5, 11)]
    entanglements = [e for e, _ in points]
    capacities = [c for _, c in points]
    assert np.all(np.diff(entanglements) > 0)
    assert np.all(np.diff(capacities) > 0)
    assert capacities[0] == pytest.approx(1.0, abs=1e-10)
    assert capacities[-1] == pytest.approx(capacity.max_per_bit_capacity(N), abs=1e-10)


def test_ghz_per_bit_capacity():
    assert capacity.per_bit_capacity(3, 1 / np.sqrt(2), 1 / np.sqrt(2)) == pytest.approx(1.5, abs=1e-10)


def test_tight_scheme_capacity_doubles():
    assert capacity.per_bit_capacity(2, 1 / np.sqrt(2), 1 / np.sqrt(2)) == pytest.approx(2.0, abs=1e-10)


@pytest.mark.parametrize("N", [2, 3, 4, 6])
def test_max_per_bit_capacity(N):
    assert capacity.max_per_bit_capacity(N) == pytest.approx(N / (N - 1))


def test_capacity_sweep_rows():
    rows = capacity.capacity_sweep([3], points=21)
    assert len(rows) == 21
    middle = next(r for r in rows if abs(r.alpha_sq - 0.5) < 1e-12)
    assert middle.c == pytest.approx(1.5, abs=1e-10)
    assert middle.E == pytest.approx(1.0, abs=1e-10)
    assert max(r.abs_diff for r in rows) <= 1e-10


def test_alpha_grid_needs_two_points():
    with pytest.raises(UsageError):
        capacity.alpha_grid(1)


def test_capacity_row_rejects_small_N():
    with pytest.raises(UsageError):
        capacity.capacity_row(1, 1.0, 0.0)
