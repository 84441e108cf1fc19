import math

import numpy as np
import pytest

from src.circuits.state_prep import (
    InitialStateLayout,
    exact_initial_state,
    exact_state,
    head_state,
    ideal_success_probability,
    initial_state_resources,
    prepare_initial_state,
    prepare_truncated_state,
    state_distance,
    truncation_depth,
)
from src.core.errors import ContractError, DomainError


def test_exact_state_normalized():
    state = exact_initial_state(100, 0.5)
    assert state.norm() == pytest.approx(1.0, abs=1e-15)
    assert state.n_min == 1 and state.n_max == 100
    ratio = state.amps[3].real / state.amps[0].real
    assert ratio == pytest.approx(4 ** -0.25)


def test_state_distance_of_identical_states():
    a = exact_state(5, 8, 0.5)
    assert state_distance(a, a) == 0.0


def test_truncated_state_uniform_weights():
    result = prepare_truncated_state(8, 3, 0.0, 1e-3)
    assert len(result.state) == 8
    assert result.state.n_min == 8
    np.testing.assert_allclose(np.abs(result.state.amps), 1.0 / math.sqrt(8), atol=1e-3)
    assert result.distance.value <= 1e-3


def test_truncated_state_contract():
    eps = 1e-3
    result = prepare_truncated_state(32, 5, 0.5, eps)
    assert result.distance.value <= eps
    assert len(result.round_errors) == 5
    assert result.max_angle_error <= eps / 5
    assert result.resources.gates > 0
    assert [stage for stage, _ in result.ledger.stages][:3] == [
        "round_0.oracle", "round_0.rotation", "round_0.uncompute",
    ]


def test_truncated_distance_shrinks_with_eps():
    coarse = prepare_truncated_state(32, 5, 0.5, 1e-2)
    fine = prepare_truncated_state(32, 5, 0.5, 1e-4)
    assert fine.distance.value <= 1e-4 < 1e-2
    assert fine.resources.gates > coarse.resources.gates


def _check_random_truncated_states(rng, count: int, k_max: int) -> None:
    checked = 0
    while checked < count:
        k = int(rng.integers(1, k_max + 1))
        beta = float(rng.uniform(0.0, 2.5))
        eps = float(10.0 ** rng.uniform(-4.0, -2.0))
        if abs(beta - 1.0) < 1e-3:
            continue
        n0 = math.ceil(beta + 2 * truncation_depth(eps)) + 1 + int(rng.integers(0, 200))
        result = prepare_truncated_state(n0, k, beta, eps)
        assert result.distance.value <= sum(result.round_errors) + 1e-12
        assert result.distance.value <= eps
        checked += 1


def test_truncated_distance_bounded_by_angle_errors(rng):
    _check_random_truncated_states(rng, 15, 5)


@pytest.mark.slow
def test_truncated_distance_bounded_on_full_random_grid(rng):
    _check_random_truncated_states(rng, 50, 8)


@pytest.mark.parametrize(
    "n0, k, beta, eps",
    [(32, 0, 0.5, 1e-3), (32, 3, 1.0, 1e-3), (32, 3, -0.1, 1e-3), (4, 3, 0.5, 1e-3), (32, 3, 0.5, 0.0)],
)
def test_truncated_state_rejects_parameters(n0, k, beta, eps):
    with pytest.raises(ContractError):
        prepare_truncated_state(n0, k, beta, eps)


def test_head_state_close_to_exact():
    state = head_state(16, 0.7, 30)
    assert state_distance(state, exact_state(1, 16, 0.7)) < 1e-8


def test_initial_state_contracts():
    eps = 1e-3
    result = prepare_initial_state(64, 0.5, eps)
    assert result.distance.value <= eps
    assert result.success_prob >= 0.5 - eps / 3
    assert abs(result.success_prob - ideal_success_probability(64, 0.5, eps)) <= eps
    assert len(result.state) == 64
    assert result.layout["head_only"] is False
    assert set(result.stage_distances) == {"head", "truncated", "gamma_error", "extended"}
    assert result.resources == result.ledger.total()


@pytest.mark.parametrize("N, beta", [(100, 0.5), (64, 2.0)])
def test_initial_state_other_parameters(N, beta):
    eps = 1e-3
    result = prepare_initial_state(N, beta, eps)
    assert result.distance.value <= eps
    assert result.success_prob >= 0.5 - eps / 3


@pytest.mark.parametrize("N", [8, 10])
def test_initial_state_head_only(N):
    layout = InitialStateLayout(N, 0.5, 1e-3)
    assert layout.head_only
    result = prepare_initial_state(N, 0.5, 1e-3)
    assert result.distance.value <= 1e-3
    assert len(result.state) == N
    assert "truncated" not in result.stage_distances


def test_layout_window_covers_N():
    layout = InitialStateLayout(64, 0.5, 1e-3)
    assert layout.n0 - 1 > math.ceil(0.5 + 2 * layout.c)
    assert (layout.n0 - 1) & (layout.n0 - 2) == 0
    assert layout.n1 - 1 >= 64
    assert layout.n1 - layout.n0 == 1 << layout.k


@pytest.mark.parametrize("N, beta, eps", [(3, 0.5, 1e-3), (64, 1.0, 1e-3), (64, 0.0, 1e-3), (64, 0.5, 0.0)])
def test_initial_state_domain(N, beta, eps):
    with pytest.raises(DomainError):
        prepare_initial_state(N, beta, eps)


def test_resources_grow_with_N():
    sizes = [2 ** k for k in range(6, 13)]
    gates = [initial_state_resources(N, 0.5, 1e-3).total().gates for N in sizes]
    assert gates == sorted(gates)
    assert gates[-1] > gates[0]
