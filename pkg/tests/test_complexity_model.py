import math

import pytest

from src.complexity.model import (
    Estimation,
    chi_growth_exponent,
    probe_precisions,
    riemann_siegel_error,
    rs_cutoff,
    sample_bounds,
    zero_region_check,
    zero_region_edge,
    zeta_prime_bound,
    zeta_prime_estimate,
)
from src.core.errors import DomainError


def test_rs_cutoff():
    assert rs_cutoff(1000.0) == 13
    assert rs_cutoff(-1000.0) == 13
    assert rs_cutoff(1.0) == 1


def test_sample_bounds_scaling():
    estimate = sample_bounds(0.5, 1e8, 0.01, include_circuits=False)
    assert estimate.total_scaling == pytest.approx(1e4)
    assert estimate.sample_complexity_1 == pytest.approx(2e4)
    assert estimate.sample_complexity_2 == pytest.approx(2e4)
    assert estimate.circuit_cost_1 == 1.0
    assert estimate.constants == "conventional"


def test_sampling_squares_counts():
    amplitude = sample_bounds(0.3, 1e6, 0.05, Estimation.AMPLITUDE, include_circuits=False)
    sampling = sample_bounds(0.3, 1e6, 0.05, Estimation.SAMPLING, include_circuits=False)
    assert sampling.estimation == "sampling"
    assert sampling.sample_complexity_1 == pytest.approx(amplitude.sample_complexity_1 ** 2)
    assert sampling.total_scaling == pytest.approx(amplitude.total_scaling ** 2)


def test_sample_bounds_diverge_near_one():
    estimate = sample_bounds(0.999, 1e4, 0.01, include_circuits=False)
    assert estimate.sample_complexity_1 / estimate.sample_complexity_2 == pytest.approx(999.0)


def test_sample_bounds_with_circuits():
    estimate = sample_bounds(0.5, 1000.0, 0.01)
    assert estimate.circuit_cost_1 > 1.0
    assert estimate.circuit_cost_2 > 1.0
    assert estimate.circuit_poly_inputs["N"] == 13.0
    assert estimate.total_cost == pytest.approx(
        estimate.circuit_cost_1 * estimate.sample_complexity_1
        + estimate.circuit_cost_2 * estimate.sample_complexity_2
    )


@pytest.mark.parametrize("beta, t, delta", [(0.0, 10.0, 0.1), (1.0, 10.0, 0.1), (0.5, 0.0, 0.1), (0.5, 10.0, 0.0)])
def test_sample_bounds_domain(beta, t, delta):
    with pytest.raises(DomainError):
        sample_bounds(beta, t, delta, include_circuits=False)


def test_measurement_precisions():
    d1, d2, N = probe_precisions(0.5, 1000.0, 0.01)
    assert N == 13
    assert d1 == pytest.approx(0.5 * 0.01 / math.sqrt(13))
    assert d2 == pytest.approx(0.5 * 0.01 / math.sqrt(13))


def test_zeta_prime_bound_formula():
    beta, t = 0.3, 20.0
    g = 2.0 ** 0.7 - 1.0
    modulus = math.hypot(beta, t)
    expected = modulus / (g * beta) + 2.0 ** 0.7 * math.log(2.0) * (modulus * beta + 1.0) / (g * g * beta * beta)
    assert zeta_prime_bound(beta, t) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("beta, t", [(0.5, 14.13), (0.3, 50.0), (0.8, 5.0)])
def test_zeta_prime_estimate_below_bound(beta, t):
    assert zeta_prime_estimate(beta, t) <= zeta_prime_bound(beta, t)


def test_zero_region():
    assert zero_region_edge(1e3) == pytest.approx(0.7787, abs=1e-3)
    assert zero_region_check(0.6, 1e3)
    assert not zero_region_check(0.4, 1e3)
    assert not zero_region_check(0.8, 1e3)
    with pytest.raises(DomainError):
        zero_region_edge(10.0)


def test_chi_growth_exponent():
    assert chi_growth_exponent(0.3, [1e2, 1e3, 1e4]) == pytest.approx(0.2, abs=0.02)
    with pytest.raises(DomainError):
        chi_growth_exponent(0.3, [100.0])


def test_riemann_siegel_error_small():
    assert riemann_siegel_error(0.5, 1000.0) < 1.0
