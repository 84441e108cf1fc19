import math

import mpmath
import numpy as np
import pytest

from src.config import settings
from src.core.dirichlet_engine import (
    alternating_partial_sum,
    direct_window_sum,
    euler_maclaurin_depth,
    euler_maclaurin_sum,
    partition_sum,
    reduced_phases,
    remainder_envelope,
    riemann_siegel_zeta,
    window_sum,
    zeta_oracle,
)
from src.core.errors import CapacityError, DomainError, ValidityError
from src.core.special_functions import chi
from src.models import SumWindow


def _alternating_reference(s: complex, N: int) -> complex:
    with mpmath.workdps(30):
        s_mp = mpmath.mpc(s)
        return complex(mpmath.fsum((-1) ** (n - 1) * mpmath.power(n, -s_mp) for n in range(1, N + 1)))


@pytest.mark.parametrize("s, N", [(0.5 + 14.0j, 50), (0.8 - 3.0j, 7), (1.5 + 200.0j, 300)])
def test_alternating_partial_sum_matches_mpmath(s, N):
    assert abs(alternating_partial_sum(s, N) - _alternating_reference(s, N)) <= 1e-12


def test_alternating_partial_sum_large_t():
    s = complex(0.5, 1e5)
    expected = _alternating_reference(s, 4096)
    assert abs(alternating_partial_sum(s, 4096) - expected) <= 1e-9 * abs(expected)


def test_alternating_partial_sum_single_term():
    assert alternating_partial_sum(0.5 + 3.0j, 1) == 1.0


def test_alternating_partial_sum_errors():
    with pytest.raises(DomainError):
        alternating_partial_sum(0.0 + 1.0j, 10)
    with pytest.raises(DomainError):
        alternating_partial_sum(0.5 + 1.0j, 0)
    with pytest.raises(CapacityError):
        alternating_partial_sum(0.5 + 1.0j, settings.MAX_TERMS + 1)


def test_reduced_phases_range():
    for t in (3.0, 5e3, 2e4):
        phases = reduced_phases(t, 2000)
        assert np.all(np.abs(phases) <= math.pi + 1e-12)
        assert phases[0] == 0.0


def test_partition_sum_values():
    assert partition_sum(1.0, 10) == pytest.approx(7381 / 2520, rel=1e-15)
    assert abs(math.pi ** 2 / 6 - partition_sum(2.0, 10 ** 6)) < 1e-6
    with pytest.raises(DomainError):
        partition_sum(0.0, 10)


def test_euler_maclaurin_single_point_window():
    result = euler_maclaurin_sum(SumWindow(10, 10, 0.5), 0.1)
    assert result.l3 == 2
    assert result.value == 10 ** -0.5


def test_euler_maclaurin_rejects_low_window():
    assert euler_maclaurin_depth(1e-6) == 5
    with pytest.raises(ValidityError):
        euler_maclaurin_sum(SumWindow(3, 100, 0.5), 1e-6)


def test_euler_maclaurin_rejects_beta_one():
    with pytest.raises(DomainError):
        euler_maclaurin_sum(SumWindow(100, 1000, 1.0), 1e-6)


def test_euler_maclaurin_random_windows(rng):
    eps = 1e-8
    checked = 0
    while checked < 40:
        a = int(rng.integers(25, 501))
        b = a + int(rng.integers(0, 1501))
        beta = float(rng.uniform(0.5, 2.5))
        if abs(beta - 1.0) < 1e-3:
            continue
        direct = direct_window_sum(a, b, beta)
        value = euler_maclaurin_sum(SumWindow(a, b, beta), eps).value
        assert abs(value - direct) <= eps / 2 + 8 * np.spacing(abs(direct))
        checked += 1


def test_euler_maclaurin_long_window():
    eps = 1e-10
    direct = direct_window_sum(100, 10 ** 6, 0.3)
    value = euler_maclaurin_sum(SumWindow(100, 10 ** 6, 0.3), eps).value
    # интеграл ~2e4, поэтому к eps/2 добавлен запас на округление
    assert abs(value - direct) <= eps / 2 + 16 * np.spacing(direct)


@pytest.mark.parametrize("a, b, beta", [(1, 5000, 0.5), (3, 200, 1.7), (7, 40, 0.9), (50, 60, 2.0), (1, 1000, 1.0)])
def test_window_sum_matches_direct(a, b, beta):
    eps = 1e-9
    direct = direct_window_sum(a, b, beta)
    assert abs(window_sum(a, b, beta, eps) - direct) <= eps / 2 + 16 * np.spacing(direct)


def test_window_sum_special_cases():
    assert window_sum(10, 3, 0.5, 1e-6) == 0.0
    assert window_sum(4, 9, 0.0, 1e-6) == 6.0


@pytest.mark.parametrize("s", [0.5 + 14.134725j, 0.3 + 5j, 0.7 + 1000j, 0.9 - 40j])
def test_zeta_oracle_matches_mpmath(s):
    assert abs(zeta_oracle(s) - complex(mpmath.zeta(s))) <= 1e-10


@pytest.mark.parametrize("s", [2.0, 3.0, 1.5 + 2j])
def test_zeta_oracle_right_half_plane(s):
    expected = complex(mpmath.zeta(s))
    assert abs(zeta_oracle(s) - expected) <= 1e-11 * abs(expected)


def test_zeta_oracle_domain():
    with pytest.raises(DomainError):
        zeta_oracle(1.0 + 0j)
    with pytest.raises(DomainError):
        zeta_oracle(-0.5 + 3j)
    with pytest.raises(DomainError):
        zeta_oracle(complex(0.5, settings.ZETA_ORACLE_MAX_T * 2))


def test_functional_equation():
    s = complex(0.3, 20.0)
    left = zeta_oracle(s)
    right = chi(s) * zeta_oracle(1.0 - s)
    assert abs(left - right) <= 1e-9 * abs(left)


def test_alternating_remainder_inside_envelope():
    N = 1000
    eta = float(mpmath.altzeta(0.5))
    low, high = remainder_envelope(0.5, N)
    remainder = abs(eta - alternating_partial_sum(0.5, N).real)
    assert low <= remainder <= high


def test_riemann_siegel_zeta_close_to_zeta():
    t = 2.0 * math.pi * 12.99 ** 2
    s = complex(0.5, t)
    assert abs(riemann_siegel_zeta(s) - complex(mpmath.zeta(s))) < 0.6
    with pytest.raises(DomainError):
        riemann_siegel_zeta(1.5 + 10j)


@pytest.mark.parametrize("beta, N", [(0.5, 10 ** 4), (0.3, 5000), (0.8, 2 ** 16), (1.5, 1000)])
def test_partition_sum_inside_integral_bounds(beta, N):
    lower = ((N + 1) ** (1.0 - beta) - 1.0) / (1.0 - beta)
    upper = 1.0 + (N ** (1.0 - beta) - 1.0) / (1.0 - beta)
    assert lower <= partition_sum(beta, N) <= upper


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
def test_partition_rate_approaches_limit_monotonically(beta):
    limit = (beta - 1.0) * math.log(2.0)
    gaps = [abs(-math.log(partition_sum(beta, 2 ** k)) / k - limit) for k in range(8, 21)]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("s", [0.5 + 14.134725j, 0.3 + 5j, 0.7 + 50j, 0.9 - 2j, 0.2 + 100j])
def test_eta_bounded_by_modulus_over_beta(s):
    N = 10 ** 6
    slack = 2.0 * remainder_envelope(s.real, N)[1]
    assert abs(alternating_partial_sum(s, N)) <= abs(s) / s.real + slack
