"""
Оценки сложности квантового алгоритма: число измерений для L и G, стоимость
схем через журналы ресурсов эмуляции, граница |zeta'| и проверка области без нулей.

Константы O(.) условно равны 1 и помечаются в результатах как "conventional".
"""

import logging
import math
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from src.circuits.evolution import evolution_resources
from src.circuits.state_prep import initial_state_resources
from src.config import settings
from src.core.dirichlet_engine import riemann_siegel_zeta, zeta_oracle
from src.core.errors import DomainError
from src.core.special_functions import log_chi
from src.models import ComplexityEstimate

LN2 = math.log(2.0)


class Estimation(str, Enum):
    """Способ оценки амплитуды: амплитудное оценивание O(1/d) или выборка O(1/d^2)."""
    AMPLITUDE = "amplitude"
    SAMPLING = "sampling"


def _check_strip(beta: float, stage: str) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError(f"требуется 0 < beta < 1, получено {beta}", stage=stage)


def rs_cutoff(t: float) -> int:
    """N = ceil(sqrt(|t| / 2pi)) - длина главной суммы Римана-Зигеля."""
    return max(1, math.ceil(math.sqrt(abs(t) / (2.0 * math.pi))))


def probe_precisions(beta: float, t: float, delta: float) -> Tuple[float, float, int]:
    """
    Точности измерения L и G, достаточные для ошибки delta в zeta:
    d1 = (1 - beta) delta / N^{1-beta}, d2 = beta delta |t|^{beta-1/2} / N^beta.

    Returns:
        Tuple[float, float, int]: (d1, d2, N)
    """
    _check_strip(beta, "probe_precisions")
    if not delta > 0.0:
        raise DomainError(f"delta должно быть положительным: {delta}", stage="probe_precisions")
    if t == 0.0:
        raise DomainError("t не должно быть нулём", stage="probe_precisions")
    N = rs_cutoff(t)
    d1 = (1.0 - beta) * delta / N ** (1.0 - beta)
    d2 = beta * delta * abs(t) ** (beta - 0.5) / N ** beta
    return d1, d2, N


def circuit_cost(N: int, beta: float, t: float, precision: float) -> int:
    """Число вентилей подготовки |psi0> и эволюции при заданной точности (по журналам эмуляции)."""
    size = min(max(4, N), settings.MAX_TERMS)
    prep = initial_state_resources(size, beta, precision).total()
    evolve = evolution_resources(size, precision / abs(t)).total()
    return prep.gates + evolve.gates


def sample_bounds(
    beta: float,
    t: float,
    delta: float,
    estimation: Estimation = Estimation.AMPLITUDE,
    include_circuits: bool = True,
) -> ComplexityEstimate:
    """
    Оценки числа измерений R_s1 = (1-beta)^{-1} delta^{-1} |t|^{(1-beta)/2}
    и R_s2 = beta^{-1} delta^{-1} |t|^{(1-beta)/2}; при выборке вместо
    амплитудного оценивания обе оценки возводятся в квадрат.

    Args:
        beta (float): Действительная часть s, 0 < beta < 1
        t (float): Мнимая часть s, не ноль
        delta (float): Требуемая точность zeta
        estimation (Estimation): Способ оценки амплитуды
        include_circuits (bool): Считать стоимость схем по журналам ресурсов

    Returns:
        ComplexityEstimate: Оценки с условными константами
    """
    _check_strip(beta, "sample_bounds")
    if not delta > 0.0:
        raise DomainError(f"delta должно быть положительным: {delta}", stage="sample_bounds")
    if t == 0.0 or not math.isfinite(t):
        raise DomainError(f"t должно быть конечным и ненулевым: {t}", stage="sample_bounds")
    estimation = Estimation(estimation)

    growth = abs(t) ** (0.5 * (1.0 - beta))
    power = 2 if estimation == Estimation.SAMPLING else 1
    r_s1 = (growth / ((1.0 - beta) * delta)) ** power
    r_s2 = (growth / (beta * delta)) ** power
    total_scaling = (growth / delta) ** power

    d1, d2, N = probe_precisions(beta, t, delta)
    r_c1 = r_c2 = 1.0
    if include_circuits:
        r_c1 = float(circuit_cost(N, beta, t, d1))
        r_c2 = float(circuit_cost(N, beta, t, d2))

    estimate = ComplexityEstimate(
        beta=beta,
        t=t,
        delta=delta,
        estimation=estimation.value,
        sample_complexity_1=r_s1,
        sample_complexity_2=r_s2,
        circuit_cost_1=r_c1,
        circuit_cost_2=r_c2,
        circuit_poly_inputs={
            "N": float(N),
            "log2_N": math.log2(N),
            "precision_1": d1,
            "precision_2": d2,
            "log2_inv_precision_1": math.log2(1.0 / d1),
            "log2_inv_precision_2": math.log2(1.0 / d2),
        },
        total_scaling=total_scaling,
        total_cost=r_c1 * r_s1 + r_c2 * r_s2,
    )
    logging.info(f"Оценка сложности: beta={beta}, t={t}, delta={delta}, масштаб={total_scaling:.4g}")
    return estimate


def zeta_prime_bound(beta: float, t: float) -> float:
    """
    Граница |zeta'(s)| <= |s| / (g beta) + 2^{1-beta} ln2 (|s| beta + 1) / (g^2 beta^2),
    g = |2^{1-beta} - 1| >= ln2 |1 - beta|.
    """
    _check_strip(beta, "zeta_prime_bound")
    modulus = abs(complex(beta, t))
    g = max(abs(math.expm1((1.0 - beta) * LN2)), LN2 * abs(1.0 - beta))
    factor = 2.0 ** (1.0 - beta)
    return modulus / (g * beta) + factor * LN2 * (modulus * beta + 1.0) / (g * g * beta * beta)


def zeta_prime_estimate(beta: float, t: float, h: float = 1e-4) -> float:
    """|zeta'(s)| центральной разностью эталонной дзета-функции по t."""
    upper = zeta_oracle(complex(beta, t + h))
    lower = zeta_oracle(complex(beta, t - h))
    # d/ds = -i d/dt
    return abs((upper - lower) / (2.0 * h))


def zero_region_edge(t: float) -> float:
    """Верхняя граница полосы 1 - 1 / ((ln t)^{2/3} (ln ln t)^{1/3}) с единичной константой."""
    if not t > math.exp(math.e):
        raise DomainError(f"требуется t > e^e, получено {t}", stage="zero_region_check")
    log_t = math.log(t)
    return 1.0 - 1.0 / (log_t ** (2.0 / 3.0) * math.log(log_t) ** (1.0 / 3.0))


def zero_region_check(beta: float, t: float) -> bool:
    """True, если 1/2 <= beta <= верхней границы области для высоты t."""
    return 0.5 <= beta <= zero_region_edge(t)


def chi_growth_exponent(beta: float, ts: Sequence[float]) -> float:
    """
    Наклон регрессии ln|chi(beta + it)| по ln t; асимптотически 1/2 - beta.
    """
    _check_strip(beta, "chi_growth_exponent")
    ts = np.asarray(ts, dtype=np.float64)
    if len(ts) < 2 or np.any(ts <= 0.0):
        raise DomainError("нужны хотя бы две положительные высоты t", stage="chi_growth_exponent")
    magnitudes = np.array([log_chi(complex(beta, float(t))).real for t in ts])
    slope, _ = np.polyfit(np.log(ts), magnitudes, 1)
    return float(slope)


def riemann_siegel_error(beta: float, t: float) -> float:
    """|zeta_RS(s) - zeta(s)| - ошибка приближённого функционального уравнения, O(|t|^{-beta/2})."""
    _check_strip(beta, "riemann_siegel_error")
    s = complex(beta, t)
    return abs(riemann_siegel_zeta(s) - zeta_oracle(s))
