"""
Наблюдаемые, кодирующие дзета-функцию: средний накопленный фазовый множитель
L(beta, t) со свободной энергией F1 и обобщённая амплитуда Лошмидта G(beta, t)
с функцией Харди Z, эхом Лошмидта и скоростью F2.
"""

import cmath
import math
from typing import Tuple

from src.config import settings
from src.core.dirichlet_engine import (
    alternating_partial_sum,
    partition_sum,
    rotated_dirichlet_sum,
    zeta_oracle,
)
from src.core.errors import DomainError
from src.core.special_functions import rs_theta
from src.models import NPolicy, NPolicyKind, ObservableSample

LN2 = math.log(2.0)


def _check_beta(beta: float, stage: str) -> None:
    if not beta > 0.0:
        raise DomainError(f"beta должно быть положительным: {beta}", stage=stage)


def _rate(log_magnitude: float, N: int) -> float:
    # -ln|.| / log2 N; для N = 1 знаменатель равен нулю
    if N < 2:
        raise DomainError("плотность свободной энергии определена при N >= 2", stage="free_energy")
    if log_magnitude == -math.inf:
        return math.inf
    return -log_magnitude / math.log2(N)


def _safe_log(value: float) -> float:
    return math.log(value) if value > 0.0 else -math.inf


def accumulated_phase(beta: float, t: float, N: int) -> ObservableSample:
    """
    Средний накопленный фазовый множитель L(beta, t) = -S_N(beta + it) / Z(beta, H0).

    Args:
        beta (float): Обратная температура, > 0
        t (float): Время эволюции
        N (int): Размер спектра

    Returns:
        ObservableSample: value = L, aux содержит abs и F1 (при N >= 2)
    """
    _check_beta(beta, "accumulated_phase")
    z = partition_sum(beta, N)
    value = -alternating_partial_sum(complex(beta, t), N) / z
    magnitude = abs(value)
    aux = {"abs": magnitude, "Z": z}
    if N >= 2:
        aux["F1"] = _rate(_safe_log(magnitude), N)
    return ObservableSample(beta=beta, t=t, N_used=N, value=value, aux=aux)


def relation_check(beta: float, t: float, N: int) -> float:
    """
    Невязка |Z * L - (2^{1-s} - 1) zeta(s)|, убывающая с ростом N.

    Args:
        beta (float): Обратная температура
        t (float): Время
        N (int): Размер спектра

    Returns:
        float: Абсолютная невязка
    """
    sample = accumulated_phase(beta, t, N)
    s = complex(beta, t)
    expected = (2.0 ** (1.0 - s) - 1.0) * zeta_oracle(s)
    return abs(sample.aux["Z"] * sample.value - expected)


def free_energy_F1(beta: float, t: float, N: int) -> float:
    """
    Плотность свободной энергии F1 = -ln|L(beta, t)| / log2 N; +inf при |L| = 0.
    """
    return accumulated_phase(beta, t, N).aux["F1"] if N >= 2 else _rate(0.0, N)


def thermal_limit_F1(beta: float, at_zero: bool) -> float:
    """
    Предел F1 при N -> бесконечности: ln 2 в нулях дзета-функции,
    (1 - beta) ln 2 вне нулей при 0 < beta < 1 и 0 при beta > 1.
    """
    _check_beta(beta, "thermal_limit_F1")
    if beta > 1.0:
        return 0.0
    if at_zero:
        return LN2
    return (1.0 - beta) * LN2


def partition_rate_limit(beta: float) -> float:
    """Предел -ln Z(beta, H0) / log2 N = (beta - 1) ln 2 при 0 < beta < 1."""
    _check_beta(beta, "partition_rate_limit")
    return (beta - 1.0) * LN2 if beta < 1.0 else 0.0


def loschmidt_amplitude(beta: float, t: float, policy: NPolicy) -> ObservableSample:
    """
    Обобщённая амплитуда Лошмидта
    G = (1/2Z) (e^{i theta} sum n^{-beta-it} + e^{-i theta} sum n^{-beta+it}).

    Две суммы комплексно сопряжены, поэтому G вещественна.

    Args:
        beta (float): Обратная температура, > 0
        t (float): Время
        policy (NPolicy): Правило выбора N

    Returns:
        ObservableSample: value = G, aux содержит abs, echo = |G|^2 и F2 (при N >= 2)
    """
    _check_beta(beta, "loschmidt_amplitude")
    if policy.kind == NPolicyKind.RIEMANN_SIEGEL and not t > 2.0 * math.pi:
        raise DomainError(f"политика Римана-Зигеля требует t > 2pi, получено {t}", stage="loschmidt_amplitude")
    N = policy.resolve(t)
    z = partition_sum(beta, N)
    forward = rotated_dirichlet_sum(beta, t, N)
    backward = forward.conjugate()
    value = complex(forward.real + backward.real, forward.imag + backward.imag) / (2.0 * z)
    magnitude = abs(value)
    aux = {"abs": magnitude, "echo": magnitude * magnitude, "Z": z}
    if N >= 2:
        aux["F2"] = _rate(2.0 * _safe_log(magnitude), N)
    return ObservableSample(beta=beta, t=t, N_used=N, value=value, aux=aux)


def hardy_Z_main(t: float, N: int) -> float:
    """
    Главная сумма Римана-Зигеля Z(t) ~ 2 Re(e^{i theta(t)} sum_{n<=N} n^{-1/2-it}).
    """
    if not t > 0.0:
        raise DomainError(f"t должно быть положительным: {t}", stage="hardy_Z_main")
    return 2.0 * rotated_dirichlet_sum(0.5, t, N).real


def hardy_Z_reference(t: float) -> float:
    """
    Функция Харди Z(t) = Re(e^{i theta(t)} zeta(1/2 + it)) по эталонной дзета-функции.
    """
    value = cmath.exp(1j * rs_theta(t)) * zeta_oracle(complex(0.5, t))
    return value.real


def probe_expectations(beta: float, t: float, N: int) -> Tuple[float, float]:
    """
    Ожидания пробного кубита: sigma_z = Re S(t), sigma_y = Im S(t),
    S(t) = (1/Z) e^{i theta} sum n^{-beta-it}.

    Returns:
        Tuple[float, float]: (sigma_z, sigma_y)
    """
    _check_beta(beta, "probe_expectations")
    z = partition_sum(beta, N)
    forward = rotated_dirichlet_sum(beta, t, N)
    # Та же арифметика, что и в loschmidt_amplitude: (2 Re) / (2 Z)
    sigma_z = (forward.real + forward.real) / (2.0 * z)
    sigma_y = forward.imag / z
    return sigma_z, sigma_y


def loschmidt_rate_F2(beta: float, t: float, N: int) -> float:
    """Скорость Лошмидта F2 = -ln |G|^2 / log2 N; +inf при G = 0."""
    sample = loschmidt_amplitude(beta, t, NPolicy.fixed(N))
    return sample.aux["F2"] if N >= 2 else _rate(0.0, N)


def correspondence_gap(t: float, policy: NPolicy) -> float:
    """
    |G(1/2, t) - Z_ref(t) / (2 Z(1/2, H0))| - расхождение между амплитудой
    Лошмидта и точной функцией Харди, убывающее с ростом t.
    """
    sample = loschmidt_amplitude(0.5, t, policy)
    return abs(sample.value.real - hardy_Z_reference(t) / (2.0 * sample.aux["Z"]))


def mean_zero_spacing(t: float) -> float:
    """Среднее расстояние между нулями 2pi / ln(t / 2pi); ниже t = 2pi*e ограничено 2pi."""
    ratio = abs(t) / (2.0 * math.pi)
    if ratio <= math.e:
        return 2.0 * math.pi
    return 2.0 * math.pi / math.log(ratio)


def default_t_step(t: float) -> float:
    """Шаг сетки по умолчанию: SCAN_STEP_FRACTION от среднего расстояния между нулями."""
    return settings.SCAN_STEP_FRACTION * mean_zero_spacing(t)
