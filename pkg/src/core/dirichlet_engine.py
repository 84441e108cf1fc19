"""
Движок сумм Дирихле: знакопеременная частичная сумма S_N(s), статсумма
Z(beta, H0) = sum n^-beta, оконная сумма S(a, b, beta) с ускорением
Эйлера-Маклорена и эталонная дзета-функция для проверок.
"""

import cmath
import logging
import math
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np

from src.config import settings
from src.core.compensated import (
    PhaseAccumulator,
    compensated_sum,
    ln_table,
    ln_table_extended,
    theta_mod_2pi,
)
from src.core.errors import CapacityError, DomainError, ValidityError
from src.core.special_functions import bernoulli, chi, rs_theta
from src.models import SumWindow
from src.utils.cache import TableCache

# Глубина поправок Эйлера-Маклорена в zeta_tail и сдвиг начала хвоста
ZETA_TAIL_TERMS = 20
ZETA_TAIL_SHIFT = 32
# Предел точности хвостовой формулы в двойной точности
ZETA_TAIL_MIN_EPS = 1e-13

_weight_tables = TableCache("weights")


class EulerMaclaurinResult(NamedTuple):
    value: float
    l3: int


def _check_terms(N: int, stage: str) -> None:
    if N < 1:
        raise DomainError(f"N должно быть >= 1: {N}", stage=stage)
    if N > settings.MAX_TERMS:
        raise CapacityError(f"N={N} превышает предел {settings.MAX_TERMS}", stage=stage)


def weights(beta: float, N: int) -> np.ndarray:
    """n^-beta для n = 1..N, кэшируется."""
    return _weight_tables.get_or_compute(
        ("w", beta, N), lambda: np.exp(-beta * ln_table(N))
    )


def alternating_weights(beta: float, N: int) -> np.ndarray:
    """(-1)^(n-1) n^-beta для n = 1..N, кэшируется."""
    def compute():
        signed = weights(beta, N).copy()
        signed[1::2] *= -1.0
        return signed

    return _weight_tables.get_or_compute(("alt", beta, N), compute)


def reduced_phases(t: float, N: int) -> np.ndarray:
    """
    Фазы -t*ln n, приведённые к [-pi, pi].

    При |t| >= EXTENDED_PHASE_MIN_T произведение считается в двойной-двойной
    точности, иначе достаточно обычного умножения.

    Args:
        t (float): Время (мнимая часть s)
        N (int): Число членов

    Returns:
        np.ndarray: Массив длины N
    """
    if abs(t) >= settings.EXTENDED_PHASE_MIN_T:
        ln_hi, ln_lo = ln_table_extended(N)
        phase = PhaseAccumulator.from_product(-t, ln_hi, ln_lo).reduce_mod_2pi()
        return phase.value()
    phase = -t * ln_table(N)
    return np.remainder(phase + np.pi, 2.0 * np.pi) - np.pi


def theta_reduced(t: float) -> float:
    """theta(t), для больших t - сразу по модулю 2pi с повышенной точностью."""
    if abs(t) >= settings.EXTENDED_PHASE_MIN_T:
        return theta_mod_2pi(t)
    return rs_theta(t)


def _complex_sum(amplitudes: np.ndarray, phases: np.ndarray) -> complex:
    # Суммирование от малых членов к большим (n по убыванию)
    re = compensated_sum((amplitudes * np.cos(phases))[::-1])
    im = compensated_sum((amplitudes * np.sin(phases))[::-1])
    return complex(re, im)


def alternating_partial_sum(s: complex, N: int) -> complex:
    """
    Знакопеременная частичная сумма S_N(s) = sum_{n=1}^{N} (-1)^(n-1) n^-s.

    Args:
        s (complex): Точка с Re s > 0
        N (int): Число членов

    Returns:
        complex: S_N(s)
    """
    s = complex(s)
    if s.real <= 0.0:
        raise DomainError(f"требуется Re s > 0, получено {s}", stage="alternating_partial_sum")
    _check_terms(N, "alternating_partial_sum")
    return _complex_sum(alternating_weights(s.real, N), reduced_phases(s.imag, N))


def rotated_dirichlet_sum(beta: float, t: float, N: int) -> complex:
    """
    e^{i theta(t)} * sum_{n=1}^{N} n^{-beta-it} = sum n^-beta e^{i(theta - t ln n)}.

    Общая часть G(beta, t), главной суммы Харди Z и ожиданий пробного кубита.
    """
    if beta <= 0.0:
        raise DomainError(f"beta должно быть положительным: {beta}", stage="rotated_dirichlet_sum")
    _check_terms(N, "rotated_dirichlet_sum")
    phases = reduced_phases(t, N) + theta_reduced(t)
    return _complex_sum(weights(beta, N), phases)


def partition_sum(beta: float, N: int) -> float:
    """
    Статсумма Z(beta, H0) = sum_{n=1}^{N} n^-beta, от малых членов к большим.

    Args:
        beta (float): Обратная температура, > 0
        N (int): Число уровней

    Returns:
        float: Z(beta, H0)
    """
    if beta <= 0.0:
        raise DomainError(f"beta должно быть положительным: {beta}", stage="partition_sum")
    _check_terms(N, "partition_sum")
    return compensated_sum(weights(beta, N)[::-1])


def direct_window_sum(a: int, b: int, beta: float) -> float:
    """S(a, b, beta) прямым компенсированным суммированием."""
    if a > b:
        return 0.0
    n = np.arange(b, a - 1, -1, dtype=np.float64)
    return compensated_sum(np.exp(-beta * np.log(n)))


def euler_maclaurin_depth(eps: float) -> int:
    """l3 = ceil(1/2 * log_{2pi}(8/eps))."""
    if eps <= 0.0:
        raise DomainError(f"точность должна быть положительной: {eps}", stage="euler_maclaurin_sum")
    return max(1, math.ceil(0.5 * math.log(8.0 / eps) / math.log(2.0 * math.pi)))


def euler_maclaurin_threshold(beta: float, eps: float) -> int:
    """Наименьшее допустимое a минус один: ceil(beta + 2*l3)."""
    return math.ceil(beta + 2 * euler_maclaurin_depth(eps))


def euler_maclaurin_sum(w: SumWindow, eps: float) -> EulerMaclaurinResult:
    """
    Приближение S(a, b, beta) формулой Эйлера-Маклорена с l3 поправками Бернулли.

    Интеграл, полусумма концов и поправки B_2r/(2r)! * prod_{i=0}^{2r-2}(beta+i)
    * (b^{-beta-2r+1} - a^{-beta-2r+1}); ошибка меньше eps/2 при a > ceil(beta + 2*l3).

    Args:
        w (SumWindow): Окно суммирования
        eps (float): Требуемая точность

    Returns:
        EulerMaclaurinResult: Значение и использованное l3
    """
    if w.beta == 1.0:
        raise DomainError("beta = 1 не поддерживается формулой Эйлера-Маклорена", stage="euler_maclaurin_sum")
    l3 = euler_maclaurin_depth(eps)
    if w.a <= math.ceil(w.beta + 2 * l3):
        raise ValidityError(
            f"окно [{w.a}, {w.b}] слишком низкое для l3={l3}, beta={w.beta}", stage="euler_maclaurin_sum"
        )

    a, b, beta = float(w.a), float(w.b), w.beta
    one_minus_beta = 1.0 - beta
    # (b^{1-beta} - a^{1-beta}) / (1-beta) без вычитания близких чисел
    log_ratio = math.log1p((b - a) / a)
    integral = a ** one_minus_beta * math.expm1(one_minus_beta * log_ratio) / one_minus_beta
    a_pow = a ** -beta
    b_pow = b ** -beta
    endpoints = 0.5 * (a_pow + b_pow)

    correction = 0.0
    rising = beta  # prod_{i=0}^{2r-2} (beta + i)
    factorial = 2.0
    a_inv_sq = 1.0 / (a * a)
    b_inv_sq = 1.0 / (b * b)
    a_term = a_pow * a  # a^{-beta-2r+1} при r = 1
    b_term = b_pow * b
    for r in range(1, l3 + 1):
        a_term *= a_inv_sq
        b_term *= b_inv_sq
        correction += float(bernoulli(2 * r)) / factorial * rising * (b_term - a_term)
        rising *= (beta + 2 * r - 1) * (beta + 2 * r)
        factorial *= (2 * r + 1) * (2 * r + 2)

    return EulerMaclaurinResult(integral + endpoints - correction, l3)


@lru_cache(maxsize=4096)
def window_sum(a: int, b: int, beta: float, eps: float) -> float:
    """
    S(a, b, beta) с точностью eps/2: низкий префикс окна суммируется прямо,
    хвост - формулой Эйлера-Маклорена.

    Args:
        a (int): Начало окна
        b (int): Конец окна
        beta (float): Показатель
        eps (float): Точность

    Returns:
        float: S(a, b, beta)
    """
    if a > b:
        return 0.0
    if beta in (0.0, 1.0):
        # Для beta = 0 сумма точна; для beta = 1 формула неприменима
        return float(b - a + 1) if beta == 0.0 else direct_window_sum(a, b, beta)
    cut = euler_maclaurin_threshold(beta, eps) + 1
    if b < cut or b - a < 64:
        return direct_window_sum(a, b, beta)
    prefix = direct_window_sum(a, cut - 1, beta) if a < cut else 0.0
    tail = euler_maclaurin_sum(SumWindow(max(a, cut), b, beta), eps).value
    return prefix + tail


def zeta_tail(s: complex, M: int) -> complex:
    """
    zeta(s) = sum_{n<M} n^-s + M^{1-s}/(s-1) + M^-s/2 + sum B_2r/(2r)! (s)_{2r-1} M^{-s-2r+1}.

    Формула Эйлера-Маклорена для комплексного s; при M >= |s| + ZETA_TAIL_SHIFT
    ошибка ниже 1e-14 относительно.
    """
    n = np.arange(M - 1, 0, -1, dtype=np.float64)
    log_n = np.log(n)
    magnitude = np.exp(-s.real * log_n)
    phase = -s.imag * log_n
    head = complex(
        compensated_sum(magnitude * np.cos(phase)),
        compensated_sum(magnitude * np.sin(phase)),
    )
    log_m = math.log(M)
    m_pow = cmath.exp(-s * log_m)
    value = head + m_pow * M / (s - 1.0) + 0.5 * m_pow
    rising = s  # (s)(s+1)...(s+2r-2)
    factorial = 2.0
    term = m_pow / M  # M^{-s-1}
    inv_sq = 1.0 / (M * M)
    for r in range(1, ZETA_TAIL_TERMS + 1):
        value += float(bernoulli(2 * r)) / factorial * rising * term
        rising *= (s + 2 * r - 1) * (s + 2 * r)
        factorial *= (2 * r + 1) * (2 * r + 2)
        term *= inv_sq
    return value


def zeta_oracle(s: complex, eps: float = None) -> complex:
    """
    Эталонная дзета-функция для проверок: S_N(s) / (1 - 2^{1-s}), где N выбрано
    из оценки остатка 3/4 (N+1)^-beta <= eps |1 - 2^{1-s}|. Если такое N слишком
    велико, используется формула Эйлера-Маклорена zeta_tail.

    Args:
        s (complex): Точка с Re s > 0, Re s != 1, |Im s| <= 1e4
        eps (float): Точность

    Returns:
        complex: zeta(s)
    """
    s = complex(s)
    eps = settings.ZETA_ORACLE_EPS if eps is None else eps
    if s.real <= 0.0 or s.real == 1.0:
        raise DomainError(f"zeta_oracle: требуется Re s > 0 и Re s != 1, получено {s}", stage="zeta_oracle")
    if abs(s.imag) > settings.ZETA_ORACLE_MAX_T:
        raise DomainError(f"zeta_oracle: |Im s| > {settings.ZETA_ORACLE_MAX_T}", stage="zeta_oracle")
    if eps <= 0.0:
        raise DomainError(f"точность должна быть положительной: {eps}", stage="zeta_oracle")

    prefactor = 1.0 - 2.0 ** (1.0 - s)
    needed = (0.75 / (eps * abs(prefactor))) ** (1.0 / s.real) - 1.0
    if needed <= settings.ZETA_ORACLE_MAX_TERMS and needed <= settings.MAX_TERMS:
        N = max(1, math.ceil(needed))
        return alternating_partial_sum(s, N) / prefactor

    if eps < ZETA_TAIL_MIN_EPS:
        raise CapacityError(f"точность {eps} недостижима для s={s}", stage="zeta_oracle")
    M = max(64, math.ceil(abs(s)) + ZETA_TAIL_SHIFT)
    logging.debug(f"zeta_oracle: хвост Эйлера-Маклорена, s={s}, M={M}")
    return zeta_tail(s, M)


def riemann_siegel_zeta(s: complex) -> complex:
    """
    Приближённое функциональное уравнение
    zeta(s) ~ sum_{n<=N} n^-s + chi(s) sum_{n<=N} n^{s-1}, N = ceil(sqrt(|t|/2pi)).

    Ошибка O(|t|^{-beta/2}); используется в оценке сложности.
    """
    s = complex(s)
    if not 0.0 < s.real < 1.0:
        raise DomainError(f"требуется 0 < Re s < 1, получено {s}", stage="riemann_siegel_zeta")
    N = max(1, math.ceil(math.sqrt(abs(s.imag) / (2.0 * math.pi))))
    phases = reduced_phases(s.imag, N)
    first = _complex_sum(weights(s.real, N), phases)
    second = _complex_sum(weights(1.0 - s.real, N), -phases)
    return first + chi(s) * second


def remainder_envelope(beta: float, N: int) -> Tuple[float, float]:
    """Границы остатка знакопеременного ряда: [1/4, 3/4] * (N+1)^-beta."""
    scale = (N + 1) ** -beta
    return 0.25 * scale, 0.75 * scale
