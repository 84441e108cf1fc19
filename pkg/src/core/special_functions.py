"""
Специальные функции: числа Бернулли, log-гамма, дигамма, тета-функция
Римана-Зигеля и множитель функционального уравнения chi(s).

Все функции чистые; таблица чисел Бернулли заполняется лениво под блокировкой.
"""

import cmath
import logging
import math
import threading
from fractions import Fraction
from typing import List

from src.config import settings
from src.core.errors import CapacityError, DomainError, ValidityError

# Число членов ряда Стирлинга и порог |z|, начиная с которого ряд применяется без сдвига
STIRLING_TERMS = 12
STIRLING_MIN_ABS = 12.0
# Наибольшее число шагов рекуррентности: левее Re z = -STIRLING_MAX_SHIFT аргумент не принимается
STIRLING_MAX_SHIFT = 512

# Порог |t| для chi(s), выше которого используется разложение без переполнения
CHI_ASYMPTOTIC_T = 10.0

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)
LOG_TWO = math.log(2.0)

_bernoulli_lock = threading.Lock()
_akiyama_row: List[Fraction] = []
_bernoulli_table: List[Fraction] = []


def bernoulli(p: int) -> Fraction:
    """
    Возвращает точное число Бернулли B_p (соглашение B_1 = -1/2).

    Таблица достраивается алгоритмом Акиямы-Танигавы: рабочая строка
    сохраняется между вызовами, поэтому каждое новое B_m стоит O(m) операций.

    Args:
        p (int): Индекс, 0 <= p <= BERNOULLI_MAX

    Returns:
        Fraction: B_p в несократимом виде
    """
    if p < 0:
        raise DomainError(f"индекс числа Бернулли должен быть неотрицательным: {p}", stage="bernoulli")
    if p > settings.BERNOULLI_MAX:
        raise CapacityError(
            f"индекс {p} превышает BERNOULLI_MAX={settings.BERNOULLI_MAX}", stage="bernoulli"
        )
    if p < len(_bernoulli_table):
        return _bernoulli_table[p]

    with _bernoulli_lock:
        while len(_bernoulli_table) <= p:
            m = len(_bernoulli_table)
            _akiyama_row.append(Fraction(1, m + 1))
            for j in range(m, 0, -1):
                _akiyama_row[j - 1] = j * (_akiyama_row[j - 1] - _akiyama_row[j])
            value = _akiyama_row[0]
            # Алгоритм даёт B_1 = +1/2
            if m == 1:
                value = -value
            _bernoulli_table.append(value)
        logging.debug(f"Таблица чисел Бернулли достроена до индекса {len(_bernoulli_table) - 1}")
    return _bernoulli_table[p]


def bernoulli_float(p: int) -> float:
    """B_p в виде числа с плавающей точкой."""
    return float(bernoulli(p))


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _shift_up(z: complex, stage: str):
    """
    Сдвигает z вправо, пока z не окажется в правой полуплоскости при |z| >= STIRLING_MIN_ABS,
    где ряд Стирлинга применим.
    """
    if z.real < -STIRLING_MAX_SHIFT:
        raise ValidityError(f"Re z = {z.real} левее -{STIRLING_MAX_SHIFT}", stage=stage)
    w = z
    shifts = []
    while abs(w) < STIRLING_MIN_ABS or w.real < 0.0:
        shifts.append(w)
        w += 1.0
    return w, shifts


def _stirling_correction(w: complex) -> complex:
    # sum B_2r / (2r (2r-1) w^(2r-1))
    inv = 1.0 / w
    inv_sq = inv * inv
    power = inv
    total = 0j
    for r in range(1, STIRLING_TERMS + 1):
        total += bernoulli_float(2 * r) / (2 * r * (2 * r - 1)) * power
        power *= inv_sq
    return total


def log_gamma(z: complex) -> complex:
    """
    Главная ветвь log Gamma(z).

    Ряд Стирлинга с STIRLING_TERMS поправками; при малом |z| или Re z < 0 аргумент
    сдвигается рекуррентностью log Gamma(z) = log Gamma(z+M) - sum log(z+k).
    Ветвь непрерывна вне отрицательной вещественной полуоси; при
    Re z < -STIRLING_MAX_SHIFT выбрасывается ValidityError.

    Args:
        z (complex): Аргумент, не полюс Gamma

    Returns:
        complex: log Gamma(z)
    """
    z = complex(z)
    if _is_pole(z):
        raise DomainError(f"полюс Gamma в точке {z}", stage="log_gamma")
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()

    w, shifts = _shift_up(z, "log_gamma")
    value = (w - 0.5) * cmath.log(w) - w + HALF_LOG_TWO_PI + _stirling_correction(w)
    for shifted in reversed(shifts):
        value -= cmath.log(shifted)
    return value


def digamma(z: complex) -> complex:
    """
    psi(z) = d/dz log Gamma(z) через асимптотический ряд и рекуррентность.

    Args:
        z (complex): Аргумент, не полюс Gamma

    Returns:
        complex: psi(z)
    """
    z = complex(z)
    if _is_pole(z):
        raise DomainError(f"полюс дигамма-функции в точке {z}", stage="digamma")
    if z.imag < 0.0:
        return digamma(z.conjugate()).conjugate()

    w, shifts = _shift_up(z, "digamma")
    inv_sq = 1.0 / (w * w)
    power = inv_sq
    series = 0j
    for r in range(1, STIRLING_TERMS + 1):
        series += bernoulli_float(2 * r) / (2 * r) * power
        power *= inv_sq
    value = cmath.log(w) - 0.5 / w - series
    for shifted in shifts:
        value -= 1.0 / shifted
    return value


def rs_theta(t: float) -> float:
    """
    Тета-функция Римана-Зигеля theta(t) = Im log Gamma(1/4 + it/2) - (t/2) ln pi.

    Args:
        t (float): Конечное вещественное число

    Returns:
        float: theta(t), нечётная по t
    """
    if not math.isfinite(t):
        raise DomainError(f"t должно быть конечным: {t}", stage="rs_theta")
    if t < 0.0:
        return -rs_theta(-t)
    return log_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * LOG_PI


def rs_theta_dot(t: float) -> float:
    """
    Производная theta'(t) = 1/2 Re psi(1/4 + it/2) - 1/2 ln pi.

    Args:
        t (float): Конечное вещественное число

    Returns:
        float: theta'(t), чётная по t
    """
    if not math.isfinite(t):
        raise DomainError(f"t должно быть конечным: {t}", stage="rs_theta_dot")
    return 0.5 * digamma(complex(0.25, 0.5 * abs(t))).real - 0.5 * LOG_PI


def _log_chi_large_t(beta: float, t: float) -> complex:
    # t >= CHI_ASYMPTOTIC_T. Слагаемые +-pi t/2 из log sin и log Gamma сокращены аналитически.
    a = 1.0 - beta
    w = complex(a, -t)
    log_abs_w = 0.5 * math.log(a * a + t * t)
    delta = math.atan(a / t)  # arg w = -pi/2 + delta
    tail = cmath.log(1.0 - cmath.exp(complex(-math.pi * t, math.pi * beta)))
    series = _stirling_correction(w)

    real = (
        beta * LOG_TWO
        + (beta - 1.0) * LOG_PI
        - LOG_TWO
        + tail.real
        + (0.5 - beta) * log_abs_w
        + t * delta
        - a
        + HALF_LOG_TWO_PI
        + series.real
    )
    imag = (
        t * LOG_TWO
        + t * LOG_PI
        - 0.5 * math.pi * beta
        + 0.5 * math.pi
        + tail.imag
        + (0.5 - beta) * (delta - 0.5 * math.pi)
        - t * log_abs_w
        + t
        + series.imag
    )
    return complex(real, imag)


def log_chi(s: complex) -> complex:
    """
    log chi(s) для 0 < Re s < 1 (ветвь мнимой части произвольна).

    Args:
        s (complex): Точка полосы 0 < Re s < 1

    Returns:
        complex: Логарифм chi(s)
    """
    s = complex(s)
    if not (0.0 < s.real < 1.0):
        raise DomainError(f"chi определена только при 0 < Re s < 1, получено {s}", stage="chi")
    if s.imag < 0.0:
        return log_chi(s.conjugate()).conjugate()
    if s.imag >= CHI_ASYMPTOTIC_T:
        return _log_chi_large_t(s.real, s.imag)
    return (
        s * LOG_TWO
        + (s - 1.0) * LOG_PI
        + cmath.log(cmath.sin(0.5 * math.pi * s))
        + log_gamma(1.0 - s)
    )


def chi(s: complex) -> complex:
    """
    Множитель функционального уравнения chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s).

    Args:
        s (complex): Точка полосы 0 < Re s < 1

    Returns:
        complex: chi(s)
    """
    return cmath.exp(log_chi(s))
