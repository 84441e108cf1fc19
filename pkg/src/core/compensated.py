"""
Компенсированная арифметика: суммирование без накопления ошибки округления
и фазы t*ln n в двойной-двойной точности с редукцией по модулю 2*pi.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import mpmath
import numpy as np

from src.utils.cache import TableCache

_SPLITTER = 134217729.0  # 2^27 + 1

with mpmath.workdps(50):
    _TWO_PI_MP = 2 * mpmath.pi
    TWO_PI_HI = float(_TWO_PI_MP)
    TWO_PI_LO = float(_TWO_PI_MP - TWO_PI_HI)

_ln_tables = TableCache("ln_table")
_ln_dd_tables = TableCache("ln_dd_table")

# 80-битный long double есть не на всех платформах
_LONGDOUBLE_OK = np.finfo(np.longdouble).nmant >= 63


def two_sum(a, b):
    """Точная сумма a + b = s + e (алгоритм Кнута), работает поэлементно."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def fast_two_sum(a, b):
    """Как two_sum, но требует |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Точное произведение a * b = p + e через расщепление Деккера."""
    p = a * b
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def compensated_sum(values) -> float:
    """
    Попарное суммирование с компенсацией: на каждом уровне дерева ошибки
    округления two_sum собираются отдельно и добавляются в конце.

    Args:
        values: Одномерный массив слагаемых

    Returns:
        float: Сумма
    """
    level = np.asarray(values, dtype=np.float64)
    if level.size == 0:
        return 0.0
    errors = []
    while level.size > 1:
        if level.size % 2:
            level = np.append(level, 0.0)
        level, err = two_sum(level[0::2], level[1::2])
        errors.append(err)
    correction = math.fsum(float(np.sum(err)) for err in errors)
    return float(level[0] + correction)


@dataclass(frozen=True)
class PhaseAccumulator:
    """
    Двухкомпонентное представление фазы hi + lo (поэлементно для массивов).

    После renormalize() |lo| <= ulp(hi)/2.
    """
    hi: np.ndarray
    lo: np.ndarray

    @classmethod
    def from_product(cls, t: float, ln_hi: np.ndarray, ln_lo: np.ndarray) -> "PhaseAccumulator":
        """Фаза t * (ln_hi + ln_lo) без потери младших разрядов."""
        p, e = two_prod(t, ln_hi)
        e = e + t * ln_lo
        return cls(p, e).renormalize()

    def renormalize(self) -> "PhaseAccumulator":
        hi, lo = fast_two_sum(self.hi, self.lo)
        return PhaseAccumulator(hi, lo)

    def reduce_mod_2pi(self) -> "PhaseAccumulator":
        """Приводит фазу к отрезку около [-pi, pi]."""
        k = np.round(self.hi / TWO_PI_HI)
        p, e = two_prod(k, TWO_PI_HI)
        hi = (self.hi - p) - e
        lo = self.lo - k * TWO_PI_LO
        return PhaseAccumulator(hi, lo).renormalize()

    def value(self) -> np.ndarray:
        return self.hi + self.lo


def ln_table(n_max: int) -> np.ndarray:
    """ln n для n = 1..n_max (индекс 0 соответствует n = 1)."""
    return _ln_tables.get_or_compute(
        n_max, lambda: np.log(np.arange(1, n_max + 1, dtype=np.float64))
    )


def _ln_dd_longdouble(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    ln_ld = np.log(np.arange(1, n_max + 1, dtype=np.longdouble))
    hi = ln_ld.astype(np.float64)
    lo = (ln_ld - hi.astype(np.longdouble)).astype(np.float64)
    return hi, lo


def _ln_dd_mpmath(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    hi = np.empty(n_max)
    lo = np.empty(n_max)
    with mpmath.workdps(40):
        for n in range(1, n_max + 1):
            value = mpmath.log(n)
            hi[n - 1] = float(value)
            lo[n - 1] = float(value - hi[n - 1])
    return hi, lo


def ln_table_extended(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    ln n в двойной-двойной точности для n = 1..n_max.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Старшие и младшие части
    """
    def compute():
        logging.info(f"Построение расширенной таблицы ln n, n_max={n_max}, long double={_LONGDOUBLE_OK}")
        if _LONGDOUBLE_OK:
            return _ln_dd_longdouble(n_max)
        return _ln_dd_mpmath(n_max)

    return _ln_dd_tables.get_or_compute(n_max, compute)


def theta_mod_2pi(t: float) -> float:
    """theta(t) по модулю 2*pi с запасом точности для очень больших t."""
    with mpmath.workdps(40):
        z = mpmath.mpc(0.25, mpmath.mpf(t) / 2)
        theta = mpmath.im(mpmath.loggamma(z)) - mpmath.mpf(t) / 2 * mpmath.log(mpmath.pi)
        return float(mpmath.fmod(theta, _TWO_PI_MP))
