"""
Обратимые классические оракулы в арифметике с фиксированной точкой:
полиномиальный оракул, оракул логарифма и оракул угла для разбиения амплитуд.

Регистры эмулируются значениями для каждого базисного индекса; вспомогательные
кубиты существуют только в учёте ресурсов (константы O(.) равны 1).
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

from src.config import settings
from src.core.dirichlet_engine import window_sum
from src.core.errors import ContractError, DomainError
from src.models import FixedPointValue, ResourceCount, ResourceLedger, Rounding
from src.models.circuit import round_fraction

LN2 = math.log(2.0)


class AngleOracleResult(NamedTuple):
    theta: FixedPointValue
    resources: ResourceCount
    widths: List[float]
    exact_target: float


def poly_resources(degree: int, a1: int, a2: int, r1: int, r2: int) -> ResourceLedger:
    """
    Ресурсы полиномиального оракула по этапам: мономы D^2 a2^2, произведения
    с коэффициентами D^2 a1 a2, накопление D(r1+r2); вспомогательные 2 D a2 + a1.
    """
    ledger = ResourceLedger()
    ledger.add("monomials", ResourceCount(degree * degree * a2 * a2, 2 * degree * a2))
    ledger.add("coefficients", ResourceCount(degree * degree * a1 * a2, a1))
    ledger.add("accumulate", ResourceCount(degree * (r1 + r2), 0))
    return ledger


def poly_oracle(
    coeffs: Sequence[FixedPointValue],
    x: FixedPointValue,
    out_spec: Tuple[int, int],
    rounding: Rounding = Rounding.NEAREST_EVEN,
) -> Tuple[FixedPointValue, ResourceCount]:
    """
    f(x) = sum c_d x^d: мономы x^d строятся последовательно и точно,
    произведения с коэффициентами суммируются без потерь, округление к
    (r1, r2) выполняется один раз в конце.

    Args:
        coeffs (Sequence[FixedPointValue]): Коэффициенты c_0 .. c_D
        x (FixedPointValue): Аргумент
        out_spec (Tuple[int, int]): Ширина результата (r1, r2)
        rounding (Rounding): Правило округления результата

    Returns:
        Tuple[FixedPointValue, ResourceCount]: f(x) и ресурсы
    """
    if len(coeffs) == 0:
        raise ContractError("пустой список коэффициентов", stage="poly_oracle")
    r1, r2 = out_spec
    degree = len(coeffs) - 1
    coeff_frac = max(c.frac_bits for c in coeffs)
    scale = coeff_frac + degree * x.frac_bits

    # Все слагаемые приводятся к общему масштабу 2^-scale
    accumulator = 0
    monomial = 1
    for d, c in enumerate(coeffs):
        if d > 0:
            monomial *= x.raw
        term = c.raw * monomial
        accumulator += term << (scale - c.frac_bits - d * x.frac_bits)

    raw = round_fraction(Fraction(accumulator, 1 << scale) * (1 << r2), rounding)
    result = FixedPointValue(r1, r2, raw, rounding)

    a1 = max(c.width for c in coeffs)
    a2 = x.width
    resources = poly_resources(degree, a1, a2, r1, r2).total()
    return result, resources


def log_layout(n_max: int, eta: float) -> Tuple[int, int, int, int, int]:
    """(k1, l1, coeff_frac, r1, r2) для оракула логарифма."""
    k1 = max(1, math.ceil(math.log2((n_max + 1) / 3.0)))
    l1 = math.ceil(math.log2(1.0 / eta)) + 2
    coeff_frac = math.ceil(math.log2(2.0 / eta)) + 2
    r1 = max(2, math.ceil(math.log2(k1 + 2)) + 2)
    r2 = math.ceil(math.log2(1.0 / eta)) + 2
    return k1, l1, coeff_frac, r1, r2


@lru_cache(maxsize=64)
def _log_coefficients(l1: int, coeff_frac: int) -> Tuple[FixedPointValue, ...]:
    # log2(1+d) = sum_{j>=1} (-1)^{j+1} d^j / (j ln 2)
    coeffs = [FixedPointValue(1, coeff_frac, 0)]
    for j in range(1, l1 + 1):
        value = (1.0 if j % 2 else -1.0) / (j * LN2)
        coeffs.append(FixedPointValue.encode(value, 1, coeff_frac))
    return tuple(coeffs)


def log_oracle_resources(n_max: int, eta: float) -> ResourceLedger:
    """
    Ресурсы оракула логарифма на всём диапазоне 1..n_max: для каждого из k1
    участков 3*2^{nu-1} <= n < 3*2^nu - компаратор и полином степени l1.
    """
    k1, l1, coeff_frac, r1, r2 = log_layout(n_max, eta)
    a2 = k1 + 2
    per_partition = poly_resources(l1, coeff_frac + 1, a2, r1, r2)
    ledger = ResourceLedger()
    ledger.add("comparators", ResourceCount(2 * k1 * a2, k1))
    for stage, count in per_partition.stages:
        ledger.add(f"partition_poly.{stage}", count.scaled(k1))
    ledger.add("special_cases", ResourceCount(2 * a2, 1))
    return ledger


def log_oracle(n: int, eta: float, n_max: Optional[int] = None) -> Tuple[FixedPointValue, ResourceCount]:
    """
    log2 n с точностью eta.

    Для n >= 3 находится nu с 3*2^{nu-1} <= n < 3*2^nu, d = n/2^{nu+1} - 1 лежит
    в [-1/4, 1/2), и log2 n = nu + 1 + log2(1 + d), где log2(1 + d) - ряд Тейлора
    из l1 = ceil(log2(1/eta)) + 2 членов через poly_oracle.

    Args:
        n (int): Аргумент, 1 <= n <= n_max
        eta (float): Точность
        n_max (Optional[int]): Верхняя граница регистра (по умолчанию LOG_ORACLE_N_MAX)

    Returns:
        Tuple[FixedPointValue, ResourceCount]: log2 n и ресурсы
    """
    n_max = settings.LOG_ORACLE_N_MAX if n_max is None else n_max
    if not 1 <= n <= n_max:
        raise DomainError(f"n={n} вне диапазона [1, {n_max}]", stage="log_oracle")
    if not eta > 0.0:
        raise DomainError(f"eta должно быть положительным: {eta}", stage="log_oracle")
    k1, l1, coeff_frac, r1, r2 = log_layout(n_max, eta)
    resources = log_oracle_resources(n_max, eta).total()

    if n <= 2:
        return FixedPointValue(r1, r2, (n - 1) << r2), resources

    nu = (n // 3).bit_length()
    d = FixedPointValue(1, nu + 1, n - (1 << (nu + 1)))
    fraction, _ = poly_oracle(_log_coefficients(l1, coeff_frac), d, (r1, r2))
    raw = fraction.raw + ((nu + 1) << r2)
    return FixedPointValue(r1, r2, raw), resources


def sin_squared_coefficients(terms: int, frac_bits: int) -> Tuple[FixedPointValue, ...]:
    """
    Коэффициенты ряда sin^2(x) = sum_{n>=1} (-1)^{n+1} 2^{2n} x^{2n} / (2 (2n)!).
    """
    return _sin_squared_coefficients(terms, frac_bits)


@lru_cache(maxsize=64)
def _sin_squared_coefficients(terms: int, frac_bits: int) -> Tuple[FixedPointValue, ...]:
    coeffs = [FixedPointValue(1, frac_bits, 0)]
    for n in range(1, terms + 1):
        exact = Fraction((-1) ** (n + 1) * 2 ** (2 * n), 2 * math.factorial(2 * n))
        coeffs.append(FixedPointValue(1, frac_bits, 0))
        coeffs.append(FixedPointValue(1, frac_bits, round_fraction(exact * (1 << frac_bits), Rounding.NEAREST_EVEN)))
    return tuple(coeffs)


class AngleLayout(NamedTuple):
    steps: int
    theta_frac: int
    sin_terms: int
    sin_coeff_frac: int
    sin_out_frac: int
    sum_eps: float


def angle_layout(k: int, n0: int, beta: float, err: float) -> AngleLayout:
    """Точности этапов оракула угла при бюджете ошибки err на один угол."""
    n1 = n0 + (1 << k)
    steps = max(1, math.ceil(math.log2(1.0 / err)))
    theta_frac = steps + 3
    sin_terms = math.ceil(2.0 * math.log2(1.0 / err) + (1.0 + beta) * math.log2(n1) + 5)
    # Точность sin^2 и коэффициентов: err^2 n1^{-1-beta} / 12 и / 96
    sin_precision = err * err * n1 ** (-1.0 - beta) / 12.0
    sin_out_frac = math.ceil(math.log2(1.0 / sin_precision))
    # Ошибка коэффициента при x^{2n} усиливается до (pi/2)^{2n}
    guard = math.ceil(2 * sin_terms * math.log2(0.5 * math.pi)) + 1
    sin_coeff_frac = math.ceil(math.log2(8.0 / sin_precision)) + guard
    sum_eps = err * err * n1 ** -beta / 12.0
    return AngleLayout(steps, theta_frac, sin_terms, sin_coeff_frac, sin_out_frac, sum_eps)


def angle_oracle_resources(k: int, n0: int, beta: float, err: float) -> ResourceLedger:
    """
    Ресурсы одного оракула угла: на каждом шаге бисекции два вычисления S
    (Эйлер-Маклорен), одно вычисление sin^2 и одно сравнение произведений.
    """
    layout = angle_layout(k, n0, beta, err)
    n1 = n0 + (1 << k)
    index_bits = math.ceil(math.log2(n1)) + 1
    sum_frac = math.ceil(math.log2(1.0 / layout.sum_eps))
    sum_int = index_bits + 1
    l3 = max(1, math.ceil(0.5 * math.log(8.0 / layout.sum_eps) / math.log(2.0 * math.pi)))

    s_oracle = ResourceLedger()
    s_oracle.extend("log", log_oracle_resources(n1, layout.sum_eps))
    s_oracle.extend("exp", poly_resources(sum_frac, sum_frac, sum_frac, sum_int, sum_frac))
    s_oracle.extend("bernoulli", poly_resources(2 * l3, sum_frac, index_bits, sum_int, sum_frac))
    s_cost = s_oracle.total()

    sin_cost = poly_resources(
        2 * layout.sin_terms, layout.sin_coeff_frac + 1, layout.theta_frac + 1, 1, layout.sin_out_frac
    ).total()
    compare = ResourceCount(2 * (sum_int + sum_frac) * (layout.sin_out_frac + 1), sum_int + sum_frac)

    ledger = ResourceLedger()
    ledger.add("window_sums", s_cost.scaled(2 * layout.steps))
    ledger.add("sin_squared", sin_cost.scaled(layout.steps))
    ledger.add("comparisons", compare.scaled(layout.steps))
    return ledger


def angle_windows(w: str, m: int, k: int, n0: int) -> Tuple[int, int, int]:
    w_int = int(w, 2) if w else 0
    half = 1 << (k - m - 1)
    a1 = half * (2 * w_int + 1) + n0
    b1 = half * (2 * w_int + 2) - 1 + n0
    a2 = (1 << (k - m)) * w_int + n0
    return a1, b1, a2


def angle_oracle(w: str, m: int, k: int, n0: int, beta: float, err: float) -> AngleOracleResult:
    """
    Угол theta_{w,m} = arcsin sqrt(S(a1, b1) / S(a2, b1)) битовой бисекцией.

    На каждом шаге sin^2(theta_g) * S(a2, b1) сравнивается с S(a1, b1);
    sin^2 вычисляется рядом Тейлора через poly_oracle, суммы S - формулой
    Эйлера-Маклорена с точностью err^2 n1^{-beta} / 12.

    Args:
        w (str): Префикс из m бит
        m (int): Номер раунда, 0 <= m <= k-1
        k (int): Число раундов
        n0 (int): Начало окна
        beta (float): Показатель
        err (float): Допустимая ошибка угла

    Returns:
        AngleOracleResult: Угол, ресурсы, ширины скобки по шагам и точный угол
    """
    if not 0 <= m <= k - 1:
        raise DomainError(f"m={m} вне [0, {k - 1}]", stage="angle_oracle")
    if len(w) != m or any(bit not in "01" for bit in w):
        raise DomainError(f"w='{w}' должно содержать ровно {m} бит", stage="angle_oracle")
    if not err > 0.0:
        raise DomainError(f"err должно быть положительным: {err}", stage="angle_oracle")

    layout = angle_layout(k, n0, beta, err)
    a1, b1, a2 = angle_windows(w, m, k, n0)
    upper = Fraction(window_sum(a1, b1, beta, layout.sum_eps))
    full = Fraction(window_sum(a2, b1, beta, layout.sum_eps))
    exact_target = math.asin(math.sqrt(float(upper / full)))

    coeffs = sin_squared_coefficients(layout.sin_terms, layout.sin_coeff_frac)
    lo, hi = 0.0, 0.5 * math.pi
    widths = [hi - lo]
    for _ in range(layout.steps):
        trial = FixedPointValue.encode(0.5 * (lo + hi), 1, layout.theta_frac)
        sin_sq, _ = poly_oracle(coeffs, trial, (1, layout.sin_out_frac))
        if sin_sq.as_fraction() * full < upper:
            lo = trial.decode()
        else:
            hi = trial.decode()
        widths.append(hi - lo)

    theta = FixedPointValue.encode(0.5 * (lo + hi), 1, layout.theta_frac)
    resources = angle_oracle_resources(k, n0, beta, err).total()
    logging.debug(f"Оракул угла: w='{w}', m={m}, theta={theta.decode()}, шагов={layout.steps}")
    return AngleOracleResult(theta, resources, widths, exact_target)
