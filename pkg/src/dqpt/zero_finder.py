"""
Поиск нулей дзета-функции как критических времён DQPT: сканирование знаков
функции Харди Z, уточнение скобок, минимумы |L| и сверка с эталонными нулями.
"""

import logging
import math
from bisect import bisect_left
from concurrent.futures import Executor
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.core.dirichlet_engine import partition_sum
from src.core.errors import ContractError, DomainError
from src.core.special_functions import rs_theta
from src.dqpt.observables import (
    accumulated_phase,
    hardy_Z_main,
    hardy_Z_reference,
    mean_zero_spacing,
)
from src.models import NPolicy, ReferenceMatch, ScanReport, ZeroRecord
from src.utils.helpers import format_log_message


class ZSource(str, Enum):
    """Источник значений Z(t) для поиска нулей."""
    MAIN_SUM = "main"
    REFERENCE = "reference"
    AUTO = "auto"

    def resolve(self, t_max: float) -> "ZSource":
        if self != ZSource.AUTO:
            return self
        if t_max <= settings.REFERENCE_Z_MAX_T:
            return ZSource.REFERENCE
        return ZSource.MAIN_SUM


def z_value(t: float, N: int, source: ZSource) -> float:
    """Z(t) из главной суммы при заданном N или из эталонной дзета-функции."""
    if source == ZSource.REFERENCE:
        return hardy_Z_reference(t)
    return hardy_Z_main(t, N)


def _map_ordered(func: Callable, items: Sequence, executor: Optional[Executor]) -> List:
    # executor.map сохраняет порядок, результат не зависит от числа потоков
    if executor is None:
        return [func(item) for item in items]
    return list(executor.map(func, items))


def t_grid(t_min: float, t_max: float, step: float) -> np.ndarray:
    count = int(math.floor((t_max - t_min) / step + 1e-9))
    grid = t_min + step * np.arange(count + 1)
    if grid[-1] < t_max:
        grid = np.append(grid, t_max)
    return grid


def scan_sign_changes(
    t_min: float,
    t_max: float,
    step: float,
    policy: NPolicy,
    source: ZSource = ZSource.MAIN_SUM,
    executor: Optional[Executor] = None,
) -> ScanReport:
    """
    Находит все смены знака Z(t) на сетке с шагом step.

    При политике Римана-Зигеля окно делится на отрезки постоянного N; на границе
    N(t) значение берётся с обеих сторон при своём N, поэтому скачок главной
    суммы не даёт ложных нулей.

    Args:
        t_min (float): Начало окна
        t_max (float): Конец окна
        step (float): Шаг сетки
        policy (NPolicy): Правило выбора N
        source (ZSource): Источник значений Z
        executor (Optional[Executor]): Пул для параллельного вычисления сетки

    Returns:
        ScanReport: Скобки в порядке возрастания t
    """
    if not 0.0 < t_min < t_max:
        raise DomainError(f"требуется 0 < t_min < t_max: [{t_min}, {t_max}]", stage="scan_sign_changes")
    if not step > 0.0:
        raise DomainError(f"шаг должен быть положительным: {step}", stage="scan_sign_changes")
    limit = 0.5 * mean_zero_spacing(t_max)
    if step > limit:
        raise DomainError(
            f"шаг {step} больше половины среднего расстояния между нулями {limit:.4g}",
            stage="scan_sign_changes",
        )
    source = source.resolve(t_max)
    logging.info(format_log_message(
        "Сканирование знаков Z",
        {"t_min": t_min, "t_max": t_max, "step": step, "N": policy.token(), "source": source.value},
    ))

    segments = _boundary_segments(t_grid(t_min, t_max, step), policy, source)
    jobs = [(float(t), n) for n, points in segments for t in points]
    values = _map_ordered(lambda job: z_value(job[0], job[1], source), jobs, executor)

    zeros: List[ZeroRecord] = []
    offset = 0
    for n, points in segments:
        segment_values = values[offset:offset + len(points)]
        offset += len(points)
        for i in range(len(points) - 1):
            left, right = segment_values[i], segment_values[i + 1]
            if (left < 0.0) != (right < 0.0):
                zeros.append(ZeroRecord(
                    t_low=float(points[i]),
                    t_high=float(points[i + 1]),
                    t_star=0.5 * (float(points[i]) + float(points[i + 1])),
                    residual=min(abs(left), abs(right)),
                    N_used=n,
                ))

    report = ScanReport(
        window=(t_min, t_max),
        zeros=zeros,
        n_boundary_events=len(segments) - 1,
        source=source.value,
    )
    logging.info(format_log_message(
        "Сканирование завершено",
        {"brackets": len(zeros), "boundaries": report.n_boundary_events},
    ))
    return report


def _boundary_segments(grid: np.ndarray, policy: NPolicy, source: ZSource) -> List[Tuple[int, np.ndarray]]:
    """
    Отрезки сетки с постоянным N. Граница t_b = 2pi(N+1)^2 замыкает старый
    отрезок (значение при старом N) и открывает новый (значение при новом N).
    """
    if source == ZSource.REFERENCE:
        return [(policy.resolve(float(grid[-1])), grid)]
    segments: List[Tuple[int, np.ndarray]] = []
    current_n = policy.resolve(float(grid[0]))
    current_points = [float(grid[0])]
    for t in grid[1:]:
        t = float(t)
        n_here = policy.resolve(t)
        while n_here > current_n:
            boundary = 2.0 * math.pi * (current_n + 1) ** 2
            if current_points[-1] < boundary <= t:
                current_points.append(boundary)
                segments.append((current_n, np.array(current_points)))
                current_points = [boundary]
            current_n += 1
        if t != current_points[-1]:
            current_points.append(t)
    segments.append((current_n, np.array(current_points)))
    return segments


def refine_zero(
    bracket: ZeroRecord,
    tol: float,
    source: ZSource = ZSource.MAIN_SUM,
    secant: bool = False,
    max_iterations: int = 200,
) -> ZeroRecord:
    """
    Уточняет ноль внутри скобки при постоянном N бисекцией; с secant=True
    пробная точка берётся по секущей, но не ближе четверти скобки к её краям.

    Args:
        bracket (ZeroRecord): Скобка со сменой знака
        tol (float): Требуемая ширина скобки
        source (ZSource): Источник значений Z
        secant (bool): Ускорение секущими
        max_iterations (int): Предел числа итераций

    Returns:
        ZeroRecord: Суженная скобка, t_star - её середина
    """
    if not tol > 0.0:
        raise DomainError(f"tol должно быть положительным: {tol}", stage="refine_zero")
    source = source.resolve(bracket.t_high)
    N = bracket.N_used
    lo, hi = bracket.t_low, bracket.t_high
    f_lo, f_hi = z_value(lo, N, source), z_value(hi, N, source)
    if not lo < hi or (f_lo < 0.0) == (f_hi < 0.0):
        raise ContractError(
            f"в скобке [{lo}, {hi}] нет смены знака при N={N}", stage="refine_zero"
        )

    iterations = 0
    while hi - lo > tol and iterations < max_iterations:
        width = hi - lo
        mid = 0.5 * (lo + hi)
        if secant and f_hi != f_lo:
            proposal = lo - f_lo * width / (f_hi - f_lo)
            mid = min(max(proposal, lo + 0.25 * width), hi - 0.25 * width)
        f_mid = z_value(mid, N, source)
        iterations += 1
        if f_mid == 0.0:
            logging.debug(f"Точный ноль Z в точке {mid}")
            return ZeroRecord(t_low=lo, t_high=hi, t_star=mid, residual=0.0, N_used=N, iterations=iterations)
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    t_star = 0.5 * (lo + hi)
    residual = abs(z_value(t_star, N, source))
    logging.debug(f"Ноль уточнён: t*={t_star}, итераций={iterations}, невязка={residual}")
    return ZeroRecord(
        t_low=lo, t_high=hi, t_star=t_star, residual=residual, N_used=N, iterations=iterations
    )


def default_L_threshold(beta: float, N: int) -> float:
    """Порог минимумов |L| по умолчанию: 3 N^{-1/2} / Z(beta, H0)."""
    return settings.L_MINIMA_THRESHOLD_FACTOR * N ** -0.5 / partition_sum(beta, N)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section_min(func: Callable[[float], float], lo: float, hi: float, tol: float) -> Tuple[float, float]:
    """
    Минимум унимодальной функции на [lo, hi] методом золотого сечения.

    Returns:
        Tuple[float, float]: (x, func(x)) в лучшей найденной точке
    """
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = func(x1), func(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = func(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def locate_L_minima(
    beta: float,
    t_min: float,
    t_max: float,
    step: float,
    N: int,
    threshold: Optional[float] = None,
    executor: Optional[Executor] = None,
) -> List[Tuple[float, float]]:
    """
    Локальные минимумы |L(beta, t)|, лежащие ниже порога.

    Каждый строгий минимум сетки сначала уточняется золотым сечением между
    соседними узлами, и только уточнённая глубина сравнивается с порогом:
    ноль между узлами сетки не теряется при крупном шаге.

    Args:
        beta (float): Обратная температура
        t_min (float): Начало окна
        t_max (float): Конец окна
        step (float): Шаг сетки
        N (int): Размер спектра
        threshold (Optional[float]): Порог; по умолчанию 3 N^{-1/2} / Z

    Returns:
        List[Tuple[float, float]]: Пары (t, |L|)
    """
    if not t_min < t_max or not step > 0.0:
        raise DomainError(f"некорректная сетка [{t_min}, {t_max}] шаг {step}", stage="locate_L_minima")
    if threshold is None:
        threshold = default_L_threshold(beta, N)
    grid = t_grid(t_min, t_max, step)
    values = np.array(_map_ordered(lambda t: accumulated_phase(beta, float(t), N).aux["abs"], grid, executor))
    candidates = [
        i for i in range(1, len(grid) - 1)
        if values[i] < values[i - 1] and values[i] <= values[i + 1]
    ]

    def refine(i: int) -> Tuple[float, float]:
        t_vertex, depth = _golden_section_min(
            lambda t: accumulated_phase(beta, t, N).aux["abs"],
            float(grid[i - 1]),
            float(grid[i + 1]),
            settings.L_MINIMA_REFINE_TOL * step,
        )
        if depth > values[i]:
            return float(grid[i]), float(values[i])
        return t_vertex, depth

    refined = _map_ordered(refine, candidates, executor)
    minima = [(t_vertex, depth) for t_vertex, depth in refined if depth < threshold]
    logging.info(
        f"Найдено минимумов |L|: {len(minima)} из {len(candidates)} кандидатов "
        f"(beta={beta}, N={N}, порог={threshold:.3g})"
    )
    return minima


def compare_reference(report: ScanReport, reference: Sequence[float]) -> List[ReferenceMatch]:
    """
    Сопоставляет найденные нули с ближайшими эталонными.

    Ноль считается несопоставленным, если отклонение больше половины среднего
    расстояния между нулями на этой высоте.

    Args:
        report (ScanReport): Результат сканирования
        reference (Sequence[float]): Эталонные нули по возрастанию

    Returns:
        List[ReferenceMatch]: Сопоставления в порядке нулей отчёта
    """
    if len(reference) == 0:
        raise ContractError("эталонный список нулей пуст", stage="compare_reference")
    if any(b < a for a, b in zip(reference, reference[1:])):
        raise ContractError("эталонные нули не упорядочены по возрастанию", stage="compare_reference")

    matches = []
    for record in report.zeros:
        position = bisect_left(reference, record.t_star)
        candidates = [reference[j] for j in (position - 1, position) if 0 <= j < len(reference)]
        nearest = min(candidates, key=lambda value: abs(value - record.t_star))
        delta = record.t_star - nearest
        matched = abs(delta) <= 0.5 * mean_zero_spacing(record.t_star)
        matches.append(ReferenceMatch(t_star=record.t_star, nearest_ref=nearest, delta_t=delta, matched=matched))
    unmatched = sum(1 for match in matches if not match.matched)
    if unmatched:
        logging.warning(f"Не сопоставлено с эталоном нулей: {unmatched}")
    return matches


def count_zeros_riemann_von_mangoldt(t: float) -> float:
    """Гладкая часть числа нулей до высоты t: theta(t)/pi + 1."""
    return rs_theta(t) / math.pi + 1.0
