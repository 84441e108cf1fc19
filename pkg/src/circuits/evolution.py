"""
Эволюция e^{-i H0 t} с H0 |n> = ln n |n> через фазовый откат: оракул логарифма
вычисляет log2 n с точностью xi/|t|, управляемые вращения записывают фазу.
"""

import logging
import math
from typing import NamedTuple

import numpy as np

from src.circuits.oracles import LN2, log_layout, log_oracle, log_oracle_resources
from src.circuits.state_prep import InitialStateResult, prepare_initial_state
from src.core.compensated import compensated_sum
from src.core.dirichlet_engine import partition_sum, reduced_phases, weights
from src.core.errors import ContractError, DomainError
from src.models import AmplitudeState, ResourceCount, ResourceLedger


class EvolutionResult(NamedTuple):
    state: AmplitudeState
    bound: float
    resources: ResourceCount
    max_deviation: float
    ledger: ResourceLedger


def operator_distance_bound(xi: float) -> float:
    """2 sin(xi/2) - граница отклонения фазового множителя на каждом |n>."""
    return 2.0 * math.sin(0.5 * xi)


def evolution_resources(n_max: int, eta: float) -> ResourceLedger:
    """Вычисление и обращение log2 n плюс по одному вращению на бит регистра."""
    oracle = log_oracle_resources(n_max, eta).total()
    _, _, _, r1, r2 = log_layout(n_max, eta)
    ledger = ResourceLedger()
    ledger.add("log_oracle", oracle)
    ledger.add("phase_rotations", ResourceCount(r1 + r2, 0))
    ledger.add("log_uncompute", ResourceCount(oracle.gates, 0))
    return ledger


def evolution_apply(state: AmplitudeState, t: float, xi: float) -> EvolutionResult:
    """
    Умножает амплитуду |n> на e^{-i t ln2 log2~(n)}, где log2~ - результат
    оракула логарифма с точностью eta = xi/|t|.

    Отклонение от точного множителя e^{-i t ln n} сверяется с 2 sin(xi/2) на
    каждом базисном состоянии; норма сохраняется, так как меняются только фазы.

    Args:
        state (AmplitudeState): Входное состояние
        t (float): Время эволюции
        xi (float): Допустимая ошибка фазы

    Returns:
        EvolutionResult: Новое состояние, граница, ресурсы и измеренное отклонение
    """
    if not xi > 0.0:
        raise DomainError(f"xi должно быть положительным: {xi}", stage="evolution_apply")
    if not math.isfinite(t):
        raise DomainError(f"t должно быть конечным: {t}", stage="evolution_apply")
    bound = operator_distance_bound(xi)
    if t == 0.0:
        return EvolutionResult(state, bound, ResourceCount(), 0.0, ResourceLedger())

    eta = xi / abs(t)
    n_max = state.n_max
    indices = state.indices()
    approx_log2 = np.array([log_oracle(int(n), eta, n_max)[0].decode() for n in indices])
    phases = -t * LN2 * approx_log2
    factors = np.exp(1j * phases)

    exact = np.exp(-1j * t * np.log(indices.astype(np.float64)))
    max_deviation = float(np.max(np.abs(factors - exact)))
    if max_deviation > bound:
        raise ContractError(
            f"отклонение фазы {max_deviation:.3e} больше 2 sin(xi/2) = {bound:.3e}",
            stage="evolution_apply",
        )

    ledger = evolution_resources(n_max, eta)
    logging.debug(f"Эволюция: t={t}, xi={xi}, отклонение={max_deviation:.3e}")
    evolved = AmplitudeState(state.n_min, state.amps * factors)
    return EvolutionResult(evolved, bound, ledger.total(), max_deviation, ledger)


def analytic_L(N: int, beta: float, t: float) -> complex:
    """(1/C^2) sum_{n=1}^{N} n^{-beta-it}, C^2 = sum n^{-beta}."""
    amplitudes = weights(beta, N)[::-1]
    phases = reduced_phases(t, N)[::-1]
    value = complex(compensated_sum(amplitudes * np.cos(phases)), compensated_sum(amplitudes * np.sin(phases)))
    return value / partition_sum(beta, N)


class EndToEndResult(NamedTuple):
    value: complex
    preparation: InitialStateResult
    evolution: EvolutionResult


def end_to_end_run(N: int, beta: float, t: float, eps: float, xi: float) -> EndToEndResult:
    """
    <psi0| e^{-i H0 t} |psi0> по эмулированным подготовке и эволюции.

    Args:
        N (int): Размер спектра
        beta (float): Обратная температура
        t (float): Время
        eps (float): Точность подготовки состояния
        xi (float): Точность фазы эволюции

    Returns:
        EndToEndResult: Оценка (1/C^2) sum n^{-beta-it} и результаты этапов
    """
    prepared = prepare_initial_state(N, beta, eps)
    evolved = evolution_apply(prepared.state, t, xi)
    value = complex(np.vdot(prepared.state.amps, evolved.state.amps))
    logging.info(f"Сквозное L: N={N}, beta={beta}, t={t}, L={value}")
    return EndToEndResult(value, prepared, evolved)


def end_to_end_L(N: int, beta: float, t: float, eps: float, xi: float) -> complex:
    return end_to_end_run(N, beta, t, eps, xi).value
