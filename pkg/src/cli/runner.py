"""
Выполнение команд: вычисления модулей, CSV с результатами и JSON-описание запуска.

Коды завершения: 0 - успех, 1 - ошибка конфигурации, 2 - ошибка ввода-вывода,
3 - ошибка области определения или контракта в модулях.
"""

import asyncio
import logging
import math
import platform
import sys
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import mpmath
import numpy as np
import pydantic

from src.circuits.evolution import analytic_L, end_to_end_run
from src.circuits.state_prep import prepare_initial_state
from src.cli.config_parser import Command, RunConfig
from src.complexity.model import (
    Estimation,
    probe_precisions,
    sample_bounds,
    zero_region_check,
    zero_region_edge,
    zeta_prime_bound,
)
from src.config import settings
from src.core.errors import UsageError, ZetaError
from src.dqpt.observables import (
    accumulated_phase,
    default_t_step,
    hardy_Z_reference,
    loschmidt_amplitude,
    thermal_limit_F1,
)
from src.dqpt.zero_finder import (
    ZSource,
    compare_reference,
    refine_zero,
    scan_sign_changes,
    t_grid,
    z_value,
)
from src.models import RunMetadata, ScanReport
from src.storage import ResultRepository, load_reference_zeros
from src.utils.helpers import format_log_message

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DOMAIN = 3

L_COLUMNS = ["t", "beta", "N", "re", "im", "abs", "F1"]


class CommandOutput(NamedTuple):
    header: Optional[List[str]]
    rows: List[Sequence[Any]]
    results: Dict[str, Any]


def _map(func: Callable, items: Sequence, executor: Optional[Executor]) -> List:
    # Порядок результатов совпадает с порядком items при любом числе потоков
    if executor is None:
        return [func(item) for item in items]
    return list(executor.map(func, items))


def _t_grid(config: RunConfig) -> List[float]:
    step = config.t_step if config.t_step is not None else default_t_step(config.t_max)
    return [float(t) for t in t_grid(config.t_min, config.t_max, step)]


def _beta_grid(config: RunConfig) -> List[float]:
    count = int(math.floor((config.beta_max - config.beta_min) / config.beta_step + 1e-9))
    return [round(config.beta_min + i * config.beta_step, 12) for i in range(count + 1)]


def _l_row(beta: float, t: float, N: int) -> List[Any]:
    sample = accumulated_phase(beta, t, N)
    return [t, beta, N, sample.value.real, sample.value.imag, sample.aux["abs"], sample.aux.get("F1")]


def scan_l(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    N = config.n_fixed
    rows = _map(lambda t: _l_row(config.beta, t, N), _t_grid(config), executor)
    return CommandOutput(L_COLUMNS, rows, {"points": len(rows)})


def scan_g(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    policy = config.policy

    def row(t: float) -> List[Any]:
        sample = loschmidt_amplitude(config.beta, t, policy)
        return [t, sample.N_used, sample.value.real, sample.aux.get("F2")]

    rows = _map(row, _t_grid(config), executor)
    return CommandOutput(["t", "N", "value", "F2"], rows, {"points": len(rows)})


def scan_z(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    policy = config.policy
    source = config.z_source.resolve(config.t_max)
    rows = _map(lambda t: [t, policy.resolve(t), z_value(t, policy.resolve(t), source)], _t_grid(config), executor)
    return CommandOutput(["t", "N", "value"], rows, {"points": len(rows), "source": source.value})


def find_zeros(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    step = config.t_step if config.t_step is not None else default_t_step(config.t_max)
    report = scan_sign_changes(config.t_min, config.t_max, step, config.policy, config.z_source, executor)
    source = ZSource(report.source)
    refined = _map(lambda record: refine_zero(record, config.tol, source, config.secant), report.zeros, executor)

    deltas: List[Optional[float]] = [None] * len(refined)
    results: Dict[str, Any] = {"zeros": len(refined), "n_boundary_events": report.n_boundary_events, "source": source.value}
    if config.reference_path is not None:
        reference = load_reference_zeros(config.reference_path)
        matches = compare_reference(ScanReport(report.window, refined, report.n_boundary_events, report.source), reference)
        deltas = [match.delta_t for match in matches]
        results["unmatched"] = sum(1 for match in matches if not match.matched)

    rows = [
        [i, record.t_low, record.t_high, record.t_star, record.residual, record.N_used, deltas[i]]
        for i, record in enumerate(refined)
    ]
    header = ["index_in_window", "t_low", "t_high", "t_star", "residual", "N", "delta_t_if_reference"]
    return CommandOutput(header, rows, results)


def scan_beta(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    N = config.n_fixed
    rows = _map(lambda beta: _l_row(beta, config.t, N), _beta_grid(config), executor)
    best = min(rows, key=lambda row: row[5])
    return CommandOutput(L_COLUMNS, rows, {"points": len(rows), "argmin_beta": best[1]})


def _near_reference_zero(beta: float, t: float, tol: float) -> bool:
    # Точка считается нулём, если Z меняет знак на [t - tol, t + tol]
    if beta != 0.5 or abs(t) + tol > settings.ZETA_ORACLE_MAX_T:
        return False
    return (hardy_Z_reference(t - tol) < 0.0) != (hardy_Z_reference(t + tol) < 0.0)


def free_energy(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    at_zero = _near_reference_zero(config.beta, config.t, config.tol)
    limit = thermal_limit_F1(config.beta, at_zero)
    sizes = []
    size = 16
    while size <= config.n_fixed:
        sizes.append(size)
        size *= 2
    if not sizes or sizes[-1] != config.n_fixed:
        sizes.append(config.n_fixed)

    def row(N: int) -> List[Any]:
        sample = accumulated_phase(config.beta, config.t, N)
        return [config.t, config.beta, N, sample.aux.get("F1"), limit]

    rows = _map(row, sizes, executor)
    return CommandOutput(["t", "beta", "N", "F1", "F1_limit"], rows, {"at_zero": at_zero, "F1_limit": limit})


def verify_prep(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    N = config.n_fixed
    result = prepare_initial_state(N, config.beta, config.eps)
    row = [
        N, config.beta, config.eps, result.distance.value, result.success_prob,
        result.resources.gates, result.resources.ancillas,
    ]
    results = {
        "ledger": result.ledger.to_dict(),
        "stage_distances": result.stage_distances,
        "layout": result.layout,
    }
    header = ["N", "beta", "eps", "distance", "success_prob", "gates", "ancillas"]
    return CommandOutput(header, [row], results)


def verify_evolve(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    N = config.n_fixed
    run = end_to_end_run(N, config.beta, config.t, config.eps, config.xi)
    expected = analytic_L(N, config.beta, config.t)
    evolution = run.evolution
    row = [
        N, config.beta, config.t, config.xi, evolution.max_deviation, evolution.bound,
        run.value.real, run.value.imag, expected.real, expected.imag, abs(run.value - expected),
    ]
    header = [
        "N", "beta", "t", "xi", "max_phase_deviation", "bound",
        "L_re", "L_im", "analytic_re", "analytic_im", "abs_error",
    ]
    results = {
        "evolution_ledger": evolution.ledger.to_dict(),
        "preparation_ledger": run.preparation.ledger.to_dict(),
        "preparation_distance": run.preparation.distance.value,
    }
    return CommandOutput(header, [row], results)


def complexity(config: RunConfig, executor: Optional[Executor]) -> CommandOutput:
    estimate = sample_bounds(config.beta, config.t, config.delta, Estimation(config.estimation))
    d1, d2, N = probe_precisions(config.beta, config.t, config.delta)
    results: Dict[str, Any] = {
        "estimate": estimate.model_dump(mode="json"),
        "zeta_prime_bound": zeta_prime_bound(config.beta, config.t),
        "probe_precisions": {"d1": d1, "d2": d2, "N": N},
    }
    if abs(config.t) > math.exp(math.e):
        results["zero_region"] = {
            "inside": zero_region_check(config.beta, abs(config.t)),
            "upper_edge": zero_region_edge(abs(config.t)),
            "constant": "unit",
        }
    return CommandOutput(None, [], results)


HANDLERS: Dict[Command, Callable[[RunConfig, Optional[Executor]], CommandOutput]] = {
    Command.SCAN_L: scan_l,
    Command.SCAN_G: scan_g,
    Command.SCAN_Z: scan_z,
    Command.FIND_ZEROS: find_zeros,
    Command.SCAN_BETA: scan_beta,
    Command.FREE_ENERGY: free_energy,
    Command.VERIFY_PREP: verify_prep,
    Command.VERIFY_EVOLVE: verify_evolve,
    Command.COMPLEXITY: complexity,
}


def versions() -> Dict[str, str]:
    return {
        "zeta-dqpt": settings.VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "mpmath": mpmath.__version__,
        "pydantic": pydantic.VERSION,
    }


def conventions() -> Dict[str, str]:
    return {
        "O_constants": settings.O_CONSTANTS,
        "complexity_constants": "conventional",
        "rounding": "nearest_even",
        "analytic_log": "natural",
        "register_log": "base2",
    }


def _execute(config: RunConfig, executor: Optional[Executor]) -> int:
    started = time.perf_counter()
    output = HANDLERS[config.command](config, executor)
    repository = ResultRepository(config.output_path)
    rows = 0
    if output.header is not None:
        rows = repository.write_rows(output.header, output.rows)
    metadata = RunMetadata(
        command=config.command.value,
        parameters=config.parameters(),
        versions=versions(),
        conventions=conventions(),
        wall_time=time.perf_counter() - started,
        rows=rows,
        results=output.results,
    )
    repository.write_sidecar(metadata)
    return rows


def _report(error: Exception, code: int) -> int:
    logging.error(f"Команда завершилась с ошибкой (код {code}): {error}")
    sys.stderr.write(f"{error}\n")
    return code


async def run_async(config: RunConfig) -> int:
    """
    Выполняет команду в пуле потоков, не блокируя цикл событий.

    Args:
        config (RunConfig): Проверенная конфигурация

    Returns:
        int: Код завершения
    """
    logging.info(format_log_message("Запуск команды", {"command": config.command.value, "threads": config.threads}))
    executor = ThreadPoolExecutor(max_workers=config.threads) if config.threads > 1 else None
    try:
        rows = await asyncio.to_thread(_execute, config, executor)
    except UsageError as e:
        return _report(e, EXIT_USAGE)
    except OSError as e:
        return _report(e, EXIT_IO)
    except ZetaError as e:
        return _report(e, EXIT_DOMAIN)
    finally:
        if executor is not None:
            executor.shutdown(wait=True)
    logging.info(f"Команда {config.command.value} выполнена, строк: {rows}")
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Синхронная обёртка над run_async."""
    return asyncio.run(run_async(config))
