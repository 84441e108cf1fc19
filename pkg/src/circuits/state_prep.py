"""
Эмуляция подготовки начального состояния |psi0> = (1/C) sum_{n<=N} n^{-beta/2} |n>:
усечённое состояние на окне [n0, n1) через k раундов разбиения амплитуд,
голова n < n0 прямыми вращениями, объединение LCU и постселекция n <= N.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from src.circuits.oracles import angle_layout, angle_oracle, angle_oracle_resources, angle_windows
from src.config import settings
from src.core.dirichlet_engine import direct_window_sum, window_sum
from src.core.errors import ContractError, DomainError
from src.models import AmplitudeState, FixedPointValue, ResourceCount, ResourceLedger, StateDistance
from src.utils.helpers import format_log_message


@dataclass
class TruncatedStateResult:
    state: AmplitudeState
    distance: StateDistance
    resources: ResourceCount
    ledger: ResourceLedger
    round_errors: List[float]

    @property
    def max_angle_error(self) -> float:
        return max(self.round_errors)


@dataclass
class InitialStateResult:
    state: AmplitudeState
    success_prob: float
    distance: StateDistance
    resources: ResourceCount
    ledger: ResourceLedger
    stage_distances: Dict[str, float] = field(default_factory=dict)
    layout: Dict[str, float] = field(default_factory=dict)


def exact_state(n_min: int, n_max: int, beta: float) -> AmplitudeState:
    """Точное состояние (1/C) sum_{n=n_min}^{n_max} n^{-beta/2} |n>."""
    n = np.arange(n_min, n_max + 1, dtype=np.float64)
    return AmplitudeState.from_unnormalized(n_min, np.exp(-0.5 * beta * np.log(n)))


def exact_initial_state(N: int, beta: float) -> AmplitudeState:
    """Точное |psi0> = (1/C) sum_{n=1}^{N} n^{-beta/2} |n>."""
    return exact_state(1, N, beta)


def state_distance(a: AmplitudeState, b: AmplitudeState) -> float:
    return StateDistance.between(a, b).value


def truncation_depth(eps: float) -> int:
    """c = ceil(1/2 log_{2pi}(8/eps)) - глубина поправок Эйлера-Маклорена."""
    return math.ceil(0.5 * math.log(8.0 / eps) / math.log(2.0 * math.pi))


def _check_truncated(n0: int, k: int, beta: float, eps: float) -> None:
    if not 1 <= k <= settings.MAX_TRUNCATED_K:
        raise ContractError(f"k={k} вне [1, {settings.MAX_TRUNCATED_K}]", stage="prepare_truncated_state")
    if not eps > 0.0:
        raise ContractError(f"eps должно быть положительным: {eps}", stage="prepare_truncated_state")
    if beta < 0.0 or beta == 1.0:
        raise ContractError(f"beta={beta} вне области (beta >= 0, beta != 1)", stage="prepare_truncated_state")
    c = truncation_depth(eps)
    if not n0 > math.ceil(beta + 2 * c):
        raise ContractError(
            f"n0={n0} должно быть больше ceil(beta + 2c) = {math.ceil(beta + 2 * c)}",
            stage="prepare_truncated_state",
        )


def rotation_resources(count: int, angle_bits: int, controls: int) -> ResourceCount:
    """Управляемые вращения: по одному вентилю на бит угла и управляющий кубит."""
    return ResourceCount(count * angle_bits * max(1, controls), angle_bits)


def truncated_state_resources(n0: int, k: int, beta: float, eps: float) -> ResourceLedger:
    """
    Ресурсы усечённого состояния: в раунде m оракул угла U_m (все w параллельно),
    управляемые вращения и обращение U_m.
    """
    err = eps / k
    layout = angle_layout(k, n0, beta, err)
    ledger = ResourceLedger()
    for m in range(k):
        oracle = angle_oracle_resources(k, n0, beta, err).total()
        ledger.add(f"round_{m}.oracle", oracle)
        ledger.add(f"round_{m}.rotation", rotation_resources(1, layout.theta_frac + 1, 1))
        ledger.add(f"round_{m}.uncompute", ResourceCount(oracle.gates, 0))
    return ledger


def prepare_truncated_state(n0: int, k: int, beta: float, eps: float) -> TruncatedStateResult:
    """
    Усечённое состояние (1/C1) sum_{n=n0}^{n1-1} n^{-beta/2} |n - n0>, n1 = n0 + 2^k.

    В раунде m каждая амплитуда префикса w делится на cos/sin угла theta_{w,m}
    от оракула угла с бюджетом eps/k; расстояние до точного состояния не
    превышает суммы максимальных ошибок углов по раундам.

    Args:
        n0 (int): Начало окна
        k (int): Число раундов (log2 длины окна)
        beta (float): Показатель
        eps (float): Допустимое расстояние

    Returns:
        TruncatedStateResult: Состояние, расстояние, ресурсы
    """
    _check_truncated(n0, k, beta, eps)
    err = eps / k
    logging.info(format_log_message("Подготовка усечённого состояния", {"n0": n0, "k": k, "beta": beta, "eps": eps}))

    amplitudes = np.ones(1)
    max_errors: List[float] = []
    for m in range(k):
        cos_part = np.empty(1 << m)
        sin_part = np.empty(1 << m)
        round_error = 0.0
        for w in range(1 << m):
            prefix = format(w, f"0{m}b") if m else ""
            result = angle_oracle(prefix, m, k, n0, beta, err)
            theta = result.theta.decode()
            a1, b1, a2 = angle_windows(prefix, m, k, n0)
            exact = math.asin(math.sqrt(direct_window_sum(a1, b1, beta) / direct_window_sum(a2, b1, beta)))
            round_error = max(round_error, abs(theta - exact))
            cos_part[w] = math.cos(theta)
            sin_part[w] = math.sin(theta)
        max_errors.append(round_error)
        # Дочерний индекс 2w + b: старшие биты - префикс
        split = np.empty(1 << (m + 1))
        split[0::2] = amplitudes * cos_part
        split[1::2] = amplitudes * sin_part
        amplitudes = split

    state = AmplitudeState.from_unnormalized(n0, amplitudes)
    distance = StateDistance.between(state, exact_state(n0, n0 + (1 << k) - 1, beta))
    ledger = truncated_state_resources(n0, k, beta, eps)
    if distance.value > eps:
        raise ContractError(
            f"расстояние {distance.value} превышает eps={eps} (сумма ошибок углов {sum(max_errors):.3e})",
            stage="prepare_truncated_state",
        )
    logging.info(f"Усечённое состояние готово: расстояние={distance.value:.3e}")
    return TruncatedStateResult(state, distance, ledger.total(), ledger, max_errors)


class InitialStateLayout:
    """Размеры конструкции начального состояния для заданных (N, beta, eps)."""

    def __init__(self, N: int, beta: float, eps: float):
        self.N = N
        self.beta = beta
        self.eps = eps
        self.extended_eps = eps / 6.0
        self.part_eps = self.extended_eps / 3.0
        self.c = math.ceil(0.5 * math.log(144.0 / eps) / math.log(2.0 * math.pi))
        # n0 - 1 - наименьшая степень двойки, большая ceil(beta + 2c)
        self.n0 = (1 << math.ceil(beta + 2 * self.c).bit_length()) + 1
        self.head_only = N < self.n0
        if self.head_only:
            self.k = 0
            self.head_size = 1 << max(0, (N - 1).bit_length())
            self.n1 = self.head_size + 1
        else:
            # k = ceil(log2(N + 1 - n0)), окно [n0, n1) покрывает n <= N
            self.k = max(1, (N - self.n0).bit_length())
            self.n1 = self.n0 + (1 << self.k)
            self.head_size = self.n0 - 1
        self.index_bits = max(1, (self.n1 - 1).bit_length())
        self.head_angle_bits = math.ceil(math.log2(max(2, self.head_size.bit_length()) / self.part_eps)) + 3

    def to_dict(self) -> Dict[str, float]:
        return {
            "N": self.N,
            "beta": self.beta,
            "eps": self.eps,
            "c": self.c,
            "n0": self.n0,
            "n1": self.n1,
            "k": self.k,
            "head_only": self.head_only,
        }


def head_state(size: int, beta: float, angle_bits: int) -> AmplitudeState:
    """
    Состояние по n = 1..size (size - степень двойки) прямыми вращениями
    по уровням двоичного дерева; углы квантуются до angle_bits бит.
    """
    levels = size.bit_length() - 1
    amplitudes = np.ones(1)
    for level in range(levels):
        block = size >> (level + 1)
        cos_part = np.empty(1 << level)
        sin_part = np.empty(1 << level)
        for w in range(1 << level):
            start = 1 + w * 2 * block
            upper = direct_window_sum(start + block, start + 2 * block - 1, beta)
            full = direct_window_sum(start, start + 2 * block - 1, beta)
            theta = FixedPointValue.encode(math.asin(math.sqrt(upper / full)), 1, angle_bits).decode()
            cos_part[w] = math.cos(theta)
            sin_part[w] = math.sin(theta)
        split = np.empty(1 << (level + 1))
        split[0::2] = amplitudes * cos_part
        split[1::2] = amplitudes * sin_part
        amplitudes = split
    return AmplitudeState.from_unnormalized(1, amplitudes)


def head_state_resources(size: int, angle_bits: int) -> ResourceCount:
    levels = max(0, size.bit_length() - 1)
    return rotation_resources(max(0, size - 1), angle_bits + 1, levels)


def comparator_resources(bits: int) -> ResourceCount:
    return ResourceCount(2 * bits, 1)


def initial_state_resources(N: int, beta: float, eps: float) -> ResourceLedger:
    """
    Журнал ресурсов подготовки начального состояния без эмуляции амплитуд.

    Управляемые версии подпрограмм в LCU считаются вдвое дороже исходных.
    """
    _check_initial(N, beta, eps)
    layout = InitialStateLayout(N, beta, eps)
    ledger = ResourceLedger()
    head = head_state_resources(layout.head_size, layout.head_angle_bits)
    if layout.head_only:
        ledger.add("head", head)
    else:
        tail = truncated_state_resources(layout.n0, layout.k, beta, layout.part_eps)
        gamma_bits = layout.head_angle_bits
        ledger.add("lcu.weight_rotation", rotation_resources(1, gamma_bits + 1, 1))
        ledger.add("lcu.hadamard", ResourceCount(2, 1))
        ledger.extend("lcu.controlled_tail", ResourceLedger([(s, c.scaled(2)) for s, c in tail.stages]))
        ledger.add("lcu.controlled_head", head.scaled(2))
        ledger.add("lcu.offset_adder", ResourceCount(2 * layout.index_bits * layout.index_bits, layout.index_bits))
        ledger.add("lcu.correction", comparator_resources(layout.index_bits) + ResourceCount(1, 0))
    ledger.add("postselect", comparator_resources(layout.index_bits))
    return ledger


def _check_initial(N: int, beta: float, eps: float) -> None:
    if N < 4:
        raise DomainError(f"N должно быть >= 4: {N}", stage="prepare_initial_state")
    if not beta > 0.0 or beta == 1.0:
        raise DomainError(f"beta={beta} вне области (beta > 0, beta != 1)", stage="prepare_initial_state")
    if not eps > 0.0:
        raise DomainError(f"eps должно быть положительным: {eps}", stage="prepare_initial_state")
    if N > settings.MAX_TERMS:
        raise DomainError(f"N={N} превышает предел {settings.MAX_TERMS}", stage="prepare_initial_state")


def prepare_initial_state(N: int, beta: float, eps: float) -> InitialStateResult:
    """
    Начальное состояние |psi0> по n = 1..N с постселекцией.

    Голова (n < n0) строится прямыми вращениями, хвост [n0, n1) - как
    усечённое состояние с бюджетом eps/18; веса объединяются LCU с
    gamma = sqrt(S(1, n0-1) / S(n0, n1-1)), затем проекция на n <= N.
    При N < n0 строится только голова на 1..2^ceil(log2 N).

    Args:
        N (int): Размер спектра, >= 4
        beta (float): Обратная температура, > 0 и != 1
        eps (float): Допустимое расстояние до |psi0>

    Returns:
        InitialStateResult: Состояние, вероятность успеха, расстояние и ресурсы
    """
    _check_initial(N, beta, eps)
    layout = InitialStateLayout(N, beta, eps)
    logging.info(format_log_message("Подготовка начального состояния", layout.to_dict()))
    stage_distances: Dict[str, float] = {}

    head = head_state(layout.head_size, beta, layout.head_angle_bits)
    stage_distances["head"] = StateDistance.between(head, exact_state(1, layout.head_size, beta)).value
    if stage_distances["head"] > layout.part_eps:
        raise ContractError(f"голова: расстояние {stage_distances['head']} > {layout.part_eps}", stage="head_state")

    if layout.head_only:
        extended = head.amps
    else:
        tail = prepare_truncated_state(layout.n0, layout.k, beta, layout.part_eps)
        stage_distances["truncated"] = tail.distance.value
        gamma_eps = layout.n0 ** -beta * layout.extended_eps ** 2 / 36.0
        gamma = math.sqrt(direct_window_sum(1, layout.n0 - 1, beta) / window_sum(layout.n0, layout.n1 - 1, beta, gamma_eps))
        exact_gamma = math.sqrt(direct_window_sum(1, layout.n0 - 1, beta) / direct_window_sum(layout.n0, layout.n1 - 1, beta))
        stage_distances["gamma_error"] = abs(gamma - exact_gamma)
        norm = math.sqrt(1.0 + gamma * gamma)
        extended = np.concatenate([gamma * head.amps / norm, tail.state.amps / norm])
        merged = AmplitudeState(1, extended)
        stage_distances["extended"] = StateDistance.between(merged, exact_state(1, layout.n1 - 1, beta)).value
        if stage_distances["extended"] > layout.extended_eps:
            raise ContractError(
                f"расширенное состояние: расстояние {stage_distances['extended']} > {layout.extended_eps}",
                stage="lcu",
            )

    kept = np.asarray(extended[:N])
    success_prob = float(np.sum(np.abs(kept) ** 2))
    state = AmplitudeState.from_unnormalized(1, kept)
    distance = StateDistance.between(state, exact_state(1, N, beta))
    if distance.value > eps:
        raise ContractError(f"расстояние {distance.value} > eps={eps}", stage="postselect")
    if success_prob < 0.5 - eps / 3.0:
        raise ContractError(f"вероятность успеха {success_prob} < 1/2 - eps/3", stage="postselect")

    ledger = initial_state_resources(N, beta, eps)
    logging.info(format_log_message(
        "Начальное состояние готово",
        {"distance": distance.value, "success_prob": success_prob, "gates": ledger.total().gates},
    ))
    return InitialStateResult(
        state=state,
        success_prob=success_prob,
        distance=distance,
        resources=ledger.total(),
        ledger=ledger,
        stage_distances=stage_distances,
        layout=layout.to_dict(),
    )


def ideal_success_probability(N: int, beta: float, eps: float) -> float:
    """S(1, N) / S(1, n1 - 1) - вероятность постселекции для точного расширенного состояния."""
    n1 = InitialStateLayout(N, beta, eps).n1
    return direct_window_sum(1, N, beta) / direct_window_sum(1, n1 - 1, beta)
