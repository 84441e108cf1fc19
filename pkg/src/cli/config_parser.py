"""
Разбор конфигурации запуска: флаги командной строки поверх файла key=value.
"""

import argparse
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import settings
from src.core.errors import DomainError, UsageError
from src.dqpt.zero_finder import ZSource
from src.models import NPolicy, NPolicyKind


class Command(str, Enum):
    SCAN_L = "scan-l"
    SCAN_G = "scan-g"
    SCAN_Z = "scan-z"
    FIND_ZEROS = "find-zeros"
    SCAN_BETA = "scan-beta"
    FREE_ENERGY = "free-energy"
    VERIFY_PREP = "verify-prep"
    VERIFY_EVOLVE = "verify-evolve"
    COMPLEXITY = "complexity"


# Команды, которым нужно окно по t
WINDOW_COMMANDS = {Command.SCAN_L, Command.SCAN_G, Command.SCAN_Z, Command.FIND_ZEROS}
# Команды, которым нужна одна точка t
POINT_COMMANDS = {Command.SCAN_BETA, Command.FREE_ENERGY, Command.VERIFY_EVOLVE, Command.COMPLEXITY}
# Команды, где допустимо N = rs
RS_COMMANDS = {Command.SCAN_G, Command.SCAN_Z, Command.FIND_ZEROS}


class RunConfig(BaseModel):
    """Проверенная конфигурация одного запуска."""
    model_config = ConfigDict(extra="forbid")

    command: Command = Field(..., description="Команда")
    beta: float = Field(0.5, gt=0.0, description="Обратная температура")
    beta_min: float = Field(0.1, gt=0.0, description="Начало сетки beta (scan-beta)")
    beta_max: float = Field(0.9, gt=0.0, description="Конец сетки beta (scan-beta)")
    beta_step: float = Field(0.05, gt=0.0, description="Шаг сетки beta (scan-beta)")
    t: Optional[float] = Field(None, description="Время для точечных команд")
    t_min: Optional[float] = Field(None, description="Начало окна по t")
    t_max: Optional[float] = Field(None, description="Конец окна по t")
    t_step: Optional[float] = Field(None, gt=0.0, description="Шаг сетки по t")
    N: str = Field("rs", description="Число членов или 'rs'")
    eps: float = Field(1e-3, gt=0.0, description="Точность подготовки состояния")
    xi: float = Field(1e-6, gt=0.0, description="Точность фазы эволюции")
    delta: float = Field(1e-2, gt=0.0, description="Точность zeta в оценке сложности")
    tol: float = Field(1e-4, gt=0.0, description="Ширина скобки при уточнении нуля")
    output_path: Path = Field(..., description="Путь к выходному CSV")
    reference_path: Optional[Path] = Field(None, description="Файл эталонных нулей")
    threads: int = Field(settings.ZETA_THREADS, ge=1, description="Число рабочих потоков")
    z_source: ZSource = Field(ZSource.AUTO, description="Источник Z для поиска нулей")
    estimation: str = Field("amplitude", description="amplitude или sampling")
    secant: bool = Field(False, description="Уточнение нулей секущими")

    @field_validator("N")
    @classmethod
    def validate_n(cls, v: str) -> str:
        try:
            return NPolicy.parse(v).token()
        except (ValueError, DomainError):
            raise ValueError(f"N должно быть целым >= 1 или 'rs', получено '{v}'")

    @field_validator("estimation")
    @classmethod
    def validate_estimation(cls, v: str) -> str:
        if v not in ("amplitude", "sampling"):
            raise ValueError(f"estimation должно быть amplitude или sampling, получено '{v}'")
        return v

    @model_validator(mode="after")
    def validate_command_fields(self) -> "RunConfig":
        if self.command in WINDOW_COMMANDS:
            if self.t_min is None or self.t_max is None:
                raise ValueError(f"{self.command.value}: нужны t_min и t_max")
            if not self.t_min < self.t_max:
                raise ValueError(f"пустое окно [{self.t_min}, {self.t_max}]")
        if self.command in POINT_COMMANDS and self.t is None:
            raise ValueError(f"{self.command.value}: нужно значение t")
        if self.command == Command.SCAN_BETA and not self.beta_min < self.beta_max:
            raise ValueError(f"пустая сетка beta [{self.beta_min}, {self.beta_max}]")
        if self.policy.kind == NPolicyKind.RIEMANN_SIEGEL and self.command not in RS_COMMANDS | {Command.COMPLEXITY}:
            raise ValueError(f"{self.command.value}: N должно быть целым")
        return self

    @property
    def policy(self) -> NPolicy:
        return NPolicy.parse(self.N)

    @property
    def n_fixed(self) -> int:
        return self.policy.resolve(0.0)

    def parameters(self) -> Dict[str, Any]:
        """Параметры запуска для JSON-описания."""
        return self.model_dump(mode="json")


class _Parser(argparse.ArgumentParser):
    # argparse по умолчанию завершает процесс; здесь ошибка поднимается наверх
    def error(self, message: str):
        raise UsageError(message, stage="parse_config")


# Флаг -> ключ конфигурации
_FLAGS = {
    "--beta": ("beta", float),
    "--beta-min": ("beta_min", float),
    "--beta-max": ("beta_max", float),
    "--beta-step": ("beta_step", float),
    "--t": ("t", float),
    "--t-min": ("t_min", float),
    "--t-max": ("t_max", float),
    "--t-step": ("t_step", float),
    "--n": ("N", str),
    "--eps": ("eps", float),
    "--xi": ("xi", float),
    "--delta": ("delta", float),
    "--tol": ("tol", float),
    "--reference": ("reference_path", str),
    "--threads": ("threads", int),
    "--z-source": ("z_source", str),
    "--estimation": ("estimation", str),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zeta-dqpt", allow_abbrev=False, description="Нули дзета-функции как критические времена DQPT")
    parser.add_argument("command", choices=[c.value for c in Command], help="Команда")
    for flag, (key, kind) in _FLAGS.items():
        parser.add_argument(flag, dest=key, type=kind, default=None)
    parser.add_argument("-o", "--output", dest="output_path", default=None, help="Выходной CSV")
    parser.add_argument("--config", dest="config_path", default=None, help="Файл key=value")
    parser.add_argument("--secant", dest="secant", action="store_true", default=None, help="Уточнение секущими")
    return parser


def read_config_file(path: Path) -> Dict[str, str]:
    """
    Читает плоский файл key=value ('#' - комментарии); неизвестные ключи - ошибка.

    Args:
        path (Path): Путь к файлу

    Returns:
        Dict[str, str]: Значения по ключам RunConfig
    """
    path = Path(path)
    if not path.exists():
        raise UsageError(f"файл конфигурации не найден: {path}", stage="parse_config")
    values = {key.strip().replace("-", "_"): value for key, value in dotenv_values(path).items()}
    known = set(RunConfig.model_fields)
    unknown = sorted(key for key in values if key not in known and key.lower() != "n")
    if unknown:
        raise UsageError(f"неизвестные ключи в {path}: {', '.join(unknown)}", stage="parse_config")
    if "n" in values:
        values["N"] = values.pop("n")
    empty = [key for key, value in values.items() if value is None]
    if empty:
        raise UsageError(f"ключи без значения в {path}: {', '.join(empty)}", stage="parse_config")
    logging.debug(f"Прочитан файл конфигурации {path}: {sorted(values)}")
    return values


def parse_config(argv: Sequence[str], config_path: Optional[Path] = None) -> RunConfig:
    """
    Строит RunConfig: значения из файла, затем флаги поверх них.

    Args:
        argv (Sequence[str]): Аргументы без имени программы
        config_path (Optional[Path]): Файл key=value (флаг --config имеет приоритет)

    Returns:
        RunConfig: Проверенная конфигурация
    """
    args = vars(build_parser().parse_args(list(argv)))
    file_path = args.pop("config_path") or config_path
    values: Dict[str, Any] = read_config_file(file_path) if file_path else {}
    values.update({key: value for key, value in args.items() if value is not None})

    try:
        config = RunConfig(**values)
    except ValidationError as e:
        raise UsageError(_describe(e), stage="parse_config") from None
    logging.info(f"Конфигурация: команда={config.command.value}, N={config.N}, потоков={config.threads}")
    return config


def _describe(error: ValidationError) -> str:
    messages: List[str] = []
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "config"
        messages.append(f"{where}: {item['msg']}")
    return "; ".join(messages)
