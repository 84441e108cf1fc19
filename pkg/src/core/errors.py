"""
Иерархия исключений численного движка.

Каждое исключение несёт необязательное поле `stage`, по которому CLI
указывает, на каком этапе вычисления произошла ошибка.
"""

from typing import Optional


class ZetaError(Exception):
    """Базовое исключение проекта."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        message = super().__str__()
        if self.stage:
            return f"[{self.stage}] {message}"
        return message


class DomainError(ZetaError, ValueError):
    """Аргумент вне области определения операции."""


class CapacityError(ZetaError, ValueError):
    """Запрошенный размер или точность превышают возможности реализации."""


class ValidityError(ZetaError, ValueError):
    """Не выполнено условие применимости приближения (например, окно Эйлера-Маклорена)."""


class ContractError(ZetaError, RuntimeError):
    """Нарушен контракт точности или входных данных."""


class FixedPointOverflowError(ZetaError, OverflowError):
    """Значение не помещается в регистр с фиксированной точкой."""


class UsageError(ZetaError, ValueError):
    """Некорректная конфигурация запуска."""


class ReferenceFormatError(ZetaError, ValueError):
    """Некорректная строка в файле с эталонными нулями."""

    def __init__(self, message: str, line_number: int, stage: Optional[str] = "reference"):
        super().__init__(f"строка {line_number}: {message}", stage)
        self.line_number = line_number
