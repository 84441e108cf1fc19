import math
from typing import Any, Dict, Optional

import numpy as np


def format_log_message(message: str, extra: Optional[Dict[str, Any]] = None) -> str:
    """
    Форматирует сообщение для логирования с дополнительными параметрами.

    Args:
        message (str): Основное сообщение
        extra (Optional[Dict[str, Any]]): Дополнительные параметры

    Returns:
        str: Отформатированное сообщение для лога
    """
    if extra:
        return f"{message} | {' | '.join([f'{k}={format_number(v)}' for k, v in extra.items()])}"
    return message


def format_number(value: Any) -> str:
    """
    Детерминированно форматирует число для CSV и логов.

    Вещественные числа пишутся через repr (кратчайшее точное представление),
    бесконечности как 'inf' / '-inf', пропуски как пустая строка.
    """
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(float(value))
    return str(value)
