import logging
import math
from pathlib import Path
from typing import List

from src.core.errors import ReferenceFormatError


def load_reference_zeros(path: Path) -> List[float]:
    """
    Загружает эталонные нули: одна ордината на строку, '#' начинает комментарий,
    пустые строки пропускаются

    Args:
        path: Путь к текстовому файлу

    Returns:
        List[float]: Ординаты по возрастанию
    """
    zeros: List[float] = []
    with Path(path).open("r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError:
                raise ReferenceFormatError(f"не число '{text}'", line_number) from None
            if not math.isfinite(value) or value <= 0.0:
                raise ReferenceFormatError(f"ордината должна быть положительной: {text}", line_number)
            if zeros and value < zeros[-1]:
                raise ReferenceFormatError("нули не по возрастанию", line_number)
            zeros.append(value)
    logging.info(f"Загружено эталонных нулей: {len(zeros)} из {path}")
    return zeros
