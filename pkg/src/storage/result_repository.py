import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

from pydantic import BaseModel

from src.utils.helpers import format_number


class ResultRepository:
    """CSV с результатами команды и JSON-описание запуска рядом с ним."""

    def __init__(self, output_path: Path):
        self.output_path = Path(output_path)

    @property
    def sidecar_path(self) -> Path:
        return self.output_path.with_suffix(".json")

    def write_rows(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
        """
        Записывает строку заголовка и строки результатов

        Args:
            header: Имена столбцов
            rows: Строки в порядке столбцов

        Returns:
            int: Число записанных строк данных
        """
        count = 0
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            with self.output_path.open("w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    if len(row) != len(header):
                        raise ValueError(f"строка из {len(row)} полей при {len(header)} столбцах")
                    writer.writerow([format_number(value) for value in row])
                    count += 1
        except OSError as e:
            logging.error(f"Ошибка записи {self.output_path}: {e}")
            raise
        logging.info(f"Записано строк: {count} -> {self.output_path}")
        return count

    def write_sidecar(self, metadata: BaseModel) -> Path:
        """
        Записывает описание запуска в JSON рядом с CSV (или вместо него)

        Args:
            metadata: Модель метаданных

        Returns:
            Path: Путь к JSON-файлу
        """
        path = self.sidecar_path
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            payload = json.dumps(metadata.model_dump(mode="json"), ensure_ascii=False, indent=2, sort_keys=True)
            path.write_text(payload + "\n", encoding="utf-8")
        except OSError as e:
            logging.error(f"Ошибка записи {path}: {e}")
            raise
        logging.info(f"Метаданные запуска -> {path}")
        return path
