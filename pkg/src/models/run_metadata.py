from typing import Any, Dict

from pydantic import BaseModel, Field


class RunMetadata(BaseModel):
    """Описание запуска в JSON рядом с CSV."""
    command: str = Field(..., description="Команда")
    parameters: Dict[str, Any] = Field(..., description="Параметры RunConfig")
    versions: Dict[str, str] = Field(..., description="Версии пакета и зависимостей")
    conventions: Dict[str, str] = Field(..., description="Соглашения: константы O(.), округление, логарифмы")
    wall_time: float = Field(..., ge=0.0, description="Время выполнения, с")
    rows: int = Field(0, ge=0, description="Число строк данных в CSV")
    results: Dict[str, Any] = Field(default_factory=dict, description="Итоги команды")
