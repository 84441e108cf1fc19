"""
Кэширование таблиц, не зависящих от t (ln n, n^-beta, ln n в двойной-двойной точности).
Сканирование по t обращается к одним и тем же таблицам тысячи раз, поэтому они
вычисляются один раз и хранятся в памяти.
"""

import logging
import sys
import threading
from collections import OrderedDict
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

from src.config import settings

T = TypeVar('T')


def value_nbytes(value: Any) -> int:
    """
    Объём значения в байтах: nbytes для массивов numpy, сумма по элементам
    для кортежей и списков, sys.getsizeof для остального.
    """
    if hasattr(value, "nbytes"):
        return int(value.nbytes)
    if isinstance(value, (tuple, list)):
        return sum(value_nbytes(item) for item in value)
    return sys.getsizeof(value)


class TableCache:
    """
    Потокобезопасный кэш в памяти с вытеснением давно не используемых записей.
    Размер ограничен и числом записей, и суммарным объёмом в байтах.
    Вычисление значения для ключа выполняется не более одного раза даже при
    одновременных запросах из нескольких потоков.
    """

    def __init__(self, name: str, max_items: Optional[int] = None, max_bytes: Optional[int] = None):
        """
        Args:
            name (str): Имя кэша для логов
            max_items (Optional[int]): Максимальное число записей
            max_bytes (Optional[int]): Максимальный суммарный объём записей в байтах
        """
        self.name = name
        self.max_items = max_items or settings.TABLE_CACHE_MAX_ITEMS
        self.max_bytes = max_bytes or settings.TABLE_CACHE_MAX_BYTES
        self.data: "OrderedDict[Hashable, Any]" = OrderedDict()
        self.sizes: Dict[Hashable, int] = {}
        self.total_bytes = 0
        self.stats = {
            "hits": 0,
            "misses": 0,
            "sets": 0,
            "evictions": 0,
        }
        self._lock = threading.Lock()
        self.locks: Dict[Hashable, threading.Lock] = {}

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Возвращает значение из кэша или None.

        Args:
            key (Hashable): Ключ записи

        Returns:
            Optional[Any]: Значение или None, если ключа нет
        """
        with self._lock:
            if key in self.data:
                self.data.move_to_end(key)
                self.stats["hits"] += 1
                return self.data[key]
            self.stats["misses"] += 1
            return None

    def set(self, key: Hashable, value: Any) -> None:
        """
        Сохраняет значение, вытесняя самые старые записи при переполнении.
        Значение больше max_bytes не кэшируется.

        Args:
            key (Hashable): Ключ записи
            value (Any): Значение
        """
        size = value_nbytes(value)
        with self._lock:
            self._discard(key)
            if size > self.max_bytes:
                logging.debug(f"Кэш {self.name}: запись {key} ({size} байт) больше лимита {self.max_bytes}")
                return
            self.data[key] = value
            self.sizes[key] = size
            self.total_bytes += size
            self.stats["sets"] += 1
            while len(self.data) > self.max_items or self.total_bytes > self.max_bytes:
                evicted, _ = self.data.popitem(last=False)
                self.total_bytes -= self.sizes.pop(evicted)
                self.stats["evictions"] += 1
                logging.debug(f"Кэш {self.name}: вытеснена запись {evicted}")

    def _discard(self, key: Hashable) -> None:
        # Вызывается под self._lock
        if key in self.data:
            del self.data[key]
            self.total_bytes -= self.sizes.pop(key)

    def clear(self) -> None:
        """Очищает кэш и блокировки по ключам."""
        with self._lock:
            self.data.clear()
            self.sizes.clear()
            self.total_bytes = 0
            self.locks.clear()

    def get_or_compute(self, key: Hashable, compute_func: Callable[[], T]) -> T:
        """
        Возвращает значение из кэша или вычисляет и кэширует его.

        Args:
            key (Hashable): Ключ для кэша
            compute_func (Callable[[], T]): Функция вычисления значения

        Returns:
            T: Значение из кэша или результат вычисления
        """
        value = self.get(key)
        if value is not None:
            return value

        with self._lock:
            key_lock = self.locks.setdefault(key, threading.Lock())

        # Блокировка по ключу, чтобы таблица не строилась дважды
        try:
            with key_lock:
                value = self.get(key)
                if value is not None:
                    return value
                try:
                    value = compute_func()
                except Exception as e:
                    logging.error(f"Ошибка при вычислении значения для кэша {self.name}, ключ {key}: {e}")
                    raise
                self.set(key, value)
                return value
        finally:
            with self._lock:
                if self.locks.get(key) is key_lock:
                    del self.locks[key]

    def get_stats(self) -> Dict[str, Any]:
        """
        Возвращает статистику использования кэша.

        Returns:
            Dict[str, Any]: Счётчики, объём и доля попаданий
        """
        with self._lock:
            total = self.stats["hits"] + self.stats["misses"]
            return {
                **self.stats,
                "size": len(self.data),
                "bytes": self.total_bytes,
                "hit_rate": self.stats["hits"] / total if total else 0.0,
            }
