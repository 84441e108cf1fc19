import threading
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.utils.cache import TableCache
from src.utils.helpers import format_log_message, format_number


def test_get_or_compute_caches_value():
    cache = TableCache("test", max_items=4)
    calls = []

    def compute():
        calls.append(1)
        return np.arange(3)

    first = cache.get_or_compute("ln", compute)
    second = cache.get_or_compute("ln", compute)
    assert first is second
    assert len(calls) == 1


def test_get_or_compute_once_under_threads():
    cache = TableCache("threads", max_items=4)
    calls = []
    lock = threading.Lock()

    def compute():
        with lock:
            calls.append(1)
        time.sleep(0.05)
        return "table"

    with ThreadPoolExecutor(max_workers=8) as executor:
        results = list(executor.map(lambda _: cache.get_or_compute("key", compute), range(16)))
    assert results == ["table"] * 16
    assert len(calls) == 1


def test_eviction_keeps_recent_entries():
    cache = TableCache("lru", max_items=2)
    cache.set("a", 1)
    cache.set("b", 2)
    assert cache.get("a") == 1
    cache.set("c", 3)
    assert cache.get("b") is None
    assert cache.get("a") == 1
    assert cache.get("c") == 3
    assert cache.get_stats()["evictions"] == 1


def test_stats_and_clear():
    cache = TableCache("stats", max_items=8)
    cache.set(1, "x")
    cache.get(1)
    cache.get(2)
    stats = cache.get_stats()
    assert stats["hits"] == 1
    assert stats["misses"] == 1
    assert stats["sets"] == 1
    assert stats["size"] == 1
    assert stats["hit_rate"] == 0.5
    cache.clear()
    assert cache.get_stats()["size"] == 0


def test_eviction_by_total_bytes():
    cache = TableCache("bytes", max_items=16, max_bytes=3 * 800)
    for key in range(4):
        cache.set(key, np.zeros(100))
    stats = cache.get_stats()
    assert stats["size"] == 3
    assert stats["bytes"] == 2400
    assert stats["evictions"] == 1
    assert cache.get(0) is None

    cache.set("pair", (np.zeros(100), np.zeros(100)))
    assert cache.get_stats()["bytes"] == 2400
    assert cache.get(1) is None


def test_oversized_value_is_not_stored():
    cache = TableCache("oversized", max_items=4, max_bytes=100)
    assert cache.get_or_compute("big", lambda: np.zeros(1000)).shape == (1000,)
    assert cache.get_stats()["size"] == 0


def test_key_locks_released_after_compute():
    cache = TableCache("locks", max_items=4)
    with ThreadPoolExecutor(max_workers=4) as executor:
        list(executor.map(lambda key: cache.get_or_compute(key % 3, lambda: np.ones(4)), range(12)))
    assert cache.locks == {}

    def broken():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        cache.get_or_compute("broken", broken)
    assert cache.locks == {}
    cache.clear()
    assert cache.get_stats()["bytes"] == 0


def test_compute_error_is_not_cached():
    cache = TableCache("errors", max_items=2)

    def broken():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        cache.get_or_compute("k", broken)
    assert cache.get_or_compute("k", lambda: 7) == 7


@pytest.mark.parametrize(
    "value, expected",
    [
        (None, ""),
        (True, "true"),
        (np.bool_(False), "false"),
        (float("inf"), "inf"),
        (float("-inf"), "-inf"),
        (0.1, "0.1"),
        (np.float64(2.5), "2.5"),
        (7, "7"),
        ("rs", "rs"),
    ],
)
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_format_log_message():
    assert format_log_message("Запуск") == "Запуск"
    assert format_log_message("Запуск", {"command": "scan-l", "beta": 0.5}) == "Запуск | command=scan-l | beta=0.5"
