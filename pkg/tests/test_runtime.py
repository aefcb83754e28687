from __future__ import annotations

import os
import threading

import pytest

from radar_mi.errors import ConfigError
from radar_mi.runtime import THREADS_ENV, parallel_map, thread_count


@pytest.mark.parametrize("value, expected", [("1", 1), ("3", 3), ("", os.cpu_count() or 1), ("0", os.cpu_count() or 1)])
def test_thread_count(monkeypatch, value, expected):
    monkeypatch.setenv(THREADS_ENV, value)
    assert thread_count() == expected


@pytest.mark.parametrize("value", ["-1", "two"])
def test_thread_count_rejects(monkeypatch, value):
    monkeypatch.setenv(THREADS_ENV, value)
    with pytest.raises(ConfigError):
        thread_count()


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, range(50), workers=4) == [x * x for x in range(50)]


def test_parallel_map_serial_stays_on_caller_thread():
    caller = threading.get_ident()
    assert parallel_map(lambda _: threading.get_ident(), range(3), workers=1) == [caller] * 3
