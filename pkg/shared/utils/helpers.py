"""
共用工具函數
"""
import hashlib
import logging
import math
import time
from datetime import datetime
from functools import reduce
from typing import Iterable, Optional

import pytz

logger = logging.getLogger(__name__)


def get_report_time(timezone: str = "UTC") -> datetime:
    """獲取報告時間戳（依設定時區）"""
    try:
        tz = pytz.timezone(timezone)
    except pytz.UnknownTimeZoneError:
        logger.warning("[時間] 未知時區 %s，改用 UTC", timezone)
        tz = pytz.UTC
    return datetime.now(tz)


def derive_seed(base_seed: int, *parts: object) -> int:
    """由基礎種子與任意標籤導出穩定的 63 位元子種子"""
    material = "|".join([str(base_seed)] + [str(p) for p in parts]).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)


def lcm_all(values: Iterable[int]) -> int:
    """多個正整數的最小公倍數"""
    return reduce(math.lcm, values, 1)


class Stopwatch:
    """簡易計時器，回傳毫秒"""

    def __init__(self):
        self._start = time.perf_counter()

    def elapsed_ms(self) -> float:
        return round((time.perf_counter() - self._start) * 1000.0, 3)


def truncate_text(text: Optional[str], max_length: int = 200) -> str:
    """截斷文本"""
    if not text:
        return ""
    if len(text) <= max_length:
        return text
    return text[: max_length - 3] + "..."
