"""
應用程式配置管理
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv

from shared.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

HOMLAB_VERSION = "1.0.0"
ORACLE_MODES = ("on", "off", "referee")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        logger.warning("[配置] %s=%r 不是整數，使用預設值 %d", name, raw, default)
        return default


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class EngineConfig:
    """計算引擎配置"""
    regular_retry_budget: int = 64
    iso_sample_budget: int = 64
    iso_exhaustive_limit: int = 19683  # 3^9 個候選矩陣
    iso_exhaustive_dim: int = 16  # p ≤ iso_exhaustive_max_prime 時窮舉的 Hom_0 維數上限
    iso_exhaustive_max_prime: int = 3
    iso_batch_size: int = 1 << 15
    resolution_extra: int = 2
    hilbert_compare_degree: int = 12
    twist_window: int = 6
    nilpotency_bound: int = 8

    @classmethod
    def from_env(cls) -> "EngineConfig":
        return cls(
            regular_retry_budget=_env_int("HOMLAB_REGULAR_RETRY_BUDGET", 64),
            iso_sample_budget=_env_int("HOMLAB_ISO_SAMPLE_BUDGET", 64),
            iso_exhaustive_limit=_env_int("HOMLAB_ISO_EXHAUSTIVE_LIMIT", 19683),
            iso_exhaustive_dim=_env_int("HOMLAB_ISO_EXHAUSTIVE_DIM", 16),
            iso_exhaustive_max_prime=_env_int("HOMLAB_ISO_EXHAUSTIVE_MAX_PRIME", 3),
            iso_batch_size=_env_int("HOMLAB_ISO_BATCH_SIZE", 1 << 15),
            resolution_extra=_env_int("HOMLAB_RESOLUTION_EXTRA", 2),
            hilbert_compare_degree=_env_int("HOMLAB_HILBERT_COMPARE_DEGREE", 12),
            twist_window=_env_int("HOMLAB_TWIST_WINDOW", 6),
            nilpotency_bound=_env_int("HOMLAB_NILPOTENCY_BOUND", 8),
        )


@dataclass
class CampaignConfig:
    """驗證活動配置"""
    samples: int = 500
    jobs: int = 1
    oracle_mode: str = "on"
    enumeration_budget: int = 200000
    max_dim: int = 3

    @classmethod
    def from_env(cls) -> "CampaignConfig":
        return cls(
            samples=_env_int("HOMLAB_SAMPLES", 500),
            jobs=_env_int("HOMLAB_JOBS", 1),
            oracle_mode=os.getenv("HOMLAB_ORACLE", "on").strip().lower(),
            enumeration_budget=_env_int("HOMLAB_ENUMERATION_BUDGET", 200000),
            max_dim=_env_int("HOMLAB_MAX_DIM", 3),
        )


@dataclass
class ReportConfig:
    """報告輸出配置"""
    json_indent: int = 2
    timezone: str = "UTC"
    include_timing: bool = True

    @classmethod
    def from_env(cls) -> "ReportConfig":
        return cls(
            json_indent=_env_int("HOMLAB_JSON_INDENT", 2),
            timezone=os.getenv("HOMLAB_TIMEZONE", "UTC").strip() or "UTC",
            include_timing=_env_bool("HOMLAB_INCLUDE_TIMING", True),
        )


@dataclass
class AppConfig:
    """應用程式總配置"""
    debug_mode: bool = False
    log_level: str = "INFO"
    default_seed: int = 0

    engine: EngineConfig = field(default_factory=EngineConfig)
    campaign: CampaignConfig = field(default_factory=CampaignConfig)
    report: ReportConfig = field(default_factory=ReportConfig)

    @classmethod
    def from_env(cls) -> "AppConfig":
        """從環境變數創建配置"""
        load_dotenv()

        return cls(
            debug_mode=_env_bool("HOMLAB_DEBUG", False),
            log_level=os.getenv("HOMLAB_LOG_LEVEL", "INFO").strip().upper() or "INFO",
            default_seed=_env_int("HOMLAB_SEED", 0),
            engine=EngineConfig.from_env(),
            campaign=CampaignConfig.from_env(),
            report=ReportConfig.from_env(),
        )

    def validate(self) -> list[str]:
        """驗證配置完整性，返回錯誤列表"""
        errors = []

        if self.engine.regular_retry_budget < 1:
            errors.append("HOMLAB_REGULAR_RETRY_BUDGET 必須為正整數")
        if self.engine.iso_sample_budget < 0:
            errors.append("HOMLAB_ISO_SAMPLE_BUDGET 不可為負")
        if self.engine.iso_exhaustive_limit < 1:
            errors.append("HOMLAB_ISO_EXHAUSTIVE_LIMIT 必須為正整數")
        if self.engine.iso_exhaustive_dim < 0:
            errors.append("HOMLAB_ISO_EXHAUSTIVE_DIM 不可為負")
        if self.engine.iso_batch_size < 1:
            errors.append("HOMLAB_ISO_BATCH_SIZE 必須為正整數")
        if self.engine.resolution_extra < 0:
            errors.append("HOMLAB_RESOLUTION_EXTRA 不可為負")
        if self.engine.twist_window < 0:
            errors.append("HOMLAB_TWIST_WINDOW 不可為負")

        if self.campaign.samples < 0:
            errors.append("HOMLAB_SAMPLES 不可為負")
        if self.campaign.jobs < 1:
            errors.append("HOMLAB_JOBS 必須至少為 1")
        if self.campaign.oracle_mode not in ORACLE_MODES:
            errors.append(f"HOMLAB_ORACLE 必須是 {'/'.join(ORACLE_MODES)} 之一")
        if self.campaign.max_dim < 1:
            errors.append("HOMLAB_MAX_DIM 必須至少為 1")

        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"HOMLAB_LOG_LEVEL 無效: {self.log_level}")
        if self.default_seed < 0:
            errors.append("HOMLAB_SEED 不可為負")

        return errors


# 全域配置實例
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """獲取全域配置實例"""
    global _config
    if _config is None:
        _config = AppConfig.from_env()
        errors = _config.validate()
        if errors:
            for error in errors:
                logger.warning("配置錯誤: %s", error)
            _config = None
            raise ConfigurationError("; ".join(errors), "invalid_configuration")
    return _config


def reset_config() -> None:
    """重置配置 (主要用於測試)"""
    global _config
    _config = None
