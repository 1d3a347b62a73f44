import pytest

from config.settings import AppConfig, CampaignConfig, EngineConfig, get_config, reset_config
from shared.exceptions import ConfigurationError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (
        "HOMLAB_SEED", "HOMLAB_SAMPLES", "HOMLAB_JOBS", "HOMLAB_ORACLE", "HOMLAB_LOG_LEVEL",
        "HOMLAB_ISO_EXHAUSTIVE_LIMIT", "HOMLAB_ISO_EXHAUSTIVE_DIM", "HOMLAB_INCLUDE_TIMING", "HOMLAB_MAX_DIM",
    ):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    yield
    reset_config()


class TestFromEnv:
    def test_defaults(self):
        config = AppConfig.from_env()
        assert config.default_seed == 0
        assert config.campaign.oracle_mode == "on"
        assert config.engine.iso_exhaustive_limit == 3 ** 9
        assert (config.engine.iso_exhaustive_dim, config.engine.iso_exhaustive_max_prime) == (16, 3)
        assert config.report.include_timing is True
        assert config.validate() == []

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("HOMLAB_SEED", "42")
        monkeypatch.setenv("HOMLAB_SAMPLES", "25")
        monkeypatch.setenv("HOMLAB_ORACLE", " Referee ")
        monkeypatch.setenv("HOMLAB_INCLUDE_TIMING", "no")
        config = AppConfig.from_env()
        assert config.default_seed == 42
        assert config.campaign.samples == 25
        assert config.campaign.oracle_mode == "referee"
        assert config.report.include_timing is False

    def test_bad_integer_falls_back_to_default(self, monkeypatch):
        monkeypatch.setenv("HOMLAB_JOBS", "many")
        assert AppConfig.from_env().campaign.jobs == 1


class TestValidate:
    def test_reports_every_problem(self):
        config = AppConfig(
            log_level="LOUD",
            engine=EngineConfig(iso_exhaustive_limit=0),
            campaign=CampaignConfig(jobs=0, oracle_mode="sometimes"),
        )
        errors = config.validate()
        assert len(errors) == 4
        assert any("HOMLAB_ORACLE" in e for e in errors)

    def test_get_config_raises_on_invalid_environment(self, monkeypatch):
        monkeypatch.setenv("HOMLAB_ORACLE", "maybe")
        with pytest.raises(ConfigurationError):
            get_config()

    def test_get_config_is_cached(self):
        assert get_config() is get_config()

    def test_negative_exhaustive_dimension(self):
        errors = AppConfig(engine=EngineConfig(iso_exhaustive_dim=-1, iso_batch_size=0)).validate()
        assert any("HOMLAB_ISO_EXHAUSTIVE_DIM" in e for e in errors)
        assert any("HOMLAB_ISO_BATCH_SIZE" in e for e in errors)
