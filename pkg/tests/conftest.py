"""Shared test fixtures for HomLab."""

import os
import sys

import pytest

# Ensure project root is on sys.path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from config.settings import AppConfig, CampaignConfig, ReportConfig  # noqa: E402
from core.dependencies import build_container  # noqa: E402


def make_config(**campaign) -> AppConfig:
    """小規模的測試配置：序列執行、報告不含時間"""
    options = {"samples": 6, "jobs": 1, "oracle_mode": "on", "enumeration_budget": 20000, "max_dim": 2}
    options.update(campaign)
    return AppConfig(
        default_seed=7,
        campaign=CampaignConfig(**options),
        report=ReportConfig(include_timing=False),
    )


@pytest.fixture
def config_factory():
    return make_config


@pytest.fixture(scope="session")
def container():
    return build_container(make_config())


@pytest.fixture
def fresh_container():
    return build_container(make_config())


# ---- 服務 ----

@pytest.fixture(scope="session")
def rings(container):
    from domain.services.ring_service import RingService
    return container.get(RingService)


@pytest.fixture(scope="session")
def modules(container):
    from domain.services.module_service import ModuleService
    return container.get(ModuleService)


@pytest.fixture(scope="session")
def groebner(container):
    from domain.services.groebner_service import GroebnerService
    return container.get(GroebnerService)


@pytest.fixture(scope="session")
def homology(container):
    from domain.services.homology_service import HomologyService
    return container.get(HomologyService)


@pytest.fixture(scope="session")
def iso(container):
    from domain.services.isomorphism_service import IsomorphismService
    return container.get(IsomorphismService)


@pytest.fixture(scope="session")
def oracle(container):
    from domain.services.oracle_service import OracleService
    return container.get(OracleService)


@pytest.fixture(scope="session")
def theorems(container):
    from features.freeness import TheoremService
    return container.get(TheoremService)


@pytest.fixture(scope="session")
def sampler(container):
    from features.freeness import InstanceSampler
    return container.get(InstanceSampler)


@pytest.fixture(scope="session")
def statements(container):
    from domain.repositories.statement_repository import StatementRepository
    return container.get(StatementRepository)


@pytest.fixture(scope="session")
def workbench(container):
    from application.services.application_service import WorkbenchService
    return container.get(WorkbenchService)


# ---- 目錄環 ----

@pytest.fixture(scope="session")
def artin(rings):
    """F2[x,y]/(x^2, xy, y^2)"""
    return rings.catalog("artin_m2")


@pytest.fixture(scope="session")
def cubic(rings):
    """F3[x]/(x^3)"""
    return rings.catalog("cubic")


@pytest.fixture(scope="session")
def node(rings):
    """F5[x,y]/(xy)"""
    return rings.catalog("node")


@pytest.fixture(scope="session")
def cusp(rings):
    """F5[x:2, y:3]/(y^2 - x^3)"""
    return rings.catalog("cusp")


@pytest.fixture(scope="session")
def plane(rings):
    """F5[x,y]"""
    return rings.catalog("plane")
