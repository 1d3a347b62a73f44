import pytest

from application.handlers.command_handler import CommandHandler
from application.services.campaign_service import CampaignService
from config.settings import AppConfig, CampaignConfig
from core.container import Container, ServiceLifetime
from core.dependencies import build_container
from domain.services.module_service import ModuleService
from presentation.reports.report_builders import ReportBuilder
from shared.exceptions import DependencyInjectionError


class _Leaf:
    pass


class _Branch:
    def __init__(self, leaf: _Leaf, label: str = "branch"):
        self.leaf = leaf
        self.label = label


class _Loop:
    def __init__(self, other: "_Loop"):
        self.other = other


class TestContainer:
    def test_singleton_and_transient(self):
        container = Container().register_singleton(_Leaf).register_transient(_Branch)
        assert container.get(_Leaf) is container.get(_Leaf)
        first, second = container.get(_Branch), container.get(_Branch)
        assert first is not second
        assert first.leaf is second.leaf
        assert first.label == "branch"

    def test_factory(self):
        container = Container().register_factory(_Leaf, _Leaf, ServiceLifetime.TRANSIENT)
        assert container.get(_Leaf) is not container.get(_Leaf)

    def test_unregistered(self):
        with pytest.raises(DependencyInjectionError):
            Container().get(_Leaf)

    def test_circular_dependency(self):
        container = Container().register_singleton(_Loop)
        with pytest.raises(DependencyInjectionError):
            container.get(_Loop)


class TestBuildContainer:
    def test_resolves_the_whole_graph(self, fresh_container):
        handler = fresh_container.get(CommandHandler)
        assert handler.campaigns is fresh_container.get(CampaignService)
        assert handler.workbench.modules is fresh_container.get(ModuleService)
        assert isinstance(fresh_container.get(ReportBuilder), ReportBuilder)

    def test_containers_are_independent(self):
        a = build_container(AppConfig(campaign=CampaignConfig(samples=3)))
        b = build_container(AppConfig(campaign=CampaignConfig(samples=9)))
        assert a.get(CampaignService).config.campaign.samples == 3
        assert b.get(CampaignService).config.campaign.samples == 9
        assert a.get(ModuleService) is not b.get(ModuleService)
