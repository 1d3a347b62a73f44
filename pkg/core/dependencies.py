"""
依賴注入配置
註冊所有服務到容器中
"""
import logging
from typing import Optional

from core.container import Container, ServiceProvider, get_container
from config.settings import AppConfig, CampaignConfig, EngineConfig, ReportConfig, get_config

logger = logging.getLogger(__name__)


class CoreServiceProvider(ServiceProvider):
    """核心服務提供者：配置與其各區段"""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config

    def configure_services(self, container: Container) -> None:
        config = self.config or get_config()
        container.register_instance(AppConfig, config)
        container.register_instance(EngineConfig, config.engine)
        container.register_instance(CampaignConfig, config.campaign)
        container.register_instance(ReportConfig, config.report)


class RepositoryServiceProvider(ServiceProvider):
    """Repository 服務提供者"""

    def configure_services(self, container: Container) -> None:
        from domain.repositories.statement_repository import InMemoryStatementRepository, StatementRepository
        from features.freeness import STATEMENTS_PATH

        # 敘述註冊表由 features 內的 JSON 載入
        container.register_factory(
            StatementRepository, lambda: InMemoryStatementRepository.from_json_file(STATEMENTS_PATH)
        )


class DomainServiceProvider(ServiceProvider):
    """領域服務提供者"""

    def configure_services(self, container: Container) -> None:
        from domain.services.groebner_service import GroebnerService
        from domain.services.homology_service import HomologyService
        from domain.services.isomorphism_service import IsomorphismService
        from domain.services.module_service import ModuleService
        from domain.services.oracle_service import OracleService
        from domain.services.ring_service import RingService

        container.register_singleton(GroebnerService)
        container.register_singleton(ModuleService)
        container.register_singleton(RingService)
        container.register_singleton(OracleService)
        container.register_singleton(HomologyService)
        container.register_singleton(IsomorphismService)


class FeatureServiceProvider(ServiceProvider):
    """功能模組提供者"""

    def configure_services(self, container: Container) -> None:
        from features.freeness import InstanceSampler, TheoremService

        container.register_singleton(InstanceSampler)
        container.register_singleton(TheoremService)


class ApplicationServiceProvider(ServiceProvider):
    """應用服務提供者"""

    def configure_services(self, container: Container) -> None:
        from application.handlers.command_handler import CommandHandler
        from application.services.application_service import WorkbenchService
        from application.services.campaign_service import CampaignService

        container.register_singleton(CampaignService)
        container.register_singleton(WorkbenchService)
        container.register_singleton(CommandHandler)


class PresentationServiceProvider(ServiceProvider):
    """呈現層服務提供者"""

    def configure_services(self, container: Container) -> None:
        from presentation.reports.report_builders import ReportBuilder

        container.register_singleton(ReportBuilder)


def configure_all_services(container: Container, config: Optional[AppConfig] = None) -> None:
    """配置所有服務"""
    providers = [
        CoreServiceProvider(config),
        RepositoryServiceProvider(),
        DomainServiceProvider(),
        FeatureServiceProvider(),
        ApplicationServiceProvider(),
        PresentationServiceProvider(),
    ]

    for provider in providers:
        provider.configure_services(container)


def setup_dependency_injection(config: Optional[AppConfig] = None) -> Container:
    """設置依賴注入；config 為 None 時使用全域配置"""
    container = get_container()
    configure_all_services(container, config)

    logger.debug("依賴注入配置完成")
    return container


def build_container(config: AppConfig) -> Container:
    """建立獨立於全域實例的容器（工作進程與測試使用）"""
    container = Container()
    configure_all_services(container, config)
    return container
