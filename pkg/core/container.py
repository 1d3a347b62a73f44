"""
依賴注入容器
依建構子的型別註解解析服務依賴；每個工作進程各自 build 一個容器
"""
import inspect
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Set, Type, TypeVar, get_type_hints

from shared.exceptions import DependencyInjectionError

T = TypeVar("T")


class ServiceLifetime(Enum):
    """服務生命週期"""
    SINGLETON = "singleton"
    TRANSIENT = "transient"


@dataclass(frozen=True)
class ServiceDescriptor:
    """服務描述：實作類別或工廠二擇一"""
    service_type: Type
    implementation: Optional[Type] = None
    factory: Optional[Callable[[], Any]] = None
    lifetime: ServiceLifetime = ServiceLifetime.SINGLETON


def _type_name(service_type: Any) -> str:
    return getattr(service_type, "__name__", repr(service_type))


class Container:
    """依賴注入容器；不自動註冊未知型別"""

    def __init__(self):
        self._services: Dict[Type, ServiceDescriptor] = {}
        self._singletons: Dict[Type, Any] = {}
        self._resolving: Set[Type] = set()

    # ---- 註冊 ----

    def register_singleton(self, service_type: Type[T], implementation: Optional[Type[T]] = None) -> "Container":
        return self._add(ServiceDescriptor(service_type, implementation or service_type))

    def register_transient(self, service_type: Type[T], implementation: Optional[Type[T]] = None) -> "Container":
        return self._add(ServiceDescriptor(service_type, implementation or service_type, lifetime=ServiceLifetime.TRANSIENT))

    def register_factory(
        self,
        service_type: Type[T],
        factory: Callable[[], T],
        lifetime: ServiceLifetime = ServiceLifetime.SINGLETON,
    ) -> "Container":
        return self._add(ServiceDescriptor(service_type, factory=factory, lifetime=lifetime))

    def register_instance(self, service_type: Type[T], instance: T) -> "Container":
        self._add(ServiceDescriptor(service_type))
        self._singletons[service_type] = instance
        return self

    def _add(self, descriptor: ServiceDescriptor) -> "Container":
        self._services[descriptor.service_type] = descriptor
        self._singletons.pop(descriptor.service_type, None)
        return self

    def is_registered(self, service_type: Type) -> bool:
        return service_type in self._services

    # ---- 解析 ----

    def get(self, service_type: Type[T]) -> T:
        """取得服務實例；單例在第一次取得時建立"""
        descriptor = self._services.get(service_type)
        if descriptor is None:
            raise DependencyInjectionError(f"服務 {_type_name(service_type)} 未註冊")
        if service_type in self._singletons:
            return self._singletons[service_type]
        if service_type in self._resolving:
            raise DependencyInjectionError(f"檢測到循環依賴：{_type_name(service_type)}")

        self._resolving.add(service_type)
        try:
            instance = descriptor.factory() if descriptor.factory else self._construct(descriptor)
        finally:
            self._resolving.discard(service_type)
        if descriptor.lifetime is ServiceLifetime.SINGLETON:
            self._singletons[service_type] = instance
        return instance

    def _construct(self, descriptor: ServiceDescriptor) -> Any:
        implementation = descriptor.implementation
        if implementation is None:
            raise DependencyInjectionError(f"服務 {_type_name(descriptor.service_type)} 沒有實作類別")
        kwargs = self._constructor_arguments(implementation)
        try:
            return implementation(**kwargs)
        except Exception as e:
            raise DependencyInjectionError(f"建立 {implementation.__name__} 失敗: {e}") from e

    def _constructor_arguments(self, implementation: Type) -> Dict[str, Any]:
        """有預設值且型別未註冊的參數沿用預設值"""
        hints = get_type_hints(implementation.__init__)
        kwargs: Dict[str, Any] = {}
        for name, param in inspect.signature(implementation.__init__).parameters.items():
            if name == "self" or param.kind in (param.VAR_POSITIONAL, param.VAR_KEYWORD):
                continue
            has_default = param.default is not inspect.Parameter.empty
            dependency = hints.get(name)
            if dependency is None or not self.is_registered(dependency):
                if has_default:
                    continue
                raise DependencyInjectionError(
                    f"無法解析 {implementation.__name__} 的參數 {name}: {_type_name(dependency)}"
                )
            kwargs[name] = self.get(dependency)
        return kwargs


class ServiceProvider(ABC):
    """服務提供者基類"""

    @abstractmethod
    def configure_services(self, container: Container) -> None:
        """配置服務"""


_container: Optional[Container] = None


def get_container() -> Container:
    """全域容器；CLI 入口使用"""
    global _container
    if _container is None:
        _container = Container()
    return _container
