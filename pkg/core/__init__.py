"""
核心模組：依賴注入容器與服務註冊
"""
from .container import Container, ServiceLifetime, get_container
from .dependencies import build_container, setup_dependency_injection

__all__ = [
    'Container',
    'ServiceLifetime',
    'get_container',
    'build_container',
    'setup_dependency_injection',
]
