"""
Repository 層
"""
from .statement_repository import InMemoryStatementRepository, StatementRepository

__all__ = [
    'StatementRepository',
    'InMemoryStatementRepository',
]
