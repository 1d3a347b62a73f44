"""
定理敘述 Repository
"""
import json
import logging
from abc import ABC, abstractmethod
from typing import Dict, Iterable, List, Optional

from domain.models.statement import Statement, suite_members
from shared.exceptions import RepositoryError, StatementNotFoundError

logger = logging.getLogger(__name__)


class StatementRepository(ABC):
    """定理敘述 Repository 接口"""

    @abstractmethod
    def get(self, statement_id: str) -> Statement:
        """根據 ID 獲取敘述；不存在時拋出 StatementNotFoundError"""
        pass

    @abstractmethod
    def find(self, statement_id: str) -> Optional[Statement]:
        """根據 ID 查找敘述"""
        pass

    @abstractmethod
    def list_all(self) -> List[Statement]:
        """所有已註冊的敘述（依註冊順序）"""
        pass

    @abstractmethod
    def register(self, statement: Statement) -> Statement:
        """註冊敘述；同 ID 時覆蓋"""
        pass

    @abstractmethod
    def suite(self, suite_id: str) -> List[Statement]:
        """驗證套件的成員；套件名也可以是單一敘述的 ID"""
        pass


class InMemoryStatementRepository(StatementRepository):
    """記憶體中的定理敘述 Repository 實現"""

    def __init__(self, statements: Optional[Iterable[Statement]] = None):
        self._statements: Dict[str, Statement] = {}
        for statement in statements or []:
            self.register(statement)

    def get(self, statement_id: str) -> Statement:
        statement = self._statements.get(statement_id)
        if statement is None:
            raise StatementNotFoundError(statement_id)
        return statement

    def find(self, statement_id: str) -> Optional[Statement]:
        return self._statements.get(statement_id)

    def list_all(self) -> List[Statement]:
        return list(self._statements.values())

    def register(self, statement: Statement) -> Statement:
        if statement.id in self._statements:
            logger.debug("[Registry] 覆蓋敘述 %s", statement.id)
        self._statements[statement.id] = statement
        return statement

    def suite(self, suite_id: str) -> List[Statement]:
        members = suite_members(self.list_all(), suite_id)
        if not members:
            raise StatementNotFoundError(suite_id)
        return members

    @classmethod
    def from_json_file(cls, path: str) -> "InMemoryStatementRepository":
        """由 {"statements": [...]} 格式的 JSON 檔載入"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise RepositoryError(f"無法載入敘述檔 {path}: {e}")
        try:
            statements = [Statement.from_dict(entry) for entry in data.get("statements", [])]
        except KeyError as e:
            raise RepositoryError(f"敘述檔 {path} 缺少欄位 {e}")
        logger.info("[Registry] 由 %s 載入 %d 條敘述", path, len(statements))
        return cls(statements)
