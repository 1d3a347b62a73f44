"""
應用程式異常定義
"""
from typing import Optional


class HomLabException(Exception):
    """HomLab 基礎異常"""
    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class ValidationError(HomLabException):
    """輸入驗證錯誤"""
    pass


class ParseError(ValidationError):
    """腳本語法錯誤，附帶行列位置"""
    def __init__(self, message: str, line: int, column: int, error_code: str = "parse_error"):
        super().__init__(f"{line}:{column}: {message}", error_code)
        self.line = line
        self.column = column
        self.detail = message


class ComputationError(HomLabException):
    """計算引擎內部不一致"""
    pass


class IncompatibleMapError(ComputationError):
    """矩陣無法誘導餘核之間的映射"""
    def __init__(self, message: str, column: int):
        super().__init__(message, "incompatible_map")
        self.column = column


class NotRegularError(HomLabException):
    """元素不是正則元素"""
    def __init__(self, message: str):
        super().__init__(message, "not_regular")


class RegularSequenceNotFoundError(HomLabException):
    """在重試預算內找不到正則序列"""
    def __init__(self, message: str, found: int = 0):
        super().__init__(message, "regular_sequence_not_found")
        self.found = found


class InfiniteLengthError(HomLabException):
    """模組不是有限長度"""
    def __init__(self, message: str):
        super().__init__(message, "infinite_length")


class NonCohenMacaulayError(HomLabException):
    """環或模組不是 Cohen–Macaulay"""
    def __init__(self, message: str):
        super().__init__(message, "not_cohen_macaulay")


class RepositoryError(HomLabException):
    """數據存取錯誤"""
    pass


class StatementNotFoundError(RepositoryError):
    """未註冊的定理敘述"""
    def __init__(self, statement_id: str):
        super().__init__(f"未註冊的敘述: {statement_id}", "statement_not_found")
        self.statement_id = statement_id


class ConfigurationError(HomLabException):
    """配置錯誤"""
    pass


class DependencyInjectionError(HomLabException):
    """依賴注入相關錯誤"""
    def __init__(self, message: str):
        super().__init__(message, "dependency_injection")
