"""
腳本語法樹 (DTOs)

解析器產生、CommandHandler 執行；位置欄位不參與相等比較。
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from shared.utils.expressions import Expr, render_expression


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IntArg:
    value: int


@dataclass(frozen=True)
class ExprList:
    items: Tuple[Expr, ...]


@dataclass(frozen=True)
class MatrixArg:
    rows: Tuple[Tuple[Expr, ...], ...]


@dataclass(frozen=True)
class TwistsArg:
    values: Tuple[int, ...]


@dataclass(frozen=True)
class ByArg:
    expr: Expr


Arg = Union[Ref, IntArg, ExprList, MatrixArg, TwistsArg, ByArg]


@dataclass(frozen=True)
class RingDecl:
    name: str
    p: int = 0
    variables: Tuple[Tuple[str, int], ...] = ()
    ideal: Tuple[Expr, ...] = ()
    catalog: Optional[str] = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    constructor: str
    args: Tuple[Arg, ...] = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Compute:
    operation: str
    args: Tuple[Arg, ...] = ()
    label: Optional[str] = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


# 旗標：(名稱, 值)；沒有值的旗標其值為 None
Flags = Tuple[Tuple[str, Optional[str]], ...]


@dataclass(frozen=True)
class Verify:
    suite: str
    flags: Flags = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Search:
    statement: str
    flags: Flags = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class OracleCheck:
    flags: Flags = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


Statement = Union[RingDecl, ModuleDecl, Compute, Verify, Search, OracleCheck]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...] = ()


def flag_value(flags: Flags, name: str, default: Optional[str] = None) -> Optional[str]:
    for key, value in flags:
        if key == name:
            return value if value is not None else "true"
    return default


def format_arg(arg: Arg) -> str:
    if isinstance(arg, Ref):
        return arg.name
    if isinstance(arg, IntArg):
        return str(arg.value)
    if isinstance(arg, ExprList):
        return "(" + ", ".join(render_expression(e) for e in arg.items) + ")"
    if isinstance(arg, MatrixArg):
        rows = ["[" + ", ".join(render_expression(e) for e in row) + "]" for row in arg.rows]
        return "[" + ", ".join(rows) + "]"
    if isinstance(arg, TwistsArg):
        return "twists (" + ", ".join(str(v) for v in arg.values) + ")"
    return "by " + render_expression(arg.expr)
