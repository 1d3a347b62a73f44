"""
HomLab 腳本語言：解析與格式化

    ring R = F5[x:1, y:1]/(x*y);
    ring C = catalog cusp;
    module M = coker R [[x]];
    module S = quotient R (x);
    compute ext 1 M S as e1;
    verify fitting --ring R0 --exhaustive --max-dim 3;
    search Mfree --samples 50;
    oracle-check --samples 200;

每個敘述以 ';' 結尾；'#' 之後為註解；換行與空白不影響語意。
format_script(parse_script(text)) 重新解析後得到相等的語法樹。
"""
from typing import List, Tuple

from application.dtos.script_dtos import (
    Arg,
    ByArg,
    Compute,
    ExprList,
    Flags,
    IntArg,
    MatrixArg,
    ModuleDecl,
    OracleCheck,
    Ref,
    RingDecl,
    Script,
    Search,
    Statement,
    TwistsArg,
    Verify,
    format_arg,
)
from shared.exceptions import ParseError
from shared.utils.expressions import Expr, TokenStream, parse_expression, render_expression, tokenize


# 模組建構子的參數語法
_CONSTRUCTOR_ARGS = {
    "coker": ("ref", "matrix", "twists?"),
    "free": ("ref", "int"),
    "residue": ("ref",),
    "maximal": ("ref",),
    "canonical": ("ref",),
    "quotient": ("ref", "exprs"),
    "syzygy": ("ref", "int?"),
    "dual": ("ref",),
    "transpose": ("ref",),
    "matlis": ("ref",),
    "minimal": ("ref",),
    "socle": ("ref",),
    "twist": ("ref", "int"),
    "sum": ("ref+",),
    "hom": ("ref", "ref"),
    "ext": ("int", "ref", "ref"),
    "tensor": ("ref", "ref"),
    "cut": ("ref", "by"),
}

CONSTRUCTORS = tuple(_CONSTRUCTOR_ARGS)


# ---- 解析 ---------------------------------------------------------------

class _ScriptParser:
    def __init__(self, text: str):
        self.stream = TokenStream(tokenize(text))

    def parse(self) -> Script:
        statements: List[Statement] = []
        while self.stream.peek().kind != "EOF":
            statements.append(self._statement())
        return Script(tuple(statements))

    def _error(self, message: str) -> ParseError:
        token = self.stream.peek()
        return ParseError(message, token.line, token.column)

    def _name(self, what: str = "名稱") -> str:
        return self.stream.expect_kind("NAME", what).text

    def _int(self) -> int:
        negative = self.stream.accept("-")
        value = int(self.stream.expect_kind("INT", "整數").text)
        return -value if negative else value

    def _statement(self) -> Statement:
        token = self.stream.peek()
        if token.kind != "NAME":
            raise self._error(f"預期敘述，但讀到 {token.text or '檔案結尾'!r}")
        keyword = token.text
        if keyword == "ring":
            node = self._ring()
        elif keyword == "module":
            node = self._module()
        elif keyword == "compute":
            node = self._compute()
        elif keyword == "verify":
            self.stream.next()
            node = Verify(self._name("套件名稱"), self._flags(), token.line, token.column)
        elif keyword == "search":
            self.stream.next()
            node = Search(self._name("敘述名稱"), self._flags(), token.line, token.column)
        elif keyword == "oracle":
            self.stream.next()
            self.stream.expect("-")
            self.stream.expect("check")
            node = OracleCheck(self._flags(), token.line, token.column)
        else:
            raise self._error(f"未知的敘述 {keyword!r}")
        self.stream.expect(";")
        return node

    def _ring(self) -> RingDecl:
        start = self.stream.next()
        name = self._name("環名稱")
        self.stream.expect("=")
        head = self.stream.expect_kind("NAME", "F<p> 或 catalog")
        if head.text == "catalog":
            return RingDecl(name, catalog=self._name("目錄名稱"), line=start.line, column=start.column)
        if not (head.text.startswith("F") and head.text[1:].isdigit()):
            raise ParseError(f"預期 F<p>，但讀到 {head.text!r}", head.line, head.column)
        p = int(head.text[1:])
        self.stream.expect("[")
        variables = []
        while True:
            var = self._name("變數名稱")
            weight = int(self.stream.expect_kind("INT", "權重").text) if self.stream.accept(":") else 1
            variables.append((var, weight))
            if not self.stream.accept(","):
                break
        self.stream.expect("]")
        ideal: Tuple[Expr, ...] = ()
        if self.stream.accept("/"):
            ideal = self._expr_list()
        return RingDecl(name, p, tuple(variables), ideal, None, start.line, start.column)

    def _expr_list(self) -> Tuple[Expr, ...]:
        self.stream.expect("(")
        items = [parse_expression(self.stream)]
        while self.stream.accept(","):
            items.append(parse_expression(self.stream))
        self.stream.expect(")")
        return tuple(items)

    def _matrix(self) -> MatrixArg:
        self.stream.expect("[")
        rows = []
        while True:
            self.stream.expect("[")
            row: List[Expr] = []
            if not self.stream.at("]"):
                row.append(parse_expression(self.stream))
                while self.stream.accept(","):
                    row.append(parse_expression(self.stream))
            self.stream.expect("]")
            rows.append(tuple(row))
            if not self.stream.accept(","):
                break
        self.stream.expect("]")
        return MatrixArg(tuple(rows))

    def _ref(self) -> Ref:
        token = self.stream.expect_kind("NAME", "識別字")
        return Ref(token.text, token.line, token.column)

    def _module(self) -> ModuleDecl:
        start = self.stream.next()
        name = self._name("模組名稱")
        self.stream.expect("=")
        head = self.stream.expect_kind("NAME", "模組建構子")
        grammar = _CONSTRUCTOR_ARGS.get(head.text)
        if grammar is None:
            raise ParseError(f"未知的模組建構子 {head.text!r}", head.line, head.column, "unknown_constructor")
        args: List[Arg] = []
        for kind in grammar:
            if kind == "ref":
                args.append(self._ref())
            elif kind == "ref+":
                args.append(self._ref())
                while self.stream.peek().kind == "NAME":
                    args.append(self._ref())
            elif kind == "int":
                args.append(IntArg(self._int()))
            elif kind == "int?":
                if self.stream.peek().kind == "INT" or self.stream.at("-"):
                    args.append(IntArg(self._int()))
            elif kind == "exprs":
                args.append(ExprList(self._expr_list()))
            elif kind == "matrix":
                args.append(self._matrix())
            elif kind == "twists?":
                if self.stream.accept("twists"):
                    self.stream.expect("(")
                    values = [self._int()]
                    while self.stream.accept(","):
                        values.append(self._int())
                    self.stream.expect(")")
                    args.append(TwistsArg(tuple(values)))
            elif kind == "by":
                self.stream.expect("by")
                args.append(ByArg(parse_expression(self.stream)))
        return ModuleDecl(name, head.text, tuple(args), start.line, start.column)

    def _compute(self) -> Compute:
        start = self.stream.next()
        operation = self._name("運算名稱")
        args: List[Arg] = []
        label = None
        while not self.stream.at(";") and self.stream.peek().kind != "EOF":
            token = self.stream.peek()
            if token.kind == "NAME" and token.text == "as":
                self.stream.next()
                label = self._name("標籤")
                break
            if token.kind == "NAME":
                args.append(self._ref())
            elif token.kind == "INT" or self.stream.at("-"):
                args.append(IntArg(self._int()))
            elif self.stream.at("("):
                args.append(ExprList(self._expr_list()))
            else:
                raise self._error(f"compute 的參數無效: {token.text!r}")
        return Compute(operation, tuple(args), label, start.line, start.column)

    def _flags(self) -> Flags:
        flags = []
        while self.stream.peek().kind == "FLAG":
            name = self.stream.next().text[2:]
            value = None
            if self.stream.peek().kind in ("NAME", "INT"):
                parts = [self.stream.next().text]
                while self.stream.accept(","):
                    parts.append(self.stream.expect_kind("NAME", "旗標值").text
                                 if self.stream.peek().kind == "NAME"
                                 else self.stream.expect_kind("INT", "旗標值").text)
                value = ",".join(parts)
            flags.append((name, value))
        return tuple(flags)


def parse_script(text: str) -> Script:
    """解析腳本；第一個錯誤以 ParseError 回報行列"""
    return _ScriptParser(text).parse()


# ---- 格式化 -------------------------------------------------------------

def _format_flags(flags: Flags) -> str:
    return "".join(f" --{name}" + (f" {value}" if value is not None else "") for name, value in flags)


def format_statement(node: Statement) -> str:
    if isinstance(node, RingDecl):
        if node.catalog is not None:
            return f"ring {node.name} = catalog {node.catalog};"
        variables = ", ".join(f"{v}:{w}" for v, w in node.variables)
        text = f"ring {node.name} = F{node.p}[{variables}]"
        if node.ideal:
            text += "/(" + ", ".join(render_expression(e) for e in node.ideal) + ")"
        return text + ";"
    if isinstance(node, ModuleDecl):
        args = "".join(" " + format_arg(a) for a in node.args)
        return f"module {node.name} = {node.constructor}{args};"
    if isinstance(node, Compute):
        args = "".join(" " + format_arg(a) for a in node.args)
        label = f" as {node.label}" if node.label else ""
        return f"compute {node.operation}{args}{label};"
    if isinstance(node, Verify):
        return f"verify {node.suite}{_format_flags(node.flags)};"
    if isinstance(node, Search):
        return f"search {node.statement}{_format_flags(node.flags)};"
    return f"oracle-check{_format_flags(node.flags)};"


def format_script(script: Script) -> str:
    return "\n".join(format_statement(node) for node in script.statements) + ("\n" if script.statements else "")
