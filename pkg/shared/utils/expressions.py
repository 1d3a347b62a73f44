"""
中綴多項式表達式：詞法分析、語法樹、輸出與求值

腳本解析器與 PolynomialRing.parse 共用同一套詞法與語法。
"""
import re
from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Union

from shared.exceptions import ParseError, ValidationError


_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SPACE", r"[ \t\r]+"),
    ("FLAG", r"--[A-Za-z][A-Za-z0-9_-]*"),
    ("INT", r"\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("SYMBOL", r"[-+*^()\[\],;:=/]"),
    ("ERROR", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    """把文字切成 Token 串，最後附上 EOF"""
    tokens: List[Token] = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind in ("SPACE", "COMMENT"):
            continue
        if kind == "ERROR":
            raise ParseError(f"無法識別的字元 {value!r}", line, column)
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class TokenStream:
    """帶有前看功能的 Token 串"""

    def __init__(self, tokens: List[Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self, offset: int = 0) -> Token:
        index = min(self._pos + offset, len(self._tokens) - 1)
        return self._tokens[index]

    def next(self) -> Token:
        token = self.peek()
        if token.kind != "EOF":
            self._pos += 1
        return token

    def at(self, text: str) -> bool:
        token = self.peek()
        return token.kind in ("SYMBOL", "NAME") and token.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.peek()
        if not self.at(text):
            shown = token.text or "檔案結尾"
            raise ParseError(f"預期 {text!r}，但讀到 {shown!r}", token.line, token.column)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            shown = token.text or "檔案結尾"
            raise ParseError(f"預期{what}，但讀到 {shown!r}", token.line, token.column)
        return self.next()


# ---- 語法樹 -------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


Expr = Union[Num, Var, Neg, BinOp, Pow]


def parse_expression(stream: TokenStream) -> Expr:
    """expr := term (('+'|'-') term)*"""
    node = _parse_term(stream)
    while stream.at("+") or stream.at("-"):
        token = stream.next()
        right = _parse_term(stream)
        node = BinOp(token.text, node, right, token.line, token.column)
    return node


def _parse_term(stream: TokenStream) -> Expr:
    node = _parse_unary(stream)
    while stream.at("*"):
        token = stream.next()
        right = _parse_unary(stream)
        node = BinOp("*", node, right, token.line, token.column)
    return node


def _parse_unary(stream: TokenStream) -> Expr:
    if stream.at("-"):
        token = stream.next()
        return Neg(_parse_unary(stream), token.line, token.column)
    return _parse_power(stream)


def _parse_power(stream: TokenStream) -> Expr:
    base = _parse_atom(stream)
    if stream.at("^"):
        token = stream.next()
        exponent = stream.expect_kind("INT", "整數指數")
        return Pow(base, int(exponent.text), token.line, token.column)
    return base


def _parse_atom(stream: TokenStream) -> Expr:
    token = stream.peek()
    if token.kind == "INT":
        stream.next()
        return Num(int(token.text), token.line, token.column)
    if token.kind == "NAME":
        stream.next()
        return Var(token.text, token.line, token.column)
    if stream.accept("("):
        node = parse_expression(stream)
        stream.expect(")")
        return node
    shown = token.text or "檔案結尾"
    raise ParseError(f"預期多項式，但讀到 {shown!r}", token.line, token.column)


def parse_expression_text(text: str) -> Expr:
    """解析單一表達式字串"""
    stream = TokenStream(tokenize(text))
    node = parse_expression(stream)
    trailing = stream.peek()
    if trailing.kind != "EOF":
        raise ParseError(f"表達式後有多餘內容 {trailing.text!r}", trailing.line, trailing.column)
    return node


def render_expression(node: Expr) -> str:
    """輸出可重新解析為相同語法樹的文字"""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = node.operand
        if isinstance(inner, (Num, Var, Pow)):
            return "-" + render_expression(inner)
        return "-(" + render_expression(inner) + ")"
    if isinstance(node, Pow):
        base = node.base
        text = render_expression(base)
        if not isinstance(base, (Num, Var)):
            text = "(" + text + ")"
        return f"{text}^{node.exponent}"
    left = _render_operand(node.left, right_side=False, op=node.op)
    right = _render_operand(node.right, right_side=True, op=node.op)
    return f"{left} {node.op} {right}"


def _render_operand(node: Expr, right_side: bool, op: str) -> str:
    text = render_expression(node)
    if isinstance(node, Neg):
        return "(" + text + ")"
    if isinstance(node, BinOp):
        left_assoc_ok = not right_side and (node.op == op or (op in "+-" and node.op in "+-"))
        if op == "*" and not right_side and node.op == "*":
            return text
        if left_assoc_ok and op != "*":
            return text
        return "(" + text + ")"
    return text


def evaluate_expression(
    node: Expr,
    variables: Mapping[str, object],
    constant: Callable[[int], object],
):
    """以給定的變數表求值；常數由 constant 轉換"""
    if isinstance(node, Num):
        return constant(node.value)
    if isinstance(node, Var):
        if node.name not in variables:
            raise ParseError(f"未知的識別字 {node.name!r}", node.line, node.column, "unknown_identifier")
        return variables[node.name]
    if isinstance(node, Neg):
        return -evaluate_expression(node.operand, variables, constant)
    if isinstance(node, Pow):
        return evaluate_expression(node.base, variables, constant) ** node.exponent
    left = evaluate_expression(node.left, variables, constant)
    right = evaluate_expression(node.right, variables, constant)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    raise ValidationError(f"不支援的運算子 {node.op}", "bad_operator")


def expression_variables(node: Expr, found: Optional[set] = None) -> set:
    """收集表達式中出現的變數名稱"""
    found = set() if found is None else found
    if isinstance(node, Var):
        found.add(node.name)
    elif isinstance(node, Neg):
        expression_variables(node.operand, found)
    elif isinstance(node, Pow):
        expression_variables(node.base, found)
    elif isinstance(node, BinOp):
        expression_variables(node.left, found)
        expression_variables(node.right, found)
    return found
