"""
多項式數據模型：素數域上帶權的多項式環
"""
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from shared.exceptions import ValidationError
from shared.utils.expressions import evaluate_expression, parse_expression_text

Monomial = Tuple[int, ...]
Coefficient = int

MAX_PRIME = 2 ** 31


def monomial_degree(mon: Monomial, weights: Sequence[int]) -> int:
    """帶權總次數"""
    return sum(e * w for e, w in zip(mon, weights))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """a 是否整除 b"""
    return all(x <= y for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=None)
def variable_ranking(weights: Tuple[int, ...]) -> Tuple[int, ...]:
    """變數由大到小的排名：權重大者在前，同權重依宣告順序"""
    return tuple(sorted(range(len(weights)), key=lambda i: (-weights[i], i)))


def revlex_part(mon: Monomial, weights: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """反字典序決勝鍵：從排名最小的變數開始比，指數小者為大"""
    if weights is None:
        return tuple(-e for e in reversed(mon))
    ranking = variable_ranking(tuple(weights))
    return tuple(-mon[i] for i in reversed(ranking))


class MonomialOrder:
    """帶權分次反字典序：先比帶權次數，再以反字典序決勝

    變數依權重由大到小排名，同權重時先宣告者較大；
    因此 F5[x:2, y:3] 中 y^2 > x^3，而標準分次時即一般的 x > y > ... 反字典序。
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Sequence[int]):
        self.weights = tuple(weights)

    def key(self, mon: Monomial) -> Tuple:
        return (monomial_degree(mon, self.weights), revlex_part(mon, self.weights))

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialOrder) and other.weights == self.weights

    def __hash__(self) -> int:
        return hash(("grevlex", self.weights))

    def __repr__(self) -> str:
        return f"MonomialOrder(grevlex, weights={self.weights})"


class PolynomialRing:
    """F_p[x_1..x_n]，每個變數帶正整數權重"""

    def __init__(self, p: int, names: Sequence[str], weights: Optional[Sequence[int]] = None):
        if not isinstance(p, int) or p < 2 or p >= MAX_PRIME or not isprime(p):
            raise ValidationError(f"係數域特徵 {p} 必須是小於 2^31 的素數", "bad_prime")
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValidationError(f"變數名稱重複: {names}", "duplicate_variable")
        for name in names:
            if not name.isidentifier():
                raise ValidationError(f"變數名稱無效: {name!r}", "bad_variable")
        weights = tuple(weights) if weights is not None else tuple(1 for _ in names)
        if len(weights) != len(names):
            raise ValidationError("權重數量與變數數量不一致", "bad_weights")
        if any((not isinstance(w, int)) or w < 1 for w in weights):
            raise ValidationError(f"權重必須為正整數: {weights}", "bad_weights")
        self.p = p
        self.names = names
        self.weights = weights
        self.n = len(names)
        self.order = MonomialOrder(weights)
        self._index = {name: i for i, name in enumerate(names)}
        self._zero_monomial: Monomial = tuple(0 for _ in names)

    # ---- 建構 ----------------------------------------------------------

    @property
    def zero_monomial(self) -> Monomial:
        return self._zero_monomial

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {self._zero_monomial: c})

    def monomial(self, exponents: Sequence[int], coeff: int = 1) -> "Polynomial":
        exponents = tuple(exponents)
        if len(exponents) != self.n or any(e < 0 for e in exponents):
            raise ValidationError(f"單項式指數無效: {exponents}", "bad_monomial")
        return Polynomial(self, {exponents: coeff})

    def variable(self, name: Union[str, int]) -> "Polynomial":
        index = self._index[name] if isinstance(name, str) else int(name)
        exps = [0] * self.n
        exps[index] = 1
        return Polynomial(self, {tuple(exps): 1})

    @property
    def gens(self) -> List["Polynomial"]:
        return [self.variable(i) for i in range(self.n)]

    def variable_map(self) -> Dict[str, "Polynomial"]:
        return {name: self.variable(i) for i, name in enumerate(self.names)}

    def parse(self, text: str) -> "Polynomial":
        """解析中綴表達式，例如 'y^2 - x^3'"""
        node = parse_expression_text(text)
        value = evaluate_expression(node, self.variable_map(), self.constant)
        return value if isinstance(value, Polynomial) else self.constant(int(value))

    def monomials_of_degree(self, degree: int) -> List[Monomial]:
        """所有帶權次數為 degree 的單項式（排序後）"""
        return list(monomials_of_weighted_degree(self.weights, degree))

    def monomial_degree(self, mon: Monomial) -> int:
        return monomial_degree(mon, self.weights)

    def unit_exponent(self, index: int) -> Monomial:
        exps = [0] * self.n
        exps[index] = 1
        return tuple(exps)

    # ---- 比較與輸出 ----------------------------------------------------

    def signature(self) -> Tuple:
        return (self.p, self.names, self.weights)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolynomialRing) and other.signature() == self.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def describe(self) -> str:
        variables = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"F{self.p}[{variables}]"

    def __repr__(self) -> str:
        return f"PolynomialRing({self.describe()})"


@lru_cache(maxsize=4096)
def monomials_of_weighted_degree(weights: Tuple[int, ...], degree: int) -> Tuple[Monomial, ...]:
    if degree < 0:
        return ()
    result: List[Monomial] = []

    def extend(index: int, remaining: int, prefix: List[int]) -> None:
        if index == len(weights) - 1:
            if remaining % weights[index] == 0:
                result.append(tuple(prefix + [remaining // weights[index]]))
            return
        for e in range(remaining // weights[index] + 1):
            extend(index + 1, remaining - e * weights[index], prefix + [e])

    if not weights:
        return ((),) if degree == 0 else ()
    extend(0, degree, [])
    order = MonomialOrder(weights)
    result.sort(key=order.key, reverse=True)
    return tuple(result)


class Polynomial:
    """不可變的稀疏多項式：單項式 → 非零係數 (mod p)"""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Optional[Dict[Monomial, int]] = None):
        p = ring.p
        clean: Dict[Monomial, int] = {}
        for mon, c in (terms or {}).items():
            c = int(c) % p
            if c:
                clean[tuple(mon)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def from_clean_terms(cls, ring: PolynomialRing, terms: Dict[Monomial, int]) -> "Polynomial":
        """已正規化的係數字典直接包裝（內部使用）"""
        poly = cls.__new__(cls)
        poly.ring = ring
        poly.terms = terms
        poly._hash = None
        return poly

    # ---- 性質 ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(mon) for mon in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(self.ring.zero_monomial, 0)

    @property
    def degree(self) -> int:
        """最高帶權次數；零多項式為 -1"""
        if not self.terms:
            return -1
        return max(self.ring.monomial_degree(m) for m in self.terms)

    @property
    def homogeneous_degree(self) -> Optional[int]:
        """齊次時的次數；零或非齊次回傳 None"""
        if not self.terms:
            return None
        degrees = {self.ring.monomial_degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self.terms or self.homogeneous_degree is not None

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def leading_term(self) -> Tuple[Monomial, int]:
        if not self.terms:
            raise ValidationError("零多項式沒有首項", "zero_polynomial")
        key = self.ring.order.key
        mon = max(self.terms, key=key)
        return mon, self.terms[mon]

    def monomials(self) -> Iterator[Monomial]:
        return iter(self.terms)

    # ---- 算術 ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValidationError("不同環上的多項式無法運算", "ring_mismatch")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ring.p
        terms = dict(self.terms)
        for mon, c in other.terms.items():
            value = (terms.get(mon, 0) + c) % p
            if value:
                terms[mon] = value
            else:
                terms.pop(mon, None)
        return Polynomial.from_clean_terms(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial.from_clean_terms(self.ring, {m: (p - c) % p for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ring.p
        terms: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mon = tuple(a + b for a, b in zip(m1, m2))
                terms[mon] = (terms.get(mon, 0) + c1 * c2) % p
        return Polynomial.from_clean_terms(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValidationError("指數必須是非負整數", "bad_exponent")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c = int(c) % p
        if not c:
            return self.ring.zero()
        return Polynomial.from_clean_terms(self.ring, {m: (v * c) % p for m, v in self.terms.items()})

    def mul_monomial(self, mon: Monomial, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c = int(c) % p
        if not c:
            return self.ring.zero()
        return Polynomial.from_clean_terms(
            self.ring,
            {tuple(a + b for a, b in zip(m, mon)): (v * c) % p for m, v in self.terms.items()},
        )

    # ---- 比較與輸出 ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.signature(), frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        p = self.ring.p
        pieces: List[str] = []
        for mon, c in self.sorted_terms():
            sign = "+"
            if c > p // 2:
                sign, c = "-", p - c
            factors = []
            for name, e in zip(self.ring.names, mon):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(c)] + factors)
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def polynomial_sum(ring: PolynomialRing, polys: Iterable[Polynomial]) -> Polynomial:
    total = ring.zero()
    for poly in polys:
        total = total + poly
    return total
