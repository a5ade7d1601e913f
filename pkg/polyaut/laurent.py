"""
整数係数のローラン多項式 (2 または 3 変数)

項は指数ベクトルから 0 でない係数への写像で持つ。係数は Python の int なので桁あふれしない。
"""
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

import sympy

from polyaut.errors import ExactDivisionFailed, RankMismatch

VARIABLE_NAMES = ("x", "y", "z")

Exponents = Tuple[int, ...]


class LaurentPoly:
    def __init__(self, rank: int, terms: Union[Mapping[Exponents, int], Iterable[Tuple[Exponents, int]]] = ()):
        if rank not in (2, 3):
            raise ValueError(f"ランクは 2 または 3 です: {rank}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: Dict[Exponents, int] = {}
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != rank:
                raise ValueError(f"指数ベクトルの長さがランク {rank} と一致しません: {exps}")
            collected[exps] = collected.get(exps, 0) + int(coeff)
        self.rank = rank
        self._terms: Dict[Exponents, int] = {e: c for e, c in collected.items() if c != 0}

    # ----- 構築 ----- #

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank)

    @classmethod
    def constant(cls, rank: int, value: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: value})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(rank, 1)

    @classmethod
    def monomial(cls, rank: int, exps: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        return cls(rank, {tuple(exps): coeff})

    @classmethod
    def variable(cls, rank: int, index: int, power: int = 1) -> "LaurentPoly":
        exps = [0] * rank
        exps[index] = power
        return cls.monomial(rank, exps)

    # ----- 参照 ----- #

    @property
    def terms(self) -> Dict[Exponents, int]:
        return dict(self._terms)

    def sorted_terms(self) -> List[Tuple[Exponents, int]]:
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[Tuple[Exponents, int]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Iterable[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def augmentation(self) -> int:
        """全変数に 1 を代入した値"""
        return sum(self._terms.values())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    @cached_property
    def _hash(self) -> int:
        return hash((self.rank, tuple(self.sorted_terms())))

    def __hash__(self) -> int:
        return self._hash

    # ----- 演算 ----- #

    def _coerce(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        if other.rank != self.rank:
            raise RankMismatch(self.rank, other.rank)
        return other

    def __add__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        other = self._coerce(other)
        return LaurentPoly(self.rank, list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        return laurent_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def shift(self, exps: Iterable[int]) -> "LaurentPoly":
        """単項式 x^exps を掛ける"""
        exps = tuple(exps)
        return LaurentPoly(self.rank, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self._terms.items()})

    def substitute_one(self, index: int) -> "LaurentPoly":
        """変数 index に 1 を代入し、その変数を除いた 2 変数の多項式にする"""
        if self.rank != 3:
            raise RankMismatch(self.rank, 3)
        return LaurentPoly(2, [(e[:index] + e[index + 1:], c) for e, c in self._terms.items()])

    def divide_by_binomial(self, index: int) -> "LaurentPoly":
        """(x_index - 1) による厳密な割り算"""
        slices: Dict[Exponents, Dict[int, int]] = {}
        for exps, coeff in self._terms.items():
            rest = exps[:index] + exps[index + 1:]
            slices.setdefault(rest, {})[exps[index]] = coeff
        quotient: Dict[Exponents, int] = {}
        for rest, coeffs in slices.items():
            # (t - 1) q = f  ->  q_j = -(f_lo + ... + f_j)
            running = 0
            for j in range(min(coeffs), max(coeffs) + 1):
                running -= coeffs.get(j, 0)
                if running:
                    quotient[rest[:index] + (j,) + rest[index:]] = running
            if running:
                raise ExactDivisionFailed(f"({VARIABLE_NAMES[index]} - 1) で割り切れません: {self}")
        return LaurentPoly(self.rank, quotient)

    # ----- 表示 ----- #

    def to_sympy(self) -> sympy.Expr:
        symbols = sympy.symbols(VARIABLE_NAMES[: self.rank])
        return sympy.Add(*(
            sympy.Integer(c) * sympy.Mul(*(s ** e for s, e in zip(symbols, exps)))
            for exps, c in self.sorted_terms()
        ))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return sympy.sstr(self.to_sympy())

    def __repr__(self) -> str:
        return f"LaurentPoly({self.rank}, {self.sorted_terms()})"


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """畳み込み積"""
    if p.rank != q.rank:
        raise RankMismatch(p.rank, q.rank)
    products: List[Tuple[Exponents, int]] = [
        (tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        for e1, c1 in p.terms.items()
        for e2, c2 in q.terms.items()
    ]
    return LaurentPoly(p.rank, products)


def geometric_sum(index: int, alpha: int, rank: int = 2) -> LaurentPoly:
    """(x_index - 1) s = x_index^alpha - 1 を満たす s"""
    if alpha >= 0:
        powers = range(alpha)
        sign = 1
    else:
        powers = range(alpha, 0)
        sign = -1
    return LaurentPoly(rank, [(_unit(rank, index, k), sign) for k in powers])


def _unit(rank: int, index: int, power: int) -> Exponents:
    exps = [0] * rank
    exps[index] = power
    return tuple(exps)
