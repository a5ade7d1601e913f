"""
ランク 2, 3 の自由メタアーベル群

元は (アーベル化の指数ベクトル tvec, 加群成分 fringe) の組で表す。
積の規約: (m1, d1)(m2, d2) = (m1 m2, d1 m2 + d2)  (m は x^tvec)
生成元 g_i = (x_i, e_i)。このとき [a, b] = (1, (y - 1, 1 - x)) を c(1) とおくと
g^-1 c(p) g = c(p m_g) となる。
"""
import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from polyaut.errors import ExactDivisionFailed, NotDerived, RankMismatch
from polyaut.laurent import LaurentPoly, geometric_sum
from polyaut.models import FMElementModel

logger = logging.getLogger(__name__)

GENERATOR_NAMES = ("a", "b", "c")


class FMElement:
    """自由メタアーベル群の元 (不変)"""

    __slots__ = ("rank", "tvec", "fringe")

    def __init__(self, rank: int, tvec: Iterable[int], fringe: Iterable[LaurentPoly]):
        tvec = tuple(int(t) for t in tvec)
        fringe = tuple(fringe)
        if rank not in (2, 3) or len(tvec) != rank or len(fringe) != rank:
            raise ValueError(f"ランク {rank} の元として不正です: tvec={tvec}, fringe の長さ {len(fringe)}")
        if any(p.rank != rank for p in fringe):
            raise RankMismatch(rank, next(p.rank for p in fringe if p.rank != rank))
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "tvec", tvec)
        object.__setattr__(self, "fringe", fringe)

    def __setattr__(self, name, value):
        raise AttributeError("FMElement は不変です")

    @property
    def monomial(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.rank, self.tvec)

    @property
    def is_identity(self) -> bool:
        return not any(self.tvec) and all(p.is_zero for p in self.fringe)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FMElement):
            return NotImplemented
        return self.rank == other.rank and self.tvec == other.tvec and self.fringe == other.fringe

    def __hash__(self) -> int:
        return hash((self.rank, self.tvec, self.fringe))

    def __mul__(self, other: "FMElement") -> "FMElement":
        return fm_mul(self, other)

    def __pow__(self, k: int) -> "FMElement":
        return fm_pow(self, k)

    def __invert__(self) -> "FMElement":
        return fm_inv(self)

    def __repr__(self) -> str:
        return f"FMElement(rank={self.rank}, tvec={self.tvec}, fringe=({', '.join(str(p) for p in self.fringe)}))"

    __str__ = __repr__


# ----- 基本演算 ----- #

def fm_identity(rank: int) -> FMElement:
    return FMElement(rank, (0,) * rank, [LaurentPoly.zero(rank)] * rank)


def fm_generator(rank: int, index: int) -> FMElement:
    if not 0 <= index < rank:
        raise ValueError(f"生成元の番号 {index} がランク {rank} の範囲外です")
    tvec = [0] * rank
    tvec[index] = 1
    fringe = [LaurentPoly.one(rank) if i == index else LaurentPoly.zero(rank) for i in range(rank)]
    return FMElement(rank, tvec, fringe)


def fm_generators(rank: int) -> Tuple[FMElement, ...]:
    return tuple(fm_generator(rank, i) for i in range(rank))


def fm_mul(e1: FMElement, e2: FMElement) -> FMElement:
    if e1.rank != e2.rank:
        raise RankMismatch(e1.rank, e2.rank)
    m2 = e2.tvec
    tvec = [s + t for s, t in zip(e1.tvec, m2)]
    fringe = [d1.shift(m2) + d2 for d1, d2 in zip(e1.fringe, e2.fringe)]
    return FMElement(e1.rank, tvec, fringe)


def fm_inv(e: FMElement) -> FMElement:
    """(m, d)^-1 = (m^-1, -d m^-1)"""
    neg = [-t for t in e.tvec]
    return FMElement(e.rank, neg, [-d.shift(neg) for d in e.fringe])


def fm_pow(e: FMElement, k: int) -> FMElement:
    if not any(e.tvec):
        # 導来部分群では加群のスカラー倍
        return FMElement(e.rank, e.tvec, [d * k for d in e.fringe])
    base = e if k >= 0 else fm_inv(e)
    result = fm_identity(e.rank)
    n = abs(k)
    # 二乗の繰り返し
    while n:
        if n & 1:
            result = fm_mul(result, base)
        n >>= 1
        if n:
            base = fm_mul(base, base)
    return result


def fm_conjugate(x: FMElement, v: FMElement) -> FMElement:
    """x^v = v^-1 x v"""
    return fm_mul(fm_mul(fm_inv(v), x), v)


def fm_commutator(x: FMElement, y: FMElement, *rest: FMElement) -> FMElement:
    """左正規の交換子 [x, y, z, ...] = [[x, y], z], ..."""
    result = fm_mul(fm_mul(fm_inv(x), fm_inv(y)), fm_mul(x, y))
    for z in rest:
        result = fm_commutator(result, z)
    return result


def fm_product(elements: Sequence[FMElement], rank: int) -> FMElement:
    result = fm_identity(rank)
    for e in elements:
        result = fm_mul(result, e)
    return result


def is_derived(e: FMElement) -> bool:
    return not any(e.tvec)


def membership_defect(e: FMElement) -> LaurentPoly:
    """sum d_i (x_i - 1) - (x^tvec - 1)  (正しい元なら 0)"""
    total = LaurentPoly.zero(e.rank)
    for i, d in enumerate(e.fringe):
        total = total + d * (LaurentPoly.variable(e.rank, i) - 1)
    return total - (e.monomial - 1)


def satisfies_membership(e: FMElement) -> bool:
    return membership_defect(e).is_zero


# ----- 導来部分群と加群 ----- #

def commutator_generator(rank: int = 2) -> FMElement:
    """c(1) = [a, b]"""
    a, b = fm_generator(rank, 0), fm_generator(rank, 1)
    return fm_commutator(a, b)


def module_to_derived(p: LaurentPoly) -> FMElement:
    """c(p) = (1, (p (y - 1), p (1 - x)))"""
    if p.rank != 2:
        raise RankMismatch(p.rank, 2)
    x = LaurentPoly.variable(2, 0)
    y = LaurentPoly.variable(2, 1)
    return FMElement(2, (0, 0), [p * (y - 1), p * (1 - x)])


def derived_to_module(e: FMElement) -> LaurentPoly:
    """導来部分群の元 e に対して e = c(p) となる p"""
    if e.rank != 2:
        raise RankMismatch(e.rank, 2)
    if not is_derived(e):
        raise NotDerived(f"(tvec={e.tvec})")
    p = e.fringe[0].divide_by_binomial(1)
    # 第 2 成分も同じ p を与えることを確かめる
    q = (-e.fringe[1]).divide_by_binomial(0)
    if p != q:
        raise ExactDivisionFailed(f"成分ごとの商が一致しません: {p} != {q}")
    return p


class DerivedDecomposition(NamedTuple):
    """p = alpha + sum c_m (m - 1)"""
    alpha: int
    terms: Tuple[Tuple[Tuple[int, ...], int], ...]

    def reconstruct(self, rank: int = 2) -> LaurentPoly:
        total = LaurentPoly.constant(rank, self.alpha)
        for exps, coeff in self.terms:
            total = total + (LaurentPoly.monomial(rank, exps) - 1) * coeff
        return total

    @property
    def weight(self) -> int:
        """sum c_m"""
        return sum(c for _, c in self.terms)


def decompose_derived(p: LaurentPoly) -> DerivedDecomposition:
    unit = (0,) * p.rank
    terms = tuple((exps, coeff) for exps, coeff in p.sorted_terms() if exps != unit)
    return DerivedDecomposition(p.augmentation(), terms)


def canonical_preimage(exps: Sequence[int]) -> FMElement:
    """単項式 x^g y^d の代表元 a^g b^d (ランク 3 では c^e も続ける)"""
    rank = len(exps)
    return fm_product([fm_pow(fm_generator(rank, i), k) for i, k in enumerate(exps)], rank)


def collection_commutator(alpha: int, beta: int) -> FMElement:
    """c(S_x(alpha) S_y(beta)) (= [a^alpha, b^beta])"""
    return module_to_derived(geometric_sum(0, alpha) * geometric_sum(1, beta))


# ----- レトラクション ----- #

def retract_generator(e: FMElement, killed: int) -> FMElement:
    """killed 番目の生成元を 1 に送る準同型 M3 -> M2"""
    if e.rank != 3:
        raise RankMismatch(e.rank, 3)
    tvec = e.tvec[:killed] + e.tvec[killed + 1:]
    fringe = [d.substitute_one(killed) for i, d in enumerate(e.fringe) if i != killed]
    return FMElement(2, tvec, fringe)


# ----- 乱数 ----- #

def random_word(rank: int, rng: np.random.Generator, length: int) -> List[Tuple[int, int]]:
    """(生成元番号, ±1) の列"""
    gens = rng.integers(0, rank, size=length)
    signs = rng.choice([-1, 1], size=length)
    return [(int(g), int(s)) for g, s in zip(gens, signs)]


def word_element(rank: int, word: Iterable[Tuple[int, int]]) -> FMElement:
    return fm_product([fm_pow(fm_generator(rank, g), s) for g, s in word], rank)


def random_element(rank: int, rng: np.random.Generator, max_length: int) -> FMElement:
    length = int(rng.integers(0, max_length + 1))
    return word_element(rank, random_word(rank, rng, length))


def random_laurent(rank: int, rng: np.random.Generator, support: int, coeff_bound: int, exp_bound: int = 2) -> LaurentPoly:
    size = int(rng.integers(0, support + 1))
    exps = rng.integers(-exp_bound, exp_bound + 1, size=(size, rank))
    coeffs = rng.integers(-coeff_bound, coeff_bound + 1, size=size)
    return LaurentPoly(rank, [(tuple(int(v) for v in e), int(c)) for e, c in zip(exps, coeffs)])


# ----- 直列化 ----- #

def fm_to_model(e: FMElement) -> FMElementModel:
    return FMElementModel(
        rank=e.rank,
        tvec=list(e.tvec),
        fringe=[[(list(exps), coeff) for exps, coeff in d.sorted_terms()] for d in e.fringe],
    )


def fm_serialize(e: FMElement) -> str:
    return fm_to_model(e).model_dump_json()


def fm_deserialize(text: str) -> FMElement:
    model = FMElementModel.model_validate_json(text)
    fringe = [LaurentPoly(model.rank, [(tuple(exps), coeff) for exps, coeff in slot]) for slot in model.fringe]
    return FMElement(model.rank, model.tvec, fringe)


def format_word(parts: Iterable[Tuple[int, int]]) -> str:
    """[(生成元番号, 指数), ...] を "a^2 b^-1" の形にする (隣接する同じ生成元はまとめる)"""
    merged: List[List[int]] = []
    for g, k in parts:
        if merged and merged[-1][0] == g:
            merged[-1][1] += k
        else:
            merged.append([g, k])
    tokens = [GENERATOR_NAMES[g] if k == 1 else f"{GENERATOR_NAMES[g]}^{k}" for g, k in merged if k != 0]
    return " ".join(tokens) or "1"


def format_monomial_preimage(exps: Sequence[int], prefix: Optional[Sequence[Tuple[int, int]]] = None) -> str:
    return format_word(list(prefix or []) + [(i, k) for i, k in enumerate(exps)])
