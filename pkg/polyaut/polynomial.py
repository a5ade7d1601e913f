"""
多項式関数と多項式自己同型

多項式形 [(v1, e1), ..., (vm, em)] は x -> (v1^-1 x^e1 v1) ... (vm^-1 x^em vm) を表す。
関数は像の配列 (長さ = 群の位数) で持ち、写像の合成は (f∘g)(x) = f(g(x)) に固定する。
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from polyaut.errors import ClosureBudgetExceeded, ConjugatesDoNotCommute, InvariantViolation, SearchBudgetExceeded
from polyaut.groups import FiniteGroup, commutator, conjugacy_class, derived_subgroup

logger = logging.getLogger(__name__)

DEFAULT_CLOSURE_BUDGET = 200_000
DEFAULT_SEARCH_BUDGET = 5_000_000


# ----- 多項式形 ----- #

class Factor(NamedTuple):
    conjugator: Any
    exponent: int


@dataclass(frozen=True)
class PolynomialForm:
    """共役冪の積 x -> prod v^-1 x^e v (空なら定数写像 x -> 1)"""
    factors: Tuple[Factor, ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[Tuple[Any, int]]) -> "PolynomialForm":
        return cls(tuple(Factor(v, int(e)) for v, e in pairs))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[Factor]:
        return iter(self.factors)

    @property
    def exponent_sum(self) -> int:
        return exponent_sum(self)

    def describe(self, label: Callable[[Any], str] = str) -> str:
        if not self.factors:
            return "1"
        parts = []
        for v, e in self.factors:
            power = "x" if e == 1 else f"x^{e}"
            parts.append(f"({label(v)})^-1 {power} ({label(v)})")
        return " · ".join(parts)


def exponent_sum(form: PolynomialForm) -> int:
    return sum(int(e) for _, e in form.factors)


def eval_poly_form(G: FiniteGroup, form: PolynomialForm, x: int) -> int:
    """左から順に v^-1 x^e v を掛ける"""
    result = G.id
    for v, e in form.factors:
        result = int(G.mul[result, G.conjugate(G.power(x, e), v)])
    return result


def poly_form_function(G: FiniteGroup, form: PolynomialForm) -> "GroupFunction":
    """多項式形を全元で評価した関数"""
    image = np.full(G.order, G.id, dtype=np.int64)
    for v, e in form.factors:
        powered = G.power_map(int(e))
        image = G.mul[image, G.mul[G.mul[G.inv[v], powered], v]]
    return GroupFunction(G, image)


def random_poly_form(
    G: FiniteGroup,
    rng: np.random.Generator,
    max_length: int,
    max_exponent: int,
    exponent_sum: Optional[int] = None,
) -> PolynomialForm:
    """長さ 1..max_length の多項式形をランダムに生成する

    exponent_sum を指定した場合は最後の指数で和を合わせる。
    """
    length = int(rng.integers(1, max_length + 1))
    conjugators = rng.integers(0, G.order, size=length)
    exponents = rng.integers(-max_exponent, max_exponent + 1, size=length)
    if exponent_sum is not None:
        exponents[-1] = exponent_sum - int(exponents[:-1].sum())
    return PolynomialForm.of(zip((int(v) for v in conjugators), (int(e) for e in exponents)))


# ----- 関数 ----- #

class GroupFunction:
    """G -> G の写像 (像の配列で表す)"""

    __slots__ = ("parent", "image", "_key")

    def __init__(self, parent: FiniteGroup, image: Sequence[int] | np.ndarray):
        array = np.array(image, dtype=np.int64)
        if array.shape != (parent.order,):
            raise ValueError(f"像の長さが位数 {parent.order} と一致しません: {array.shape}")
        array.setflags(write=False)
        self.parent = parent
        self.image = array
        self._key = array.tobytes()

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupFunction":
        return cls(G, np.arange(G.order))

    @property
    def key(self) -> bytes:
        return self._key

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "GroupFunction") -> bool:
        return tuple(self.image) < tuple(other.image)

    def __repr__(self) -> str:
        return f"GroupFunction({self.image.tolist()})"

    def compose(self, other: "GroupFunction") -> "GroupFunction":
        """(self∘other)(x) = self(other(x))"""
        return GroupFunction(self.parent, self.image[other.image])

    def pointwise(self, other: "GroupFunction") -> "GroupFunction":
        """各点ごとの積 x -> self(x) other(x)"""
        return GroupFunction(self.parent, self.parent.mul[self.image, other.image])

    def inverse(self) -> "GroupFunction":
        if not self.is_bijective:
            raise ValueError("全単射でない写像の逆写像は取れません")
        return GroupFunction(self.parent, np.argsort(self.image))

    @property
    def fixes_identity(self) -> bool:
        return int(self.image[self.parent.id]) == self.parent.id

    @property
    def is_bijective(self) -> bool:
        return bool(np.all(np.bincount(self.image, minlength=self.parent.order) == 1))

    @property
    def is_homomorphism(self) -> bool:
        G = self.parent
        return bool(np.array_equal(self.image[G.mul], G.mul[self.image[:, None], self.image[None, :]]))

    @property
    def is_automorphism(self) -> bool:
        return self.is_bijective and self.is_homomorphism


def conjugation_function(G: FiniteGroup, v: int) -> GroupFunction:
    return GroupFunction(G, G.conjugation_map(v))


def is_power_map(f: GroupFunction) -> bool:
    G = f.parent
    return any(np.array_equal(f.image, G.powers[k]) for k in range(G.exponent))


def _sorted_images(images: np.ndarray) -> np.ndarray:
    """行を辞書式順に並べ替える"""
    if images.shape[0] <= 1:
        return images
    order = np.lexsort(images.T[::-1])
    return images[order]


# ----- 自己同型の集合 ----- #

class AutomorphismSet:
    """重複のない自己同型の集合 (像の辞書式順、恒等写像が先頭)"""

    def __init__(self, group: FiniteGroup, maps: Iterable[GroupFunction | np.ndarray], name: str = "A"):
        rows = [m.image if isinstance(m, GroupFunction) else np.asarray(m, dtype=np.int64) for m in maps]
        if rows:
            stacked = _sorted_images(np.unique(np.array(rows, dtype=np.int64), axis=0))
        else:
            stacked = np.empty((0, group.order), dtype=np.int64)
        self.group = group
        self.name = name
        self.maps: Tuple[GroupFunction, ...] = tuple(GroupFunction(group, row) for row in stacked)
        self._index: Dict[bytes, int] = {f.key: i for i, f in enumerate(self.maps)}

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self) -> Iterator[GroupFunction]:
        return iter(self.maps)

    def __contains__(self, f: object) -> bool:
        return isinstance(f, GroupFunction) and f.key in self._index

    def __repr__(self) -> str:
        return f"AutomorphismSet(name={self.name!r}, group={self.group.name!r}, size={len(self)})"

    def index(self, f: GroupFunction) -> Optional[int]:
        return self._index.get(f.key)

    @property
    def keys(self) -> frozenset:
        return frozenset(self._index)

    def issubset(self, other: "AutomorphismSet") -> bool:
        return all(f in other for f in self.maps)

    def same_set(self, other: "AutomorphismSet") -> bool:
        return self.keys == other.keys

    @cached_property
    def images(self) -> np.ndarray:
        stacked = np.array([f.image for f in self.maps], dtype=np.int64).reshape(-1, self.group.order)
        stacked.setflags(write=False)
        return stacked

    @cached_property
    def composition_group(self) -> FiniteGroup:
        """合成 (f∘g)(x) = f(g(x)) による群 (添字は maps の順)"""
        m = len(self.maps)
        table = np.empty((m, m), dtype=np.int64)
        for i, f in enumerate(self.maps):
            for j, composed in enumerate(f.image[self.images]):
                k = self._index.get(composed.tobytes())
                if k is None:
                    raise InvariantViolation(
                        f"{self.name}({self.group.name}) が合成について閉じていません: maps[{i}]∘maps[{j}]"
                    )
                table[i, j] = k
        return FiniteGroup(table, name=f"{self.name}({self.group.name})")

    @property
    def is_group(self) -> bool:
        try:
            self.composition_group
        except InvariantViolation:
            return False
        return True

    def subset(self, predicate: Callable[[GroupFunction], bool], name: str) -> "AutomorphismSet":
        return AutomorphismSet(self.group, [f for f in self.maps if predicate(f)], name=name)


def inner_automorphisms(G: FiniteGroup) -> AutomorphismSet:
    """内部自己同型 x -> v^-1 x v 全体"""
    maps = [G.conjugation_map(v) for v in range(G.order)]
    return AutomorphismSet(G, maps, name="I")


def _spanning_levels(G: FiniteGroup) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """単位元からの幅優先木: 各段の (子, 親, 生成元番号)"""
    seen = np.zeros(G.order, dtype=bool)
    seen[G.id] = True
    frontier = [G.id]
    levels = []
    while frontier:
        children, parents, via = [], [], []
        for x in frontier:
            for j, g in enumerate(G.gens):
                y = int(G.mul[x, g])
                if not seen[y]:
                    seen[y] = True
                    children.append(y)
                    parents.append(x)
                    via.append(j)
        if children:
            levels.append((np.array(children), np.array(parents), np.array(via)))
        frontier = children
    return levels


def automorphism_group(G: FiniteGroup, budget: int = DEFAULT_SEARCH_BUDGET) -> AutomorphismSet:
    """生成元の像を総当たりして自己同型群を求める

    候補は生成元と同じ位数の元に限る。候補は語の評価で全体へ延長し、
    全単射な準同型であることを生成元ごとの関係式 phi(xg) = phi(x)phi(g) で確かめる。
    """
    identity = np.arange(G.order)
    if not G.gens:
        return AutomorphismSet(G, [identity], name="A")

    orders = G.element_orders
    candidates = [np.flatnonzero(orders == orders[g]) for g in G.gens]
    total = int(np.prod([len(c) for c in candidates], dtype=object))
    if total > budget:
        raise SearchBudgetExceeded(total, budget)
    logger.debug(f"{G.name}: 自己同型の候補 {total} 個を検査します")

    levels = _spanning_levels(G)
    right_mul = [G.mul[:, g] for g in G.gens]
    found = []
    for combo in itertools.product(*candidates):
        images = np.array(combo, dtype=np.int64)
        phi = np.empty(G.order, dtype=np.int64)
        phi[G.id] = G.id
        for children, parents, via in levels:
            phi[children] = G.mul[phi[parents], images[via]]
        if not np.all(np.bincount(phi, minlength=G.order) == 1):
            continue
        if all(np.array_equal(phi[rm], G.mul[phi, img]) for rm, img in zip(right_mul, images)):
            found.append(phi)
    return AutomorphismSet(G, found, name="A")


def ia_automorphisms(G: FiniteGroup, automorphisms: AutomorphismSet) -> AutomorphismSet:
    """アーベル化 G/[G,G] 上で恒等写像を誘導する自己同型"""
    D = derived_subgroup(G)
    arange = np.arange(G.order)

    def acts_trivially(f: GroupFunction) -> bool:
        return bool(D.mask[G.mul[G.inv[arange], f.image]].all())

    return automorphisms.subset(acts_trivially, name="IA")


# ----- 多項式関数の閉包 ----- #

def polynomial_seeds(G: FiniteGroup) -> np.ndarray:
    """内部自己同型と x -> x^-1 (各点ごとの積の生成元)"""
    seeds = [G.conjugation_map(v) for v in range(G.order)]
    seeds.append(G.inv)
    return np.unique(np.array(seeds, dtype=np.int64), axis=0)


def polynomial_function_closure(G: FiniteGroup, budget: int = DEFAULT_CLOSURE_BUDGET) -> Tuple[GroupFunction, ...]:
    """種関数の各点ごとの積による閉包を列挙する (像の辞書式順)"""
    seeds = polynomial_seeds(G)
    start = np.full((1, G.order), G.id, dtype=np.int64)
    seen = {start[0].tobytes()}
    members = [start]
    frontier = start
    while frontier.shape[0]:
        products = G.mul[frontier[:, None, :], seeds[None, :, :]].reshape(-1, G.order)
        fresh = []
        for row in products:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        if len(seen) > budget:
            raise ClosureBudgetExceeded(len(seen), budget)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, G.order)
        members.append(frontier)
    stacked = _sorted_images(np.concatenate(members))
    logger.debug(f"{G.name}: 多項式関数の閉包 {stacked.shape[0]} 個")
    return tuple(GroupFunction(G, row) for row in stacked)


class FunctionChain:
    """各点ごとの積で生成される関数群を篩の表で表す

    段 k は k 番目の非単位元 p_k に対応し、table[k][g] は p_0..p_{k-1} で単位元、
    p_k で g を取る元である。表の要素は s·t (段(s) >= 段(t)) がすべて篩い切れるまで補完する。
    """

    def __init__(self, group: FiniteGroup, seeds: Iterable[np.ndarray]):
        self.group = group
        self.points = np.array([x for x in range(group.order) if x != group.id], dtype=np.int64)
        self.table: List[Dict[int, np.ndarray]] = [{} for _ in self.points]
        self._inverse: List[Dict[int, np.ndarray]] = [{} for _ in self.points]
        self._identity = np.full(len(self.points), group.id, dtype=np.int64)
        self.sifts = 0
        self._complete([np.asarray(s, dtype=np.int64)[self.points] for s in seeds])

    def _sift(self, f: np.ndarray) -> Tuple[np.ndarray, int]:
        mul = self.group.mul
        ident = self.group.id
        for k in range(len(self.points)):
            value = int(f[k])
            if value == ident:
                continue
            t_inv = self._inverse[k].get(value)
            if t_inv is None:
                return f, k
            f = mul[t_inv, f]
        return f, -1

    def _complete(self, seeds: List[np.ndarray]) -> None:
        mul = self.group.mul
        queue = deque(seeds)
        while queue:
            residue, level = self._sift(queue.popleft())
            self.sifts += 1
            if level < 0:
                continue
            residue = residue.copy()
            residue.setflags(write=False)
            self.table[level][int(residue[level])] = residue
            self._inverse[level][int(residue[level])] = self.group.inv[residue]
            for j in range(level + 1):
                for t in self.table[j].values():
                    queue.append(mul[residue, t])
            for j in range(level, len(self.points)):
                for s in self.table[j].values():
                    if s is not residue:
                        queue.append(mul[s, residue])

    def size(self) -> int:
        size = 1
        for level in self.table:
            size *= len(level) + 1
        return size

    def __len__(self) -> int:
        return self.size()

    @property
    def entries(self) -> int:
        return sum(len(level) for level in self.table)

    def contains(self, f: GroupFunction | np.ndarray) -> bool:
        image = f.image if isinstance(f, GroupFunction) else np.asarray(f, dtype=np.int64)
        if int(image[self.group.id]) != self.group.id:
            return False
        _, level = self._sift(image[self.points])
        return level < 0

    def __contains__(self, f: object) -> bool:
        return isinstance(f, (GroupFunction, np.ndarray)) and self.contains(f)

    def functions(self, budget: int = DEFAULT_CLOSURE_BUDGET) -> Tuple[GroupFunction, ...]:
        """全要素を列挙する (小さい群の照合用)"""
        size = self.size()
        if size > budget:
            raise ClosureBudgetExceeded(size, budget)
        mul = self.group.mul
        current = [self._identity]
        for level in reversed(self.table):
            current = current + [mul[t, w] for t in level.values() for w in current]
        full = np.full((len(current), self.group.order), self.group.id, dtype=np.int64)
        full[:, self.points] = np.array(current).reshape(len(current), len(self.points))
        return tuple(GroupFunction(self.group, row) for row in _sorted_images(full))


def function_chain(G: FiniteGroup) -> FunctionChain:
    chain = FunctionChain(G, polynomial_seeds(G))
    logger.debug(f"{G.name}: 篩の表 {chain.entries} 要素, 閉包サイズ {chain.size()} (篩 {chain.sifts} 回)")
    return chain


def polynomial_automorphisms(
    G: FiniteGroup,
    automorphisms: Optional[AutomorphismSet] = None,
    mode: str = "chain",
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    chain: Optional[FunctionChain] = None,
) -> AutomorphismSet:
    """多項式自己同型の集合 P0(G)

    chain モードでは自己同型のうち閉包に属するものを篩で判定する。
    explicit モードでは閉包を列挙してから全単射な準同型を取り出す。
    """
    if mode == "explicit":
        closure = polynomial_function_closure(G, closure_budget)
        P0 = AutomorphismSet(G, [f for f in closure if f.is_automorphism], name="P0")
    elif mode == "chain":
        if automorphisms is None:
            automorphisms = automorphism_group(G, search_budget)
        if chain is None:
            chain = function_chain(G)
        P0 = automorphisms.subset(chain.contains, name="P0")
    else:
        raise ValueError(f"不明な閉包モードです: {mode}")

    if not all(f.fixes_identity for f in P0):
        raise InvariantViolation(f"P0({G.name}) に単位元を固定しない写像があります")
    # 有限群では P0 は合成で閉じる
    if not P0.is_group:
        raise InvariantViolation(f"P0({G.name}) が合成について閉じていません")
    return P0


def generate_P(G: FiniteGroup, P0: AutomorphismSet) -> AutomorphismSet:
    """P0 が合成で生成する群 P(G)"""
    identity = GroupFunction.identity(G)
    seen = {identity.key: identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for f in frontier:
            for g in P0:
                h = f.compose(g)
                if h.key not in seen:
                    seen[h.key] = h
                    fresh.append(h)
        frontier = fresh
    return AutomorphismSet(G, seen.values(), name="P")


# ----- 合成公式 ----- #

def commuting_conjugates(G: FiniteGroup, t: int) -> bool:
    cls = conjugacy_class(G, t)
    return bool(np.all(G.comm[np.ix_(cls, cls)] == G.id))


def lemma_2_1_compose(G: FiniteGroup, f: PolynomialForm, g: PolynomialForm, t: int) -> int:
    """t の共役が互いに可換なとき f(g(t)) を交換子の積で計算する

    f(g(t)) = prod_i prod_j s [s, v_i] [s, w_j] [s, w_j, v_i],  s = t^(e_i h_j)
    """
    if not commuting_conjugates(G, t):
        raise ConjugatesDoNotCommute(t)
    result = G.id
    for v, e in f.factors:
        for w, h in g.factors:
            s = G.power(t, int(e) * int(h))
            for factor in (s, commutator(G, s, v), commutator(G, s, w), commutator(G, s, w, v)):
                result = int(G.mul[result, factor])
    return result


def direct_compose(G: FiniteGroup, f: PolynomialForm, g: PolynomialForm, t: int) -> int:
    return eval_poly_form(G, f, eval_poly_form(G, g, t))
