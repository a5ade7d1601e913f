"""
有限群の表現と部分群・列の計算

元は 0..n-1 の添字で表し、乗積表と逆元表で群を保持する。
交換子は [x,y] = x^-1 y^-1 x y, 共役は x^v = v^-1 x v に固定する。
"""
import logging
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from polyaut.errors import GroupTableError, MissingInverse, NoIdentity, NonAssociativeTable, NotNormal

logger = logging.getLogger(__name__)

# 結合律を総当たりで確認する位数の上限
ASSOCIATIVITY_CHECK_LIMIT = 64


def _find_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    arange = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], arange) and np.array_equal(table[:, e], arange):
            return e
    raise NoIdentity()


def _inverse_table(table: np.ndarray, identity: int) -> np.ndarray:
    n = table.shape[0]
    inv = np.full(n, -1, dtype=np.int64)
    rows, cols = np.nonzero(table == identity)
    inv[rows] = cols
    arange = np.arange(n)
    for x in range(n):
        y = inv[x]
        if y < 0 or table[y, x] != identity:
            raise MissingInverse(x)
    assert np.all(table[arange, inv] == identity)
    return inv


def _check_associative(table: np.ndarray) -> None:
    # left[a,b,c] = (ab)c, right[a,b,c] = a(bc)
    left = table[table]
    right = table[:, table]
    bad = np.argwhere(left != right)
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise NonAssociativeTable((a, b, c))


class FiniteGroup:
    """乗積表で表された有限群 (構築後は不変)"""

    def __init__(
        self,
        mul: Sequence[Sequence[int]] | np.ndarray,
        name: str = "group",
        gens: Optional[Sequence[int]] = None,
        source: Optional[object] = None,
        validate: bool = True,
    ):
        table = np.array(mul, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupTableError("乗積表は空でない正方行列である必要があります")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise GroupTableError(f"乗積表の値は 0..{n - 1} の範囲である必要があります")

        identity = _find_identity(table)
        inv = _inverse_table(table, identity)
        if validate and n <= ASSOCIATIVITY_CHECK_LIMIT:
            _check_associative(table)

        table.setflags(write=False)
        inv.setflags(write=False)
        self.order = n
        self.mul = table
        self.inv = inv
        self.id = identity
        self.name = name
        # 置換で与えられた群は保存時に置換へ戻す
        self.source = source

        if gens is None:
            self.gens: Tuple[int, ...] = greedy_generators(self)
        else:
            self.gens = tuple(int(g) for g in gens)
            if any(g < 0 or g >= n for g in self.gens):
                raise GroupTableError(f"生成元の添字が範囲外です: {self.gens}")
            if validate and int(closure_mask(self, self.gens).sum()) != n:
                raise GroupTableError(f"生成元 {self.gens} が群全体を生成しません")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, order={self.order}, gens={self.gens})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.name == other.name
            and self.order == other.order
            and self.gens == other.gens
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self) -> int:
        return hash((self.name, self.order, self.gens, self.mul.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def comm(self) -> np.ndarray:
        """交換子表 comm[x, y] = x^-1 y^-1 x y"""
        arange = np.arange(self.order)
        xy_inv = self.mul[self.inv[:, None], self.inv[None, :]]
        table = self.mul[xy_inv, self.mul[arange[:, None], arange[None, :]]]
        table.setflags(write=False)
        return table

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        current = np.full(self.order, self.id, dtype=np.int64)
        arange = np.arange(self.order)
        for k in range(1, self.order + 1):
            current = self.mul[current, arange]
            orders[(current == self.id) & (orders == 0)] = k
            if orders.all():
                break
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(lcm(*(int(o) for o in self.element_orders)))

    @cached_property
    def powers(self) -> np.ndarray:
        """powers[k, x] = x^k (0 <= k < exponent)"""
        table = np.empty((self.exponent, self.order), dtype=np.int64)
        table[0] = self.id
        arange = np.arange(self.order)
        for k in range(1, self.exponent):
            table[k] = self.mul[table[k - 1], arange]
        table.setflags(write=False)
        return table

    def power_map(self, k: int) -> np.ndarray:
        """x -> x^k を全元について返す (指数は群の指数で簡約)"""
        return self.powers[k % self.exponent]

    def power(self, x: int, k: int) -> int:
        return int(self.powers[k % self.exponent, x])

    def conjugate(self, x: int, v: int) -> int:
        """x^v = v^-1 x v"""
        return int(self.mul[self.mul[self.inv[v], x], v])

    def conjugation_map(self, v: int) -> np.ndarray:
        """x -> v^-1 x v を全元について返す"""
        return self.mul[self.mul[self.inv[v], np.arange(self.order)], v]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))


class Subgroup:
    """親群の添字集合として表した部分群"""

    __slots__ = ("parent", "members", "_mask")

    def __init__(self, parent: FiniteGroup, members: Iterable[int]):
        self.parent = parent
        self.members: Tuple[int, ...] = tuple(sorted({int(m) for m in members}))
        mask = np.zeros(parent.order, dtype=bool)
        mask[list(self.members)] = True
        mask.setflags(write=False)
        self._mask = mask

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= int(x) < self.parent.order and bool(self._mask[int(x)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(of={self.parent.name!r}, order={self.order})"


class Series(NamedTuple):
    terms: Tuple[Subgroup, ...]
    kind: str  # "derived" | "lower-central"


def closure_mask(G: FiniteGroup, seed: Iterable[int]) -> np.ndarray:
    """seed が生成する部分群をブール配列で返す (右からの掛け算による幅優先探索)"""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.id] = True
    gens = np.unique(np.asarray(list(seed), dtype=np.int64))
    if gens.size == 0:
        return mask
    frontier = np.array([G.id], dtype=np.int64)
    while frontier.size:
        products = G.mul[np.ix_(frontier, gens)].ravel()
        fresh = np.unique(products[~mask[products]])
        mask[fresh] = True
        frontier = fresh
    return mask


def greedy_generators(G: FiniteGroup) -> Tuple[int, ...]:
    """添字順に貪欲に選んだ生成系"""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.id] = True
    gens: List[int] = []
    for x in range(G.order):
        if not mask[x]:
            gens.append(x)
            mask = closure_mask(G, gens)
    return tuple(gens)


def commutator(G: FiniteGroup, x: int, y: int, *rest: int) -> int:
    """左正規の交換子 [x, y, z, ...] = [[x, y], z], ..."""
    result = int(G.comm[x, y])
    for z in rest:
        result = int(G.comm[result, z])
    return result


def conjugacy_class(G: FiniteGroup, x: int) -> np.ndarray:
    """{v^-1 x v : v in G}"""
    return np.unique(G.mul[G.mul[G.inv, x], np.arange(G.order)])


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """seed を含む最小の部分群"""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.id] = True
    gens: List[int] = []
    for s in sorted({int(s) for s in seed}):
        if not mask[s]:
            gens.append(s)
            mask = closure_mask(G, gens)
    return Subgroup(G, np.flatnonzero(mask))


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """seed を含む最小の正規部分群 (共役全体の生成する部分群)"""
    seeds = np.unique(np.asarray(list(seed), dtype=np.int64))
    if seeds.size == 0:
        return Subgroup(G, [G.id])
    arange = np.arange(G.order)
    conjugates = G.mul[G.mul[G.inv[None, :], seeds[:, None]], arange[None, :]]
    return subgroup_closure(G, np.unique(conjugates).tolist())


def center(G: FiniteGroup) -> Subgroup:
    """中心 {z : zx = xz for all x}"""
    mask = np.all(G.mul == G.mul.T, axis=1)
    return Subgroup(G, np.flatnonzero(mask))


def is_normal(G: FiniteGroup, H: Subgroup) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """H が正規か判定する。正規でなければ (h, g) の反例を返す"""
    members = np.asarray(H.members, dtype=np.int64)
    for g in G.gens:
        conj = G.mul[G.mul[G.inv[g], members], g]
        bad = np.flatnonzero(~H.mask[conj])
        if bad.size:
            return False, (int(members[bad[0]]), int(g))
    return True, None


def derived_subgroup(G: FiniteGroup, H: Optional[Subgroup] = None) -> Subgroup:
    """[H, H] (H 省略時は [G, G])"""
    members = np.asarray(H.members if H is not None else range(G.order), dtype=np.int64)
    comms = np.unique(G.comm[np.ix_(members, members)])
    return subgroup_closure(G, comms.tolist())


def derived_series(G: FiniteGroup) -> Tuple[Series, Optional[int], bool]:
    """導来列と導来長 (可解でなければ None) およびメタアーベル性"""
    terms = [Subgroup(G, range(G.order))]
    while not terms[-1].is_trivial:
        nxt = derived_subgroup(G, terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    length = len(terms) - 1 if terms[-1].is_trivial else None
    is_metabelian = length is not None and length <= 2
    return Series(tuple(terms), "derived"), length, is_metabelian


def lower_central_series(G: FiniteGroup) -> Tuple[Series, Optional[int]]:
    """降中心列と冪零類 (冪零でなければ None)

    gamma_{i+1} は [h, g] (h in gamma_i, g は生成元) の正規閉包として求める。
    """
    terms = [Subgroup(G, range(G.order))]
    gens = np.asarray(G.gens, dtype=np.int64)
    while not terms[-1].is_trivial:
        members = np.asarray(terms[-1].members, dtype=np.int64)
        comms = np.unique(G.comm[np.ix_(members, gens)])
        nxt = normal_closure(G, comms.tolist())
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    nilpotency_class = len(terms) - 1 if terms[-1].is_trivial else None
    return Series(tuple(terms), "lower-central"), nilpotency_class


def quotient_group(G: FiniteGroup, N: Subgroup, name: Optional[str] = None) -> FiniteGroup:
    """剰余群 G/N (剰余類の最小代表元の順に番号を付ける)"""
    normal, witness = is_normal(G, N)
    if not normal:
        raise NotNormal(witness)
    members = np.asarray(N.members, dtype=np.int64)
    reps_of = G.mul[np.arange(G.order)[:, None], members[None, :]].min(axis=1)
    reps = np.unique(reps_of)
    index = {int(r): i for i, r in enumerate(reps)}
    label = np.array([index[int(r)] for r in reps_of], dtype=np.int64)
    table = label[G.mul[np.ix_(reps, reps)]]
    gens = []
    for g in G.gens:
        image = int(label[g])
        if image != int(label[G.id]) and image not in gens:
            gens.append(image)
    return FiniteGroup(table, name=name or f"{G.name}/N{N.order}", gens=gens)


def is_subgroup(H: Subgroup) -> bool:
    """積と逆元について閉じているか (総当たり)"""
    G = H.parent
    members = np.asarray(H.members, dtype=np.int64)
    if not H.mask[G.id]:
        return False
    products = G.mul[np.ix_(members, members)]
    return bool(H.mask[products].all() and H.mask[G.inv[members]].all())
