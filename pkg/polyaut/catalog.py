"""
群カタログと群ファイルの読み書き

群ファイルは 1 ファイル 1 群の key: value 形式のテキスト:

    name: D8
    order: 8
    perms:
    (1 2 3 4)
    (1 3)

または

    name: V4
    order: 4
    gens: 1 2
    table:
    0 1 2 3
    ...
"""
import logging
import re
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.combinatorics import Permutation

from polyaut.errors import CatalogFormatError, ClosureOverflow, GroupTableError, UnknownGroup
from polyaut.groups import FiniteGroup

logger = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 64

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class GroupSource(NamedTuple):
    """置換で与えられた群の元の入力 (保存時の往復用)"""
    kind: str
    perms: Tuple[str, ...]


class CatalogEntry(NamedTuple):
    name: str
    description: str
    perms: Tuple[str, ...] = ()
    table_builder: Optional[Callable[[], Tuple[List[List[int]], List[int]]]] = None


# ----- 置換 ----- #

def parse_cycles(text: str) -> List[List[int]]:
    """巡回置換の記法 "(1 2 3)(4 5)" を 1 始まりの点のリストに変換する"""
    stripped = _CYCLE_RE.sub("", text).strip()
    if stripped:
        raise CatalogFormatError(f"巡回置換の記法が正しくありません: '{text}'")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        points = [int(p) for p in re.split(r"[\s,]+", body.strip()) if p]
        if any(p <= 0 for p in points) or len(set(points)) != len(points):
            raise CatalogFormatError(f"巡回置換の点が正しくありません: '({body})'")
        if points:
            cycles.append(points)
    return cycles


def format_cycles(array_form: Sequence[int]) -> str:
    """配列形式の置換を正規化した巡回記法 (最小点から始め、固定点は省略) にする"""
    seen = set()
    parts = []
    for start in range(len(array_form)):
        if start in seen or array_form[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        nxt = array_form[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = array_form[nxt]
        parts.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(parts) or "()"


def _to_permutation(cycles: List[List[int]], degree: int) -> Permutation:
    if not cycles:
        return Permutation(list(range(degree)))
    return Permutation([[p - 1 for p in cycle] for cycle in cycles], size=degree)


def group_from_permutations(perms: Sequence[str], name: str = "group", order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """置換の生成元から閉包を計算し、乗積表に変換する"""
    parsed = [parse_cycles(p) for p in perms]
    degree = max([max(max(c) for c in cycles) for cycles in parsed if cycles] or [1])
    generators = [_to_permutation(cycles, degree) for cycles in parsed]

    identity = Permutation(list(range(degree)))
    elements = [identity]
    index: Dict[Tuple[int, ...], int] = {tuple(identity.array_form): 0}
    frontier = [identity]
    while frontier:
        fresh = []
        for x in frontier:
            for g in generators:
                y = x * g
                key = tuple(y.array_form)
                if key not in index:
                    if len(elements) >= order_cap:
                        raise ClosureOverflow(order_cap)
                    index[key] = len(elements)
                    elements.append(y)
                    fresh.append(y)
        frontier = fresh

    table = [[index[tuple((x * y).array_form)] for y in elements] for x in elements]
    gens: List[int] = []
    for g in generators:
        idx = index[tuple(g.array_form)]
        if idx not in gens:
            gens.append(idx)
    normalized = tuple(format_cycles(g.array_form) for g in generators)
    logger.debug(f"置換群 {name} を構築しました: 位数 {len(elements)}, 次数 {degree}")
    return FiniteGroup(table, name=name, gens=gens, source=GroupSource("perms", normalized))


# ----- カタログ ----- #

def _cycle(n: int, offset: int = 0) -> str:
    return "(" + " ".join(str(offset + i) for i in range(1, n + 1)) + ")"


def _dihedral(n: int) -> Tuple[str, ...]:
    """位数 2n の二面体群: 回転 (1 ... n) と 1 を固定する鏡映"""
    pairs = [(i, n + 2 - i) for i in range(2, n // 2 + 2) if i < n + 2 - i]
    reflection = "".join(f"({i} {j})" for i, j in pairs) or "()"
    return (_cycle(n), reflection)


def _heisenberg27() -> Tuple[List[List[int]], List[int]]:
    """位数 27 のハイゼンベルク群: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab') mod 3"""
    def index(a: int, b: int, c: int) -> int:
        return (a % 3) * 9 + (b % 3) * 3 + (c % 3)

    elements = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    table = [
        [index(a1 + a2, b1 + b2, c1 + c2 + a1 * b2) for (a2, b2, c2) in elements]
        for (a1, b1, c1) in elements
    ]
    return table, [index(1, 0, 0), index(0, 1, 0)]


def _build_catalog() -> Dict[str, CatalogEntry]:
    entries: List[CatalogEntry] = [
        CatalogEntry(f"C{n}", f"位数 {n} の巡回群", (_cycle(n) if n > 1 else "()",))
        for n in range(1, 13)
    ]
    entries += [
        CatalogEntry("C2xC2", "クラインの四元群", ("(1 2)", "(3 4)")),
        CatalogEntry("C2xC4", "C2 と C4 の直積", ("(1 2)", "(3 4 5 6)")),
        CatalogEntry("S3", "3 次対称群", ("(1 2 3)", "(1 2)")),
        CatalogEntry("S4", "4 次対称群 (メタアーベルでない対照群)", ("(1 2 3 4)", "(1 2)")),
        CatalogEntry("A4", "4 次交代群", ("(1 2 3)", "(2 3 4)")),
        CatalogEntry("D8", "位数 8 の二面体群", ("(1 2 3 4)", "(1 3)")),
        CatalogEntry("D10", "位数 10 の二面体群", _dihedral(5)),
        CatalogEntry("D12", "位数 12 の二面体群", _dihedral(6)),
        CatalogEntry("D16", "位数 16 の二面体群", _dihedral(8)),
        CatalogEntry("Q8", "四元数群 (右正則表現)", ("(1 3 2 4)(5 8 6 7)", "(1 5 2 6)(3 7 4 8)")),
        CatalogEntry("Heis27", "位数 27 のハイゼンベルク群", table_builder=_heisenberg27),
        CatalogEntry("F20", "位数 20 のフロベニウス群 AGL(1,5)", ("(1 2 3 4 5)", "(2 3 5 4)")),
    ]
    return {entry.name: entry for entry in entries}


CATALOG: Dict[str, CatalogEntry] = _build_catalog()

_ALIASES = {
    "HEISENBERG27": "Heis27",
    "HEISENBERG": "Heis27",
    "FROBENIUS20": "F20",
    "V4": "C2xC2",
    "KLEIN4": "C2xC2",
}


def catalog_names() -> List[str]:
    return list(CATALOG)


def canonical_name(name: str) -> Optional[str]:
    """大文字小文字や × 記号の違いを吸収してカタログ名に正規化する"""
    key = name.strip().replace("×", "x").replace("*", "x").upper()
    if key in _ALIASES:
        return _ALIASES[key]
    for entry_name in CATALOG:
        if entry_name.upper() == key:
            return entry_name
    return None


def catalog_group(name: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    canonical = canonical_name(name)
    if canonical is None:
        raise UnknownGroup(name)
    entry = CATALOG[canonical]
    if entry.table_builder is not None:
        table, gens = entry.table_builder()
        if len(table) > order_cap:
            raise ClosureOverflow(order_cap)
        return FiniteGroup(table, name=entry.name, gens=gens)
    return group_from_permutations(entry.perms, name=entry.name, order_cap=order_cap)


GroupSpec = Union[str, Sequence[str], Sequence[Sequence[int]], np.ndarray]


def build_group(
    spec: GroupSpec,
    name: Optional[str] = None,
    gens: Optional[Sequence[int]] = None,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """カタログ名・乗積表・置換の生成元リストのいずれかから群を構築する"""
    if isinstance(spec, str):
        return catalog_group(spec, order_cap=order_cap)
    items = list(spec)
    if items and all(isinstance(item, str) for item in items):
        return group_from_permutations(items, name=name or "group", order_cap=order_cap)
    if len(items) > order_cap:
        raise ClosureOverflow(order_cap)
    try:
        table = np.asarray(items, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise GroupTableError(f"乗積表を整数行列として読めません: {e}") from e
    return FiniteGroup(table, name=name or "group", gens=gens)


# ----- 群ファイル ----- #

def dump_group(G: FiniteGroup) -> str:
    """群ファイルの正規形テキスト"""
    lines = [f"name: {G.name}", f"order: {G.order}"]
    if isinstance(G.source, GroupSource) and G.source.kind == "perms":
        lines.append("perms:")
        lines.extend(G.source.perms)
    else:
        lines.append("gens: " + " ".join(str(g) for g in G.gens))
        lines.append("table:")
        lines.extend(" ".join(str(int(v)) for v in row) for row in G.mul)
    return "\n".join(lines) + "\n"


def parse_group_text(text: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    header: Dict[str, str] = {}
    body_kind: Optional[str] = None
    body: List[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if body_kind is None:
            if line in ("perms:", "table:"):
                body_kind = line[:-1]
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise CatalogFormatError(f"ヘッダ行が key: value 形式ではありません: '{line}'")
            header[key.strip().lower()] = value.strip()
        else:
            body.append(line)

    if "name" not in header or "order" not in header:
        raise CatalogFormatError("ヘッダに name と order が必要です")
    if body_kind is None:
        raise CatalogFormatError("本体 (perms: または table:) がありません")
    try:
        declared = int(header["order"])
    except ValueError as e:
        raise CatalogFormatError(f"order が整数ではありません: {header['order']}") from e

    name = header["name"]
    if body_kind == "perms":
        G = group_from_permutations(body, name=name, order_cap=order_cap)
    else:
        try:
            rows = [[int(v) for v in line.split()] for line in body]
            gens = [int(v) for v in header["gens"].split()] if header.get("gens") else None
        except ValueError as e:
            raise CatalogFormatError(f"乗積表に整数以外の値があります: {e}") from e
        if len(rows) > order_cap:
            raise ClosureOverflow(order_cap)
        G = FiniteGroup(rows, name=name, gens=gens)

    if G.order != declared:
        raise CatalogFormatError(f"宣言された位数 {declared} と実際の位数 {G.order} が一致しません")
    return G


def load_group_file(path: Union[str, Path], order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    path = Path(path)
    logger.debug(f"群ファイルを読み込みます: {path}")
    return parse_group_text(path.read_text(encoding="utf-8"), order_cap=order_cap)


def save_group_file(G: FiniteGroup, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_group(G), encoding="utf-8")
    return path


def resolve_group(name_or_file: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """カタログ名または群ファイルのパスから群を得る"""
    if canonical_name(name_or_file) is not None:
        return catalog_group(name_or_file, order_cap=order_cap)
    path = Path(name_or_file)
    if path.is_file():
        return load_group_file(path, order_cap=order_cap)
    raise UnknownGroup(name_or_file)
