"""
エラー定義

すべてのドメインエラーは PolyautError を継承し、CLI の終了コードは
ERROR_CODES から決まる。
"""
from typing import Any, Dict, Optional, Tuple


class PolyautError(Exception):
    """ツールキット共通の基底例外"""


# ----- 群の構築 ----- #

class GroupTableError(PolyautError):
    """乗積表の検証エラー"""


class NonAssociativeTable(GroupTableError):
    def __init__(self, triple: Tuple[int, int, int]):
        self.triple = triple
        a, b, c = triple
        super().__init__(f"乗積表が結合的ではありません: ({a}*{b})*{c} != {a}*({b}*{c})")


class NoIdentity(GroupTableError):
    def __init__(self):
        super().__init__("乗積表に単位元がありません")


class MissingInverse(GroupTableError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"元 {element} に逆元がありません")


class ClosureOverflow(PolyautError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"生成元の閉包が位数上限 {cap} を超えました")


class NotNormal(PolyautError):
    def __init__(self, witness: Optional[Tuple[int, int]] = None):
        self.witness = witness
        super().__init__(f"部分群が正規ではありません (witness={witness})")


class CatalogFormatError(PolyautError):
    """群ファイルの書式エラー"""


class UnknownGroup(PolyautError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"不明な群です: {name}")


# ----- 予算 ----- #

class BudgetExceeded(PolyautError):
    """探索・閉包の予算超過"""


class SearchBudgetExceeded(BudgetExceeded):
    def __init__(self, candidates: int, budget: int):
        self.candidates = candidates
        self.budget = budget
        super().__init__(f"自己同型の候補数 {candidates} が探索予算 {budget} を超えました")


class ClosureBudgetExceeded(BudgetExceeded):
    def __init__(self, partial_size: int, budget: int):
        self.partial_size = partial_size
        self.budget = budget
        super().__init__(
            f"多項式関数の閉包が予算 {budget} を超えました (途中サイズ: {partial_size})"
        )


# ----- 検証 ----- #

class ConjugatesDoNotCommute(PolyautError):
    def __init__(self, t: int):
        self.t = t
        super().__init__(f"元 {t} の共役どうしが可換ではありません")


class PreconditionNotMet(PolyautError):
    def __init__(self, claim: str, reason: str):
        self.claim = claim
        self.reason = reason
        super().__init__(f"{claim}: 前提条件を満たしません ({reason})")


class UnknownClaim(PolyautError):
    def __init__(self, claim: str):
        self.claim = claim
        super().__init__(f"不明な主張IDです: {claim}")


class InvariantViolation(PolyautError):
    """計算結果が保証されるべき性質を満たさない"""


class WorkerCommandError(PolyautError):
    """ワーカープロセスから返されたエラー"""
    def __init__(self, message: str, error_type: str = "", exit_code: int = 1):
        self.error_type = error_type
        self.exit_code = exit_code
        super().__init__(f"{error_type}: {message}" if error_type else message)


# ----- 自由メタアーベル群 ----- #

class RankMismatch(PolyautError):
    def __init__(self, left: int, right: int):
        super().__init__(f"ランクが一致しません: {left} != {right}")


class NotDerived(PolyautError):
    def __init__(self, detail: str = ""):
        super().__init__(f"導来部分群の元ではありません {detail}".rstrip())


class ExactDivisionFailed(PolyautError):
    def __init__(self, detail: str = ""):
        super().__init__(f"ローラン多項式の割り算が割り切れません (表現が壊れています) {detail}".rstrip())


class NotMetabelian(PolyautError):
    def __init__(self, group: str):
        super().__init__(f"群 {group} はメタアーベルではありません")


class ParseError(PolyautError):
    def __init__(self, text: str, position: Optional[int] = None, detail: str = ""):
        self.text = text
        self.position = position
        self.detail = detail
        where = f" (位置 {position})" if position is not None else ""
        super().__init__(f"語を解析できません: '{text}'{where} {detail}".rstrip())


# 例外クラスと終了コード・説明の対応
ERROR_CODES: Dict[type, Tuple[int, str]] = {
    PreconditionNotMet: (1, "Precondition Not Met - 主張の前提条件を満たしません。"),
    InvariantViolation: (1, "Invariant Violation - 計算結果が保証されるべき性質に反しています。"),
    UnknownGroup: (2, "Unknown Group - カタログにもファイルにも群が見つかりません。"),
    UnknownClaim: (2, "Unknown Claim - 主張IDが認識できません。"),
    BudgetExceeded: (3, "Budget Exceeded - 探索または閉包の予算を超えました。設定で上限を引き上げてください。"),
    ClosureOverflow: (3, "Closure Overflow - 置換の閉包が位数上限を超えました。"),
    ParseError: (4, "Parse Error - 語の構文が正しくありません。"),
    NotDerived: (4, "Not Derived - 導来部分群に属さない元が指定されました。"),
    RankMismatch: (4, "Rank Mismatch - ランクの異なる元を演算しました。"),
    ExactDivisionFailed: (4, "Exact Division Failed - 記号表現の整合性が壊れています。"),
    NotMetabelian: (4, "Not Metabelian - メタアーベルでない群に x [x, v]^h 型の写像を適用しました。"),
    ConjugatesDoNotCommute: (4, "Conjugates Do Not Commute - 合成公式の前提を満たさない元です。"),
    GroupTableError: (5, "Group Table Error - 乗積表が群の公理を満たしません。"),
    NotNormal: (5, "Not Normal - 正規でない部分群で商を取ろうとしました。"),
    CatalogFormatError: (5, "Catalog Format Error - 群ファイルの書式が正しくありません。"),
}


def exit_code_for(exc: BaseException) -> int:
    """例外に対応する終了コードを返す (未知の例外は 1)"""
    if isinstance(exc, WorkerCommandError):
        return exc.exit_code
    for cls in type(exc).__mro__:
        if cls in ERROR_CODES:
            return ERROR_CODES[cls][0]
    return 1


def get_detailed_error(exc: BaseException) -> str:
    """例外の詳細な説明を取得する"""
    explanation = "不明なエラー"
    for cls in type(exc).__mro__:
        if cls in ERROR_CODES:
            explanation = ERROR_CODES[cls][1]
            break
    return f"エラー: {type(exc).__name__}, メッセージ: {exc}\n詳細な説明: {explanation}"


def error_payload(exc: BaseException) -> Dict[str, Any]:
    """ワーカー応答用のエラー表現"""
    return {"error": str(exc), "error_type": type(exc).__name__, "exit_code": exit_code_for(exc)}
