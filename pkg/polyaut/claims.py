"""
有限群上での主張の検証

各主張は GroupAnalysis を受け取り CheckResult を返す関数として登録する。
前提条件を満たさない群では PreconditionNotMet を送出し、レポート上は skipped になる。
"""
import logging
import time
import zlib
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from polyaut.analysis import GroupAnalysis
from polyaut.config import RunConfig
from polyaut.errors import PreconditionNotMet, UnknownClaim
from polyaut.groups import FiniteGroup, derived_series, derived_subgroup
from polyaut.models import ClaimReport
from polyaut.polynomial import (
    AutomorphismSet,
    PolynomialForm,
    commuting_conjugates,
    direct_compose,
    is_power_map,
    lemma_2_1_compose,
    poly_form_function,
    random_poly_form,
)

logger = logging.getLogger(__name__)


class CheckResult(NamedTuple):
    passed: bool
    computed: Dict[str, Any]
    witnesses: List[Any]


def _form_pairs(form: PolynomialForm) -> List[List[int]]:
    return [[int(v), int(e)] for v, e in form.factors]


def claim_rng(config: RunConfig, group: FiniteGroup, claim: str) -> np.random.Generator:
    """(seed, 群, 主張) から決まる乱数生成器"""
    return np.random.default_rng([config.seed, zlib.crc32(f"{group.name}:{claim}".encode("utf-8"))])


def _require_nilpotent(an: GroupAnalysis, claim: str, max_class: Optional[int] = None, min_class: Optional[int] = None) -> int:
    k = an.nilpotency_class
    if k is None:
        raise PreconditionNotMet(claim, f"{an.group.name} は冪零ではありません")
    if min_class is not None and k < min_class:
        raise PreconditionNotMet(claim, f"冪零類 {k} が {min_class} 未満です")
    if max_class is not None and k > max_class:
        raise PreconditionNotMet(claim, f"冪零類 {k} が {max_class} を超えます")
    return k


def _require_metabelian(an: GroupAnalysis, claim: str) -> None:
    if not an.is_metabelian:
        length = an.derived_length
        detail = f"導来長 {length}" if length is not None else "可解ではありません"
        raise PreconditionNotMet(claim, f"{an.group.name} はメタアーベルではありません ({detail})")


def _require_two_generated(an: GroupAnalysis, claim: str) -> None:
    _require_metabelian(an, claim)
    if len(an.group.gens) > 2:
        raise PreconditionNotMet(claim, f"生成系 {list(an.group.gens)} が 2 元ではありません")


def _noncommuting_pair(G: FiniteGroup) -> List[Any]:
    bad = np.argwhere(G.mul != G.mul.T)
    return [[int(bad[0][0]), int(bad[0][1])]] if bad.size else []


# ----- 包含列 ----- #

def _normality_witness(
    group: FiniteGroup, sub: np.ndarray, over: np.ndarray, relation: str, A: AutomorphismSet
) -> Optional[Dict[str, Any]]:
    """over の各元による共役で sub が閉じているか (添字は A の composition_group)"""
    mask = np.zeros(group.order, dtype=bool)
    mask[sub] = True
    conj = group.mul[group.mul[group.inv[over][:, None], sub[None, :]], over[:, None]]
    bad = np.argwhere(~mask[conj])
    if not bad.size:
        return None
    p, s = over[bad[0][0]], sub[bad[0][1]]
    return {
        "relation": relation,
        "conjugator": A.maps[p].image.tolist(),
        "member": A.maps[s].image.tolist(),
    }


def check_inclusion_chain(an: GroupAnalysis) -> CheckResult:
    """I(G) ⊴ P(G) ⊴ A(G) と P0(G) が A(G) の正規部分集合であることを総当たりで確かめる"""
    A = an.automorphisms
    witnesses: List[Any] = []
    indices = {}
    for label, subset in (("I", an.inner), ("P0", an.polynomial), ("P", an.generated)):
        missing = [f for f in subset if f not in A]
        if missing:
            witnesses.append({"relation": f"{label} ⊆ A", "member": missing[0].image.tolist()})
        indices[label] = np.array([A.index(f) for f in subset if f in A], dtype=np.int64)

    if not an.inner.issubset(an.generated):
        outside = next(f for f in an.inner if f not in an.generated)
        witnesses.append({"relation": "I ⊆ P", "member": outside.image.tolist()})

    if not witnesses:
        AG = A.composition_group
        everything = np.arange(len(A), dtype=np.int64)
        for sub, over, relation in (
            (indices["I"], indices["P"], "I ⊴ P"),
            (indices["P"], everything, "P ⊴ A"),
            (indices["P0"], everything, "P0 normal subset of A"),
        ):
            witness = _normality_witness(AG, sub, over, relation, A)
            if witness is not None:
                witnesses.append(witness)

    computed = {
        "aut_order": len(A),
        "inner_order": len(an.inner),
        "p0_order": len(an.polynomial),
        "p_order": len(an.generated),
    }
    return CheckResult(not witnesses, computed, witnesses)


# ----- 主張 ----- #

def _thm_1_1(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    k = _require_nilpotent(an, "thm-1.1", min_class=2)
    pc = an.p_nilpotency_class
    computed = {"nilpotency_class": k, "p_order": len(an.generated), "p_nilpotency_class": pc}
    passed = pc == k - 1
    return CheckResult(passed, computed, [] if passed else [{"expected": k - 1, "actual": pc}])


def _thm_1_2(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_metabelian(an, "thm-1.2")
    length = an.p_derived_length
    computed = {"derived_length": an.derived_length, "p_order": len(an.generated), "p_derived_length": length}
    passed = length is not None and length <= 2
    return CheckResult(passed, computed, [] if passed else [{"p_derived_length": length}])


def _cor_2_1(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    k = _require_nilpotent(an, "cor-2.1", max_class=2)
    P = an.p_group
    computed = {"nilpotency_class": k, "p_order": P.order, "p_abelian": P.is_abelian}
    return CheckResult(P.is_abelian, computed, _noncommuting_pair(P))


def _lem_2_1(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    G = an.group
    cfg = an.config
    eligible = [t for t in G.elements if commuting_conjugates(G, t)]
    witnesses = []
    for _ in range(cfg.lemma21_samples):
        f = random_poly_form(G, rng, cfg.en_max_length, cfg.en_max_exponent)
        g = random_poly_form(G, rng, cfg.en_max_length, cfg.en_max_exponent)
        t = eligible[int(rng.integers(len(eligible)))]
        formula = lemma_2_1_compose(G, f, g, t)
        direct = direct_compose(G, f, g, t)
        if formula != direct:
            witnesses.append({"f": _form_pairs(f), "g": _form_pairs(g), "t": int(t), "formula": int(formula), "direct": int(direct)})
    computed = {"samples": cfg.lemma21_samples, "eligible_elements": len(eligible)}
    return CheckResult(not witnesses, computed, witnesses[:5])


def _lem_2_2(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_metabelian(an, "lem-2.2")
    G = an.group
    D = np.asarray(an.derived.members, dtype=np.int64)
    arange = np.arange(G.order)
    tx = G.comm[D]
    txy = G.comm[tx[:, :, None], arange[None, None, :]]
    bad = np.argwhere(txy != txy.transpose(0, 2, 1))
    witnesses = [[int(D[i]), int(x), int(y)] for i, x, y in bad[:5]]
    computed = {"derived_order": len(D), "triples": int(txy.size)}
    return CheckResult(not witnesses, computed, witnesses)


def _lem_2_3(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_metabelian(an, "lem-2.3")
    G = an.group
    D = an.derived
    members = np.asarray(D.members, dtype=np.int64)
    arange = np.arange(G.order)
    commutators = derived_subgroup(an.p_group)
    witnesses = []
    for idx in commutators.members:
        h = an.generated.maps[idx]
        if not np.array_equal(h.image[members], members):
            witnesses.append({"h": h.image.tolist(), "violates": "h(t) = t"})
        elif not D.mask[G.mul[G.inv[arange], h.image]].all():
            witnesses.append({"h": h.image.tolist(), "violates": "x^-1 h(x) in [G,G]"})
    computed = {"derived_order": D.order, "p_derived_order": commutators.order}
    return CheckResult(not witnesses, computed, witnesses[:5])


def _en_bijectivity(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_nilpotent(an, "en-bijectivity")
    G = an.group
    cfg = an.config
    witnesses = []
    for _ in range(cfg.en_samples):
        target = 1 if rng.integers(2) else -1
        form = random_poly_form(G, rng, cfg.en_max_length, cfg.en_max_exponent, exponent_sum=target)
        if not poly_form_function(G, form).is_bijective:
            witnesses.append({"form": _form_pairs(form), "exponent_sum": target})
    computed = {"samples": cfg.en_samples, "max_length": cfg.en_max_length}
    return CheckResult(not witnesses, computed, witnesses[:5])


def _converse_nilpotent(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    k = an.nilpotency_class
    pc = an.p_nilpotency_class
    inner_in_p = an.inner.issubset(an.generated)
    computed = {"nilpotency_class": k, "p_nilpotency_class": pc, "inner_in_p": inner_in_p}
    passed = inner_in_p and not (pc is not None and k is None)
    witnesses = [] if passed else [{"nilpotency_class": k, "p_nilpotency_class": pc}]
    return CheckResult(passed, computed, witnesses)


def _chain(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    G = an.group
    passed, computed, witnesses = check_inclusion_chain(an)
    if not an.polynomial.same_set(an.generated):
        witnesses.append({"relation": "P0 = P", "p0_order": len(an.polynomial), "p_order": len(an.generated)})
    expected_inner = G.order // an.center.order
    if len(an.inner) != expected_inner:
        witnesses.append({"relation": "|I| = |G|/|Z(G)|", "expected": expected_inner, "actual": len(an.inner)})
    computed = {**computed, "center_order": an.center.order, "closure_size": an.closure_size}
    return CheckResult(not witnesses, computed, witnesses)


def _abelian_power(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    if not an.group.is_abelian:
        raise PreconditionNotMet("abelian-power", f"{an.group.name} はアーベル群ではありません")
    witnesses: List[Any] = [f.image.tolist() for f in an.polynomial if not is_power_map(f)][:5]
    witnesses += _noncommuting_pair(an.p_group)
    computed = {"p0_order": len(an.polynomial), "p_abelian": an.p_group.is_abelian}
    return CheckResult(not witnesses, computed, witnesses)


def _prop_3_1(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_two_generated(an, "prop-3.1")
    outside = [f.image.tolist() for f in an.ia if f not in an.polynomial]
    computed = {"ia_order": len(an.ia), "p0_order": len(an.polynomial)}
    return CheckResult(not outside, computed, outside[:5])


def _cor_3_1(an: GroupAnalysis, rng: np.random.Generator) -> CheckResult:
    _require_two_generated(an, "cor-3.1")
    _, length, metabelian = derived_series(an.ia.composition_group)
    computed = {"ia_order": len(an.ia), "ia_derived_length": length}
    return CheckResult(metabelian, computed, [] if metabelian else [{"ia_derived_length": length}])


CLAIMS: Dict[str, Callable[[GroupAnalysis, np.random.Generator], CheckResult]] = {
    "thm-1.1": _thm_1_1,
    "thm-1.2": _thm_1_2,
    "cor-2.1": _cor_2_1,
    "lem-2.1": _lem_2_1,
    "lem-2.2": _lem_2_2,
    "lem-2.3": _lem_2_3,
    "en-bijectivity": _en_bijectivity,
    "converse-nilpotent": _converse_nilpotent,
    "chain": _chain,
    "abelian-power": _abelian_power,
    "prop-3.1": _prop_3_1,
    "cor-3.1": _cor_3_1,
}


def resolve_claims(claims: Union[str, Sequence[str]]) -> List[str]:
    """主張IDの並びを正規の順序に並べる ("all" で全件)"""
    if isinstance(claims, str):
        claims = [c for c in claims.split(",") if c.strip()]
    requested = {c.strip().lower() for c in claims}
    if "all" in requested:
        return list(CLAIMS)
    for claim in requested:
        if claim not in CLAIMS:
            raise UnknownClaim(claim)
    return [c for c in CLAIMS if c in requested]


def verify_claim(
    target: Union[FiniteGroup, GroupAnalysis],
    claim: str,
    config: Optional[RunConfig] = None,
) -> ClaimReport:
    """1 つの主張を検証してレポートを返す"""
    an = target if isinstance(target, GroupAnalysis) else GroupAnalysis(target, config)
    config = config or an.config
    claim = claim.strip().lower()
    if claim not in CLAIMS:
        raise UnknownClaim(claim)

    started = time.perf_counter()
    try:
        result = CLAIMS[claim](an, claim_rng(config, an.group, claim))
    except PreconditionNotMet as e:
        logger.info(f"{an.group.name} / {claim}: スキップ ({e.reason})")
        return ClaimReport(group=an.group.name, claim=claim, passed=False, status="skipped", reason=e.reason)
    elapsed = int(round((time.perf_counter() - started) * 1000)) if config.record_timing else 0

    status = "pass" if result.passed else "fail"
    log = logger.info if result.passed else logger.warning
    log(f"{an.group.name} / {claim}: {status}")
    return ClaimReport(
        group=an.group.name,
        claim=claim,
        passed=result.passed,
        status=status,
        computed=result.computed,
        witnesses=result.witnesses,
        elapsed_ms=elapsed,
    )


def verify_claims(an: GroupAnalysis, claims: Sequence[str]) -> List[ClaimReport]:
    return [verify_claim(an, claim, an.config) for claim in resolve_claims(claims)]
